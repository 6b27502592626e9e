#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ecdensity/cli.hpp"

using ecdensity::cli::run;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("usage errors exit 2") {
    CHECK(run({"density", "--family", "nope", "--X", "1e4", "--nu", "0.4"}) == 2);
    CHECK(run({"density", "--family", "full", "--X", "1e4"}) == 2);  // missing nu
    CHECK(run({"unknown-subcommand"}) == 2);
    CHECK(run({"verify-charsums", "--pmax", "4"}) == 2);
    CHECK(run({"rank-bound", "--nu", "-1/2"}) == 2);
    CHECK(run({"scan", "--kind", "bogus"}) == 2);
}

TEST_CASE("verify-charsums small run and fault injection") {
    std::string summary;
    CHECK(ecdensity::cli::verify_charsums(13, false, &summary) == 0);
    CHECK(summary.find("all identities hold") != std::string::npos);

    CHECK(ecdensity::cli::verify_charsums(13, true, &summary) == 1);
    CHECK(summary.find("FAIL lemma2a p=5 h=1 k=1") != std::string::npos);
}

TEST_CASE("density csv output") {
    std::string path = "/tmp/ecdensity_cli_test.csv";
    CHECK(run({"density", "--family", "full", "--X", "1e4", "--nu", "0.4",
               "--out", path, "--threads", "2"}) == 0);
    std::string text = slurp(path);
    CHECK(text.find("family,X,nu,curves,weight_total,density_ratio,predicted,"
                    "gap,conductor_stat") == 0);
    CHECK(text.find("full,10000,0.4,") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("density json output") {
    std::string path = "/tmp/ecdensity_cli_test.json";
    CHECK(run({"density", "--family", "tors_4", "--X", "1e4", "--nu", "0.3",
               "--out", path, "--format", "json"}) == 0);
    std::string text = slurp(path);
    CHECK(text.front() == '[');
    CHECK(text.find("\"family\":\"tors_4\"") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("scan subcommands") {
    std::string path = "/tmp/ecdensity_cli_scan.csv";
    CHECK(run({"scan", "--kind", "countC", "--Y", "100", "--out", path}) == 0);
    std::string text = slurp(path);
    CHECK(text.find("Y,total,nonzero,param_lower,growth_ratio") == 0);
    CHECK(text.find("100,643,142,80,") != std::string::npos);

    CHECK(run({"scan", "--kind", "conjecture71", "--k", "4", "--P", "100",
               "--delta", "0.02", "--out", path}) == 2);  // square k rejected

    CHECK(run({"scan", "--kind", "appendix_b", "--M", "16", "--N", "16",
               "--oscY", "0", "--out", path}) == 0);
    text = slurp(path);
    CHECK(text.find("256") != std::string::npos);  // S = N*M at Y = 0

    CHECK(run({"scan", "--kind", "square_divisors", "--family", "tors_4",
               "--X", "1e4,1e5", "--out", path}) == 0);
    text = slurp(path);
    CHECK(text.find("family,X,square_divisor_stat") == 0);
    std::remove(path.c_str());
}

TEST_CASE("conductor-check alias") {
    std::string path = "/tmp/ecdensity_cli_cc.csv";
    CHECK(run({"conductor-check", "--family", "tors_5", "--X", "1e4",
               "--out", path}) == 0);
    CHECK(slurp(path).find("tors_5,10000,") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("config file with flag override") {
    std::string cfg = "/tmp/ecdensity_cli_cfg.ini";
    {
        std::ofstream f(cfg);
        f << "threads = 2\n";
    }
    std::string path = "/tmp/ecdensity_cli_cfgout.csv";
    CHECK(run({"--config", cfg, "density", "--family", "full", "--X", "1e4",
               "--nu", "0.4", "--out", path}) == 0);
    CHECK(slurp(path).find("full,10000") != std::string::npos);
    std::remove(cfg.c_str());
    std::remove(path.c_str());
}

TEST_CASE("nu and X validation") {
    CHECK(run({"density", "--family", "full", "--X", "1e4", "--nu", "0"}) == 2);
    CHECK(run({"density", "--family", "full", "--X", "1", "--nu", "0.4"}) == 2);
}
