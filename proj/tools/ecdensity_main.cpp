#include "ecdensity/cli.hpp"

int main(int argc, char** argv) { return ecdensity::cli::run(argc, argv); }
