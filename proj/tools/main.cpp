#include "zeroset/cli.hpp"

int main(int argc, char** argv) { return zeroset::run_cli(argc, argv); }
