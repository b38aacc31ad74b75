#include "phav/cli.hpp"

int main(int argc, char** argv) { return phav::cli_main(argc, argv); }
