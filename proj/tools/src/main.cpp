#include "lbeq/cli.hpp"

int main(int argc, char** argv) { return lbeq::cli_main(argc, argv); }
