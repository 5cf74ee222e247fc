#include "maglap/cli.hpp"

int main(int argc, char **argv) { return maglap::cli::main(argc, argv); }
