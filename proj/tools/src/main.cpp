#include "rnf/cli.hpp"

int main(int argc, char** argv) { return rnf::cli::main(argc, argv); }
