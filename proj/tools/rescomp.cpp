#include "rescomp/cli/cli.hpp"

int main(int argc, char** argv) { return rescomp::cli::main(argc, argv); }
