#include "pmbm/cli.hpp"

int main(int argc, char** argv) { return pmbm::cli::main(argc, argv); }
