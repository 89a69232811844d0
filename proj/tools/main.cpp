#include "hadprox/cli.hpp"

int main(int argc, char** argv) { return hadprox::cli::main(argc, argv); }
