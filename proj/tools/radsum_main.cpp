#include "radsum/cli.hpp"

int main(int argc, char** argv) { return radsum::cli::main(argc, argv); }
