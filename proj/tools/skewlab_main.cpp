#include "skewlab/cli.hpp"

int main(int argc, char** argv) { return skewlab::cli::main(argc, argv); }
