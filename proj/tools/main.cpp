#include "plcc/cli.hpp"

int main(int argc, char** argv) { return plcc::cli::run(argc, argv); }
