#include "flatproc/cli.hpp"

int main(int argc, char** argv) { return flatproc::cli::run(argc, argv); }
