#include "cvepr/cli.hpp"

int main(int argc, char** argv) { return cvepr::cli::run(argc, argv); }
