#include "cli.hpp"

int main(int argc, char** argv) { return subharm::cli::run({argv + 1, argv + argc}); }
