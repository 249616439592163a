#include "willis/cli/commands.hpp"

int main(int argc, char** argv) { return willis::cli::run_cli(argc, argv); }
