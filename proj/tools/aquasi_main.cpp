#include "aquasi/cli/commands.hpp"

int main(int argc, char** argv) { return aquasi::cli::run_cli(argc, argv); }
