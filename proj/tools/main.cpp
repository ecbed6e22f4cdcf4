#include "cli.hpp"

int main(int argc, char** argv) { return fairplan::run_cli(argc, argv); }
