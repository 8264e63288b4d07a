#include "locconvex/cli.hpp"

int main(int argc, char** argv) { return locconvex::run_cli(argc, argv); }
