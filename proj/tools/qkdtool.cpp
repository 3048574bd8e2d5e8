#include "qkd/cli.hpp"

int main(int argc, char** argv) { return qkd::run_cli(argc, argv); }
