#include "slgreen/cli.hpp"

int main(int argc, char** argv) { return slgreen::run_command(argc, argv); }
