#include "kd/cli.hpp"

int main(int argc, char** argv) { return kd::cli_main(argc, argv); }
