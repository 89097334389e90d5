#include "segeval/cli.hpp"

int main(int argc, char** argv) { return segeval::cli_main(argc, argv); }
