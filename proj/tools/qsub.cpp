#include "qsub/cli.hpp"

int main(int argc, char** argv) { return qsub::cli_main(argc, argv); }
