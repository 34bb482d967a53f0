#include "commflow/cli.hpp"

int main(int argc, char** argv) { return commflow::cli_main(argc, argv); }
