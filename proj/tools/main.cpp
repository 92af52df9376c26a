#include "ellgof/cli.hpp"

int main(int argc, char** argv) { return ellgof::cli_main(argc, argv); }
