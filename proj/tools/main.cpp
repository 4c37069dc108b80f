#include "textvqa/cli.hpp"

int main(int argc, char** argv) { return textvqa::cli::cli_main(argc, argv); }
