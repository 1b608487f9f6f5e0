#include "skl/cli.hpp"

int main(int argc, char** argv) { return skl::cli_dispatch(argc, argv); }
