#include "f2ext/cli.hpp"

int main(int argc, char** argv) { return f2ext::cli_main(argc, argv); }
