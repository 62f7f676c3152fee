#include "legendre/cli.hpp"

int main(int argc, char** argv) { return legendre::cli::run(argc, argv); }
