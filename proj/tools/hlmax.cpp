#include "hlmax/cli.hpp"

int main(int argc, char** argv) { return hlmax::cli::run(argc, argv); }
