#include "deltakit/cli.hpp"

int main(int argc, char** argv) { return deltakit::cli::run(argc, argv); }
