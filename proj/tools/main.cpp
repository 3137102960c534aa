#include "fracsim/cli.hpp"

int main(int argc, char** argv) { return fracsim::cli::run(argc, argv); }
