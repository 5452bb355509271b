#include "ncsim/cli.hpp"

int main(int argc, char** argv) { return ncsim::run_cli(argc, argv); }
