#pragma once

namespace ncsim {

// Entry point behind tools/ncsim. Subcommands: simulate | verify |
// oracle-check | sweep. Exit codes: 0 ok, 1 verification failure, 2 config
// error, 3 I/O error.
int run_cli(int argc, char** argv);

}  // namespace ncsim
