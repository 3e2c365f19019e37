#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sasm {

/// Entry point for the `sasm` command line. `args[0]` is the program name.
/// Subcommands: simulate, track, eval, ablate, design, sweep.
int runCli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace sasm
