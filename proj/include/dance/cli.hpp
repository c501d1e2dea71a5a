#pragma once

#include <iosfwd>

namespace dance {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitInternal = 3;

/// Entry point of the `dance` command line tool. Subcommands: synth, render,
/// split, featurize, train, predict, eval, segments, fcgr.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dance
