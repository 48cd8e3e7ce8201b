#pragma once

#include <iosfwd>

namespace specsel {

// Exit codes returned by run_cli.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

/// Entry point for the `specsel` tool:
///
///   specsel simulate --config c.json --out dir [--seed S] [--threads T]
///   specsel spectrum --config c.json --out dir
///   specsel select   --config c.json --out dir [--seed S] [--threads T]
///   specsel study    --config c.json --out dir [--seed S] [--threads T]
///
/// Without --threads, SPECSEL_THREADS is consulted, then the hardware count.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace specsel
