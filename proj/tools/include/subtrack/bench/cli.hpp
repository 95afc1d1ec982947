#pragma once

#include <iosfwd>

namespace subtrack::bench {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;    // bad flags, bad config, unwritable output
inline constexpr int kExitRuntime = 2;  // the experiment itself failed

/// Entry point of subtrack-bench. CSV goes to --out (or `out` when --out is
/// absent or "-"); the one-line summary goes to `out`, or to `err` when the
/// CSV already occupies `out`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace subtrack::bench
