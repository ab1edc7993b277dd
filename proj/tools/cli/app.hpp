#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ordtir::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;

/// Entry point of the `ordtir` executable. Diagnostics go to err as a single
/// line prefixed "ordtir: error[usage]:" or "ordtir: error[data]:".
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same, with argv[0] supplied.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ordtir::cli
