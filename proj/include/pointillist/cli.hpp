#pragma once

#include <iosfwd>

namespace pointillist {

/// Entry point behind the `pointillist` binary. Results go to `out`,
/// diagnostics to `err`. Returns 0 on success, 1 on operational errors,
/// 2 on usage errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pointillist
