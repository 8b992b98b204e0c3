#pragma once

#include <string>
#include <vector>

namespace bispec {

/// Subcommand dispatch. Returns 0 on success, 1 on validation/usage errors,
/// 2 when a numerical divergence flag was raised.
int dispatch(const std::vector<std::string>& args);

}  // namespace bispec
