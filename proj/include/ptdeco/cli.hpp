#pragma once

#include <iosfwd>

namespace ptdeco::cli {

/// Entry point of the `ptdeco` tool. Exit codes: 0 success, 1 numerical or
/// validation failure, 2 usage or configuration error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ptdeco::cli
