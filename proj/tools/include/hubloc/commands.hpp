#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hubloc::cli {

/// Entry point of the `hubloc` tool. Returns the process exit code: 0 on
/// success, 1 on any usage, ingestion or solver error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hubloc::cli
