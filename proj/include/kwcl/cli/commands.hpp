#pragma once

namespace kwcl::cli {

/// Full command-line front end. Returns the process exit code:
/// 0 success, 1 runtime failure, 2 usage or configuration error.
int run_cli(int argc, const char* const* argv);

} // namespace kwcl::cli
