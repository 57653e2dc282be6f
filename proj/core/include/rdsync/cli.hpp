// Subcommand dispatch and file emission.  Every run writes a manifest
// listing the produced files and an echo of the effective configuration.
#pragma once

#include <string>
#include <vector>

namespace rdsync::cli {

/// Subcommands: simulate | threshold | sweep | alpha | fit | validate.
/// Returns 0 on success, 2 on usage errors, 1 otherwise; failures print a
/// single "error: ..." line on stderr.  The RDSYNC_WORKERS environment
/// variable caps the worker count (default: all available cores).
int dispatch(const std::vector<std::string>& args);

int dispatch(int argc, char** argv);

} // namespace rdsync::cli
