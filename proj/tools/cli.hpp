#pragma once

#include <iosfwd>

#include "geopath/error.hpp"

namespace geopath::cli {

/// Process exit status for a component error; 0 is success, 1 is reserved
/// for unexpected failures.
int exit_code(ErrorKind kind);

/// Runs the command line. Without an output directory the main table (or
/// report) goes to `out`; failures print one JSON object to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace geopath::cli
