#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace otquant::cli {

/// Runs one command line (without the program name). Writes the report
/// document to --output or `out`. Returns 0 on success, 1 on domain failure
/// (failed validation, invalid input data), 2 on usage errors.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace otquant::cli
