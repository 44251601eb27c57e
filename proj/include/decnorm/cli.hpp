#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace decnorm {

/// Schema tag carried by every report; bump on incompatible layout changes.
inline constexpr const char* kReportSchema = "decnorm-report/1";

/// Entry point behind the `decnorm` binary. `args` excludes the program name.
/// Returns 0 on success, 1 on usage or domain errors, 2 on solver failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace decnorm
