#pragma once

#include <string>
#include <vector>

namespace timepref {

/// Shortest decimal text that parses back to the same double. Negative zero
/// is rendered "-0.0" so JSON readers keep the sign. Throws on NaN/inf.
std::string format_real(double x);

/// "[a,b,c]" with format_real entries.
std::string format_real_list(const std::vector<double>& xs);

}  // namespace timepref
