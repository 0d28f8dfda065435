#pragma once

// Extended-precision scalar for constructions whose polynomials have many
// closely spaced roots (the log2(T-1) shattering sets at T = 33, 65).

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace timepref {

/// 200 decimal digits. The hyperbolic cleared basis at T = 65 needs ~150.
using WideReal = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<200>,
                                               boost::multiprecision::et_off>;

}  // namespace timepref
