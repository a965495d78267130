#pragma once

#include <complex>
#include <vector>

namespace mnulink {

using cd = std::complex<double>;
using cvec = std::vector<cd>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

}  // namespace mnulink
