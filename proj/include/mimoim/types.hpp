#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace mimoim {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;
using Bits = std::vector<std::uint8_t>;

} // namespace mimoim
