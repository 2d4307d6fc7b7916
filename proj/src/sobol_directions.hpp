#pragma once

// Primitive polynomials and initial direction numbers for Sobol' dimensions 2..10,
// taken from the Joe & Kuo table "new-joe-kuo-6.21201"
// (https://web.maths.unsw.edu.au/~fkuo/sobol/). Dimension 1 is the van der Corput
// sequence and has no entry. Columns: degree s, interior coefficients a (bit
// s-2 is the coefficient of x^(s-1)), initial odd integers m_1..m_s.

#include <array>
#include <cstdint>

namespace hoqmc::detail {

struct SobolDirection {
  unsigned degree;
  std::uint32_t coeffs;
  std::array<std::uint32_t, 5> initial;
};

inline constexpr std::array<SobolDirection, 9> kSobolDirections{{
    {1, 0, {1}},
    {2, 1, {1, 3}},
    {3, 1, {1, 3, 1}},
    {3, 2, {1, 1, 1}},
    {4, 1, {1, 1, 3, 3}},
    {4, 4, {1, 3, 5, 13}},
    {5, 2, {1, 1, 5, 5, 17}},
    {5, 4, {1, 1, 5, 5, 5}},
    {5, 7, {1, 1, 7, 11, 19}},
}};

}  // namespace hoqmc::detail
