#include <cmath>
#include <stdexcept>
#include <string>

#include "hoqmc/sobolev_kernel.hpp"

namespace hoqmc {

namespace {

ExactRational exact_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("bernoulli: non-finite argument");
  if (x == 0.0) return ExactRational(0);
  int exponent = 0;
  const double frac = std::frexp(x, &exponent);
  const auto mantissa = static_cast<long long>(std::ldexp(frac, 53));
  const int shift = exponent - 53;
  boost::multiprecision::cpp_int num = mantissa;
  boost::multiprecision::cpp_int den = 1;
  if (shift >= 0) {
    num <<= shift;
  } else {
    den <<= -shift;
  }
  return ExactRational(num, den);
}

}  // namespace

BernoulliTable::BernoulliTable(unsigned max_degree) {
  // Bernoulli numbers from sum_{j=0}^{k} binom(k+1, j) B_j = 0, B_1 = -1/2.
  std::vector<ExactRational> numbers(max_degree + 1);
  std::vector<std::vector<boost::multiprecision::cpp_int>> binom(max_degree + 2);
  for (unsigned n = 0; n <= max_degree + 1; ++n) {
    binom[n].assign(n + 1, 1);
    for (unsigned k = 1; k < n; ++k) binom[n][k] = binom[n - 1][k - 1] + binom[n - 1][k];
  }
  numbers[0] = 1;
  for (unsigned k = 1; k <= max_degree; ++k) {
    ExactRational acc = 0;
    for (unsigned j = 0; j < k; ++j) acc += ExactRational(binom[k + 1][j]) * numbers[j];
    numbers[k] = -acc / ExactRational(k + 1);
  }
  // B_r(x) = sum_k binom(r, k) B_k x^(r-k)
  coeffs_.resize(max_degree + 1);
  fast_.resize(max_degree + 1);
  for (unsigned r = 0; r <= max_degree; ++r) {
    coeffs_[r].assign(r + 1, ExactRational(0));
    for (unsigned k = 0; k <= r; ++k) coeffs_[r][r - k] = ExactRational(binom[r][k]) * numbers[k];
    for (const auto& c : coeffs_[r]) fast_[r].push_back(static_cast<double>(c));
  }
}

const BernoulliTable& BernoulliTable::standard() {
  static const BernoulliTable table(2 * kMaxAlpha);
  return table;
}

double BernoulliTable::eval(unsigned r, double x) const {
  if (r > max_degree()) {
    throw std::invalid_argument("bernoulli degree " + std::to_string(r) + " beyond table");
  }
  const ExactRational xr = exact_from_double(x);
  const auto& c = coeffs_[r];
  ExactRational acc = 0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * xr + c[i];
  return static_cast<double>(acc);
}

double bernoulli(unsigned r, double x) { return BernoulliTable::standard().eval(r, x); }

}  // namespace hoqmc
