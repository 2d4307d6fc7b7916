#pragma once

// Reproducing kernel of the weighted Sobolev space of smoothness alpha on [0,1)^s,
//
//   K(x, y) = sum_u gamma_u prod_{j in u} k_alpha(x_j, y_j),
//   k_alpha(x, y) = sum_{r=1}^{alpha} B_r(x) B_r(y) / (r!)^2
//                   + (-1)^(alpha+1) B_{2 alpha}(|x - y|) / (2 alpha)!,
//
// and the worst-case error of equal-weight rules in that space.
//
// Every factor k_alpha(x, .) integrates to zero over [0,1): the first sum because
// int B_r = 0 for r >= 1, the second because
//   int_0^1 B_{2a}(|x - y|) dy = (B_{2a+1}(x) + B_{2a+1}(1 - x) - 2 B_{2a+1}(0)) / (2a+1)
// vanishes by B_n(1 - x) = (-1)^n B_n(x) and B_{2a+1}(0) = 0. Hence int K(., y) = gamma_empty
// and the squared worst-case error
//   e^2 = int int K - (2/N) sum_x int K(x, .) + (1/N^2) sum_{x,x'} K(x, x')
// collapses to (1/N^2) sum_{x,x'} sum_{u nonempty} gamma_u prod_{j in u} k_alpha(x_j, x'_j).

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hoqmc/net_construction.hpp"

namespace hoqmc {

using ExactRational = boost::multiprecision::cpp_rational;

/// Largest smoothness for which the shared Bernoulli table is built.
inline constexpr unsigned kMaxAlpha = 10;

/// Bernoulli polynomial coefficients B_0..B_R (ascending powers), exact.
class BernoulliTable {
 public:
  explicit BernoulliTable(unsigned max_degree);

  /// Shared table of degree 2 * kMaxAlpha.
  static const BernoulliTable& standard();

  unsigned max_degree() const { return static_cast<unsigned>(coeffs_.size() - 1); }
  const std::vector<ExactRational>& coefficients(unsigned r) const { return coeffs_.at(r); }

  /// Exact evaluation at the (dyadic) double x, rounded once.
  double eval(unsigned r, double x) const;
  /// Horner in double precision.
  double eval_fast(unsigned r, double x) const {
    const auto& c = fast_[r];
    double acc = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
    return acc;
  }

 private:
  std::vector<std::vector<ExactRational>> coeffs_;
  std::vector<std::vector<double>> fast_;
};

double bernoulli(unsigned r, double x);

/// Subset weights gamma_u, u a subset of {1..s} encoded as a bitmask (bit j-1 for j).
class Weights {
 public:
  /// gamma_u = prod_{j in u} gamma_j, gamma_empty = 1.
  static Weights product(std::vector<double> gammas);
  /// One entry per mask 0..2^s - 1.
  static Weights explicit_map(std::size_t s, std::vector<double> by_mask);

  std::size_t dim() const { return dim_; }
  bool is_product() const { return is_product_; }
  const std::vector<double>& product_gammas() const { return product_; }
  double gamma(std::uint32_t mask) const;
  double gamma_empty() const { return gamma(0); }

  /// Multiplies every nonempty-set weight by c.
  Weights scaled(double c) const;
  /// The explicit map equal to this weight family.
  Weights to_explicit() const;

 private:
  Weights() = default;
  std::size_t dim_ = 0;
  bool is_product_ = false;
  std::vector<double> product_;
  std::vector<double> by_mask_;
};

struct KernelParams {
  unsigned alpha;
  Weights weights;

  std::size_t dim() const { return weights.dim(); }
};

/// One-dimensional factor k_alpha(x, y).
double kernel_1d(unsigned alpha, double x, double y);

double kernel(const KernelParams& params, std::span<const double> x, std::span<const double> y);

/// Squared worst-case error for row-major points (N x s). OpenMP over fixed row
/// blocks with an ordered reduction, so the result does not depend on the thread count.
double worst_case_error_sq(const KernelParams& params, std::span<const double> points);

namespace serial {
/// Reference: every ordered pair through kernel(), compensated summation.
double worst_case_error_sq(const KernelParams& params, std::span<const double> points);
}

/// Worst-case error of the equal-weight rule on P; tiny negative round-off clamps to 0.
double worst_case_error(const KernelParams& params, const PointSet& points);
double worst_case_error(const KernelParams& params, std::span<const double> points);

struct RepresenterCheck {
  double observed;  // |I(K(., y); P) - I(K(., y))|
  double bound;     // e(P) * sqrt(K(y, y))
};

/// Integration error of the representer f = K(., y), whose norm is sqrt(K(y, y)) and
/// whose integral is gamma_empty, next to the worst-case-error bound.
RepresenterCheck error_on_representer(const KernelParams& params, const PointSet& points,
                                      std::span<const double> y);

}  // namespace hoqmc
