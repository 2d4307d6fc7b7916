#pragma once

#include <boost/rational.hpp>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hoqmc/net_construction.hpp"

namespace hoqmc {

using Rational = boost::rational<long long>;

/// Dick metric: with k = kappa_1 b^(c_1 - 1) + ... + kappa_v b^(c_v - 1),
/// c_1 > ... > c_v > 0 and nonzero kappa, the sum of the min(alpha, v) largest
/// positions c_i. mu(alpha, 0) = 0.
unsigned mu(unsigned alpha, std::uint64_t k, unsigned b);
unsigned mu_vec(unsigned alpha, std::span<const std::uint64_t> k, unsigned b);

struct DualNetElement {
  std::vector<std::uint64_t> k;
  unsigned mu1 = 0;
  unsigned mu_alpha = 0;  // for the alpha requested at enumeration
};

/// Upper limit on the number of candidate vectors enumerate_dual will scan.
inline constexpr double kMaxDualCandidates = 1e8;

/// All k with every k_j < b^n, mu_1(k) <= max_mu1 and C_1^T k_1 + ... + C_s^T k_s = 0,
/// including k = 0. Throws BudgetExceeded if the candidate count is above
/// kMaxDualCandidates.
std::vector<DualNetElement> enumerate_dual(const GeneratingMatrices& g, unsigned max_mu1,
                                           unsigned alpha = 1);

/// Number of candidate vectors (dual or not) with k_j < b^n and mu_1(k) <= max_mu1.
double dual_candidate_count(const GeneratingMatrices& g, unsigned max_mu1);

struct MinDickMetric {
  unsigned value = 0;
  /// The always-dual vector b^n e_j attains the reported value: nothing inside the
  /// searched digit range did better.
  bool truncated = false;
  unsigned cap = 0;  // n + 1
};

/// delta_alpha of the net. Vectors with some k_j >= b^n all have mu_alpha >= n + 1
/// and k = b^n e_1 is dual, so delta_alpha = min(in-range minimum, n + 1). The
/// search covers in-range vectors with mu_1 <= min(search_budget, n), further
/// limited so one coordinate table stays below 2^22 entries; throws
/// BudgetExceeded when that does not certify the minimum.
MinDickMetric min_dick_metric(const GeneratingMatrices& g, unsigned alpha,
                              unsigned search_budget = ~0u);

struct VerifyOptions {
  std::uint64_t max_nodes = 200'000'000;
};

/// Checks the order-alpha (t, m, s) condition by exhaustive enumeration of row
/// selections whose counted weight is at most alpha*m - t. Throws BudgetExceeded
/// past opts.max_nodes row insertions.
bool verify_order_t(const GeneratingMatrices& g, unsigned alpha, unsigned t,
                    VerifyOptions opts = {});

/// Smallest t in [0, alpha*m] passing verify_order_t.
unsigned exact_t_value(const GeneratingMatrices& g, unsigned alpha, VerifyOptions opts = {});

/// ceil(t * alpha_prime / alpha) for 1 <= alpha_prime < alpha.
unsigned propagate_t(unsigned t, unsigned alpha, unsigned alpha_prime);

struct InterpolationCoeffs {
  Rational a;  // (alpha - 1) / (beta - 1)
  Rational b;  // (beta - alpha) / (beta - 1)
};

/// Coefficients with mu_alpha >= A mu_beta + B mu_1. Requires 1 < alpha <= beta.
InterpolationCoeffs interpolation_coeffs(unsigned alpha, unsigned beta);

}  // namespace hoqmc
