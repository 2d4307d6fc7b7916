#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "hoqmc/shifts_rms.hpp"

namespace hoqmc {

double constant_C_tau(unsigned tau, unsigned b, CtauReading reading) {
  if (tau == 0) throw std::invalid_argument("C_tau: tau must be >= 1");
  require_prime_base(b);
  const double bd = b;
  const double angle = reading == CtauReading::pi_over_b ? std::numbers::pi / bd : tau / bd;
  const double two_sin = 2.0 * std::sin(angle);
  if (tau == 1) return 1.0 / two_sin;
  const double growth = 1.0 + 1.0 / bd + 1.0 / (bd * (bd + 1.0));
  return std::pow(growth, static_cast<double>(tau) - 2.0) / std::pow(two_sin, tau);
}

DConstant constant_D(unsigned alpha, unsigned b, CtauReading reading) {
  if (alpha == 0) throw std::invalid_argument("constant_D: alpha must be >= 1");
  const double bd = b;
  const double c2a = constant_C_tau(2 * alpha, b, reading);
  DConstant best{0.0, 0};
  for (unsigned v = 1; v <= alpha; ++v) {
    double sum = 0.0;
    for (unsigned tau = v; tau <= alpha; ++tau) {
      const double c = constant_C_tau(tau, b, reading);
      sum += c * c / std::pow(bd, 2.0 * (tau - v));
    }
    sum += 2.0 * c2a / std::pow(bd, 2.0 * (alpha - v));
    if (v == 1 || sum > best.value) best = {sum, v};
  }
  return best;
}

double constant_G(unsigned alpha, unsigned beta, unsigned b, std::size_t cardinality) {
  if (alpha == 0 || beta < 2 * alpha) {
    throw std::invalid_argument("constant_G: need beta >= 2 alpha (got alpha=" +
                                std::to_string(alpha) + ", beta=" + std::to_string(beta) + ")");
  }
  require_prime_base(b);
  const double big_b = static_cast<double>(beta - alpha) / static_cast<double>(beta - 1);
  const double bd = b;
  const double x = std::pow(bd, 2.0 * big_b);
  const auto c = static_cast<double>(cardinality);
  return std::pow(bd - 1.0, c) * (std::pow(x / (x - 1.0), c) + bd * std::pow(1.0 / (x - bd), c));
}

BoundConstants bound_constants(unsigned alpha, unsigned beta, unsigned b, unsigned t,
                               std::size_t s, CtauReading reading) {
  const InterpolationCoeffs ab = interpolation_coeffs(alpha, beta);
  BoundConstants k;
  k.a = ab.a;
  k.b = ab.b;
  k.t = t;
  k.t1 = (t + beta - 1) / beta;
  k.d = constant_D(alpha, b, reading);
  k.c_tau.assign(2 * alpha + 1, 0.0);
  for (unsigned tau = 1; tau <= 2 * alpha; ++tau) k.c_tau[tau] = constant_C_tau(tau, b, reading);
  const double bd = b;
  const double a = boost::rational_cast<double>(k.a);
  const double bb = boost::rational_cast<double>(k.b);
  const double lead = std::pow(bd, a * t + bb * k.t1);
  k.g.assign(s + 1, 0.0);
  k.c.assign(s + 1, 0.0);
  for (std::size_t c = 1; c <= s; ++c) {
    k.g[c] = constant_G(alpha, beta, b, c);
    const double cd = static_cast<double>(c);
    k.c[c] = lead * std::pow(k.d.value, cd / 2.0) * std::sqrt(k.g[c]) *
             std::pow(3.0 / std::log(bd), (cd - 1.0) / 2.0);
  }
  return k;
}

namespace {

// sum_{|u| = c} f(u) for c = 0..s, where f is gamma_u^{1/2} (sqrt) or gamma_u.
std::vector<double> weight_sums_by_cardinality(const Weights& w, bool sqrt_weights) {
  const std::size_t s = w.dim();
  std::vector<double> out(s + 1, 0.0);
  if (w.is_product()) {
    // elementary symmetric polynomials
    out[0] = 1.0;
    for (std::size_t j = 0; j < s; ++j) {
      const double g = sqrt_weights ? std::sqrt(w.product_gammas()[j]) : w.product_gammas()[j];
      for (std::size_t c = j + 1; c >= 1; --c) out[c] += out[c - 1] * g;
    }
    return out;
  }
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << s); ++mask) {
    const double g = w.gamma(mask);
    out[std::popcount(mask)] += sqrt_weights ? std::sqrt(g) : g;
  }
  return out;
}

}  // namespace

double theoretical_bound(unsigned alpha, unsigned beta, unsigned b, unsigned t, std::size_t m,
                         const Weights& weights, CtauReading reading) {
  if (alpha < 2) throw std::invalid_argument("theoretical_bound: need alpha >= 2");
  if (beta < 2 * alpha) throw std::invalid_argument("theoretical_bound: need beta >= 2 alpha");
  if (m == 0) throw std::invalid_argument("theoretical_bound: need m >= 1");
  if (t > beta * m) throw std::invalid_argument("theoretical_bound: need t <= beta m");
  const std::size_t s = weights.dim();
  const BoundConstants k = bound_constants(alpha, beta, b, t, s, reading);
  const std::vector<double> sums = weight_sums_by_cardinality(weights, true);
  const double log_n = static_cast<double>(m) * std::log(static_cast<double>(b));
  double total = 0.0;
  for (std::size_t c = 1; c <= s; ++c) {
    total += sums[c] * k.c[c] * std::pow(log_n, (static_cast<double>(c) - 1.0) / 2.0);
  }
  return total * std::pow(static_cast<double>(b), -static_cast<double>(alpha * m));
}

namespace {

// Sum over all k >= 0 (no dual condition) of b^{-2 mu_alpha(k)} grouped by mu_1(k) = l:
// g(l) = (b-1) b^{-2l} T_{alpha-1}(l-1), where T_a(p) = sum_{k < b^p} b^{-2 mu_a(k)}.
std::vector<double> single_coordinate_mass(unsigned alpha, unsigned b, std::size_t lmax) {
  const double bd = b;
  // t[a][p]
  std::vector<std::vector<double>> t(alpha, std::vector<double>(lmax + 1, 0.0));
  for (std::size_t p = 0; p <= lmax; ++p) t[0][p] = std::pow(bd, static_cast<double>(p));
  for (unsigned a = 1; a < alpha; ++a) {
    t[a][0] = 1.0;
    for (std::size_t p = 1; p <= lmax; ++p) {
      t[a][p] = t[a][p - 1] + (bd - 1.0) * std::pow(bd, -2.0 * p) * t[a - 1][p - 1];
    }
  }
  std::vector<double> g(lmax + 1, 0.0);
  for (std::size_t l = 1; l <= lmax; ++l) {
    g[l] = (bd - 1.0) * std::pow(bd, -2.0 * l) * t[alpha - 1][l - 1];
  }
  return g;
}

double binomial(double n, double k) {
  double r = 1.0;
  for (double i = 1; i <= k; ++i) r *= (n - k + i) / i;
  return r;
}

}  // namespace

MseBound mse_upper_bound_bd(const KernelParams& params, const GeneratingMatrices& g,
                            unsigned dual_budget, CtauReading reading) {
  if (params.dim() != g.dim()) throw std::invalid_argument("mse bound: dimension mismatch");
  const unsigned alpha = params.alpha;
  const unsigned b = g.base();
  const std::size_t s = g.dim();
  const double bd = b;
  const double d = constant_D(alpha, b, reading).value;
  const unsigned budget = static_cast<unsigned>(std::min<std::size_t>(dual_budget, g.rows()));

  MseBound out;
  out.budget = budget;
  for (const auto& e : enumerate_dual(g, budget, alpha)) {
    std::uint32_t mask = 0;
    for (std::size_t j = 0; j < s; ++j) {
      if (e.k[j] != 0) mask |= std::uint32_t{1} << j;
    }
    if (mask == 0) continue;
    out.value += params.weights.gamma(mask) * std::pow(d, std::popcount(mask)) *
                 std::pow(bd, -2.0 * e.mu_alpha);
  }

  // Left out: every k_u (all components nonzero) with mu_1(k_u) > budget. Sum the
  // |u|-fold convolution of the single-coordinate mass up to lmax, then bound the
  // rest with g(l) <= c0 rho^l and the binomial series
  // sum_{t >= t0} rho^t binom(t+c-1, c-1) <= rho^t0 binom(t0+c-1, c-1) (1-rho)^-c.
  const std::size_t lmax = budget + 400;
  const std::vector<double> mass = single_coordinate_mass(alpha, b, lmax);
  const double c0 = alpha == 1 ? (bd - 1.0) / bd : (bd - 1.0) * (1.0 + 1.0 / bd);
  const double rho = alpha == 1 ? 1.0 / bd : 1.0 / (bd * bd);
  const std::vector<double> weight_sums = weight_sums_by_cardinality(params.weights, false);

  std::vector<double> conv = mass;  // |u| = 1
  for (std::size_t c = 1; c <= s; ++c) {
    if (c > 1) {
      std::vector<double> next(lmax + 1, 0.0);
      for (std::size_t x = 1; x <= lmax; ++x) {
        if (conv[x] == 0.0) continue;
        for (std::size_t y = 1; x + y <= lmax; ++y) next[x + y] += conv[x] * mass[y];
      }
      conv = std::move(next);
    }
    double tail_c = 0.0;
    for (std::size_t l = budget + 1; l <= lmax; ++l) tail_c += conv[l];
    const double cd = static_cast<double>(c);
    const double t0 = static_cast<double>(lmax + 1 - c);
    tail_c += std::pow(c0 * rho, cd) * std::pow(rho, t0) * binomial(t0 + cd - 1.0, cd - 1.0) *
              std::pow(1.0 - rho, -cd);
    out.tail += weight_sums[c] * std::pow(d, cd) * tail_c;
  }
  return out;
}

}  // namespace hoqmc
