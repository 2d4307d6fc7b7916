#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hoqmc/net_construction.hpp"
#include "hoqmc/net_quality.hpp"
#include "hoqmc/sobolev_kernel.hpp"

namespace hoqmc {

/// sigma in [0,1)^s truncated to `depth` base-b digits per coordinate.
class DigitalShift {
 public:
  DigitalShift(unsigned base, std::size_t dim, std::size_t depth, std::vector<Digit> digits);

  unsigned base() const { return base_; }
  std::size_t dim() const { return dim_; }
  std::size_t depth() const { return depth_; }
  Digit digit(std::size_t j, std::size_t i) const { return digits_[j * depth_ + i]; }
  std::span<const Digit> raw_digits() const { return digits_; }

  /// Digitwise sum sigma (+) other.
  DigitalShift combine(const DigitalShift& other) const;

  friend bool operator==(const DigitalShift&, const DigitalShift&) = default;

 private:
  unsigned base_;
  std::size_t dim_;
  std::size_t depth_;
  std::vector<Digit> digits_;
};

/// max(n, ceil(52 / log2 b)): enough digits to fill a double mantissa.
std::size_t default_shift_depth(unsigned base, std::size_t point_depth);

/// P (+) sigma: digits beyond the point depth are the shift's own digits.
PointSet apply_shift(const PointSet& points, const DigitalShift& shift);

/// Uniform i.i.d. digits. The stream is keyed by (seed, index) only, so shift r of
/// a sample is the same whichever thread draws it.
DigitalShift sample_shift(std::uint64_t seed, std::uint64_t index, unsigned b, std::size_t s,
                          std::size_t d);
inline DigitalShift sample_shift(std::uint64_t seed, unsigned b, std::size_t s, std::size_t d) {
  return sample_shift(seed, 0, b, s, d);
}

/// b^m points with uniform random digits, the plain Monte Carlo counterpart of a net.
PointSet sample_uniform_points(std::uint64_t seed, unsigned b, std::size_t s, std::size_t m,
                               std::size_t depth);

struct RmsEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::vector<double> per_shift_errors;
};

/// sqrt(mean e_r^2) over shifts r = 0..R-1 of `seed`; standard error by the delta
/// method from the sample variance of e_r^2.
RmsEstimate rms_wce_mc(const KernelParams& params, const PointSet& points, std::size_t R,
                       std::uint64_t seed, std::size_t shift_depth = 0);

/// Summary of per-shift errors (e.g. from the same sample as best_shift_search).
RmsEstimate summarize_shift_errors(std::vector<double> per_shift_errors);

struct BestShift {
  DigitalShift shift;
  double error;
  std::size_t index;
};

/// The shift among the R of `seed` (same sample as rms_wce_mc) minimizing the error.
BestShift best_shift_search(const KernelParams& params, const PointSet& points, std::size_t R,
                            std::uint64_t seed, std::size_t shift_depth = 0);

// Bound constants. The reading of C_{tau,b} takes sin(pi/b); `literal` takes sin(tau/b).
enum class CtauReading { pi_over_b, literal };

double constant_C_tau(unsigned tau, unsigned b, CtauReading reading = CtauReading::pi_over_b);

struct DConstant {
  double value;
  unsigned argmax_v;
};

/// max over 1 <= v <= alpha of sum_{tau=v}^{alpha} C_tau^2 / b^(2(tau-v)) + 2 C_{2 alpha} / b^(2(alpha-v)).
DConstant constant_D(unsigned alpha, unsigned b, CtauReading reading = CtauReading::pi_over_b);

/// (b-1)^c [ (b^{2B}/(b^{2B}-1))^c + b (1/(b^{2B}-b))^c ] with B = (beta-alpha)/(beta-1),
/// c = |u|. Requires beta >= 2 alpha.
double constant_G(unsigned alpha, unsigned beta, unsigned b, std::size_t cardinality);

struct BoundConstants {
  Rational a;
  Rational b;
  unsigned t = 0;
  unsigned t1 = 0;  // ceil(t / beta)
  DConstant d{};
  std::vector<double> c_tau;  // index tau = 1..2 alpha, slot 0 unused
  std::vector<double> g;      // index |u| = 1..s, slot 0 unused
  std::vector<double> c;      // C_{alpha,beta,b,t,u} by |u|, slot 0 unused
};

BoundConstants bound_constants(unsigned alpha, unsigned beta, unsigned b, unsigned t,
                               std::size_t s, CtauReading reading = CtauReading::pi_over_b);

/// N^-alpha sum_{u nonempty} gamma_u^{1/2} C_u (log N)^{(|u|-1)/2}, N = b^m, for an
/// order-beta digital (t, m, s)-net. Requires alpha >= 2, beta >= 2 alpha, t <= beta m.
double theoretical_bound(unsigned alpha, unsigned beta, unsigned b, unsigned t, std::size_t m,
                         const Weights& weights, CtauReading reading = CtauReading::pi_over_b);

struct MseBound {
  double value = 0.0;  // enumerated part of the dual sum
  double tail = 0.0;   // rigorous bound on the part left out
  unsigned budget = 0;
};

/// sum_{u nonempty} gamma_u D^{|u|} sum_{k in P_u^perp} b^{-2 mu_alpha(k)}, enumerated over
/// in-range dual vectors with mu_1 <= min(dual_budget, n); everything else is bounded in
/// `tail` without using the dual condition.
MseBound mse_upper_bound_bd(const KernelParams& params, const GeneratingMatrices& g,
                            unsigned dual_budget, CtauReading reading = CtauReading::pi_over_b);

}  // namespace hoqmc
