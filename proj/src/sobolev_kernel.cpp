#include "hoqmc/sobolev_kernel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "hoqmc/errors.hpp"

namespace hoqmc {

Weights Weights::product(std::vector<double> gammas) {
  if (gammas.empty()) throw std::invalid_argument("weights: dimension must be >= 1");
  for (double g : gammas) {
    if (!(g >= 0.0) || !std::isfinite(g)) throw std::invalid_argument("weights must be >= 0");
  }
  Weights w;
  w.dim_ = gammas.size();
  w.is_product_ = true;
  w.product_ = std::move(gammas);
  return w;
}

Weights Weights::explicit_map(std::size_t s, std::vector<double> by_mask) {
  if (s == 0 || s > 24) throw std::invalid_argument("explicit weights: need 1 <= s <= 24");
  if (by_mask.size() != (std::size_t{1} << s)) {
    throw std::invalid_argument("explicit weights: expected 2^s entries");
  }
  for (double g : by_mask) {
    if (!(g >= 0.0) || !std::isfinite(g)) throw std::invalid_argument("weights must be >= 0");
  }
  Weights w;
  w.dim_ = s;
  w.by_mask_ = std::move(by_mask);
  return w;
}

double Weights::gamma(std::uint32_t mask) const {
  if (dim_ < 32 && (mask >> dim_) != 0) throw std::out_of_range("weight subset outside 1..s");
  if (!is_product_) return by_mask_[mask];
  double g = 1.0;
  for (std::size_t j = 0; j < dim_; ++j) {
    if ((mask >> j) & 1u) g *= product_[j];
  }
  return g;
}

Weights Weights::scaled(double c) const {
  if (!(c > 0.0)) throw std::invalid_argument("weight scale must be positive");
  Weights e = to_explicit();
  for (std::size_t mask = 1; mask < e.by_mask_.size(); ++mask) e.by_mask_[mask] *= c;
  return e;
}

Weights Weights::to_explicit() const {
  if (!is_product_) return *this;
  if (dim_ > 24) throw std::invalid_argument("too many dimensions for explicit weights");
  std::vector<double> by_mask(std::size_t{1} << dim_);
  for (std::uint32_t mask = 0; mask < by_mask.size(); ++mask) by_mask[mask] = gamma(mask);
  return explicit_map(dim_, std::move(by_mask));
}

namespace {

double factorial(unsigned n) {
  double f = 1.0;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

void check_alpha(unsigned alpha) {
  if (alpha == 0 || alpha > kMaxAlpha) {
    throw std::invalid_argument("smoothness alpha must be in 1.." + std::to_string(kMaxAlpha));
  }
}

// Per-alpha constants of k_alpha with the Bernoulli factors B_r(x)/r! precomputable.
struct FactorKernel {
  unsigned alpha;
  double tail_scale;  // (-1)^(alpha+1) / (2 alpha)!
  std::vector<double> inv_fact;

  explicit FactorKernel(unsigned a) : alpha(a), inv_fact(a + 1) {
    check_alpha(a);
    tail_scale = ((a % 2 == 1) ? 1.0 : -1.0) / factorial(2 * a);
    for (unsigned r = 0; r <= a; ++r) inv_fact[r] = 1.0 / factorial(r);
  }

  // out[r-1] = B_r(x) / r!
  void scaled_bernoulli(double x, double* out) const {
    const auto& table = BernoulliTable::standard();
    for (unsigned r = 1; r <= alpha; ++r) out[r - 1] = table.eval_fast(r, x) * inv_fact[r];
  }

  double tail(double x, double y) const {
    return tail_scale * BernoulliTable::standard().eval_fast(2 * alpha, std::abs(x - y));
  }
};

// Neumaier compensated sum.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + carry; }
};

double finish_squared_error(double total, double max_term, std::size_t n) {
  const double nn = static_cast<double>(n) * static_cast<double>(n);
  double e2 = total / nn;
  if (e2 < 0.0) {
    if (-e2 <= 1e-14 * max_term) return 0.0;
    throw InvariantFailure("negative squared worst-case error " + std::to_string(e2));
  }
  return e2;
}

std::size_t point_count(std::span<const double> points, std::size_t s) {
  if (s == 0 || points.size() % s != 0 || points.empty()) {
    throw std::invalid_argument("point array does not match dimension");
  }
  return points.size() / s;
}

}  // namespace

double kernel_1d(unsigned alpha, double x, double y) {
  const FactorKernel fk(alpha);
  const auto& table = BernoulliTable::standard();
  double acc = 0.0;
  for (unsigned r = 1; r <= alpha; ++r) {
    acc += table.eval_fast(r, x) * table.eval_fast(r, y) * fk.inv_fact[r] * fk.inv_fact[r];
  }
  return acc + fk.tail(x, y);
}

double kernel(const KernelParams& params, std::span<const double> x, std::span<const double> y) {
  const std::size_t s = params.dim();
  if (x.size() != s || y.size() != s) throw std::invalid_argument("kernel: dimension mismatch");
  std::vector<double> k(s);
  for (std::size_t j = 0; j < s; ++j) k[j] = kernel_1d(params.alpha, x[j], y[j]);
  const Weights& w = params.weights;
  if (w.is_product()) {
    double prod = 1.0;
    for (std::size_t j = 0; j < s; ++j) prod *= 1.0 + w.product_gammas()[j] * k[j];
    return prod;
  }
  double total = 0.0;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << s); ++mask) {
    double prod = w.gamma(mask);
    for (std::size_t j = 0; j < s && prod != 0.0; ++j) {
      if ((mask >> j) & 1u) prod *= k[j];
    }
    total += prod;
  }
  return total;
}

double worst_case_error_sq(const KernelParams& params, std::span<const double> points) {
  const std::size_t s = params.dim();
  const std::size_t n = point_count(points, s);
  const FactorKernel fk(params.alpha);
  const unsigned alpha = params.alpha;
  const Weights& w = params.weights;

  std::vector<double> factors(n * s * alpha);
  for (std::size_t p = 0; p < n * s; ++p) fk.scaled_bernoulli(points[p], &factors[p * alpha]);

  std::vector<double> by_mask;
  if (!w.is_product()) {
    by_mask.resize(std::size_t{1} << s);
    for (std::uint32_t mask = 0; mask < by_mask.size(); ++mask) by_mask[mask] = w.gamma(mask);
  }
  const std::vector<double>& gammas = w.product_gammas();

  constexpr std::size_t kBlock = 64;
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<double> block_sum(blocks, 0.0);
  std::vector<double> block_max(blocks, 0.0);

#pragma omp parallel
  {
    std::vector<double> k(s);
    std::vector<double> prod(by_mask.size());
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t bi = 0; bi < static_cast<std::int64_t>(blocks); ++bi) {
      CompensatedSum acc;
      double max_term = 0.0;
      const std::size_t lo = static_cast<std::size_t>(bi) * kBlock;
      const std::size_t hi = std::min(n, lo + kBlock);
      for (std::size_t i = lo; i < hi; ++i) {
        const double* xi = &points[i * s];
        const double* fi = &factors[i * s * alpha];
        for (std::size_t jj = i; jj < n; ++jj) {
          const double* xj = &points[jj * s];
          const double* fj = &factors[jj * s * alpha];
          for (std::size_t c = 0; c < s; ++c) {
            double v = fk.tail(xi[c], xj[c]);
            for (unsigned r = 0; r < alpha; ++r) v += fi[c * alpha + r] * fj[c * alpha + r];
            k[c] = v;
          }
          double term;
          if (w.is_product()) {
            // prod_j (1 + gamma_j k_j) - 1 without cancellation against the 1
            term = 0.0;
            for (std::size_t c = 0; c < s; ++c) term += gammas[c] * k[c] * (1.0 + term);
          } else {
            term = 0.0;
            prod[0] = 1.0;
            for (std::uint32_t mask = 1; mask < prod.size(); ++mask) {
              const std::uint32_t low = mask & (~mask + 1);
              prod[mask] = prod[mask ^ low] * k[std::countr_zero(low)];
              term += by_mask[mask] * prod[mask];
            }
          }
          max_term = std::max(max_term, std::abs(term));
          acc.add(jj == i ? term : 2.0 * term);
        }
      }
      block_sum[bi] = acc.value();
      block_max[bi] = max_term;
    }
  }
  CompensatedSum total;
  for (double v : block_sum) total.add(v);
  return finish_squared_error(total.value(), *std::max_element(block_max.begin(), block_max.end()),
                              n);
}

namespace serial {

double worst_case_error_sq(const KernelParams& params, std::span<const double> points) {
  const std::size_t s = params.dim();
  const std::size_t n = point_count(points, s);
  const double g0 = params.weights.gamma_empty();
  CompensatedSum acc;
  double max_term = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double term = kernel(params, points.subspan(i * s, s), points.subspan(j * s, s)) - g0;
      max_term = std::max(max_term, std::abs(term));
      acc.add(term);
    }
  }
  return finish_squared_error(acc.value(), max_term, n);
}

}  // namespace serial

double worst_case_error(const KernelParams& params, std::span<const double> points) {
  return std::sqrt(worst_case_error_sq(params, points));
}

double worst_case_error(const KernelParams& params, const PointSet& points) {
  if (points.dim() != params.dim()) throw std::invalid_argument("point set dimension mismatch");
  const std::vector<double> values = points.values();
  return worst_case_error(params, values);
}

RepresenterCheck error_on_representer(const KernelParams& params, const PointSet& points,
                                      std::span<const double> y) {
  if (points.dim() != params.dim() || y.size() != params.dim()) {
    throw std::invalid_argument("error_on_representer: dimension mismatch");
  }
  const std::size_t s = params.dim();
  const std::vector<double> values = points.values();
  CompensatedSum acc;
  for (std::size_t h = 0; h < points.size(); ++h) {
    acc.add(kernel(params, std::span<const double>(values).subspan(h * s, s), y));
  }
  const double mean = acc.value() / static_cast<double>(points.size());
  const double observed = std::abs(mean - params.weights.gamma_empty());
  const double kyy = kernel(params, y, y);
  const double bound = worst_case_error(params, values) * std::sqrt(std::max(0.0, kyy));
  return {observed, bound};
}

}  // namespace hoqmc
