#include "hoqmc/shifts_rms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <utility>

namespace hoqmc {

DigitalShift::DigitalShift(unsigned base, std::size_t dim, std::size_t depth,
                           std::vector<Digit> digits)
    : base_(base), dim_(dim), depth_(depth), digits_(std::move(digits)) {
  require_prime_base(base);
  if (digits_.size() != dim * depth) throw std::invalid_argument("shift digit count mismatch");
  for (Digit d : digits_) {
    if (d >= base) throw std::invalid_argument("shift digit out of range");
  }
}

DigitalShift DigitalShift::combine(const DigitalShift& other) const {
  if (other.base_ != base_ || other.dim_ != dim_ || other.depth_ != depth_) {
    throw std::invalid_argument("shift shapes differ");
  }
  std::vector<Digit> out(digits_.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<Digit>((digits_[i] + other.digits_[i]) % base_);
  }
  return DigitalShift(base_, dim_, depth_, std::move(out));
}

std::size_t default_shift_depth(unsigned base, std::size_t point_depth) {
  const auto fill = static_cast<std::size_t>(std::ceil(52.0 / std::log2(static_cast<double>(base))));
  return std::max(point_depth, fill);
}

PointSet apply_shift(const PointSet& points, const DigitalShift& shift) {
  if (points.base() != shift.base() || points.dim() != shift.dim()) {
    throw std::invalid_argument("apply_shift: base or dimension mismatch");
  }
  if (shift.depth() < points.depth()) {
    throw std::invalid_argument("apply_shift: shift shallower than the points");
  }
  const unsigned b = points.base();
  const std::size_t s = points.dim();
  const std::size_t n = points.depth();
  const std::size_t d = shift.depth();
  std::vector<Digit> out(points.size() * s * d);
  for (std::size_t h = 0; h < points.size(); ++h) {
    for (std::size_t j = 0; j < s; ++j) {
      Digit* dst = &out[(h * s + j) * d];
      auto src = points.digits(h, j);
      for (std::size_t i = 0; i < n; ++i) dst[i] = static_cast<Digit>((src[i] + shift.digit(j, i)) % b);
      for (std::size_t i = n; i < d; ++i) dst[i] = shift.digit(j, i);
    }
  }
  return PointSet(b, s, d, points.size(), std::move(out));
}

namespace {

std::mt19937_64 keyed_engine(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

std::vector<Digit> uniform_digits(std::mt19937_64& gen, unsigned b, std::size_t count) {
  // accept x < 2^64 - (2^64 mod b) so digits are exactly uniform
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t excess = (kMax % b + 1) % b;
  const std::uint64_t limit = excess == 0 ? 0 : kMax - excess + 1;
  std::vector<Digit> out(count);
  for (auto& d : out) {
    std::uint64_t x = gen();
    while (excess != 0 && x >= limit) x = gen();
    d = static_cast<Digit>(x % b);
  }
  return out;
}

}  // namespace

DigitalShift sample_shift(std::uint64_t seed, std::uint64_t index, unsigned b, std::size_t s,
                          std::size_t d) {
  require_prime_base(b);
  auto gen = keyed_engine(seed, index);
  return DigitalShift(b, s, d, uniform_digits(gen, b, s * d));
}

PointSet sample_uniform_points(std::uint64_t seed, unsigned b, std::size_t s, std::size_t m,
                               std::size_t depth) {
  require_prime_base(b);
  std::size_t n = 1;
  for (std::size_t i = 0; i < m; ++i) n *= b;
  // index space disjoint from shift streams
  auto gen = keyed_engine(seed, ~std::uint64_t{0} - m);
  return PointSet(b, s, depth, n, uniform_digits(gen, b, n * s * depth));
}

RmsEstimate summarize_shift_errors(std::vector<double> per_shift_errors) {
  RmsEstimate out;
  const std::size_t r = per_shift_errors.size();
  if (r == 0) throw std::invalid_argument("no shift errors to summarize");
  double mean = 0.0;
  for (double e : per_shift_errors) mean += e * e;
  mean /= static_cast<double>(r);
  double var = 0.0;
  for (double e : per_shift_errors) var += (e * e - mean) * (e * e - mean);
  var = r > 1 ? var / static_cast<double>(r - 1) : 0.0;
  out.estimate = std::sqrt(mean);
  const double se_mean = std::sqrt(var / static_cast<double>(r));
  out.standard_error = out.estimate > 0.0 ? se_mean / (2.0 * out.estimate) : 0.0;
  out.per_shift_errors = std::move(per_shift_errors);
  return out;
}

namespace {

std::vector<double> shifted_errors(const KernelParams& params, const PointSet& points,
                                   std::size_t R, std::uint64_t seed, std::size_t depth) {
  const std::size_t d = depth == 0 ? default_shift_depth(points.base(), points.depth()) : depth;
  std::vector<double> errors(R);
  for (std::size_t r = 0; r < R; ++r) {
    const auto shift = sample_shift(seed, r, points.base(), points.dim(), d);
    errors[r] = worst_case_error(params, apply_shift(points, shift));
  }
  return errors;
}

}  // namespace

RmsEstimate rms_wce_mc(const KernelParams& params, const PointSet& points, std::size_t R,
                       std::uint64_t seed, std::size_t shift_depth) {
  if (R < 2) throw std::invalid_argument("rms_wce_mc: need at least two shifts");
  return summarize_shift_errors(shifted_errors(params, points, R, seed, shift_depth));
}

BestShift best_shift_search(const KernelParams& params, const PointSet& points, std::size_t R,
                            std::uint64_t seed, std::size_t shift_depth) {
  if (R < 1) throw std::invalid_argument("best_shift_search: need at least one shift");
  const auto errors = shifted_errors(params, points, R, seed, shift_depth);
  const auto best = static_cast<std::size_t>(
      std::min_element(errors.begin(), errors.end()) - errors.begin());
  const std::size_t d =
      shift_depth == 0 ? default_shift_depth(points.base(), points.depth()) : shift_depth;
  return BestShift{sample_shift(seed, best, points.base(), points.dim(), d), errors[best], best};
}

}  // namespace hoqmc
