#include <doctest.h>

#include <cmath>
#include <random>

#include "hoqmc/net_construction.hpp"
#include "hoqmc/net_quality.hpp"
#include "hoqmc/shifts_rms.hpp"

using namespace hoqmc;

namespace {

PointSet small_net(unsigned b, std::size_t s, std::size_t m) {
  return generate_points(faure_matrices(b, s, m));
}

double log_binomial(double n, double k) {
  return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

}  // namespace

TEST_CASE("apply_shift examples") {
  const PointSet p = small_net(2, 2, 3);
  const DigitalShift zero(2, 2, 3, std::vector<Digit>(6, 0));
  CHECK(apply_shift(p, zero) == p);

  const DigitalShift sigma = sample_shift(7, 2, 2, 3);
  CHECK(apply_shift(apply_shift(p, sigma), sigma) == p);

  const PointSet one(3, 1, 2, 1, {1, 2});
  const DigitalShift s3(3, 1, 3, {2, 2, 1});
  const PointSet out = apply_shift(one, s3);
  REQUIRE(out.depth() == 3);
  CHECK(out.digit(0, 0, 0) == 0);
  CHECK(out.digit(0, 0, 1) == 1);
  CHECK(out.digit(0, 0, 2) == 1);

  CHECK_THROWS_AS(apply_shift(p, DigitalShift(2, 2, 2, std::vector<Digit>(4, 0))),
                  std::invalid_argument);
}

TEST_CASE("shifts compose digitwise") {
  for (unsigned b : {2u, 3u, 5u}) {
    const PointSet p = small_net(b, 2, 2);
    const std::size_t d = default_shift_depth(b, p.depth());
    const DigitalShift a = sample_shift(1, 0, b, 2, d), c = sample_shift(1, 1, b, 2, d);
    CHECK(apply_shift(apply_shift(p, a), c) == apply_shift(p, a.combine(c)));
  }
}

TEST_CASE("default shift depth") {
  CHECK(default_shift_depth(2, 10) == 52);
  CHECK(default_shift_depth(2, 60) == 60);
  CHECK(default_shift_depth(3, 4) == 33);
  CHECK(default_shift_depth(5, 4) == 23);
}

TEST_CASE("shift sampling is deterministic and keyed by index") {
  const DigitalShift a = sample_shift(42, 3, 5, 2, 20);
  CHECK(a == sample_shift(42, 3, 5, 2, 20));
  CHECK_FALSE(a == sample_shift(43, 3, 5, 2, 20));
  CHECK_FALSE(a == sample_shift(42, 4, 5, 2, 20));
  CHECK(sample_shift(42, 5, 2, 20) == sample_shift(42, 0, 5, 2, 20));
}

TEST_CASE("shift digits are uniform") {
  for (unsigned b : {2u, 3u, 5u, 7u}) {
    std::vector<double> counts(b, 0.0);
    std::size_t total = 0;
    for (std::uint64_t r = 0; total < 100000; ++r) {
      const DigitalShift s = sample_shift(9, r, b, 1, 100);
      for (Digit d : s.raw_digits()) ++counts[d];
      total += 100;
    }
    const double expected = static_cast<double>(total) / b;
    double chi2 = 0;
    for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
    // chi-square with b - 1 degrees of freedom: mean b - 1, sd sqrt(2(b - 1))
    CHECK(chi2 < (b - 1) + 4 * std::sqrt(2.0 * (b - 1)));
  }
}

TEST_CASE("rms estimate basics") {
  const PointSet p = small_net(2, 1, 5);
  const KernelParams none{2, Weights::product({0.0})};
  const RmsEstimate zero = rms_wce_mc(none, p, 4, 1);
  CHECK(zero.estimate == 0.0);

  const KernelParams k{2, Weights::product({1.0})};
  const RmsEstimate est = rms_wce_mc(k, p, 16, 5);
  REQUIRE(est.per_shift_errors.size() == 16);
  double mean_sq = 0;
  for (double e : est.per_shift_errors) mean_sq += e * e;
  CHECK(est.estimate == doctest::Approx(std::sqrt(mean_sq / 16)).epsilon(1e-14));
  CHECK(est.standard_error >= 0.0);
  CHECK_THROWS_AS(rms_wce_mc(k, p, 1, 5), std::invalid_argument);

  const BestShift best = best_shift_search(k, p, 16, 5);
  CHECK(best.error <= est.estimate);
  CHECK(best.error == est.per_shift_errors[best.index]);
  CHECK(best.shift == sample_shift(5, best.index, 2, 1, default_shift_depth(2, p.depth())));

  const BestShift one = best_shift_search(k, p, 1, 5);
  CHECK(one.index == 0);
  CHECK(one.shift == sample_shift(5, 0, 2, 1, default_shift_depth(2, p.depth())));
}

TEST_CASE("rms estimate is stable when R doubles") {
  const PointSet p = generate_points(interlace(sobol_matrices(4, 6), 4));
  const KernelParams k{2, Weights::product({1.0})};
  const RmsEstimate a = rms_wce_mc(k, p, 64, 11), b = rms_wce_mc(k, p, 128, 12);
  CHECK(std::abs(a.estimate - b.estimate) <
        3 * std::sqrt(a.standard_error * a.standard_error + b.standard_error * b.standard_error));
}

TEST_CASE("rms estimate stays below the theoretical bound, interlaced order-4 net at m=6") {
  const std::size_t m = 6;
  const GeneratingMatrices src = sobol_matrices(4, m);
  const PointSet p = generate_points(interlace(src, 4));
  const Weights w = Weights::product({1.0});
  const KernelParams k{2, w};
  const unsigned t = interlaced_t_bound(exact_t_value(src, 1), 4, 1, m);
  const double bound = theoretical_bound(2, 4, 2, t, m, w);
  const RmsEstimate est = rms_wce_mc(k, p, 32, 3);
  CHECK(est.estimate < bound);
  CHECK(best_shift_search(k, p, 32, 3).error <= bound);
}

TEST_CASE("shifted estimates are unbiased") {
  for (std::size_t s = 1; s <= 3; ++s) {
    const PointSet p = small_net(3, s, 2);
    const std::size_t d = default_shift_depth(3, p.depth());
    std::vector<double> est;
    for (std::uint64_t r = 0; r < 1000; ++r) {
      const auto x = apply_shift(p, sample_shift(77, r, 3, s, d)).values();
      double sum = 0;
      for (std::size_t h = 0; h < p.size(); ++h) {
        double f = 1;
        for (std::size_t j = 0; j < s; ++j) f *= x[h * s + j] * x[h * s + j];
        sum += f;
      }
      est.push_back(sum / p.size());
    }
    double mean = 0, var = 0;
    for (double e : est) mean += e;
    mean /= est.size();
    for (double e : est) var += (e - mean) * (e - mean);
    const double se = std::sqrt(var / (est.size() - 1) / est.size());
    CHECK(std::abs(mean - std::pow(3.0, -double(s))) < 4 * se);
  }
}

TEST_CASE("C_tau constants") {
  CHECK(constant_C_tau(1, 2) == doctest::Approx(0.5).epsilon(1e-15));
  for (unsigned b : {2u, 3u, 5u, 7u}) {
    const double c2 = 1.0 / std::pow(2 * std::sin(M_PI / b), 2);
    CHECK(constant_C_tau(2, b) == doctest::Approx(c2).epsilon(1e-14));
    // literal reading uses sin(tau / b)
    CHECK(constant_C_tau(2, b, CtauReading::literal) ==
          doctest::Approx(1.0 / std::pow(2 * std::sin(2.0 / b), 2)).epsilon(1e-14));
  }
}

TEST_CASE("C_tau is monotone where 2 sin(pi/b) <= 1 + 1/b + 1/(b(b+1))") {
  // the ratio C_{tau+1}/C_tau is (1 + 1/b + 1/(b(b+1))) / (2 sin(pi/b)) for tau >= 2
  for (unsigned b : {2u, 3u, 5u}) {
    const double ratio = (1 + 1.0 / b + 1.0 / (b * (b + 1.0))) / (2 * std::sin(M_PI / b));
    for (unsigned tau = 2; tau < 8; ++tau) {
      CHECK(constant_C_tau(tau + 1, b) / constant_C_tau(tau, b) == doctest::Approx(ratio));
      if (ratio > 1) CHECK(constant_C_tau(tau + 1, b) > constant_C_tau(tau, b));
    }
  }
}

TEST_CASE("D constant") {
  for (unsigned b : {2u, 3u, 5u}) {
    const double c1 = constant_C_tau(1, b), c2 = constant_C_tau(2, b);
    CHECK(constant_D(1, b).value == doctest::Approx(c1 * c1 + 2 * c2).epsilon(1e-14));
    for (unsigned alpha = 1; alpha <= 6; ++alpha) {
      const DConstant d = constant_D(alpha, b);
      CHECK(d.value > 0);
      // independent scan over v
      double best = -1;
      unsigned arg = 0;
      for (unsigned v = 1; v <= alpha; ++v) {
        double sum = 2 * constant_C_tau(2 * alpha, b) * std::pow(double(b), -2.0 * (alpha - v));
        for (unsigned tau = v; tau <= alpha; ++tau)
          sum += std::pow(constant_C_tau(tau, b), 2) * std::pow(double(b), -2.0 * (tau - v));
        if (sum > best) {
          best = sum;
          arg = v;
        }
      }
      CHECK(d.value == doctest::Approx(best).epsilon(1e-14));
      CHECK(d.argmax_v == arg);
    }
  }
}

TEST_CASE("G constant") {
  const double g1 = constant_G(2, 4, 2, 1);
  const double x = std::pow(2.0, 4.0 / 3);
  CHECK(g1 == doctest::Approx(x / (x - 1) + 2 / (x - 2)).epsilon(1e-14));
  CHECK(g1 > 0);
  for (std::size_t c = 1; c < 6; ++c) CHECK(constant_G(2, 4, 2, c + 1) > constant_G(2, 4, 2, c));
  CHECK_THROWS_AS(constant_G(2, 3, 2, 1), std::invalid_argument);
}

TEST_CASE("theoretical bound") {
  const Weights w = Weights::product({1.0, 0.5});
  for (unsigned b : {2u, 3u}) {
    for (std::size_t m = 2; m < 12; ++m) {
      CHECK(theoretical_bound(2, 4, b, 0, m + 1, w) < theoretical_bound(2, 4, b, 0, m, w));
    }
  }
  const double base = theoretical_bound(2, 4, 2, 3, 6, w);
  const Weights doubled = Weights::product({1.0, 0.5}).scaled(2.0);
  CHECK(theoretical_bound(2, 4, 2, 3, 6, doubled) == doctest::Approx(std::sqrt(2.0) * base));
  CHECK(theoretical_bound(2, 4, 2, 3, 6, Weights::product({0.0, 0.0})) == 0.0);
  CHECK_THROWS_AS(theoretical_bound(1, 4, 2, 0, 6, w), std::invalid_argument);
  CHECK_THROWS_AS(theoretical_bound(2, 3, 2, 0, 6, w), std::invalid_argument);
  CHECK_THROWS_AS(theoretical_bound(2, 4, 2, 25, 6, w), std::invalid_argument);

  // s = 1: N^-alpha gamma^{1/2} C_u with C_u = b^{At + B t1} D^{1/2} G^{1/2}
  const Weights one = Weights::product({1.0});
  const double d = constant_D(2, 2).value, g = constant_G(2, 4, 2, 1);
  const double expected = std::pow(2.0, -2.0 * 5) * std::pow(2.0, 4.0 / 3 + 2.0 / 3) * std::sqrt(d * g);
  CHECK(theoretical_bound(2, 4, 2, 4, 5, one) == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("binomial sum lemma") {
  for (double b : {1.5, 2.0, 3.0}) {
    for (int k = 1; k <= 6; ++k) {
      for (int t0 = 1; t0 <= 10; ++t0) {
        double lhs = 0;
        for (int t = t0; t <= 1000; ++t) lhs += std::exp(-t * std::log(b) + log_binomial(t + k - 1, k - 1));
        const double rhs = std::exp(-t0 * std::log(b) + log_binomial(t0 + k - 1, k - 1)) *
                           std::pow(1 - 1 / b, -k);
        CHECK(lhs <= rhs * (1 + 1e-12));
      }
    }
  }
}

TEST_CASE("mean-square bound") {
  const KernelParams none{2, Weights::product({0.0})};
  const GeneratingMatrices id({GFMatrix::identity(2, 4)});
  const MseBound zero = mse_upper_bound_bd(none, id, 8);
  CHECK(zero.value == 0.0);
  CHECK(zero.tail == 0.0);

  // identity net: no nonzero in-range dual vectors; the leading excluded term is k = b^m
  const KernelParams k{2, Weights::product({0.7})};
  const MseBound idb = mse_upper_bound_bd(k, id, 8);
  CHECK(idb.value == 0.0);
  const double leading = 0.7 * constant_D(2, 2).value * std::pow(2.0, -2.0 * 5);
  CHECK(idb.tail >= leading);
  CHECK(idb.tail < 20 * leading);
}

TEST_CASE("mean-square bound dominates the measured mean square error") {
  for (int trial = 0; trial < 8; ++trial) {
    const std::size_t s = 1 + trial % 2, m = 2 + trial % 4;
    const unsigned alpha = 1 + trial % 3;
    const GeneratingMatrices g = trial % 2 ? interlace(sobol_matrices(2 * s, m), 2)
                                           : sobol_matrices(s, m);
    const KernelParams k{alpha, Weights::product(std::vector<double>(s, 0.8))};
    const MseBound bd = mse_upper_bound_bd(k, g, 12);
    const RmsEstimate est = rms_wce_mc(k, generate_points(g), 16, 100 + trial);
    CHECK(est.estimate * est.estimate <= bd.value + bd.tail);
  }
}
