#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <numeric>
#include <random>

#include "hoqmc/net_construction.hpp"
#include "hoqmc/sobolev_kernel.hpp"
#include "oracles.hpp"

using namespace hoqmc;

namespace {

std::vector<double> random_points(std::mt19937_64& rng, std::size_t n, std::size_t s) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(n * s);
  for (auto& v : p) v = u(rng);
  return p;
}

Weights random_product(std::mt19937_64& rng, std::size_t s) {
  std::uniform_real_distribution<double> u(0.05, 1.5);
  std::vector<double> g(s);
  for (auto& v : g) v = u(rng);
  return Weights::product(g);
}

}  // namespace

TEST_CASE("bernoulli examples") {
  CHECK(bernoulli(0, 0.3) == 1.0);
  CHECK(bernoulli(1, 0.5) == 0.0);
  CHECK(bernoulli(2, 0.0) == doctest::Approx(1.0 / 6).epsilon(1e-15));
  CHECK(bernoulli(4, 0.0) == doctest::Approx(-1.0 / 30).epsilon(1e-15));
  const auto& t = BernoulliTable::standard();
  CHECK(t.coefficients(4)[0] == ExactRational(-1, 30));
  CHECK(t.coefficients(2)[0] == ExactRational(1, 6));
  CHECK(t.coefficients(20)[0] == ExactRational(-174611, 330));
  CHECK_THROWS_AS(t.eval(21, 0.5), std::invalid_argument);
}

TEST_CASE("bernoulli polynomials match closed forms") {
  const auto& t = BernoulliTable::standard();
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double x = u(rng);
    for (unsigned r = 0; r <= 6; ++r) {
      CHECK(t.eval(r, x) == doctest::Approx(oracle::bernoulli_closed(r, x)).epsilon(1e-13));
      CHECK(t.eval_fast(r, x) == doctest::Approx(t.eval(r, x)).epsilon(1e-12));
    }
    // reflection B_n(1 - x) = (-1)^n B_n(x)
    for (unsigned r = 1; r <= 20; ++r) {
      const double sign = r % 2 ? -1.0 : 1.0;
      CHECK(t.eval(r, 1.0 - x) == doctest::Approx(sign * t.eval(r, x)).epsilon(1e-9).scale(1e-6));
    }
  }
}

TEST_CASE("kernel_1d examples") {
  CHECK(kernel_1d(1, 0.0, 0.0) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(kernel_1d(2, 0.0, 0.0) ==
        doctest::Approx(1.0 / 4 + 1.0 / 144 + 1.0 / 720).epsilon(1e-15));
  CHECK_THROWS_AS(kernel_1d(0, 0.1, 0.2), std::invalid_argument);
}

TEST_CASE("kernel_1d is symmetric, matches the closed form and integrates to zero") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (unsigned alpha = 1; alpha <= 3; ++alpha) {
    for (int i = 0; i < 20; ++i) {
      const double x = u(rng), y = u(rng);
      CHECK(kernel_1d(alpha, x, y) == kernel_1d(alpha, y, x));
      CHECK(kernel_1d(alpha, x, y) == doctest::Approx(oracle::kernel_1d(alpha, x, y)).epsilon(1e-12));
      const double q = static_cast<double>(
          oracle::midpoint_split([&](double t) { return kernel_1d(alpha, x, t); }, x, 1u << 14));
      CHECK(std::abs(q) < 1e-9);
    }
  }
}

TEST_CASE("kernel with weights") {
  const KernelParams none{2, Weights::product({0.0, 0.0})};
  const double x[2] = {0.1, 0.7}, y[2] = {0.9, 0.3};
  CHECK(kernel(none, x, y) == 1.0);

  const KernelParams one{3, Weights::explicit_map(1, {0.5, 2.0})};
  CHECK(kernel(one, std::span(x, 1), std::span(y, 1)) ==
        doctest::Approx(0.5 + 2.0 * kernel_1d(3, 0.1, 0.9)));
}

TEST_CASE("product and explicit weights agree") {
  std::mt19937_64 rng(43);
  for (std::size_t s = 1; s <= 6; ++s) {
    const Weights w = random_product(rng, s);
    const KernelParams prod{2, w}, expl{2, w.to_explicit()};
    CHECK_FALSE(expl.weights.is_product());
    for (int i = 0; i < 10; ++i) {
      const auto x = random_points(rng, 1, s), y = random_points(rng, 1, s);
      // brute-force subset sum
      double brute = 0;
      for (std::uint32_t mask = 0; mask < (1u << s); ++mask) {
        double term = w.gamma(mask);
        for (std::size_t j = 0; j < s; ++j)
          if (mask >> j & 1) term *= kernel_1d(2, x[j], y[j]);
        brute += term;
      }
      CHECK(kernel(prod, x, y) == doctest::Approx(brute).epsilon(1e-12));
      CHECK(kernel(expl, x, y) == doctest::Approx(brute).epsilon(1e-12));
    }
    const auto pts = random_points(rng, 20, s);
    CHECK(worst_case_error_sq(prod, pts) ==
          doctest::Approx(worst_case_error_sq(expl, pts)).epsilon(1e-11));
  }
}

TEST_CASE("worst-case error examples") {
  const double origin[1] = {0.0};
  const KernelParams p2{2, Weights::product({1.0})};
  CHECK(worst_case_error_sq(p2, origin) ==
        doctest::Approx(1.0 / 4 + 1.0 / 144 + 1.0 / 720).epsilon(1e-14));

  const KernelParams zero{2, Weights::product({0.0, 0.0})};
  std::mt19937_64 rng(44);
  CHECK(worst_case_error(zero, random_points(rng, 16, 2)) == 0.0);
}

TEST_CASE("worst-case error matches the three-term identity by quadrature") {
  std::mt19937_64 rng(45);
  for (unsigned alpha = 1; alpha <= 3; ++alpha) {
    const KernelParams p{alpha, Weights::explicit_map(1, {1.0, 1.0})};
    for (int i = 0; i < 2; ++i) {
      const auto pts = random_points(rng, 8, 1);
      const double ref = oracle::wce_sq_quadrature(alpha, pts, 1.0, 1.0, std::size_t{1} << 14, std::size_t{1} << 9);
      CHECK(worst_case_error_sq(p, pts) == doctest::Approx(ref).epsilon(1e-6));
    }
  }
}

TEST_CASE("parallel and serial worst-case error agree") {
  std::mt19937_64 rng(46);
  for (std::size_t s : {1u, 2u, 3u, 5u}) {
    for (unsigned alpha = 1; alpha <= 4; ++alpha) {
      const KernelParams prod{alpha, random_product(rng, s)};
      const KernelParams expl{alpha, prod.weights.to_explicit()};
      const auto pts = random_points(rng, 150, s);
      const double ref = serial::worst_case_error_sq(prod, pts);
      CHECK(worst_case_error_sq(prod, pts) == doctest::Approx(ref).epsilon(1e-10));
      CHECK(worst_case_error_sq(expl, pts) == doctest::Approx(ref).epsilon(1e-10));
    }
  }
}

TEST_CASE("worst-case error scales with the weights and ignores point order") {
  std::mt19937_64 rng(47);
  for (std::size_t s : {1u, 2u, 3u}) {
    const KernelParams p{2, random_product(rng, s)};
    const KernelParams p3{2, p.weights.scaled(3.0)};
    auto pts = random_points(rng, 40, s);
    const double e2 = worst_case_error_sq(p, pts);
    CHECK(worst_case_error_sq(p3, pts) == doctest::Approx(3.0 * e2).epsilon(1e-12));

    std::vector<std::size_t> perm(40);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> shuffled(pts.size());
    for (std::size_t i = 0; i < 40; ++i)
      std::copy_n(pts.begin() + perm[i] * s, s, shuffled.begin() + i * s);
    CHECK(worst_case_error_sq(p, shuffled) == doctest::Approx(e2).epsilon(1e-12));
  }
}

TEST_CASE("worst-case error rejects malformed input") {
  const KernelParams p{2, Weights::product({1.0, 1.0})};
  const std::vector<double> odd(5, 0.1);
  CHECK_THROWS_AS(worst_case_error_sq(p, odd), std::invalid_argument);
  CHECK_THROWS_AS(Weights::product({-1.0}), std::invalid_argument);
  CHECK_THROWS_AS(Weights::explicit_map(2, {1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("gram matrices are positive semidefinite") {
  std::mt19937_64 rng(48);
  for (std::size_t s = 1; s <= 3; ++s) {
    for (unsigned alpha = 1; alpha <= 3; ++alpha) {
      const KernelParams p{alpha, random_product(rng, s)};
      const auto pts = random_points(rng, 64, s);
      Eigen::MatrixXd gram(64, 64);
      for (int i = 0; i < 64; ++i)
        for (int j = 0; j < 64; ++j)
          gram(i, j) = kernel(p, std::span(pts).subspan(i * s, s), std::span(pts).subspan(j * s, s));
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
      CHECK(eig.eigenvalues().minCoeff() >= -1e-9);
    }
  }
}

TEST_CASE("representer error is bounded by the worst-case error") {
  std::mt19937_64 rng(49);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t s = 1 + trial % 3;
    const unsigned alpha = 1 + trial % 4;
    const std::size_t m = 1 + rng() % 4;
    std::vector<GFMatrix> mats;
    for (std::size_t j = 0; j < s; ++j) mats.push_back(oracle::random_matrix(rng, 2, m + 2, m));
    const PointSet pts = generate_points(GeneratingMatrices(std::move(mats)));
    const KernelParams p{alpha, random_product(rng, s)};
    const auto y = random_points(rng, 1, s);
    const RepresenterCheck c = error_on_representer(p, pts, y);
    CHECK(c.observed <= c.bound * (1 + 1e-9) + 1e-14);
  }
  const KernelParams none{2, Weights::product({0.0, 0.0})};
  const PointSet pts = generate_points(faure_matrices(2, 2, 3));
  const double y[2] = {0.3, 0.6};
  const RepresenterCheck c = error_on_representer(none, pts, y);
  CHECK(c.observed == doctest::Approx(0.0));
  CHECK(c.bound == 0.0);
}

TEST_CASE("single-point representer") {
  const KernelParams p{2, Weights::explicit_map(1, {1.0, 1.0})};
  const double y = 0.375;
  const PointSet pts(2, 1, 3, 1, {0, 1, 1});
  const RepresenterCheck c = error_on_representer(p, pts, std::span(&y, 1));
  const double kyy = 1.0 + kernel_1d(2, y, y);
  CHECK(c.observed == doctest::Approx(kyy - 1.0).epsilon(1e-14));
  CHECK(c.observed <= c.bound);
}
