#include <doctest.h>

#include <random>

#include "hoqmc/gf_linalg.hpp"
#include "oracles.hpp"

using namespace hoqmc;

TEST_CASE("mat_vec_mul examples") {
  const DigitVector v{1, 0, 1};
  CHECK(mat_vec_mul(GFMatrix::identity(2, 3), v) == DigitVector{1, 0, 1});
  CHECK(mat_vec_mul(GFMatrix(5, 2, 3), DigitVector{4, 3, 2}) == DigitVector{0, 0});

  const GFMatrix m(3, 2, 2, {1, 2, 2, 2});
  CHECK(mat_vec_mul(m, DigitVector{1, 1}) == DigitVector{0, 1});
}

TEST_CASE("mat_vec_mul rejects mismatched lengths") {
  CHECK_THROWS_AS(mat_vec_mul(GFMatrix::identity(2, 3), DigitVector{1, 0}), std::invalid_argument);
}

TEST_CASE("rank examples") {
  for (std::size_t k = 1; k <= 6; ++k) CHECK(rank(GFMatrix::identity(3, k)) == k);
  CHECK(rank(GFMatrix(2, 2, 3, {1, 0, 1, 1, 0, 1})) < 2);
  CHECK(rank(GFMatrix(2, 3, 3, {1, 1, 0, 0, 1, 1, 1, 0, 1})) == 2);
}

TEST_CASE("rows_independent examples") {
  CHECK(rows_independent({}, 2));
  const std::vector<DigitVector> with_zero{{1, 0, 0}, {0, 0, 0}};
  CHECK_FALSE(rows_independent(with_zero, 3));
  const std::vector<DigitVector> three{{1, 0}, {0, 1}, {1, 1}};
  CHECK_FALSE(rows_independent(three, 2));
}

TEST_CASE("non-prime bases are rejected") {
  CHECK_THROWS_AS(GFMatrix(4, 2, 2), std::invalid_argument);
  CHECK_THROWS_AS(GFMatrix(1, 2, 2), std::invalid_argument);
  CHECK_THROWS_AS(GFMatrix(257, 2, 2), std::invalid_argument);
  CHECK_NOTHROW(GFMatrix(251, 1, 1));
}

TEST_CASE("rank agrees with span enumeration and with the transpose") {
  std::mt19937_64 rng(11);
  for (unsigned b : {2u, 3u, 5u}) {
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t rows = 1 + rng() % 12, cols = 1 + rng() % 12;
      const GFMatrix m = oracle::random_matrix(rng, b, rows, cols);
      const std::size_t r = rank(m);
      CHECK(r == rank(m.transpose()));
      if (std::pow(double(b), double(rows)) <= 5000) CHECK(r == oracle::rank_by_span(m));
    }
  }
}

TEST_CASE("sparse low-rank matrices") {
  // rank-deficient inputs are where elimination bugs hide
  std::mt19937_64 rng(12);
  for (unsigned b : {2u, 3u, 5u}) {
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t k = 1 + rng() % 4;
      const GFMatrix a = oracle::random_matrix(rng, b, 6, k);
      const GFMatrix c = oracle::random_matrix(rng, b, k, 7);
      const GFMatrix m = a * c;
      CHECK(rank(m) <= k);
      CHECK(rank(m) == oracle::rank_by_span(m.transpose()));
    }
  }
}

TEST_CASE("independence is inherited by subsets") {
  std::mt19937_64 rng(13);
  for (unsigned b : {2u, 3u, 5u}) {
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t k = 1 + rng() % 5, width = 2 + rng() % 5;
      const GFMatrix m = oracle::random_matrix(rng, b, k, width);
      std::vector<DigitVector> rows;
      for (std::size_t i = 0; i < k; ++i) rows.emplace_back(m.row(i).begin(), m.row(i).end());
      const bool all = rows_independent(rows, b);
      CHECK(all == oracle::independent_by_span(rows, b));
      if (!all) continue;
      for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
        std::vector<DigitVector> sub;
        for (std::size_t i = 0; i < k; ++i)
          if (mask >> i & 1) sub.push_back(rows[i]);
        CHECK(rows_independent(sub, b));
      }
    }
  }
}

TEST_CASE("mat_vec_mul is linear") {
  std::mt19937_64 rng(14);
  for (unsigned b : {2u, 3u, 5u, 7u}) {
    std::uniform_int_distribution<unsigned> digit(0, b - 1);
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t rows = 1 + rng() % 10, cols = 1 + rng() % 10;
      const GFMatrix m = oracle::random_matrix(rng, b, rows, cols);
      DigitVector v(cols), w(cols), vw(cols);
      for (std::size_t i = 0; i < cols; ++i) {
        v[i] = digit(rng);
        w[i] = digit(rng);
        vw[i] = (v[i] + w[i]) % b;
      }
      const auto mv = mat_vec_mul(m, v), mw = mat_vec_mul(m, w), mvw = mat_vec_mul(m, vw);
      for (std::size_t i = 0; i < rows; ++i) CHECK(mvw[i] == (mv[i] + mw[i]) % b);
    }
  }
}

TEST_CASE("echelon basis insert and pop") {
  EchelonBasis basis(3, 3);
  const DigitVector a{1, 2, 0}, b{2, 1, 0}, c{0, 0, 1};
  CHECK(basis.insert(a));
  CHECK_FALSE(basis.insert(b));  // b = 2a
  CHECK(basis.insert(c));
  CHECK(basis.size() == 2);
  basis.pop();
  CHECK(basis.size() == 1);
  CHECK_FALSE(basis.insert(DigitVector{2, 1, 0}));
  CHECK(basis.insert(DigitVector{0, 1, 1}));
}

TEST_CASE("inverse table") {
  for (unsigned b : {2u, 3u, 5u, 7u, 251u}) {
    const auto inv = inverse_table(b);
    for (unsigned x = 1; x < b; ++x) CHECK(x * inv[x] % b == 1);
  }
}
