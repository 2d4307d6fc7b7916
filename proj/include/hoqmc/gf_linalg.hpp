#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hoqmc {

using Digit = std::uint8_t;
using DigitVector = std::vector<Digit>;

/// Largest supported prime base; digits must fit in a Digit.
inline constexpr unsigned kMaxBase = 251;

bool is_prime(unsigned n);

/// Throws std::invalid_argument unless 2 <= b <= kMaxBase and b is prime.
void require_prime_base(unsigned b);

/// Dense matrix over the prime field Z_b, row-major.
class GFMatrix {
 public:
  /// Zero matrix.
  GFMatrix(unsigned base, std::size_t rows, std::size_t cols);
  GFMatrix(unsigned base, std::size_t rows, std::size_t cols, std::vector<Digit> entries);

  static GFMatrix identity(unsigned base, std::size_t k);

  unsigned base() const { return base_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Digit operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
  void set(std::size_t i, std::size_t j, unsigned value);

  std::span<const Digit> row(std::size_t i) const {
    return {entries_.data() + i * cols_, cols_};
  }
  std::span<const Digit> entries() const { return entries_; }

  GFMatrix transpose() const;
  /// Upper-left block of the given shape.
  GFMatrix block(std::size_t rows, std::size_t cols) const;

  friend bool operator==(const GFMatrix&, const GFMatrix&) = default;

 private:
  unsigned base_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Digit> entries_;
};

GFMatrix operator*(const GFMatrix& a, const GFMatrix& b);

DigitVector mat_vec_mul(const GFMatrix& m, std::span<const Digit> v);

std::size_t rank(const GFMatrix& m);

/// True iff the rows are linearly independent over Z_b. An empty list is independent.
bool rows_independent(std::span<const DigitVector> rows, unsigned base);

/// Multiplicative inverses modulo a prime; inverse[0] is unused.
std::vector<Digit> inverse_table(unsigned base);

/// Row-echelon basis that accepts vectors one at a time and can undo the most
/// recent insertions. Each stored row is reduced against all earlier rows and
/// normalized to a unit pivot, so reducing a candidate in insertion order is exact.
class EchelonBasis {
 public:
  EchelonBasis(unsigned base, std::size_t width);

  /// Inserts the row if it is independent of the current basis.
  bool insert(std::span<const Digit> row);
  void pop();
  std::size_t size() const { return pivots_.size(); }
  std::size_t width() const { return width_; }

 private:
  unsigned base_;
  std::size_t width_;
  std::vector<Digit> inverse_;
  std::vector<Digit> rows_;  // size() * width_ digits
  std::vector<std::size_t> pivots_;
  std::vector<unsigned> scratch_;
};

}  // namespace hoqmc
