#include "hoqmc/gf_linalg.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace hoqmc {

bool is_prime(unsigned n) {
  if (n < 2) return false;
  for (unsigned d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

void require_prime_base(unsigned b) {
  if (b > kMaxBase || !is_prime(b)) {
    throw std::invalid_argument("base " + std::to_string(b) + " is not a supported prime");
  }
}

GFMatrix::GFMatrix(unsigned base, std::size_t rows, std::size_t cols)
    : base_(base), rows_(rows), cols_(cols), entries_(rows * cols, 0) {
  require_prime_base(base);
}

GFMatrix::GFMatrix(unsigned base, std::size_t rows, std::size_t cols, std::vector<Digit> entries)
    : base_(base), rows_(rows), cols_(cols), entries_(std::move(entries)) {
  require_prime_base(base);
  if (entries_.size() != rows * cols) {
    throw std::invalid_argument("matrix entry count does not match its shape");
  }
  for (Digit d : entries_) {
    if (d >= base) throw std::invalid_argument("matrix entry out of range for base");
  }
}

GFMatrix GFMatrix::identity(unsigned base, std::size_t k) {
  GFMatrix id(base, k, k);
  for (std::size_t i = 0; i < k; ++i) id.entries_[i * k + i] = 1;
  return id;
}

void GFMatrix::set(std::size_t i, std::size_t j, unsigned value) {
  if (i >= rows_ || j >= cols_) throw std::out_of_range("matrix index out of range");
  if (value >= base_) throw std::invalid_argument("matrix entry out of range for base");
  entries_[i * cols_ + j] = static_cast<Digit>(value);
}

GFMatrix GFMatrix::transpose() const {
  GFMatrix t(base_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t.entries_[j * rows_ + i] = (*this)(i, j);
  }
  return t;
}

GFMatrix GFMatrix::block(std::size_t rows, std::size_t cols) const {
  if (rows > rows_ || cols > cols_) throw std::invalid_argument("block larger than matrix");
  GFMatrix out(base_, rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) out.entries_[i * cols + j] = (*this)(i, j);
  }
  return out;
}

GFMatrix operator*(const GFMatrix& a, const GFMatrix& b) {
  if (a.base() != b.base() || a.cols() != b.rows()) {
    throw std::invalid_argument("matrix product shape or base mismatch");
  }
  GFMatrix out(a.base(), a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      unsigned acc = 0;
      for (std::size_t k = 0; k < a.cols(); ++k) acc = (acc + a(i, k) * b(k, j)) % a.base();
      out.set(i, j, acc);
    }
  }
  return out;
}

DigitVector mat_vec_mul(const GFMatrix& m, std::span<const Digit> v) {
  if (v.size() != m.cols()) throw std::invalid_argument("vector length does not match matrix");
  for (Digit d : v) {
    if (d >= m.base()) throw std::invalid_argument("vector entry out of range for base");
  }
  DigitVector out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    unsigned acc = 0;
    auto r = m.row(i);
    for (std::size_t k = 0; k < v.size(); ++k) acc += unsigned{r[k]} * v[k];
    out[i] = static_cast<Digit>(acc % m.base());
  }
  return out;
}

std::vector<Digit> inverse_table(unsigned base) {
  std::vector<Digit> inv(base, 0);
  for (unsigned a = 1; a < base; ++a) {
    for (unsigned x = 1; x < base; ++x) {
      if ((a * x) % base == 1) {
        inv[a] = static_cast<Digit>(x);
        break;
      }
    }
  }
  return inv;
}

std::size_t rank(const GFMatrix& m) {
  EchelonBasis basis(m.base(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) basis.insert(m.row(i));
  return basis.size();
}

bool rows_independent(std::span<const DigitVector> rows, unsigned base) {
  require_prime_base(base);
  if (rows.empty()) return true;
  const std::size_t width = rows.front().size();
  for (const auto& r : rows) {
    if (r.size() != width) throw std::invalid_argument("rows differ in length");
    for (Digit d : r) {
      if (d >= base) throw std::invalid_argument("row entry out of range for base");
    }
  }
  if (rows.size() > width) return false;
  EchelonBasis basis(base, width);
  for (const auto& r : rows) {
    if (!basis.insert(r)) return false;
  }
  return true;
}

EchelonBasis::EchelonBasis(unsigned base, std::size_t width)
    : base_(base), width_(width), inverse_(inverse_table(base)), scratch_(width) {
  require_prime_base(base);
}

bool EchelonBasis::insert(std::span<const Digit> row) {
  if (row.size() != width_) throw std::invalid_argument("row width mismatch");
  for (std::size_t k = 0; k < width_; ++k) scratch_[k] = row[k];
  for (std::size_t r = 0; r < pivots_.size(); ++r) {
    const unsigned factor = scratch_[pivots_[r]];
    if (factor == 0) continue;
    const Digit* basis_row = rows_.data() + r * width_;
    const unsigned neg = base_ - factor;
    for (std::size_t k = pivots_[r]; k < width_; ++k) {
      scratch_[k] = (scratch_[k] + neg * basis_row[k]) % base_;
    }
  }
  std::size_t pivot = 0;
  while (pivot < width_ && scratch_[pivot] == 0) ++pivot;
  if (pivot == width_) return false;
  const unsigned scale = inverse_[scratch_[pivot]];
  for (std::size_t k = 0; k < width_; ++k) {
    rows_.push_back(static_cast<Digit>((scratch_[k] * scale) % base_));
  }
  pivots_.push_back(pivot);
  return true;
}

void EchelonBasis::pop() {
  if (pivots_.empty()) throw std::logic_error("pop from empty basis");
  pivots_.pop_back();
  rows_.resize(pivots_.size() * width_);
}

}  // namespace hoqmc
