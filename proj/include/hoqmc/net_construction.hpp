#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "hoqmc/gf_linalg.hpp"

namespace hoqmc {

/// The s generating matrices of a digital net, all n x m over the same base.
class GeneratingMatrices {
 public:
  explicit GeneratingMatrices(std::vector<GFMatrix> mats);

  unsigned base() const { return mats_.front().base(); }
  std::size_t rows() const { return mats_.front().rows(); }  // n, digit depth
  std::size_t cols() const { return mats_.front().cols(); }  // m, N = b^m
  std::size_t dim() const { return mats_.size(); }            // s

  const GFMatrix& matrix(std::size_t j) const { return mats_.at(j); }
  std::span<const GFMatrix> matrices() const { return mats_; }

  friend bool operator==(const GeneratingMatrices&, const GeneratingMatrices&) = default;

 private:
  std::vector<GFMatrix> mats_;
};

/// A coordinate x = sum_i digits[i] * b^-(i+1) with finitely many digits.
struct Coordinate {
  unsigned base;
  DigitVector digits;

  /// Exact numerator over b^digits.size(); throws if it does not fit in 64 bits.
  std::uint64_t numerator() const;
  double value() const;
};

/// b^m points in [0,1)^s, each coordinate stored as `depth` base-b digits.
class PointSet {
 public:
  PointSet(unsigned base, std::size_t dim, std::size_t depth, std::size_t size,
           std::vector<Digit> digits);

  unsigned base() const { return base_; }
  std::size_t dim() const { return dim_; }
  std::size_t depth() const { return depth_; }
  std::size_t size() const { return size_; }
  /// log_b(size) when size is a power of b, otherwise unspecified.
  std::size_t log_size() const;

  Digit digit(std::size_t h, std::size_t j, std::size_t i) const {
    return digits_[(h * dim_ + j) * depth_ + i];
  }
  std::span<const Digit> digits(std::size_t h, std::size_t j) const {
    return {digits_.data() + (h * dim_ + j) * depth_, depth_};
  }
  std::span<const Digit> raw_digits() const { return digits_; }

  Coordinate coordinate(std::size_t h, std::size_t j) const;
  double value(std::size_t h, std::size_t j) const;
  /// Row-major size() x dim() coordinates as doubles.
  std::vector<double> values() const;

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  unsigned base_;
  std::size_t dim_;
  std::size_t depth_;
  std::size_t size_;
  std::vector<Digit> digits_;
};

/// Largest m accepted by generate_points: m * log2(b) <= 30.
std::size_t max_net_log_size(unsigned base);

/// Points ordered by the counter h = sum_i eta_i b^i; coordinate j of point h has
/// digit vector C_j * (eta_0, ..., eta_{m-1}). Parallel over h.
PointSet generate_points(const GeneratingMatrices& g);

namespace serial {
PointSet generate_points(const GeneratingMatrices& g);
}

/// C_j = P^(j-1) with P the upper-triangular Pascal matrix mod b. Requires b >= s.
GeneratingMatrices faure_matrices(unsigned b, std::size_t s, std::size_t m);

/// Number of dimensions in the embedded Sobol' direction-number table.
inline constexpr std::size_t kSobolMaxDim = 10;
inline constexpr std::size_t kSobolMaxLogSize = 31;

/// Base-2 m x m Sobol' matrices (Joe-Kuo direction numbers), first coordinate = identity.
GeneratingMatrices sobol_matrices(std::size_t s, std::size_t m);

/// Upper-left m x m blocks of square sequence matrices.
GeneratingMatrices sequence_to_net(const GeneratingMatrices& seq, std::size_t m);

/// Digit interlacing of factor `alpha`: alpha*s square m x m matrices become s
/// matrices of shape (alpha*m) x m, row alpha*(h-1)+i of D_j being row h of
/// C_{alpha*(j-1)+i} (1-based).
GeneratingMatrices interlace(const GeneratingMatrices& q, unsigned alpha);

/// alpha * min{m, t' + floor(s(alpha-1)/2)}, the t-value guaranteed for an
/// interlaced order-1 (t', m, alpha*s)-net.
unsigned interlaced_t_bound(unsigned t_prime, unsigned alpha, std::size_t s, std::size_t m);

// Text format: header "b n m s", then each matrix as n lines of m digits,
// matrices separated by a blank line.
void write_matrices(std::ostream& out, const GeneratingMatrices& g);
GeneratingMatrices read_matrices(std::istream& in);
void save_matrices(const std::filesystem::path& path, const GeneratingMatrices& g);
GeneratingMatrices load_matrices(const std::filesystem::path& path);

}  // namespace hoqmc
