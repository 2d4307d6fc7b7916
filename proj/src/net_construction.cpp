#include "hoqmc/net_construction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "sobol_directions.hpp"

namespace hoqmc {

GeneratingMatrices::GeneratingMatrices(std::vector<GFMatrix> mats) : mats_(std::move(mats)) {
  if (mats_.empty()) throw std::invalid_argument("at least one generating matrix is required");
  const auto& first = mats_.front();
  if (first.rows() == 0 || first.cols() == 0) {
    throw std::invalid_argument("generating matrices must have n >= 1 and m >= 1");
  }
  for (const auto& c : mats_) {
    if (c.base() != first.base() || c.rows() != first.rows() || c.cols() != first.cols()) {
      throw std::invalid_argument("generating matrices must share base and shape");
    }
  }
}

std::uint64_t Coordinate::numerator() const {
  std::uint64_t num = 0;
  for (Digit d : digits) {
    if (num > (UINT64_MAX - d) / base) throw std::overflow_error("coordinate numerator overflow");
    num = num * base + d;
  }
  return num;
}

namespace {

// Extended precision keeps the accumulated error below the final rounding.
double digits_to_double(std::span<const Digit> d, unsigned base) {
  long double v = 0.0L;
  for (std::size_t i = d.size(); i-- > 0;) v = (v + d[i]) / base;
  return static_cast<double>(v);
}

}  // namespace

double Coordinate::value() const { return digits_to_double(digits, base); }

PointSet::PointSet(unsigned base, std::size_t dim, std::size_t depth, std::size_t size,
                   std::vector<Digit> digits)
    : base_(base), dim_(dim), depth_(depth), size_(size), digits_(std::move(digits)) {
  require_prime_base(base);
  if (dim == 0 || depth == 0 || size == 0) throw std::invalid_argument("empty point set shape");
  if (digits_.size() != size * dim * depth) {
    throw std::invalid_argument("digit count does not match point set shape");
  }
  for (Digit d : digits_) {
    if (d >= base) throw std::invalid_argument("point digit out of range for base");
  }
}

std::size_t PointSet::log_size() const {
  std::size_t m = 0;
  for (std::size_t n = 1; n < size_; n *= base_) ++m;
  return m;
}

Coordinate PointSet::coordinate(std::size_t h, std::size_t j) const {
  auto d = digits(h, j);
  return Coordinate{base_, DigitVector(d.begin(), d.end())};
}

double PointSet::value(std::size_t h, std::size_t j) const {
  return digits_to_double(digits(h, j), base_);
}

std::vector<double> PointSet::values() const {
  std::vector<double> out(size_ * dim_);
  for (std::size_t h = 0; h < size_; ++h) {
    for (std::size_t j = 0; j < dim_; ++j) out[h * dim_ + j] = value(h, j);
  }
  return out;
}

std::size_t max_net_log_size(unsigned base) {
  return static_cast<std::size_t>(std::floor(30.0 / std::log2(static_cast<double>(base))));
}

namespace {

std::size_t checked_size(const GeneratingMatrices& g) {
  if (g.cols() > max_net_log_size(g.base())) {
    throw std::invalid_argument("b^m exceeds the supported point count (m log2 b <= 30)");
  }
  std::size_t n = 1;
  for (std::size_t i = 0; i < g.cols(); ++i) n *= g.base();
  return n;
}

void fill_point(const GeneratingMatrices& g, std::size_t h, std::vector<unsigned>& eta,
                Digit* out) {
  const unsigned b = g.base();
  std::size_t rest = h;
  for (auto& e : eta) {
    e = static_cast<unsigned>(rest % b);
    rest /= b;
  }
  const std::size_t n = g.rows();
  for (std::size_t j = 0; j < g.dim(); ++j) {
    const GFMatrix& c = g.matrix(j);
    for (std::size_t i = 0; i < n; ++i) {
      auto row = c.row(i);
      unsigned acc = 0;
      for (std::size_t k = 0; k < eta.size(); ++k) acc += unsigned{row[k]} * eta[k];
      out[j * n + i] = static_cast<Digit>(acc % b);
    }
  }
}

}  // namespace

PointSet generate_points(const GeneratingMatrices& g) {
  const std::size_t size = checked_size(g);
  const std::size_t stride = g.dim() * g.rows();
  std::vector<Digit> digits(size * stride);
  const auto count = static_cast<std::int64_t>(size);
#pragma omp parallel
  {
    std::vector<unsigned> eta(g.cols());
#pragma omp for schedule(static)
    for (std::int64_t h = 0; h < count; ++h) {
      fill_point(g, static_cast<std::size_t>(h), eta, digits.data() + h * stride);
    }
  }
  return PointSet(g.base(), g.dim(), g.rows(), size, std::move(digits));
}

namespace serial {

PointSet generate_points(const GeneratingMatrices& g) {
  const std::size_t size = checked_size(g);
  const unsigned b = g.base();
  std::vector<Digit> digits;
  digits.reserve(size * g.dim() * g.rows());
  for (std::size_t h = 0; h < size; ++h) {
    DigitVector eta(g.cols());
    for (std::size_t i = 0, rest = h; i < g.cols(); ++i, rest /= b) eta[i] = rest % b;
    for (std::size_t j = 0; j < g.dim(); ++j) {
      DigitVector xi = mat_vec_mul(g.matrix(j), eta);
      digits.insert(digits.end(), xi.begin(), xi.end());
    }
  }
  return PointSet(b, g.dim(), g.rows(), size, std::move(digits));
}

}  // namespace serial

GeneratingMatrices faure_matrices(unsigned b, std::size_t s, std::size_t m) {
  require_prime_base(b);
  if (s == 0 || m == 0) throw std::invalid_argument("faure: s and m must be positive");
  if (b < s) {
    throw std::invalid_argument("faure: base " + std::to_string(b) + " is smaller than dimension " +
                                std::to_string(s));
  }
  // binom(l, k) mod b for 0 <= k <= l < m
  std::vector<std::vector<unsigned>> binom(m, std::vector<unsigned>(m, 0));
  for (std::size_t l = 0; l < m; ++l) {
    binom[l][0] = 1;
    for (std::size_t k = 1; k <= l; ++k) binom[l][k] = (binom[l - 1][k - 1] + binom[l - 1][k]) % b;
  }
  std::vector<GFMatrix> mats;
  for (std::size_t j = 0; j < s; ++j) {
    // (P^j)[k][l] = binom(l, k) j^(l-k)
    GFMatrix c(b, m, m);
    for (std::size_t l = 0; l < m; ++l) {
      unsigned power = 1;
      for (std::size_t k = l + 1; k-- > 0;) {
        c.set(k, l, (binom[l][k] * power) % b);
        power = (power * j) % b;
      }
    }
    mats.push_back(std::move(c));
  }
  return GeneratingMatrices(std::move(mats));
}

GeneratingMatrices sobol_matrices(std::size_t s, std::size_t m) {
  if (s == 0 || s > kSobolMaxDim) {
    throw std::invalid_argument("sobol: dimension must be in 1.." + std::to_string(kSobolMaxDim));
  }
  if (m == 0 || m > kSobolMaxLogSize) {
    throw std::invalid_argument("sobol: m must be in 1.." + std::to_string(kSobolMaxLogSize));
  }
  std::vector<GFMatrix> mats;
  for (std::size_t j = 0; j < s; ++j) {
    // v[i] = m_i << (32 - i), 1-based i; column i-1 of C_j holds the bits of v[i]
    std::vector<std::uint32_t> v(m + 1, 0);
    if (j == 0) {
      for (std::size_t i = 1; i <= m; ++i) v[i] = std::uint32_t{1} << (32 - i);
    } else {
      const auto& dir = detail::kSobolDirections[j - 1];
      const std::size_t deg = dir.degree;
      for (std::size_t i = 1; i <= m; ++i) {
        if (i <= deg) {
          v[i] = dir.initial[i - 1] << (32 - i);
        } else {
          v[i] = v[i - deg] ^ (v[i - deg] >> deg);
          for (std::size_t k = 1; k < deg; ++k) {
            if ((dir.coeffs >> (deg - 1 - k)) & 1u) v[i] ^= v[i - k];
          }
        }
      }
    }
    GFMatrix c(2, m, m);
    for (std::size_t col = 0; col < m; ++col) {
      for (std::size_t row = 0; row < m; ++row) c.set(row, col, (v[col + 1] >> (31 - row)) & 1u);
    }
    mats.push_back(std::move(c));
  }
  return GeneratingMatrices(std::move(mats));
}

GeneratingMatrices sequence_to_net(const GeneratingMatrices& seq, std::size_t m) {
  if (seq.rows() != seq.cols()) throw std::invalid_argument("sequence matrices must be square");
  if (m == 0 || m > seq.cols()) {
    throw std::invalid_argument("target m outside 1.." + std::to_string(seq.cols()));
  }
  std::vector<GFMatrix> mats;
  for (const auto& c : seq.matrices()) mats.push_back(c.block(m, m));
  return GeneratingMatrices(std::move(mats));
}

GeneratingMatrices interlace(const GeneratingMatrices& q, unsigned alpha) {
  if (alpha == 0) throw std::invalid_argument("interlacing factor must be positive");
  if (q.dim() % alpha != 0) {
    throw std::invalid_argument("source dimension is not divisible by the interlacing factor");
  }
  if (q.rows() != q.cols()) throw std::invalid_argument("interlacing needs square matrices");
  const std::size_t m = q.cols();
  const std::size_t s = q.dim() / alpha;
  std::vector<GFMatrix> mats;
  for (std::size_t j = 0; j < s; ++j) {
    std::vector<Digit> entries;
    entries.reserve(alpha * m * m);
    for (std::size_t h = 0; h < m; ++h) {
      for (std::size_t i = 0; i < alpha; ++i) {
        auto row = q.matrix(alpha * j + i).row(h);
        entries.insert(entries.end(), row.begin(), row.end());
      }
    }
    mats.emplace_back(q.base(), alpha * m, m, std::move(entries));
  }
  return GeneratingMatrices(std::move(mats));
}

unsigned interlaced_t_bound(unsigned t_prime, unsigned alpha, std::size_t s, std::size_t m) {
  const std::size_t inner = t_prime + (s * (alpha - 1)) / 2;
  return static_cast<unsigned>(alpha * std::min(m, inner));
}

}  // namespace hoqmc
