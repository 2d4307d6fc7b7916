#include "hoqmc/net_quality.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "hoqmc/errors.hpp"

namespace hoqmc {

unsigned mu(unsigned alpha, std::uint64_t k, unsigned b) {
  if (alpha == 0) throw std::invalid_argument("mu: alpha must be >= 1");
  std::array<unsigned, 64> positions{};
  std::size_t v = 0;
  for (unsigned c = 1; k != 0; ++c, k /= b) {
    if (k % b != 0) positions[v++] = c;
  }
  unsigned sum = 0;
  for (std::size_t i = 0; i < std::min<std::size_t>(alpha, v); ++i) sum += positions[v - 1 - i];
  return sum;
}

unsigned mu_vec(unsigned alpha, std::span<const std::uint64_t> k, unsigned b) {
  unsigned sum = 0;
  for (auto kj : k) sum += mu(alpha, kj, b);
  return sum;
}

namespace {

// Syndromes C_j^T k_j live in Z_b^m and are packed as base-b integers (b^m <= 2^30
// is not required here, but m <= 64 / log2(b) is).
class SyndromeCodec {
 public:
  SyndromeCodec(unsigned b, std::size_t m) : b_(b), m_(m) {
    double bits = 0;
    for (unsigned x = b; x > 1; x >>= 1) bits += 1;
    if (static_cast<double>(m) * bits > 62) {
      throw BudgetExceeded("dual enumeration: b^m too large to pack syndromes");
    }
  }

  std::uint64_t pack(std::span<const Digit> v) const {
    std::uint64_t code = 0;
    for (std::size_t k = v.size(); k-- > 0;) code = code * b_ + v[k];
    return code;
  }

  std::uint64_t add(std::uint64_t x, std::uint64_t y) const {
    if (b_ == 2) return x ^ y;
    std::uint64_t out = 0;
    std::uint64_t scale = 1;
    for (std::size_t k = 0; k < m_; ++k) {
      out += ((x % b_ + y % b_) % b_) * scale;
      x /= b_;
      y /= b_;
      scale *= b_;
    }
    return out;
  }

  std::uint64_t scale(std::uint64_t x, unsigned factor) const {
    std::uint64_t out = 0;
    std::uint64_t place = 1;
    for (std::size_t k = 0; k < m_; ++k) {
      out += ((x % b_) * factor % b_) * place;
      x /= b_;
      place *= b_;
    }
    return out;
  }

  std::uint64_t negate(std::uint64_t x) const { return scale(x, b_ - 1); }

 private:
  unsigned b_;
  std::size_t m_;
};

std::uint64_t ipow(unsigned b, unsigned e) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < e; ++i) r *= b;
  return r;
}

// syn[k] = C_j^T vec(k) for all k < b^depth.
std::vector<std::uint64_t> syndrome_table(const GFMatrix& c, const SyndromeCodec& codec,
                                          unsigned depth) {
  const unsigned b = c.base();
  std::vector<std::uint64_t> syn(ipow(b, depth), 0);
  std::uint64_t block = 1;
  for (unsigned l = 0; l < depth; ++l, block *= b) {
    const std::uint64_t row = codec.pack(c.row(l));
    for (unsigned d = 1; d < b; ++d) {
      const std::uint64_t scaled = codec.scale(row, d);
      for (std::uint64_t low = 0; low < block; ++low) {
        syn[d * block + low] = codec.add(syn[low], scaled);
      }
    }
  }
  return syn;
}

}  // namespace

double dual_candidate_count(const GeneratingMatrices& g, unsigned max_mu1) {
  const unsigned budget = max_mu1;
  const unsigned depth = static_cast<unsigned>(std::min<std::size_t>(budget, g.rows()));
  // single-coordinate counts by mu_1: 1 at 0, (b-1) b^(l-1) at l
  std::vector<double> single(budget + 1, 0.0);
  single[0] = 1;
  for (unsigned l = 1; l <= depth; ++l) {
    single[l] = (g.base() - 1.0) * static_cast<double>(ipow(g.base(), l - 1));
  }
  std::vector<double> total = single;
  for (std::size_t j = 1; j < g.dim(); ++j) {
    std::vector<double> next(budget + 1, 0.0);
    for (unsigned a = 0; a <= budget; ++a) {
      for (unsigned c = 0; a + c <= budget; ++c) next[a + c] += total[a] * single[c];
    }
    total = std::move(next);
  }
  double sum = 0;
  for (double x : total) sum += x;
  return sum;
}

std::vector<DualNetElement> enumerate_dual(const GeneratingMatrices& g, unsigned max_mu1,
                                           unsigned alpha) {
  if (max_mu1 > 64 * g.dim()) throw BudgetExceeded("dual enumeration budget too large");
  if (dual_candidate_count(g, max_mu1) > kMaxDualCandidates) {
    throw BudgetExceeded("dual enumeration: more than 1e8 candidates for mu_1 <= " +
                         std::to_string(max_mu1));
  }
  const unsigned b = g.base();
  const std::size_t s = g.dim();
  const unsigned depth = static_cast<unsigned>(std::min<std::size_t>(max_mu1, g.rows()));
  const SyndromeCodec codec(b, g.cols());

  std::vector<std::vector<std::uint64_t>> syn;
  for (std::size_t j = 0; j < s; ++j) syn.push_back(syndrome_table(g.matrix(j), codec, depth));

  // last coordinate: syndrome -> values in increasing order
  std::unordered_map<std::uint64_t, std::vector<std::uint64_t>> last;
  for (std::uint64_t k = 0; k < syn[s - 1].size(); ++k) last[syn[s - 1][k]].push_back(k);

  std::vector<DualNetElement> out;
  std::vector<std::uint64_t> k(s, 0);
  const std::uint64_t limit = ipow(b, depth);

  auto emit_last = [&](std::uint64_t partial, unsigned used) {
    auto it = last.find(codec.negate(partial));
    if (it == last.end()) return;
    for (std::uint64_t kl : it->second) {
      const unsigned m1 = mu(1, kl, b);
      if (used + m1 > max_mu1) break;
      k[s - 1] = kl;
      DualNetElement e;
      e.k = k;
      e.mu1 = used + m1;
      e.mu_alpha = mu_vec(alpha, k, b);
      out.push_back(std::move(e));
    }
  };

  auto dfs = [&](auto&& self, std::size_t j, std::uint64_t partial, unsigned used) -> void {
    if (j == s - 1) {
      emit_last(partial, used);
      return;
    }
    for (std::uint64_t kj = 0; kj < limit; ++kj) {
      const unsigned m1 = mu(1, kj, b);
      if (used + m1 > max_mu1) break;
      k[j] = kj;
      self(self, j + 1, codec.add(partial, syn[j][kj]), used + m1);
    }
    k[j] = 0;
  };
  dfs(dfs, 0, 0, 0);
  return out;
}

constexpr std::uint64_t kMaxCoordinateTable = std::uint64_t{1} << 22;

MinDickMetric min_dick_metric(const GeneratingMatrices& g, unsigned alpha,
                              unsigned search_budget) {
  if (alpha == 0) throw std::invalid_argument("min_dick_metric: alpha must be >= 1");
  const unsigned b = g.base();
  const std::size_t s = g.dim();
  const unsigned n = static_cast<unsigned>(g.rows());
  const unsigned cap = n + 1;
  // per-coordinate tables hold b^budget entries
  unsigned table_depth = 0;
  for (std::uint64_t size = b; size <= kMaxCoordinateTable; size *= b) ++table_depth;
  const unsigned budget = std::min({search_budget, n, table_depth});
  const SyndromeCodec codec(b, g.cols());
  std::vector<std::vector<std::uint64_t>> syn;
  for (std::size_t j = 0; j < s; ++j) syn.push_back(syndrome_table(g.matrix(j), codec, budget));
  const std::uint64_t limit = ipow(b, budget);

  std::vector<unsigned> mu1_of(limit), mua_of(limit);
  for (std::uint64_t k = 0; k < limit; ++k) {
    mu1_of[k] = mu(1, k, b);
    mua_of[k] = mu(alpha, k, b);
  }

  // last coordinate: syndrome -> smallest mu_alpha over nonzero values
  std::unordered_map<std::uint64_t, unsigned> last_best;
  for (std::uint64_t k = 1; k < limit; ++k) {
    auto [it, inserted] = last_best.try_emplace(syn[s - 1][k], mua_of[k]);
    if (!inserted) it->second = std::min(it->second, mua_of[k]);
  }

  unsigned best = cap;
  auto dfs = [&](auto&& self, std::size_t j, std::uint64_t partial, unsigned used1,
                 unsigned used_alpha, bool nonzero) -> void {
    if (j == s - 1) {
      if (nonzero && partial == 0) best = std::min(best, used_alpha);
      auto it = last_best.find(codec.negate(partial));
      if (it != last_best.end()) best = std::min(best, used_alpha + it->second);
      return;
    }
    for (std::uint64_t kj = 0; kj < limit; ++kj) {
      const unsigned m1 = mu1_of[kj];
      if (used1 + m1 > budget || used_alpha + m1 >= best) break;
      self(self, j + 1, codec.add(partial, syn[j][kj]), used1 + m1, used_alpha + mua_of[kj],
           nonzero || kj != 0);
    }
  };
  dfs(dfs, 0, 0, 0, 0, false);

  if (best > budget + 1) {
    throw BudgetExceeded("min_dick_metric: search budget " + std::to_string(budget) +
                         " cannot certify the minimum (best found " + std::to_string(best) + ")");
  }
  return MinDickMetric{best, best == cap, cap};
}

namespace {

class OrderVerifier {
 public:
  OrderVerifier(const GeneratingMatrices& g, unsigned alpha, std::uint64_t max_nodes)
      : g_(g), alpha_(alpha), max_nodes_(max_nodes), basis_(g.base(), g.cols()) {}

  // State: coordinates < j are closed, coordinate j holds `counted` indices, the
  // smallest being `upper` (n + 1 when none). Every state is a valid selection whose
  // rows are already known to be independent.
  bool explore(std::size_t j, std::size_t upper, unsigned counted, std::size_t remaining) {
    if (j == g_.dim()) return true;
    if (counted < alpha_) {
      const std::size_t top = std::min({upper - 1, remaining, g_.rows()});
      for (std::size_t i = 1; i <= top; ++i) {
        std::size_t inserted = 0;
        bool ok = insert(j, i, inserted);
        if (ok && counted + 1 == alpha_) {
          // with alpha counted indices every lower row may join without adding weight
          for (std::size_t l = 1; ok && l < i; ++l) ok = insert(j, l, inserted);
          if (ok) ok = explore(j + 1, g_.rows() + 1, 0, remaining - i);
        } else if (ok) {
          ok = explore(j, i, counted + 1, remaining - i);
        }
        for (; inserted > 0; --inserted) basis_.pop();
        if (!ok) return false;
      }
    }
    return explore(j + 1, g_.rows() + 1, 0, remaining);
  }

 private:
  bool insert(std::size_t j, std::size_t index, std::size_t& inserted) {
    if (++nodes_ > max_nodes_) {
      throw BudgetExceeded("verify_order_t: more than " + std::to_string(max_nodes_) +
                           " row insertions");
    }
    if (!basis_.insert(g_.matrix(j).row(index - 1))) return false;
    ++inserted;
    return true;
  }

  const GeneratingMatrices& g_;
  unsigned alpha_;
  std::uint64_t max_nodes_;
  std::uint64_t nodes_ = 0;
  EchelonBasis basis_;
};

}  // namespace

bool verify_order_t(const GeneratingMatrices& g, unsigned alpha, unsigned t, VerifyOptions opts) {
  if (alpha == 0) throw std::invalid_argument("verify_order_t: alpha must be >= 1");
  const std::size_t full = alpha * g.cols();
  if (t > full) throw std::invalid_argument("verify_order_t: t exceeds alpha*m");
  OrderVerifier verifier(g, alpha, opts.max_nodes);
  return verifier.explore(0, g.rows() + 1, 0, full - t);
}

unsigned exact_t_value(const GeneratingMatrices& g, unsigned alpha, VerifyOptions opts) {
  unsigned lo = 0;
  auto hi = static_cast<unsigned>(alpha * g.cols());
  while (lo < hi) {
    const unsigned mid = lo + (hi - lo) / 2;
    if (verify_order_t(g, alpha, mid, opts)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

unsigned propagate_t(unsigned t, unsigned alpha, unsigned alpha_prime) {
  if (alpha_prime == 0 || alpha_prime >= alpha) {
    throw std::invalid_argument("propagate_t: need 1 <= alpha' < alpha");
  }
  return (t * alpha_prime + alpha - 1) / alpha;
}

InterpolationCoeffs interpolation_coeffs(unsigned alpha, unsigned beta) {
  if (alpha <= 1 || beta < alpha) {
    throw std::invalid_argument("interpolation_coeffs: need 1 < alpha <= beta");
  }
  const long long den = beta - 1;
  return {Rational(alpha - 1, den), Rational(static_cast<long long>(beta) - alpha, den)};
}

}  // namespace hoqmc
