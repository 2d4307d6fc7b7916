#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "hoqmc/net_construction.hpp"

namespace hoqmc {

void write_matrices(std::ostream& out, const GeneratingMatrices& g) {
  out << g.base() << ' ' << g.rows() << ' ' << g.cols() << ' ' << g.dim() << '\n';
  for (std::size_t j = 0; j < g.dim(); ++j) {
    if (j > 0) out << '\n';
    const GFMatrix& c = g.matrix(j);
    for (std::size_t i = 0; i < c.rows(); ++i) {
      for (std::size_t k = 0; k < c.cols(); ++k) {
        if (k > 0) out << ' ';
        out << unsigned{c(i, k)};
      }
      out << '\n';
    }
  }
}

namespace {

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  throw std::invalid_argument("matrix file line " + std::to_string(line) + ": " + what);
}

bool blank(const std::string& s) { return s.find_first_not_of(" \t\r") == std::string::npos; }

}  // namespace

GeneratingMatrices read_matrices(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_nonblank = [&](bool allow_eof) -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!blank(line)) return true;
    }
    if (!allow_eof) parse_error(line_no, "unexpected end of file");
    return false;
  };

  next_nonblank(false);
  std::istringstream header(line);
  long long b = 0, n = 0, m = 0, s = 0;
  if (!(header >> b >> n >> m >> s)) parse_error(line_no, "expected header 'b n m s'");
  std::string extra;
  if (header >> extra) parse_error(line_no, "trailing tokens in header");
  if (b < 2 || n < 1 || m < 1 || s < 1) parse_error(line_no, "header values out of range");
  if (b > static_cast<long long>(kMaxBase) || !is_prime(static_cast<unsigned>(b))) {
    parse_error(line_no, "base is not a supported prime");
  }

  std::vector<GFMatrix> mats;
  for (long long j = 0; j < s; ++j) {
    std::vector<Digit> entries;
    entries.reserve(static_cast<std::size_t>(n * m));
    for (long long i = 0; i < n; ++i) {
      next_nonblank(false);
      std::istringstream row(line);
      long long d = 0;
      long long count = 0;
      while (row >> d) {
        if (d < 0 || d >= b) parse_error(line_no, "digit out of range");
        entries.push_back(static_cast<Digit>(d));
        ++count;
      }
      if (!row.eof()) parse_error(line_no, "non-numeric token");
      if (count != m) parse_error(line_no, "expected " + std::to_string(m) + " digits");
    }
    mats.emplace_back(static_cast<unsigned>(b), static_cast<std::size_t>(n),
                      static_cast<std::size_t>(m), std::move(entries));
  }
  if (next_nonblank(true)) parse_error(line_no, "unexpected trailing content");
  return GeneratingMatrices(std::move(mats));
}

void save_matrices(const std::filesystem::path& path, const GeneratingMatrices& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_matrices(out, g);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

GeneratingMatrices load_matrices(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_matrices(in);
}

}  // namespace hoqmc
