#include "hoqmc/experiments.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "hoqmc/errors.hpp"
#include "hoqmc/net_quality.hpp"

namespace hoqmc {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  if (used != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

std::uint64_t power(unsigned b, std::size_t m) {
  std::uint64_t n = 1;
  for (std::size_t i = 0; i < m; ++i) n *= b;
  return n;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void check_config(const ExperimentConfig& c) {
  require_prime_base(c.b);
  if (c.s == 0) throw std::invalid_argument("dimension s must be >= 1");
  if (c.alpha == 0 || c.alpha > kMaxAlpha) {
    throw std::invalid_argument("alpha must be in 1.." + std::to_string(kMaxAlpha));
  }
  if (c.beta == 0) throw std::invalid_argument("beta must be >= 1");
}

void check_m_range(const ExperimentConfig& c) {
  check_config(c);
  if (c.m_min == 0 || c.m_min > c.m_max) {
    throw std::invalid_argument("m range must be nonempty and ascending with m_min >= 1");
  }
}

}  // namespace

Weights parse_weights(const std::string& text, std::size_t s) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw std::invalid_argument("weights must be 'product:...' or 'explicit:@file'");
  }
  const std::string kind = text.substr(0, colon);
  const std::string body = text.substr(colon + 1);
  if (kind == "product") {
    std::vector<double> gammas;
    for (const auto& tok : split(body, ',')) gammas.push_back(parse_double(tok));
    if (gammas.size() == 1) gammas.assign(s, gammas.front());
    if (gammas.size() != s) {
      throw std::invalid_argument("product weights: expected 1 or " + std::to_string(s) +
                                  " values");
    }
    return Weights::product(std::move(gammas));
  }
  if (kind == "explicit") {
    if (body.empty() || body.front() != '@') {
      throw std::invalid_argument("explicit weights are read from '@file.json'");
    }
    std::ifstream in(body.substr(1));
    if (!in) throw std::invalid_argument("cannot open weights file " + body.substr(1));
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument(std::string("weights file: ") + e.what());
    }
    if (!doc.contains("weights") || !doc["weights"].is_object()) {
      throw std::invalid_argument("weights file needs an object 'weights'");
    }
    std::vector<double> by_mask(std::size_t{1} << s, 0.0);
    for (const auto& [key, value] : doc["weights"].items()) {
      std::uint32_t mask = 0;
      if (!key.empty()) {
        for (const auto& tok : split(key, ',')) {
          const double j = parse_double(tok);
          if (j < 1 || j > static_cast<double>(s) || j != std::floor(j)) {
            throw std::invalid_argument("weights file: bad coordinate in subset '" + key + "'");
          }
          mask |= std::uint32_t{1} << (static_cast<unsigned>(j) - 1);
        }
      }
      if (!value.is_number()) throw std::invalid_argument("weights file: non-numeric weight");
      by_mask[mask] = value.get<double>();
    }
    return Weights::explicit_map(s, std::move(by_mask));
  }
  throw std::invalid_argument("unknown weights kind '" + kind + "'");
}

unsigned resolve_interlace(const ExperimentConfig& config, bool default_to_beta) {
  const unsigned f = config.interlace.value_or(default_to_beta ? config.beta : 1);
  if (f == 0) throw std::invalid_argument("interlacing factor must be >= 1");
  return f;
}

GeneratingMatrices build_source(const ExperimentConfig& config, std::size_t m, unsigned interlace) {
  const std::size_t dim = config.s * interlace;
  if (config.s == 0) throw std::invalid_argument("dimension s must be >= 1");
  switch (config.generator) {
    case Generator::faure:
      return faure_matrices(config.b, dim, m);
    case Generator::sobol:
      if (config.b != 2) throw std::invalid_argument("sobol matrices are base 2");
      return sobol_matrices(dim, m);
    case Generator::file: {
      GeneratingMatrices stored = load_matrices(config.matrix_file);
      if (stored.dim() != dim) {
        throw std::invalid_argument("matrix file has " + std::to_string(stored.dim()) +
                                    " coordinates, expected " + std::to_string(dim));
      }
      if (stored.base() != config.b) throw std::invalid_argument("matrix file base differs from --b");
      if (stored.rows() == stored.cols()) return sequence_to_net(stored, m);
      if (stored.cols() == m && interlace == 1) return stored;
      throw std::invalid_argument("matrix file is not square and does not match m");
    }
  }
  throw std::logic_error("unreachable generator");
}

GeneratingMatrices build_net(const ExperimentConfig& config, std::size_t m, unsigned interlace) {
  GeneratingMatrices source = build_source(config, m, interlace);
  return interlace == 1 ? source : hoqmc::interlace(source, interlace);
}

RateFit fit_rate(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw std::invalid_argument("fit_rate: need at least 3 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [n, e] : points) {
    if (!(e > 0.0) || !(n > 0.0)) throw std::invalid_argument("fit_rate: values must be positive");
    const double x = std::log(n);
    const double y = std::log(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double k = static_cast<double>(points.size());
  const double denom = k * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("fit_rate: all N equal");
  RateFit fit;
  fit.slope = (k * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / k;
  fit.points = points.size();
  return fit;
}

GenResult cmd_gen(const ExperimentConfig& config, std::ostream& log) {
  check_config(config);
  const unsigned f = resolve_interlace(config, false);
  const std::size_t m = config.m_max;
  GenResult result{build_net(config, m, f), std::nullopt};
  if (!config.out.empty()) {
    save_matrices(config.out, result.matrices);
  } else {
    write_matrices(log, result.matrices);
  }
  if (!config.points_out.empty()) {
    result.points = generate_points(result.matrices);
    std::ofstream out(config.points_out);
    if (!out) throw std::runtime_error("cannot open " + config.points_out);
    out.precision(17);
    const PointSet& p = *result.points;
    for (std::size_t h = 0; h < p.size(); ++h) {
      for (std::size_t j = 0; j < p.dim(); ++j) out << (j ? " " : "") << p.value(h, j);
      out << '\n';
    }
  }
  return result;
}

VerifyReport cmd_verify(const ExperimentConfig& config, std::ostream& log) {
  check_config(config);
  const unsigned f = resolve_interlace(config, false);
  const std::size_t m = config.m_max;
  VerifyReport report;
  report.m = m;
  report.alpha = config.alpha;
  const GeneratingMatrices net = build_net(config, m, f);
  if (net.rows() < config.alpha * m) {
    log << "warning: n = " << net.rows() << " < alpha m = " << config.alpha * m << '\n';
  }
  if (f > 1) {
    report.source_t = exact_t_value(build_source(config, m, f), 1);
    report.t_interlaced_bound = interlaced_t_bound(*report.source_t, f, config.s, m);
    log << "source order-1 t' = " << *report.source_t << ", interlaced bound t = "
        << *report.t_interlaced_bound << '\n';
  }
  try {
    report.t_exact = exact_t_value(net, config.alpha);
    log << "exact order-" << config.alpha << " t-value = " << *report.t_exact << '\n';
  } catch (const BudgetExceeded& e) {
    log << "exact t-value not computed: " << e.what() << '\n';
    if (!report.t_interlaced_bound || config.alpha != f) throw;
    if (!verify_order_t(net, config.alpha, *report.t_interlaced_bound)) {
      throw InvariantFailure("interlaced net fails its guaranteed t-value");
    }
  }
  if (report.t_exact && report.t_interlaced_bound && config.alpha == f &&
      *report.t_exact > *report.t_interlaced_bound) {
    throw InvariantFailure("exact t-value exceeds the interlacing guarantee");
  }
  const unsigned t = report.t_exact ? *report.t_exact : *report.t_interlaced_bound;
  report.delta = min_dick_metric(net, config.alpha, config.dual_budget);
  const long long threshold = static_cast<long long>(config.alpha * m) - t;
  log << "delta_" << config.alpha << " = " << report.delta->value
      << (report.delta->truncated ? " (cap n+1 binding)" : "") << '\n';
  if (report.delta->truncated && net.rows() < config.alpha * m &&
      static_cast<long long>(report.delta->value) <= threshold) {
    log << "delta_" << config.alpha << " > alpha m - t not checked: n < alpha m\n";
    return report;
  }
  report.delta_check = static_cast<long long>(report.delta->value) > threshold;
  log << "delta_" << config.alpha << " > alpha m - t = " << threshold << ": "
      << (*report.delta_check ? "PASS" : "FAIL") << '\n';
  if (!*report.delta_check) throw InvariantFailure("minimum Dick metric contradicts the t-value");
  return report;
}

ConvergenceResult cmd_converge(const ExperimentConfig& config, std::ostream& log) {
  check_m_range(config);
  if (config.R < 2) throw std::invalid_argument("converge needs R >= 2");
  const unsigned f = resolve_interlace(config, true);
  const Weights weights = parse_weights(config.gamma, config.s);
  const KernelParams params{config.alpha, weights};

  double evaluations = 0;
  for (std::size_t m = config.m_min; m <= config.m_max; ++m) {
    const double n = static_cast<double>(power(config.b, m));
    evaluations += (config.mc_baseline ? 2.0 : 1.0) * config.R * n * n * config.s / 2.0;
  }
  if (evaluations > kMaxKernelEvaluations) {
    throw BudgetExceeded("converge: about " + std::to_string(evaluations) +
                         " kernel evaluations exceeds the 1e10 limit");
  }

  const bool with_bound = config.alpha >= 2 && f >= 2 * config.alpha;
  if (!with_bound) log << "bound column omitted: needs alpha >= 2 and interlace >= 2 alpha\n";

  ConvergenceResult result;
  for (std::size_t m = config.m_min; m <= config.m_max; ++m) {
    const auto start = std::chrono::steady_clock::now();
    ConvergenceRecord rec;
    rec.m = m;
    rec.n = power(config.b, m);
    const GeneratingMatrices net = build_net(config, m, f);
    const PointSet points = generate_points(net);
    const RmsEstimate rms = rms_wce_mc(params, points, config.R, config.seed);
    rec.rms = rms.estimate;
    rec.standard_error = rms.standard_error;
    rec.best_shift_error =
        *std::min_element(rms.per_shift_errors.begin(), rms.per_shift_errors.end());
    if (with_bound) {
      const unsigned t_src = exact_t_value(build_source(config, m, f), 1);
      rec.t = interlaced_t_bound(t_src, f, config.s, m);
      rec.bound = theoretical_bound(config.alpha, f, config.b, *rec.t, m, weights, config.ctau);
      rec.bound_literal = theoretical_bound(config.alpha, f, config.b, *rec.t, m, weights,
                                            CtauReading::literal);
    }
    if (config.mc_baseline) {
      std::vector<double> errors(config.R);
      const std::size_t depth = default_shift_depth(config.b, 1);
      for (std::size_t r = 0; r < config.R; ++r) {
        const PointSet random =
            sample_uniform_points(config.seed + 7919 * (r + 1), config.b, config.s, m, depth);
        errors[r] = worst_case_error(params, random);
      }
      const RmsEstimate mc = summarize_shift_errors(std::move(errors));
      rec.mc_rms = mc.estimate;
      rec.mc_standard_error = mc.standard_error;
    }
    rec.wall_time_s = seconds_since(start);
    log << "m=" << m << " N=" << rec.n << " rms=" << rec.rms << " se=" << rec.standard_error
        << " best=" << rec.best_shift_error;
    if (rec.bound) log << " bound=" << *rec.bound;
    if (rec.mc_rms) log << " mc=" << *rec.mc_rms;
    log << " (" << rec.wall_time_s << " s)\n";
    result.records.push_back(rec);
  }

  const std::size_t from = config.fit_from.value_or(config.m_min + 1);
  std::vector<std::pair<double, double>> raw, corrected, mc;
  for (const auto& rec : result.records) {
    if (rec.m < from) continue;
    const double n = static_cast<double>(rec.n);
    raw.emplace_back(n, rec.rms);
    corrected.emplace_back(n, rec.rms / std::pow(std::log(n), (config.s - 1.0) / 2.0));
    if (rec.mc_rms) mc.emplace_back(n, *rec.mc_rms);
  }
  if (raw.size() >= 3) {
    result.fit = fit_rate(raw);
    result.log_corrected_fit = fit_rate(corrected);
    if (!mc.empty()) result.mc_fit = fit_rate(mc);
    log << "fitted slope " << result.fit.slope << " (log-corrected "
        << result.log_corrected_fit.slope << ")";
    if (result.mc_fit) log << ", monte carlo slope " << result.mc_fit->slope;
    log << '\n';
  } else {
    log << "fewer than 3 sizes at m >= " << from << ": no slope fitted\n";
  }
  return result;
}

namespace {

double f_one(std::span<const double>) { return 1.0; }
double f_prod(std::span<const double> x) {
  double p = 1.0;
  for (double v : x) p *= v;
  return p;
}
double f_prod_sq(std::span<const double> x) {
  double p = 1.0;
  for (double v : x) p *= v * v;
  return p;
}
double f_exp_sum(std::span<const double> x) {
  double sum = 0.0;
  for (double v : x) sum += v;
  return std::exp(sum);
}
double f_poly(std::span<const double> x) {
  double p = 1.0;
  for (double v : x) p *= 1.0 + v * v * v - 0.5 * v;
  return p;
}

}  // namespace

const std::vector<Integrand>& integrand_catalog() {
  static const std::vector<Integrand> catalog{
      {"one", f_one, [](std::size_t) { return 1.0; }},
      {"prod", f_prod, [](std::size_t s) { return std::pow(0.5, static_cast<double>(s)); }},
      {"prod_sq", f_prod_sq,
       [](std::size_t s) { return std::pow(1.0 / 3.0, static_cast<double>(s)); }},
      {"exp_sum", f_exp_sum,
       [](std::size_t s) { return std::pow(std::numbers::e - 1.0, static_cast<double>(s)); }},
      // 1 + x^3 - x/2 integrates to 1
      {"poly", f_poly, [](std::size_t) { return 1.0; }},
  };
  return catalog;
}

const Integrand& find_integrand(const std::string& id) {
  for (const auto& it : integrand_catalog()) {
    if (it.id == id) return it;
  }
  throw std::invalid_argument("unknown integrand '" + id + "'");
}

IntegrationResult cmd_integrate(const ExperimentConfig& config, std::ostream& log) {
  check_m_range(config);
  if (config.R < 1) throw std::invalid_argument("integrate needs R >= 1");
  const Integrand& integrand = find_integrand(config.integrand);
  const unsigned f = resolve_interlace(config, true);
  const double exact = integrand.exact(config.s);
  IntegrationResult result;
  for (std::size_t m = config.m_min; m <= config.m_max; ++m) {
    const auto start = std::chrono::steady_clock::now();
    const PointSet points = generate_points(build_net(config, m, f));
    const std::size_t depth = default_shift_depth(config.b, points.depth());
    std::vector<double> errors(config.R);
    for (std::size_t r = 0; r < config.R; ++r) {
      const PointSet shifted =
          apply_shift(points, sample_shift(config.seed, r, config.b, config.s, depth));
      const std::vector<double> x = shifted.values();
      double sum = 0.0;
      for (std::size_t h = 0; h < shifted.size(); ++h) {
        sum += integrand.f(std::span<const double>(x).subspan(h * config.s, config.s));
      }
      errors[r] = std::abs(sum / static_cast<double>(shifted.size()) - exact);
    }
    IntegrationRecord rec;
    rec.m = m;
    rec.n = power(config.b, m);
    double mean = 0.0;
    for (double e : errors) mean += e;
    mean /= static_cast<double>(errors.size());
    double var = 0.0;
    for (double e : errors) var += (e - mean) * (e - mean);
    rec.mean_abs_error = mean;
    rec.standard_error =
        errors.size() > 1 ? std::sqrt(var / (errors.size() - 1.0) / errors.size()) : 0.0;
    rec.wall_time_s = seconds_since(start);
    log << "m=" << m << " N=" << rec.n << " mean|error|=" << rec.mean_abs_error << '\n';
    result.records.push_back(rec);
  }
  const std::size_t from = config.fit_from.value_or(config.m_min + 1);
  std::vector<std::pair<double, double>> pts;
  bool positive = true;
  for (const auto& rec : result.records) {
    if (rec.m < from) continue;
    if (!(rec.mean_abs_error > 0.0)) positive = false;
    pts.emplace_back(static_cast<double>(rec.n), rec.mean_abs_error);
  }
  if (positive && pts.size() >= 3) {
    result.fit = fit_rate(pts);
    log << "fitted slope " << result.fit->slope << '\n';
  }
  return result;
}

BoundReport cmd_bound(const ExperimentConfig& config, std::ostream& log) {
  check_m_range(config);
  const Weights weights = parse_weights(config.gamma, config.s);
  const unsigned f = resolve_interlace(config, true);
  if (f != config.beta) {
    throw std::invalid_argument("bound: interlacing factor must equal beta");
  }
  BoundReport report;
  for (std::size_t m = config.m_min; m <= config.m_max; ++m) {
    BoundRecord rec;
    rec.m = m;
    rec.n = power(config.b, m);
    if (config.t) {
      rec.t = *config.t;
    } else {
      rec.t = interlaced_t_bound(exact_t_value(build_source(config, m, f), 1), f, config.s, m);
    }
    rec.bound = theoretical_bound(config.alpha, config.beta, config.b, rec.t, m, weights,
                                  config.ctau);
    report.records.push_back(rec);
  }
  report.constants = bound_constants(config.alpha, config.beta, config.b,
                                     report.records.back().t, config.s, config.ctau);
  const auto& k = report.constants;
  log << "A = " << k.a << ", B = " << k.b << ", D = " << k.d.value << " (v = " << k.d.argmax_v
      << ")\n";
  for (std::size_t c = 1; c < k.g.size(); ++c) {
    log << "|u|=" << c << ": G = " << k.g[c] << ", C = " << k.c[c] << '\n';
  }
  return report;
}

namespace {

std::optional<double> opt(const std::optional<unsigned>& v) {
  if (!v) return std::nullopt;
  return static_cast<double>(*v);
}

}  // namespace

Table to_table(const ConvergenceResult& result) {
  Table t;
  t.columns = {"m", "N", "rms", "standard_error", "best_shift_error", "t", "bound",
               "bound_literal", "mc_rms", "mc_standard_error"};
  for (const auto& r : result.records) {
    t.rows.push_back({static_cast<double>(r.m), static_cast<double>(r.n), r.rms,
                      r.standard_error, r.best_shift_error, opt(r.t), r.bound, r.bound_literal,
                      r.mc_rms, r.mc_standard_error});
  }
  return t;
}

Table to_table(const IntegrationResult& result) {
  Table t;
  t.columns = {"m", "N", "mean_abs_error", "standard_error"};
  for (const auto& r : result.records) {
    t.rows.push_back({static_cast<double>(r.m), static_cast<double>(r.n), r.mean_abs_error,
                      r.standard_error});
  }
  return t;
}

Table to_table(const BoundReport& report) {
  Table t;
  t.columns = {"m", "N", "t", "bound"};
  for (const auto& r : report.records) {
    t.rows.push_back({static_cast<double>(r.m), static_cast<double>(r.n),
                      static_cast<double>(r.t), r.bound});
  }
  return t;
}

namespace {

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, end);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void write_csv(std::ostream& out, const Table& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << csv_field(table.columns[i]);
  }
  out << "\r\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      if (row[i] && std::isfinite(*row[i])) out << format_number(*row[i]);
    }
    out << "\r\n";
  }
}

void write_json(std::ostream& out, const std::string& command, const Table& table,
                const std::string& extra_json) {
  nlohmann::ordered_json doc;
  doc["schema"] = 1;
  doc["command"] = command;
  doc["records"] = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json rec = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i] && std::isfinite(*row[i])) {
        rec[table.columns[i]] = *row[i];
      } else {
        rec[table.columns[i]] = nullptr;
      }
    }
    doc["records"].push_back(rec);
  }
  const auto extra = nlohmann::ordered_json::parse(extra_json);
  for (const auto& [key, value] : extra.items()) doc[key] = value;
  out << doc.dump(2) << '\n';
}

}  // namespace hoqmc
