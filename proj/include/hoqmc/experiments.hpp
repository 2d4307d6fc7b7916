#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hoqmc/net_construction.hpp"
#include "hoqmc/shifts_rms.hpp"
#include "hoqmc/sobolev_kernel.hpp"

namespace hoqmc {

enum class Generator { faure, sobol, file };
enum class OutputFormat { csv, json };

/// Commands refuse configurations needing more kernel evaluations than this.
inline constexpr double kMaxKernelEvaluations = 1e10;

struct ExperimentConfig {
  unsigned b = 2;
  unsigned alpha = 2;  // smoothness of the kernel; order to verify in `verify`
  unsigned beta = 4;   // order of the net used for the bound
  std::size_t s = 1;   // dimension of the point set after interlacing
  std::size_t m_min = 4;
  std::size_t m_max = 10;
  std::size_t R = 32;
  std::uint64_t seed = 20160301;
  Generator generator = Generator::sobol;
  std::string matrix_file;
  /// Interlacing factor; unset means beta for converge/integrate and 1 otherwise.
  std::optional<unsigned> interlace;
  std::string gamma = "product:1";
  std::string out;
  std::string points_out;
  OutputFormat format = OutputFormat::csv;
  CtauReading ctau = CtauReading::pi_over_b;
  std::optional<std::size_t> fit_from;  // default m_min + 1
  unsigned dual_budget = ~0u;
  std::optional<unsigned> t;  // t-value override for `bound`
  bool mc_baseline = false;
  std::string integrand = "prod";
};

/// Parses "product:g1,g2,..." (one value is repeated s times) or
/// "explicit:@file.json" with {"weights": {"": g, "1": g, "1,2": g, ...}}.
Weights parse_weights(const std::string& text, std::size_t s);

unsigned resolve_interlace(const ExperimentConfig& config, bool default_to_beta);

/// Order-1 source net with interlace * s coordinates at size m.
GeneratingMatrices build_source(const ExperimentConfig& config, std::size_t m, unsigned interlace);
/// Source interlaced down to s coordinates.
GeneratingMatrices build_net(const ExperimentConfig& config, std::size_t m, unsigned interlace);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t points = 0;
};

/// Least squares of log e on log N. Needs at least 3 points with e > 0.
RateFit fit_rate(std::span<const std::pair<double, double>> points);

struct GenResult {
  GeneratingMatrices matrices;
  std::optional<PointSet> points;
};

GenResult cmd_gen(const ExperimentConfig& config, std::ostream& log);

struct VerifyReport {
  std::size_t m = 0;
  unsigned alpha = 0;
  std::optional<unsigned> t_exact;
  std::optional<unsigned> t_interlaced_bound;  // from the source's exact t'
  std::optional<unsigned> source_t;
  std::optional<MinDickMetric> delta;
  /// delta_alpha > alpha m - t; unset when n < alpha m and the n + 1 cap decides delta.
  std::optional<bool> delta_check;
};

VerifyReport cmd_verify(const ExperimentConfig& config, std::ostream& log);

struct ConvergenceRecord {
  std::size_t m = 0;
  std::uint64_t n = 0;
  double rms = 0.0;
  double standard_error = 0.0;
  double best_shift_error = 0.0;
  std::optional<double> bound;
  std::optional<double> bound_literal;
  std::optional<unsigned> t;
  std::optional<double> mc_rms;
  std::optional<double> mc_standard_error;
  double wall_time_s = 0.0;
};

struct ConvergenceResult {
  std::vector<ConvergenceRecord> records;
  RateFit fit;
  RateFit log_corrected_fit;  // rms / (log N)^{(s-1)/2}
  std::optional<RateFit> mc_fit;
};

ConvergenceResult cmd_converge(const ExperimentConfig& config, std::ostream& log);

struct Integrand {
  std::string id;
  double (*f)(std::span<const double>);
  double (*exact)(std::size_t s);
};

const std::vector<Integrand>& integrand_catalog();
const Integrand& find_integrand(const std::string& id);

struct IntegrationRecord {
  std::size_t m = 0;
  std::uint64_t n = 0;
  double mean_abs_error = 0.0;
  double standard_error = 0.0;
  double wall_time_s = 0.0;
};

struct IntegrationResult {
  std::vector<IntegrationRecord> records;
  std::optional<RateFit> fit;  // absent when some error is exactly zero
};

IntegrationResult cmd_integrate(const ExperimentConfig& config, std::ostream& log);

struct BoundRecord {
  std::size_t m = 0;
  std::uint64_t n = 0;
  unsigned t = 0;
  double bound = 0.0;
};

struct BoundReport {
  BoundConstants constants;
  std::vector<BoundRecord> records;
};

BoundReport cmd_bound(const ExperimentConfig& config, std::ostream& log);

/// A flat table shared by the CSV and JSON writers; empty cells are missing values.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<double>>> rows;
};

Table to_table(const ConvergenceResult& result);
Table to_table(const IntegrationResult& result);
Table to_table(const BoundReport& report);

/// RFC 4180 CSV with a header row; numbers in shortest round-trip form.
void write_csv(std::ostream& out, const Table& table);
/// {"schema": 1, "command": ..., "records": [...], ...extra}
void write_json(std::ostream& out, const std::string& command, const Table& table,
                const std::string& extra_json = "{}");

}  // namespace hoqmc
