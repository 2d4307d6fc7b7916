// hoqmc: build higher-order digital nets, check their quality and measure
// worst-case error convergence in the weighted Sobolev space.

#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "hoqmc/errors.hpp"
#include "hoqmc/experiments.hpp"

using namespace hoqmc;

namespace {

struct CliState {
  ExperimentConfig config;
  std::optional<std::size_t> m;
  bool ctau_literal = false;
};

void add_common(CLI::App& cmd, CliState& st) {
  auto& c = st.config;
  cmd.add_option("--b", c.b, "prime base")->check(CLI::PositiveNumber);
  cmd.add_option("--alpha", c.alpha, "smoothness / order to verify")->check(CLI::PositiveNumber);
  cmd.add_option("--beta", c.beta, "order of the interlaced net")->check(CLI::PositiveNumber);
  cmd.add_option("--s", c.s, "dimension of the point set")->check(CLI::PositiveNumber);
  cmd.add_option("--m-min", c.m_min, "smallest log_b N");
  cmd.add_option("--m-max", c.m_max, "largest log_b N");
  cmd.add_option("--m", st.m, "single log_b N (sets both ends of the range)");
  cmd.add_option("--R", c.R, "number of random digital shifts");
  cmd.add_option("--seed", c.seed, "RNG seed");
  cmd.add_option("--generator", c.generator, "faure | sobol | file")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Generator>{{"faure", Generator::faure},
                                           {"sobol", Generator::sobol},
                                           {"file", Generator::file}}));
  cmd.add_option("--matrix-file", c.matrix_file, "matrix file for --generator file");
  cmd.add_option("--interlace", c.interlace, "interlacing factor");
  cmd.add_option("--gamma", c.gamma, "product:g1,g2,... or explicit:@file.json");
  cmd.add_option("--out", c.out, "output path (stdout if omitted)");
  cmd.add_option("--format", c.format, "csv | json")
      ->transform(CLI::CheckedTransformer(std::map<std::string, OutputFormat>{
          {"csv", OutputFormat::csv}, {"json", OutputFormat::json}}));
  cmd.add_flag("--ctau-literal", st.ctau_literal, "use sin(tau/b) in C_tau");
  cmd.add_option("--fit-from", c.fit_from, "smallest m used in the slope fit");
  cmd.add_option("--dual-budget", c.dual_budget, "mu_1 budget for dual-net searches");
}

nlohmann::ordered_json fit_json(const RateFit& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"points", f.points}};
}

nlohmann::ordered_json config_json(const ExperimentConfig& c, unsigned interlace) {
  static const char* generators[] = {"faure", "sobol", "file"};
  nlohmann::ordered_json j;
  j["b"] = c.b;
  j["alpha"] = c.alpha;
  j["beta"] = c.beta;
  j["s"] = c.s;
  j["m_min"] = c.m_min;
  j["m_max"] = c.m_max;
  j["R"] = c.R;
  j["seed"] = c.seed;
  j["generator"] = generators[static_cast<int>(c.generator)];
  j["interlace"] = interlace;
  j["gamma"] = c.gamma;
  j["ctau"] = c.ctau == CtauReading::literal ? "literal" : "pi_over_b";
  j["fit_from"] = c.fit_from.value_or(c.m_min + 1);
  return j;
}

void emit(const ExperimentConfig& c, const std::string& command, const Table& table,
          const nlohmann::ordered_json& extra) {
  std::ofstream file;
  if (!c.out.empty()) {
    file.open(c.out, std::ios::binary);
    if (!file) throw std::invalid_argument("cannot open output file " + c.out);
  }
  std::ostream& out = c.out.empty() ? std::cout : file;
  if (c.format == OutputFormat::csv) {
    write_csv(out, table);
  } else {
    write_json(out, command, table, extra.dump());
  }
  if (!out) throw std::runtime_error("write failed");
}

int run(CLI::App& app, CliState& st) {
  auto& c = st.config;
  if (st.m) c.m_min = c.m_max = *st.m;
  if (st.ctau_literal) c.ctau = CtauReading::literal;
  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  // verify checks the order the net was built for unless told otherwise
  if (command == "verify" && sub->count("--alpha") == 0) c.alpha = c.interlace.value_or(1);

  if (command == "gen") {
    cmd_gen(c, std::cout);
  } else if (command == "verify") {
    const VerifyReport r = cmd_verify(c, std::cerr);
    auto opt = [](const std::optional<unsigned>& v) -> std::optional<double> {
      if (!v) return std::nullopt;
      return static_cast<double>(*v);
    };
    Table t;
    t.columns = {"m", "alpha", "t_exact", "t_interlaced_bound", "source_t", "delta",
                 "delta_truncated", "delta_check"};
    t.rows.push_back({static_cast<double>(r.m), static_cast<double>(r.alpha), opt(r.t_exact),
                      opt(r.t_interlaced_bound), opt(r.source_t),
                      static_cast<double>(r.delta->value), r.delta->truncated ? 1.0 : 0.0,
                      r.delta_check ? std::optional<double>(*r.delta_check ? 1.0 : 0.0)
                                    : std::nullopt});
    emit(c, command, t, {{"config", config_json(c, resolve_interlace(c, false))}});
  } else if (command == "converge") {
    const ConvergenceResult r = cmd_converge(c, std::cerr);
    nlohmann::ordered_json extra;
    extra["config"] = config_json(c, resolve_interlace(c, true));
    if (r.fit.points) {
      extra["fit"] = fit_json(r.fit);
      extra["log_corrected_fit"] = fit_json(r.log_corrected_fit);
    }
    if (r.mc_fit) extra["mc_fit"] = fit_json(*r.mc_fit);
    auto& timing = extra["timing"] = nlohmann::ordered_json::array();
    for (const auto& rec : r.records) timing.push_back({{"m", rec.m}, {"wall_time_s", rec.wall_time_s}});
    emit(c, command, to_table(r), extra);
  } else if (command == "integrate") {
    const IntegrationResult r = cmd_integrate(c, std::cerr);
    nlohmann::ordered_json extra;
    extra["config"] = config_json(c, resolve_interlace(c, true));
    extra["integrand"] = c.integrand;
    if (r.fit) extra["fit"] = fit_json(*r.fit);
    auto& timing = extra["timing"] = nlohmann::ordered_json::array();
    for (const auto& rec : r.records) timing.push_back({{"m", rec.m}, {"wall_time_s", rec.wall_time_s}});
    emit(c, command, to_table(r), extra);
  } else if (command == "bound") {
    const BoundReport r = cmd_bound(c, std::cerr);
    nlohmann::ordered_json extra;
    extra["config"] = config_json(c, resolve_interlace(c, true));
    const auto& k = r.constants;
    extra["constants"] = {{"A", boost::rational_cast<double>(k.a)},
                          {"B", boost::rational_cast<double>(k.b)},
                          {"t1", k.t1},
                          {"D", k.d.value},
                          {"D_argmax_v", k.d.argmax_v},
                          {"C_tau", std::vector<double>(k.c_tau.begin() + 1, k.c_tau.end())},
                          {"G", std::vector<double>(k.g.begin() + 1, k.g.end())},
                          {"C_u", std::vector<double>(k.c.begin() + 1, k.c.end())}};
    emit(c, command, to_table(r), extra);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Higher-order digital nets and Sobolev worst-case errors"};
  app.require_subcommand(1);
  CliState st;

  auto* gen = app.add_subcommand("gen", "write generating matrices and optionally points");
  add_common(*gen, st);
  gen->add_option("--points", st.config.points_out, "also write points, one per line");

  auto* verify = app.add_subcommand("verify", "exact t-value and minimum Dick metric");
  add_common(*verify, st);

  auto* converge = app.add_subcommand("converge", "RMS worst-case error over shifts vs N");
  add_common(*converge, st);
  converge->add_flag("--mc-baseline", st.config.mc_baseline, "add plain Monte Carlo columns");

  auto* integrate = app.add_subcommand("integrate", "shifted QMC error on a test integrand");
  add_common(*integrate, st);
  integrate->add_option("--integrand", st.config.integrand, "one | prod | prod_sq | exp_sum | poly");

  auto* bound = app.add_subcommand("bound", "explicit worst-case error bound and its constants");
  add_common(*bound, st);
  bound->add_option("--t", st.config.t, "t-value (default: from the interlaced source)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return run(app, st);
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const InvariantFailure& e) {
    std::cerr << "internal invariant failed: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
