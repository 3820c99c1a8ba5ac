// Command-line front end: bounds computation, weighted-CDF dumps, and the
// Monte Carlo coverage harness.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "meanbounds/bounds.hpp"
#include "meanbounds/detail/textout.hpp"
#include "meanbounds/distributions.hpp"
#include "meanbounds/estimators.hpp"
#include "meanbounds/lp.hpp"
#include "meanbounds/sim.hpp"

namespace {

using namespace meanbounds;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitEmptySet = 3;
constexpr int kExitSolver = 4;

// Message convention: "<category>: <detail>", printed as
// "error[<category>] <detail>" on one stderr line.
class cli_input_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) { return detail::format_double(v); }

void print_error(const std::string& message) {
  const auto sep = message.find(": ");
  if (sep == std::string::npos) {
    std::cerr << "error[input] " << message << '\n';
  } else {
    std::cerr << "error[" << message.substr(0, sep) << "] "
              << message.substr(sep + 2) << '\n';
  }
}

// --- input -------------------------------------------------------------------

struct InputConfig {
  std::string path;
  std::string column = "0";
  bool header = false;
};

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::optional<int> parse_int(const std::string& s) {
  int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

std::vector<double> read_column(const InputConfig& in) {
  std::ifstream file(in.path);
  if (!file) {
    throw cli_input_error("io: cannot open input file '" + in.path + "'");
  }
  std::vector<double> values;
  std::string line;
  int lineno = 0;
  int col_index = -1;
  bool header_pending = in.header;
  while (std::getline(file, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;  // blank lines ignored
    const auto fields = split_fields(stripped);
    if (header_pending) {
      header_pending = false;
      if (auto idx = parse_int(in.column)) {
        col_index = *idx;
      } else {
        for (std::size_t k = 0; k < fields.size(); ++k) {
          if (trim(fields[k]) == in.column) {
            col_index = static_cast<int>(k);
            break;
          }
        }
        if (col_index < 0) {
          throw cli_input_error("parse: " + in.path + ": no column named '" +
                                in.column + "' in header");
        }
      }
      continue;
    }
    if (col_index < 0) {
      const auto idx = parse_int(in.column);
      if (!idx) {
        throw cli_input_error("config: column name selection requires --header");
      }
      col_index = *idx;
    }
    if (col_index >= static_cast<int>(fields.size())) {
      throw cli_input_error("parse: " + in.path + ":" +
                            std::to_string(lineno) + ": missing column " +
                            std::to_string(col_index));
    }
    const std::string cell = trim(fields[col_index]);
    double v = 0.0;
    const auto [p, ec] =
        std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || p != cell.data() + cell.size() ||
        !std::isfinite(v)) {
      throw cli_input_error("parse: " + in.path + ":" +
                            std::to_string(lineno) +
                            ": invalid numeric value '" + cell + "'");
    }
    values.push_back(v);
  }
  if (values.size() < 2) {
    throw cli_input_error("input: need at least 2 observations, got " +
                          std::to_string(values.size()));
  }
  return values;
}

// --- shared analysis options ---------------------------------------------------

struct AnalysisConfig {
  double gamma = 1.0;
  std::string family = "none";
  double alpha = 0.0;  // 0 selects the 1/sqrt(n) default
  double delta_star = 0.0;
  int m_grid = 0;  // 0 selects the family default
  std::string theta_grid = "21x21";
  int threads = 0;
};

Family parse_family(const std::string& name) {
  if (name == "none") return Family::none;
  if (name == "normal") return Family::parametric_gaussian;
  if (name == "symmetric") return Family::symmetric;
  if (name == "logconcave") return Family::log_concave;
  throw cli_input_error("config: unknown family '" + name + "'");
}

ConstraintSpec make_spec(const AnalysisConfig& a) {
  ConstraintSpec spec;
  spec.gamma = a.gamma;
  spec.family = parse_family(a.family);
  if (a.alpha != 0.0) spec.alpha = a.alpha;
  spec.delta_star = a.delta_star;
  spec.m_grid.count = a.m_grid;
  const auto x = a.theta_grid.find('x');
  const auto loc = x == std::string::npos
                       ? std::nullopt
                       : parse_int(a.theta_grid.substr(0, x));
  const auto sc = x == std::string::npos
                      ? std::nullopt
                      : parse_int(a.theta_grid.substr(x + 1));
  if (!loc || !sc) {
    throw cli_input_error("config: --theta-grid expects LxS, e.g. 21x21");
  }
  spec.theta_grid.location_count = *loc;
  spec.theta_grid.scale_count = *sc;
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw cli_input_error(std::string("config: ") + e.what());
  }
  return spec;
}

void add_analysis_flags(CLI::App* cmd, AnalysisConfig* a) {
  // Config precedence: flags > config file (key=value lines) > defaults.
  cmd->set_config("--config")->configurable(false);
  cmd->allow_config_extras(false);
  cmd->add_option("--gamma", a->gamma,
                  "Assumed bound on max(pi)/min(pi), >= 1")
      ->required();
  cmd->add_option("--family", a->family,
                  "Constraint family: none|normal|symmetric|logconcave");
  cmd->add_option("--alpha", a->alpha, "Band level in (0,1); default 1/sqrt(n)");
  cmd->add_option("--delta-star", a->delta_star,
                  "Extra band width relaxing the constraint family");
  cmd->add_option("--m-grid", a->m_grid,
                  "Number of center/threshold grid points (0 = default)");
  cmd->add_option("--theta-grid", a->theta_grid,
                  "Location x scale grid, e.g. 21x21");
  cmd->add_option("--threads", a->threads,
                  "Worker threads (0 = hardware concurrency)");
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw cli_input_error("io: cannot write '" + path + "'");
  }
  out << text;
}

void emit_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

// --- bounds --------------------------------------------------------------------

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (c == '\n') {
      out += "\\n";
    } else {
      out += c;
    }
  }
  return out;
}

std::string grid_point_json(const WeightSolution& sol) {
  if (!sol.grid_point) return "null";
  if (sol.grid_scale) {
    return "{\"location\": " + fmt(*sol.grid_point) +
           ", \"scale\": " + fmt(*sol.grid_scale) + "}";
  }
  return fmt(*sol.grid_point);
}

std::string bounds_json(const Sample& sample, const ConstraintSpec& spec,
                        const IdentificationInterval& iv,
                        const std::vector<std::string>& warnings,
                        bool emit_weights) {
  const int n = static_cast<int>(sample.size());
  const double alpha = spec.resolve_alpha(sample.size());
  std::ostringstream os;
  os << "{\n";
  os << "  \"schemaVersion\": 1,\n";
  os << "  \"method\": \"" << family_name(spec.family) << "\",\n";
  os << "  \"gamma\": " << fmt(spec.gamma) << ",\n";
  os << "  \"n\": " << n << ",\n";
  os << "  \"alpha\": " << fmt(alpha) << ",\n";
  os << "  \"deltaStar\": " << fmt(spec.delta_star) << ",\n";
  os << "  \"interval\": {\"lower\": " << fmt(iv.lower)
     << ", \"upper\": " << fmt(iv.upper) << "},\n";
  os << "  \"gridArgmax\": {\"lower\": " << grid_point_json(iv.lower_solution)
     << ", \"upper\": " << grid_point_json(iv.upper_solution) << "},\n";
  os << "  \"constants\": {\"delta\": " << fmt(delta_gamma_n(spec.gamma, n))
     << ", \"zeta\": " << fmt(zeta_gamma_alpha(spec.gamma, alpha))
     << ", \"sigmaSq\": " << fmt(sigma_gamma_sq(spec.gamma).sigma_sq)
     << "},\n";
  os << "  \"warnings\": [";
  for (std::size_t i = 0; i < warnings.size(); ++i) {
    os << (i ? ", " : "") << '"' << json_escape(warnings[i]) << '"';
  }
  os << ']';
  if (emit_weights) {
    auto weight_list = [](const std::vector<double>& w) {
      std::string s = "[";
      for (std::size_t i = 0; i < w.size(); ++i) {
        s += (i ? ", " : "") + fmt(w[i]);
      }
      return s + "]";
    };
    os << ",\n  \"weights\": {\"lower\": "
       << weight_list(iv.lower_solution.weights)
       << ", \"upper\": " << weight_list(iv.upper_solution.weights) << '}';
  }
  os << "\n}\n";
  return os.str();
}

std::string cdf_dump_csv(const Sample& sample, const ConstraintSpec& base_spec,
                         int threads) {
  // Upper-endpoint weighted CDFs for the plain ecdf plus three families,
  // evaluated at every order statistic.
  const std::size_t n = sample.size();
  std::vector<std::pair<std::string, std::vector<double>>> series;
  series.emplace_back("ecdf",
                      std::vector<double>(n, 1.0 / static_cast<double>(n)));
  for (Family f : {Family::none, Family::symmetric, Family::log_concave}) {
    ConstraintSpec spec = base_spec;
    spec.family = f;
    IdentificationInterval iv = compute_bounds(sample, spec, nullptr, threads);
    series.emplace_back(family_name(f), iv.upper_solution.weights);
  }
  std::ostringstream os;
  os << "y,level,series\n";
  for (const auto& [name, weights] : series) {
    const StepFunction cdf = weighted_ecdf(sample, weights);
    for (double y : sample.values()) {
      os << fmt(y) << ',' << fmt(cdf(y)) << ',' << name << '\n';
    }
  }
  return os.str();
}

std::string lp_dump_text(const Sample& sample, const ConstraintSpec& spec) {
  // Endpoint instances of the ratio polytope; shape families add their rows
  // on top of this skeleton.
  std::ostringstream os;
  os << "# upper endpoint instance\n";
  dump_problem(build_weight_lp(sample, spec.gamma, {}, LpSense::maximize), os);
  os << "# lower endpoint instance\n";
  dump_problem(build_weight_lp(sample, spec.gamma, {}, LpSense::minimize), os);
  return os.str();
}

int cmd_bounds(const InputConfig& in, const AnalysisConfig& analysis,
               const std::string& output, const std::string& emit_cdf,
               const std::string& emit_lp, bool emit_weights) {
  const Sample sample(read_column(in));
  const ConstraintSpec spec = make_spec(analysis);
  std::vector<std::string> warnings;
  const IdentificationInterval iv =
      compute_bounds(sample, spec, &warnings, analysis.threads);
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  emit_output(output, bounds_json(sample, spec, iv, warnings, emit_weights));
  if (!emit_cdf.empty()) {
    write_text_file(emit_cdf, cdf_dump_csv(sample, spec, analysis.threads));
  }
  if (!emit_lp.empty()) {
    write_text_file(emit_lp, lp_dump_text(sample, spec));
  }
  return kExitOk;
}

int cmd_cdf_dump(const InputConfig& in, const AnalysisConfig& analysis,
                 const std::string& output) {
  const Sample sample(read_column(in));
  const ConstraintSpec spec = make_spec(analysis);
  emit_output(output, cdf_dump_csv(sample, spec, analysis.threads));
  return kExitOk;
}

// --- simulate ------------------------------------------------------------------

struct SimulateConfig {
  std::string pop = "normal";
  double pop_a = 0.0;
  double pop_b = 1.0;
  double gamma_true = 1.0;
  double pi_min = 0.0;  // 0 means 0.9 / gamma_true
  double sel_center = std::numeric_limits<double>::quiet_NaN();
  double sel_width = 0.0;
  int n = 100;
  int reps = 0;
  std::uint64_t seed = 0;
};

PopulationFamily parse_population(const std::string& name) {
  if (name == "normal") return PopulationFamily::normal;
  if (name == "logistic") return PopulationFamily::logistic;
  if (name == "gamma") return PopulationFamily::gamma;
  if (name == "uniform") return PopulationFamily::uniform;
  throw cli_input_error("config: unknown population '" + name + "'");
}

int cmd_simulate(const SimulateConfig& sim, const AnalysisConfig& analysis,
                 const std::string& output, const std::string& csv_path) {
  if (sim.reps < 1) {
    throw cli_input_error("config: --reps must be positive");
  }
  Scenario sc;
  sc.population.family = parse_population(sim.pop);
  sc.population.p1 = sim.pop_a;
  sc.population.p2 = sim.pop_b;
  sc.selection.gamma_true = sim.gamma_true;
  sc.selection.pi_min =
      sim.pi_min > 0.0 ? sim.pi_min : 0.9 / std::max(1.0, sim.gamma_true);
  sc.selection.center =
      std::isnan(sim.sel_center) ? sc.population.mean() : sim.sel_center;
  sc.selection.width =
      sim.sel_width > 0.0 ? sim.sel_width : std::fabs(sim.pop_b) + 1e-9;
  sc.n = sim.n;
  sc.seed = sim.seed;

  const ConstraintSpec spec = make_spec(analysis);
  try {
    sc.selection.validate();
  } catch (const std::invalid_argument& e) {
    throw cli_input_error(std::string("config: ") + e.what());
  }
  const CoverageReport report =
      coverage_experiment(sc, spec, sim.reps, analysis.threads);
  std::ostringstream summary;
  write_coverage_summary(report, sc, spec, summary);
  emit_output(output, summary.str());
  if (!csv_path.empty()) {
    std::ostringstream csv;
    write_coverage_csv(report, csv);
    write_text_file(csv_path, csv.str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partial-identification intervals for a population mean under "
               "bounded selection-probability ratios"};
  app.require_subcommand(1);

  InputConfig in;
  AnalysisConfig analysis;
  std::string output;
  std::string emit_cdf, emit_lp;
  bool emit_weights = false;

  auto* bounds_cmd =
      app.add_subcommand("bounds", "Compute an identification interval");
  bounds_cmd->add_option("--input", in.path, "CSV input file")->required();
  bounds_cmd->add_option("--column", in.column, "Column index or header name");
  bounds_cmd->add_flag("--header", in.header, "First row is a header");
  add_analysis_flags(bounds_cmd, &analysis);
  bounds_cmd->add_option("--output", output,
                         "JSON output path (default stdout)");
  bounds_cmd->add_option("--emit-cdf", emit_cdf,
                         "Also write the weighted-CDF dump CSV here");
  bounds_cmd->add_option("--emit-lp", emit_lp,
                         "Also write the endpoint LP instances here");
  bounds_cmd->add_flag("--emit-weights", emit_weights,
                       "Include endpoint weights in the JSON");

  auto* cdf_cmd = app.add_subcommand(
      "cdf-dump", "Emit upper-endpoint weighted CDFs as long-format CSV");
  cdf_cmd->add_option("--input", in.path, "CSV input file")->required();
  cdf_cmd->add_option("--column", in.column, "Column index or header name");
  cdf_cmd->add_flag("--header", in.header, "First row is a header");
  add_analysis_flags(cdf_cmd, &analysis);
  cdf_cmd->add_option("--output", output, "CSV output path (default stdout)");

  SimulateConfig sim;
  std::string sim_csv;
  auto* sim_cmd =
      app.add_subcommand("simulate", "Monte Carlo coverage experiment");
  sim_cmd->add_option("--pop", sim.pop,
                      "Population: normal|logistic|gamma|uniform");
  sim_cmd->add_option("--pop-a", sim.pop_a, "First population parameter");
  sim_cmd->add_option("--pop-b", sim.pop_b, "Second population parameter");
  sim_cmd->add_option("--n", sim.n, "Sample size per replication");
  sim_cmd->add_option("--gamma-true", sim.gamma_true,
                      "True selection ratio of the generator")
      ->required();
  sim_cmd->add_option("--pi-min", sim.pi_min,
                      "Lowest selection probability (default 0.9/gamma-true)");
  sim_cmd->add_option("--sel-center", sim.sel_center,
                      "Selection curve center (default population mean)");
  sim_cmd->add_option("--sel-width", sim.sel_width,
                      "Selection curve width (default population scale)");
  sim_cmd->add_option("--reps", sim.reps, "Number of replications")->required();
  sim_cmd->add_option("--seed", sim.seed, "Base seed (required)")->required();
  add_analysis_flags(sim_cmd, &analysis);
  sim_cmd->add_option("--output", output,
                      "JSON summary path (default stdout)");
  sim_cmd->add_option("--csv", sim_csv, "Per-replication CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    std::cerr << "error[config] " << e.what() << '\n';
    return kExitInput;
  }

  try {
    if (*bounds_cmd) {
      return cmd_bounds(in, analysis, output, emit_cdf, emit_lp, emit_weights);
    }
    if (*cdf_cmd) {
      return cmd_cdf_dump(in, analysis, output);
    }
    return cmd_simulate(sim, analysis, output, sim_csv);
  } catch (const cli_input_error& e) {
    print_error(e.what());
    return kExitInput;
  } catch (const empty_plausibility_set_error& e) {
    std::cerr << "error[empty-plausibility-set] " << e.what() << '\n';
    return kExitEmptySet;
  } catch (const solver_failure_error& e) {
    std::cerr << "error[solver] " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error[input] " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error[internal] " << e.what() << '\n';
    return kExitInput;
  }
}
