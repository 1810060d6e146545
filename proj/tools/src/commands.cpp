#include "minkval_cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "CLI11.hpp"
#include "minkval/body.hpp"
#include "minkval/errors.hpp"
#include "minkval/geometry.hpp"
#include "minkval/legendre.hpp"
#include "minkval/random.hpp"
#include "minkval/valuation.hpp"

namespace minkval::cli {

namespace {

using ojson = nlohmann::ordered_json;

constexpr double kResidualTolerance = 1e-10;
constexpr double kConvergedDistance = 1e-10;

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) x = 0.0;  // drop the sign of -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

// JSON has no NaN; missing values become null.
ojson jnum(double x) { return std::isfinite(x) ? ojson(x) : ojson(nullptr); }

nlohmann::json parse_spec(const std::string& text) {
  if (!text.empty() && text.front() == '{') return nlohmann::json::parse(text);
  return {{"kind", text}};
}

MinkowskiValuation make_valuation(const ExperimentConfig& cfg) {
  nlohmann::json spec = {{"n", cfg.dim}, {"i", cfg.degree}, {"generator", cfg.generator}, {"kmax", cfg.kmax}};
  return MinkowskiValuation::from_json(spec, cfg.kmax);
}

RevolutionBody make_body(const ExperimentConfig& cfg, const RevolutionBody& fallback) {
  if (cfg.body.is_null()) return fallback;
  nlohmann::json spec = cfg.body;
  if (!spec.contains("n")) spec["n"] = cfg.dim;
  return RevolutionBody::from_json(spec);
}

ojson config_json(const ExperimentConfig& cfg) {
  ojson j;
  j["dim"] = cfg.dim;
  j["degree"] = cfg.degree;
  j["generator"] = cfg.generator;
  j["body"] = cfg.body;
  j["kmax"] = cfg.kmax;
  j["steps"] = cfg.steps;
  j["m"] = cfg.m;
  j["m_max"] = cfg.m_max;
  j["eps"] = cfg.eps;
  j["seed"] = cfg.seed;
  j["k"] = cfg.k;
  j["mode"] = cfg.mode;
  j["amplitudes"] = cfg.amplitudes;
  j["samples"] = cfg.samples;
  j["rows"] = cfg.rows;
  return j;
}

ojson header(const char* command, const ExperimentConfig& cfg) {
  ojson j;
  j["schema"] = "v1";
  j["command"] = command;
  j["config"] = config_json(cfg);
  return j;
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

class Csv {
 public:
  explicit Csv(std::initializer_list<const char*> columns) : width_(columns.size()) {
    bool first = true;
    for (const char* c : columns) {
      if (!first) out_ << ',';
      out_ << c;
      first = false;
    }
    out_ << '\n';
  }

  void row(const std::vector<std::string>& cells) {
    if (cells.size() != width_) throw std::logic_error("csv row width mismatch");
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (j) out_ << ',';
      out_ << cells[j];
    }
    out_ << '\n';
  }

  std::string str() const { return out_.str(); }

 private:
  std::size_t width_;
  std::ostringstream out_;
};

// Runs task(index) for index in [0, count) on a worker pool. Results are
// written by index, so the output order does not depend on scheduling.
template <class Task>
void parallel_for(std::size_t count, int threads, Task&& task) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max<std::size_t>(1, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t idx = next++; idx < count; idx = next++) {
      try {
        task(idx);
      } catch (...) {
        errors[idx] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

void apply_config(ExperimentConfig& cfg, const nlohmann::json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key == "dim") {
      cfg.dim = value.get<int>();
    } else if (key == "degree") {
      cfg.degree = value.get<int>();
    } else if (key == "generator") {
      cfg.generator = value.is_string() ? parse_spec(value.get<std::string>()) : value;
    } else if (key == "body") {
      cfg.body = value.is_string() ? parse_spec(value.get<std::string>()) : value;
    } else if (key == "kmax") {
      cfg.kmax = value.get<int>();
    } else if (key == "steps") {
      cfg.steps = value.get<int>();
    } else if (key == "m") {
      cfg.m = value.get<int>();
    } else if (key == "m_max") {
      cfg.m_max = value.get<int>();
    } else if (key == "eps") {
      cfg.eps = value.get<double>();
    } else if (key == "seed") {
      cfg.seed = value.get<std::uint64_t>();
    } else if (key == "out") {
      cfg.out = value.get<std::string>();
    } else if (key == "format") {
      const auto f = value.get<std::string>();
      if (f != "json" && f != "csv") throw std::invalid_argument("format must be json or csv");
      cfg.format = f == "csv" ? Format::Csv : Format::Json;
    } else if (key == "k") {
      cfg.k = value.get<int>();
    } else if (key == "mode") {
      cfg.mode = value.get<std::string>();
    } else if (key == "amplitudes") {
      cfg.amplitudes = value.get<std::vector<double>>();
    } else if (key == "samples") {
      cfg.samples = value.get<int>();
    } else if (key == "rows") {
      cfg.rows = value.get<int>();
    } else if (key == "threads") {
      cfg.threads = value.get<int>();
    } else {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
}

CommandOutput cmd_multipliers(const ExperimentConfig& cfg) {
  const MinkowskiValuation val = make_valuation(cfg);
  const int last = std::min(cfg.rows, val.kmax());
  const int m_hi = std::max(cfg.m, cfg.m_max);
  std::vector<std::vector<double>> lin;
  for (int m = cfg.m; m <= m_hi; ++m) lin.push_back(linearization_multipliers(val, m));
  const double a0 = val.generator().multiplier(0);
  const DecayFit decay = decay_fit(val.generator());

  if (cfg.format == Format::Csv) {
    Csv csv({"k", "m", "a_k", "a_k_over_a0", "box_k", "linearization"});
    for (int k = 0; k <= last; ++k) {
      const double a = val.generator().multiplier(k);
      for (int m = cfg.m; m <= m_hi; ++m) {
        csv.row({std::to_string(k), std::to_string(m), num(a), num(a / a0), num(box_multiplier(val.dim(), k)),
                 num(lin[static_cast<std::size_t>(m - cfg.m)][static_cast<std::size_t>(k)])});
      }
    }
    return {kPass, csv.str()};
  }
  ojson j = header("multipliers", cfg);
  j["valuation"] = val.to_json();
  j["a0"] = a0;
  j["decay"] = {{"slope", jnum(decay.slope)}, {"points", decay.points}, {"rho", jnum(decay.rho)},
                {"condition3", decay.condition3}};
  ojson rows = ojson::array();
  for (int k = 0; k <= last; ++k) {
    const double a = val.generator().multiplier(k);
    ojson r;
    r["k"] = k;
    r["a_k"] = a;
    r["a_k_over_a0"] = a / a0;
    r["box_k"] = box_multiplier(val.dim(), k);
    ojson l = ojson::object();
    for (int m = cfg.m; m <= m_hi; ++m) {
      l[std::to_string(m)] = lin[static_cast<std::size_t>(m - cfg.m)][static_cast<std::size_t>(k)];
    }
    r["linearization"] = l;
    rows.push_back(r);
  }
  j["rows"] = rows;
  return {kPass, dump(j)};
}

CommandOutput cmd_gap(const ExperimentConfig& cfg) {
  const MinkowskiValuation val = make_valuation(cfg);
  const GapReport report = gap_check(val);
  const int code = report.contraction_pass ? kPass : kTheoremFail;
  if (cfg.format == Format::Csv) {
    Csv csv({"k", "a_k", "gap_bound", "gap_margin", "contraction_bound", "contraction_margin", "linearization"});
    for (const GapRow& r : report.rows) {
      csv.row({std::to_string(r.k), num(r.a_k), num(r.gap_bound), num(r.gap_margin), num(r.contraction_bound),
               num(r.contraction_margin), num(r.linearization)});
    }
    return {code, csv.str()};
  }
  ojson j = header("gap", cfg);
  j["valuation"] = val.to_json();
  ojson body = report.to_json();
  // The contraction condition asks for m > (n+3) / (4 (rho - 2)).
  body["m_required"] = report.decay.rho > 2.0 ? jnum((val.dim() + 3.0) / (4.0 * (report.decay.rho - 2.0)))
                                              : ojson(nullptr);
  ojson m_rows = ojson::array();
  const auto mu1 = linearization_multipliers(val, 1);
  for (int m = cfg.m; m <= std::max(cfg.m, cfg.m_max); ++m) {
    double max_mult = 0.0;
    double min_gap = std::numeric_limits<double>::infinity();
    for (int k = 2; k <= val.kmax(); ++k) {
      const double v = std::pow(mu1[static_cast<std::size_t>(k)], 2 * m);
      max_mult = std::max(max_mult, std::abs(v));
      min_gap = std::min(min_gap, std::abs(v - 1.0));
    }
    m_rows.push_back({{"m", m}, {"max_multiplier", max_mult}, {"min_resolvent_gap", jnum(min_gap)}});
  }
  body["m_range"] = m_rows;
  j["report"] = body;
  j["exit_code"] = code;
  return {code, dump(j)};
}

CommandOutput cmd_iterate(const ExperimentConfig& cfg) {
  if (cfg.mode != "phi" && cfg.mode != "phi2") throw std::invalid_argument("mode must be phi or phi2");
  const IterationMode mode = cfg.mode == "phi" ? IterationMode::Phi : IterationMode::PhiSquared;
  const MinkowskiValuation val = make_valuation(cfg);
  const RevolutionBody start = make_body(cfg, RevolutionBody::perturbed_ball(cfg.dim, cfg.k, 0.05));

  // Index 0 is the base run, the rest the amplitude sweep.
  const std::size_t runs = 1 + cfg.amplitudes.size();
  std::vector<IterationReport> reports(runs);
  std::vector<bool> start_valid(runs, true);
  parallel_for(runs, cfg.threads, [&](std::size_t idx) {
    if (idx == 0) {
      reports[0] = iterate(val, start, cfg.steps, mode);
      return;
    }
    const RevolutionBody b =
        RevolutionBody::perturbed_ball(cfg.dim, cfg.k, cfg.amplitudes[idx - 1], Validation::Skip);
    if (classify_support(b).cls == SupportClass::NotSupport) {
      start_valid[idx] = false;
      return;
    }
    reports[idx] = iterate(val, b, cfg.steps, mode);
  });

  auto converged = [&](std::size_t idx) {
    return start_valid[idx] && !reports[idx].truncated && reports[idx].final_distance() < kConvergedDistance;
  };
  const int code = reports[0].truncated ? kTheoremFail : kPass;

  if (cfg.format == Format::Csv) {
    Csv csv({"run", "amplitude", "step", "sup_distance", "l2_distance", "beta", "class", "c_2", "c_4", "c_6"});
    for (std::size_t idx = 0; idx < runs; ++idx) {
      const double amp = idx == 0 ? nan() : cfg.amplitudes[idx - 1];
      for (const IterationStep& s : reports[idx].steps) {
        csv.row({std::to_string(idx), num(amp), std::to_string(s.step), num(s.sup_distance), num(s.l2_distance),
                 num(s.beta), to_string(s.cls), num(s.coeffs[0]), num(s.coeffs[1]), num(s.coeffs[2])});
      }
    }
    return {code, csv.str()};
  }

  ojson j = header("iterate", cfg);
  j["valuation"] = val.to_json();
  j["body"] = start.to_json();
  ojson base = reports[0].to_json();
  base["converged"] = converged(0);
  j["report"] = base;
  if (!cfg.amplitudes.empty()) {
    ojson sweep = ojson::array();
    std::optional<double> largest;
    for (std::size_t idx = 1; idx < runs; ++idx) {
      const double amp = cfg.amplitudes[idx - 1];
      ojson r;
      r["amplitude"] = amp;
      r["start_valid"] = static_cast<bool>(start_valid[idx]);
      r["converged"] = converged(idx);
      r["final_distance"] = start_valid[idx] ? jnum(reports[idx].final_distance()) : ojson(nullptr);
      r["truncated"] = reports[idx].truncated;
      r["steps_run"] = start_valid[idx] ? static_cast<int>(reports[idx].steps.size()) - 1 : 0;
      r["fitted_ratios"] = reports[idx].fitted_ratios;
      sweep.push_back(r);
      if (converged(idx) && (!largest || std::abs(amp) > std::abs(*largest))) largest = amp;
    }
    j["sweep"] = sweep;
    j["largest_converging_amplitude"] = largest ? ojson(*largest) : ojson(nullptr);
  }
  j["exit_code"] = code;
  return {code, dump(j)};
}

CommandOutput cmd_petty(const ExperimentConfig& cfg) {
  const MinkowskiValuation val = make_valuation(cfg);
  const int n = cfg.dim;
  std::vector<std::string> kinds = {"ball", "ellipsoid"};
  std::vector<RevolutionBody> bodies = {RevolutionBody::ball(n), RevolutionBody::ellipsoid(n, 1.1, 1.0)};
  if (!cfg.body.is_null()) {
    kinds.push_back("config");
    bodies.push_back(make_body(cfg, bodies.front()));
  }
  // Random bodies are drawn sequentially so that the sample set only depends
  // on the seed.
  Rng rng(cfg.seed);
  for (int s = 0; s < cfg.samples; ++s) {
    kinds.push_back("random");
    bodies.push_back(random_c2plus_body(rng, n));
  }

  struct Row {
    std::string status = "ok";
    double psi = nan();
    ClassReduction cr;
    double area_residual = nan();
    double strengthened = nan();
  };
  std::vector<Row> rows(bodies.size());
  parallel_for(bodies.size(), cfg.threads, [&](std::size_t idx) {
    Row& row = rows[idx];
    try {
      row.psi = psi_ratio(val, bodies[idx]);
      row.cr = class_reduction_check(val, bodies[idx]);
    } catch (const std::invalid_argument& e) {
      row.status = "invalid_image";
      row.cr.residual = nan();
      return;
    }
    if (val.degree() == 1) {
      const Degree1Report d = degree1_check(val, bodies[idx]);
      row.area_residual = d.area_residual;
      if (d.strengthened_checked) row.strengthened = d.strengthened_residual;
    }
  });

  int code = kPass;
  const double psi_ball = rows[0].psi;
  bool ball_minimal = true;
  for (const Row& r : rows) {
    if (r.status != "ok") continue;
    if (r.cr.residual < -kResidualTolerance) code = kTheoremFail;
    if (r.psi < psi_ball * (1.0 - kResidualTolerance)) ball_minimal = false;
  }

  if (cfg.format == Format::Csv) {
    Csv csv({"index", "kind", "status", "psi", "lhs", "rhs", "residual", "identity_residual", "homothety_distance",
             "area_residual", "strengthened_residual"});
    for (std::size_t idx = 0; idx < rows.size(); ++idx) {
      const Row& r = rows[idx];
      csv.row({std::to_string(idx), kinds[idx], r.status, num(r.psi), num(r.cr.lhs), num(r.cr.rhs),
               num(r.cr.residual), num(r.cr.identity_residual), num(r.cr.homothety_distance), num(r.area_residual),
               num(r.strengthened)});
    }
    return {code, csv.str()};
  }
  ojson j = header("petty", cfg);
  j["valuation"] = val.to_json();
  j["psi_ball"] = jnum(psi_ball);
  j["ball_minimal"] = ball_minimal;
  ojson arr = ojson::array();
  for (std::size_t idx = 0; idx < rows.size(); ++idx) {
    const Row& r = rows[idx];
    ojson o;
    o["index"] = idx;
    o["kind"] = kinds[idx];
    o["status"] = r.status;
    o["psi"] = jnum(r.psi);
    o["class_reduction"] = r.cr.to_json();
    o["area_residual"] = jnum(r.area_residual);
    o["strengthened_residual"] = jnum(r.strengthened);
    arr.push_back(o);
  }
  j["rows"] = arr;
  j["exit_code"] = code;
  return {code, dump(j)};
}

CommandOutput cmd_intervals(const ExperimentConfig& cfg) {
  const IntervalReport iv = intervals(cfg.dim, cfg.k);
  const Transition tr = support_transitions(cfg.dim, cfg.k);
  constexpr double kTol = 1e-6;
  const bool contained = tr.lower >= iv.i_lower - kTol && tr.upper <= iv.i_upper + kTol;
  // 1 + gamma P_k with gamma = 1/nu_k[1] should touch zero from above.
  const double gamma = iv.j_upper;
  double witness = std::numeric_limits<double>::infinity();
  for (int p = 0; p <= kClassifyCells; ++p) {
    const double t = (2.0 * p - kClassifyCells) / kClassifyCells;
    witness = std::min(witness, 1.0 + gamma * legendre(cfg.dim, cfg.k, t));
  }
  const int code = contained ? kPass : kTheoremFail;
  if (cfg.format == Format::Csv) {
    Csv csv({"n", "k", "i_lower", "i_upper", "j_lower", "j_upper", "exact", "transition_lower", "transition_upper",
             "contained", "j_witness_min"});
    csv.row({std::to_string(iv.n), std::to_string(iv.k), num(iv.i_lower), num(iv.i_upper), num(iv.j_lower),
             num(iv.j_upper), iv.exact ? "true" : "false", num(tr.lower), num(tr.upper),
             contained ? "true" : "false", num(witness)});
    return {code, csv.str()};
  }
  ojson j = header("intervals", cfg);
  j["n"] = iv.n;
  j["k"] = iv.k;
  j["I"] = {iv.i_lower, iv.i_upper};
  j["J"] = {iv.j_lower, iv.j_upper};
  j["exact"] = iv.exact;
  j["transitions"] = {tr.lower, tr.upper};
  j["contained"] = contained;
  j["j_witness_min"] = witness;
  j["exit_code"] = code;
  return {code, dump(j)};
}

CommandOutput run_command(const std::string& name, const ExperimentConfig& cfg, std::ostream& err) {
  try {
    if (name == "multipliers") return cmd_multipliers(cfg);
    if (name == "gap") return cmd_gap(cfg);
    if (name == "iterate") return cmd_iterate(cfg);
    if (name == "petty") return cmd_petty(cfg);
    if (name == "intervals") return cmd_intervals(cfg);
    err << "unknown command '" << name << "'\n";
    return {kUsage, {}};
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return {kNumeric, {}};
  } catch (const std::overflow_error& e) {
    err << "numeric failure: " << e.what() << '\n';
    return {kNumeric, {}};
  } catch (const std::exception& e) {
    // Bad dimensions, unknown kinds, invalid bodies and malformed JSON all
    // come from the configuration.
    err << "error: " << e.what() << '\n';
    return {kUsage, {}};
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Minkowski valuations on bodies of revolution"};
  app.require_subcommand(1);

  std::string config_path;
  int dim = 0, degree = 0, kmax = 0, steps = 0, m = 0, m_max = 0, k = 0, samples = 0, rows = 0, threads = 0;
  double eps = 0.0;
  std::uint64_t seed = 0;
  std::string generator, body, out_path, format, mode;
  std::vector<double> amplitudes;

  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  auto* o_dim = app.add_option("--dim", dim, "ambient dimension n");
  auto* o_degree = app.add_option("--degree", degree, "valuation degree i");
  auto* o_gen = app.add_option("--generator", generator, "generator kind or JSON record");
  auto* o_body = app.add_option("--body", body, "body kind or JSON record");
  auto* o_kmax = app.add_option("--kmax", kmax, "spectral truncation");
  auto* o_steps = app.add_option("--steps", steps, "iteration steps");
  auto* o_m = app.add_option("--m", m, "power m (first of the range)");
  auto* o_m_max = app.add_option("--m-max", m_max, "last m of the range");
  auto* o_eps = app.add_option("--eps", eps, "finite-difference step");
  auto* o_seed = app.add_option("--seed", seed, "random seed");
  auto* o_out = app.add_option("--out", out_path, "output file (default stdout)");
  auto* o_format = app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  auto* o_k = app.add_option("--k", k, "Legendre degree / perturbation direction");
  auto* o_mode = app.add_option("--mode", mode, "phi or phi2")->check(CLI::IsMember({"phi", "phi2"}));
  auto* o_amp = app.add_option("--amplitudes", amplitudes, "amplitude sweep")->delimiter(',');
  auto* o_samples = app.add_option("--samples", samples, "random bodies in sweeps");
  auto* o_rows = app.add_option("--rows", rows, "largest degree listed");
  auto* o_threads = app.add_option("--threads", threads, "worker threads (0: all cores)");

  for (const char* name : {"multipliers", "gap", "iterate", "petty", "intervals"}) {
    app.add_subcommand(name)->fallthrough();
  }
  app.get_subcommand("multipliers")->description("generator multipliers and linearization multipliers");
  app.get_subcommand("gap")->description("spectral gap report; exit 1 if a contraction margin fails");
  app.get_subcommand("iterate")->description("fixed-point iteration near the ball");
  app.get_subcommand("petty")->description("class-reduction and psi_i sweep");
  app.get_subcommand("intervals")->description("convexity intervals I and J");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsage;
  }

  ExperimentConfig cfg;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      apply_config(cfg, nlohmann::json::parse(in));
    }
    nlohmann::json flags = nlohmann::json::object();
    if (o_dim->count()) flags["dim"] = dim;
    if (o_degree->count()) flags["degree"] = degree;
    if (o_gen->count()) flags["generator"] = parse_spec(generator);
    if (o_body->count()) flags["body"] = parse_spec(body);
    if (o_kmax->count()) flags["kmax"] = kmax;
    if (o_steps->count()) flags["steps"] = steps;
    if (o_m->count()) flags["m"] = m;
    if (o_m_max->count()) flags["m_max"] = m_max;
    if (o_eps->count()) flags["eps"] = eps;
    if (o_seed->count()) flags["seed"] = seed;
    if (o_out->count()) flags["out"] = out_path;
    if (o_format->count()) flags["format"] = format;
    if (o_k->count()) flags["k"] = k;
    if (o_mode->count()) flags["mode"] = mode;
    if (o_amp->count()) flags["amplitudes"] = amplitudes;
    if (o_samples->count()) flags["samples"] = samples;
    if (o_rows->count()) flags["rows"] = rows;
    if (o_threads->count()) flags["threads"] = threads;
    apply_config(cfg, flags);
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  const CommandOutput result = run_command(command, cfg, err);
  if (result.exit_code == kUsage || result.exit_code == kNumeric) return result.exit_code;
  if (cfg.out.empty()) {
    out << result.text;
  } else {
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file) {
      err << "cannot write '" << cfg.out << "'\n";
      return kUsage;
    }
    file << result.text;
  }
  return result.exit_code;
}

}  // namespace minkval::cli
