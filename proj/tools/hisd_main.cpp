// Command-line front end: integrate single trajectories, build
// convergence-rate tables against a fine reference run, and run the
// property check suites. Exit codes: 0 success, 1 usage or check failure,
// 2 I/O failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "hisd/convergence.hpp"
#include "hisd/dynamics.hpp"
#include "hisd/finite_diff.hpp"
#include "hisd/io.hpp"
#include "hisd/presets.hpp"
#include "hisd/surfaces.hpp"
#include "json_report.hpp"

namespace {

using hisd::DirectionFrame;
using hisd::EnergyLandscape;
using hisd::ExperimentConfig;
using hisd::Matrix;
using hisd::Mode;
using hisd::Point;
using hisd::SaddleState;
using hisd::SchemeParams;
using hisd::Trajectory;
using hisd::Vec;

Vec parse_components(const std::string& text) {
  Vec out;
  std::string field;
  std::istringstream in(text);
  while (std::getline(in, field, ',')) {
    std::size_t pos = 0;
    double value = 0.0;
    try {
      value = std::stod(field, &pos);
    } catch (const std::exception&) {
      pos = std::string::npos;
    }
    if (pos != field.size() || !std::isfinite(value))
      throw std::invalid_argument("bad vector component '" + field + "' in '" +
                                  text + "'");
    out.push_back(value);
  }
  if (out.empty())
    throw std::invalid_argument("no vector components in '" + text + "'");
  return out;
}

/// Interprets user-supplied frame vectors: scales each to unit length,
/// requires pairwise orthogonality within 1e-6, and polishes with one
/// Gram-Schmidt pass when rounding leaves the strict frame invariants
/// unmet. Vectors already satisfying the invariants pass through unchanged.
std::vector<Vec> load_frame(const std::vector<std::string>& raw,
                            std::size_t dimension) {
  std::vector<Vec> vs;
  vs.reserve(raw.size());
  for (const std::string& text : raw) {
    Vec v = parse_components(text);
    if (v.size() != dimension)
      throw std::invalid_argument("frame vector '" + text + "' has " +
                                  std::to_string(v.size()) +
                                  " components, expected " +
                                  std::to_string(dimension));
    const double len = hisd::norm(v);
    if (!(len > 0.0))
      throw std::invalid_argument("frame vector '" + text + "' is zero");
    if (std::abs(len - 1.0) > hisd::kFrameUnitTol)
      for (double& c : v) c /= len;
    vs.push_back(std::move(v));
  }
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(hisd::dot(vs[i], vs[j])) > 1e-6)
        throw std::invalid_argument(
            "frame vectors " + std::to_string(j + 1) + " and " +
            std::to_string(i + 1) + " are not orthogonal within 1e-6");
  try {
    DirectionFrame probe(vs);
    return vs;
  } catch (const hisd::FrameError&) {
    // Orthogonal to 1e-6 but not to the strict tolerance; one pass fixes it.
  }
  try {
    return hisd::gram_schmidt(vs).frame.vectors();
  } catch (const hisd::DegenerateFrame& e) {
    throw std::invalid_argument(std::string("frame rejected: ") + e.what());
  }
}

std::size_t thread_budget() {
  const char* env = std::getenv("HISD_THREADS");
  if (!env || !*env) {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? hc : 1;
  }
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 1)
    throw std::invalid_argument("HISD_THREADS must be a positive integer");
  return static_cast<std::size_t>(v);
}

std::string joined(const std::vector<std::string>& names) {
  std::string out;
  for (const std::string& n : names) {
    if (!out.empty()) out += ", ";
    out += n;
  }
  return out;
}

std::string format_point(const Vec& x) {
  std::string out = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) out += ", ";
    out += hisd::format_full(x[i]);
  }
  return out + ")";
}

// ---------------------------------------------------------------- run ----

struct RunOptions {
  std::string model;
  std::string mode_text = "hisd";
  std::string x0_text;
  std::vector<std::string> v_texts;
  std::string tau_text;
  std::string out;
  std::string format = "csv";
  std::size_t k = 0;
  double duration = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
  bool literal = false;
  bool energy = false;
  bool intermediates = false;
};

void write_trajectory_output(const std::filesystem::path& out,
                             const Trajectory& traj,
                             const std::string& format,
                             const EnergyLandscape* landscape,
                             bool intermediates) {
  if (format == "json")
    hisd::atomic_write_text(
        out,
        hisd_tool::trajectory_json(traj, landscape, intermediates).dump(2) +
            "\n");
  else
    hisd::write_trajectory_csv(out, traj, landscape);
}

int cmd_run(const RunOptions& o) {
  const Mode mode = o.mode_text == "ghisd" ? Mode::kGHiSD : Mode::kHiSD;
  if (mode == Mode::kGHiSD && (o.beta != 1.0 || o.gamma != 1.0))
    throw std::invalid_argument(
        "ghisd mode fixes beta and gamma to 1; drop the flags");

  const Vec x0 = parse_components(o.x0_text);
  const std::size_t k = o.k ? o.k : o.v_texts.size();
  if (k != o.v_texts.size())
    throw std::invalid_argument(
        "--k disagrees with the number of --v vectors");
  const std::vector<Vec> frame = load_frame(o.v_texts, x0.size());

  SchemeParams p;
  p.beta = o.beta;
  p.gamma = o.gamma;
  p.tau = hisd::parse_tau(o.tau_text);
  p.k = k;
  p.mode = mode;
  p.ghisd_literal_bracket = o.literal;

  std::shared_ptr<const EnergyLandscape> energy_landscape;
  if (o.energy) {
    const auto names = hisd::landscape_names();
    if (std::find(names.begin(), names.end(), o.model) == names.end())
      throw std::invalid_argument(
          "--energy requires an energy landscape model");
    energy_landscape = hisd::make_landscape(o.model);
  }

  const SaddleState initial(0.0, Point(x0), DirectionFrame(frame));
  const std::filesystem::path out =
      o.out.empty() ? std::filesystem::path("trajectory." + o.format)
                    : std::filesystem::path(o.out);

  Trajectory traj;
  try {
    if (mode == Mode::kHiSD) {
      const auto landscape = hisd::make_landscape(o.model);
      traj = hisd::run_trajectory(initial, p, *landscape, o.duration,
                                  o.intermediates);
    } else {
      const auto system = hisd::make_system(o.model);
      traj = hisd::run_trajectory(initial, p, *system, o.duration,
                                  o.intermediates);
    }
  } catch (const hisd::DegenerateFrame& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    if (e.partial() && !e.partial()->records.empty()) {
      write_trajectory_output(out, *e.partial(), o.format,
                              energy_landscape.get(), o.intermediates);
      std::fprintf(stderr, "partial trajectory with %zu records written to %s\n",
                   e.partial()->records.size(), out.string().c_str());
    }
    return 1;
  }

  write_trajectory_output(out, traj, o.format, energy_landscape.get(),
                          o.intermediates);
  const SaddleState& terminal = traj.records.back().state;
  std::printf("wrote %s: %zu records, terminal t=%g x=%s\n",
              out.string().c_str(), traj.records.size(), terminal.t,
              format_point(terminal.x.coords()).c_str());
  return 0;
}

// ----------------------------------------------------------- converge ----

struct ConvergeOptions {
  std::string preset_name;
  std::string model;
  std::string mode_text = "hisd";
  std::string x0_text;
  std::vector<std::string> v_texts;
  std::string taus_text;
  std::string tau_ref_text;
  std::string out;
  std::string format = "csv";
  std::size_t k = 0;
  double duration = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
  bool literal = false;
  bool expect = false;
};

ExperimentConfig build_config(const ConvergeOptions& o,
                              std::optional<hisd::Expectations>* expectations) {
  if (!o.preset_name.empty()) {
    hisd::PresetBundle bundle = hisd::preset(o.preset_name);
    *expectations = bundle.expectations;
    return bundle.config;
  }
  if (o.model.empty())
    throw std::invalid_argument("give either --preset or a full config "
                                "(--model, --x0, --v, --taus, --tau-ref)");
  ExperimentConfig c;
  c.model = o.model;
  c.mode = o.mode_text == "ghisd" ? Mode::kGHiSD : Mode::kHiSD;
  c.beta = o.beta;
  c.gamma = o.gamma;
  c.duration = o.duration;
  c.ghisd_literal_bracket = o.literal;
  c.x0 = parse_components(o.x0_text);
  c.frame0 = load_frame(o.v_texts, c.x0.size());
  c.k = o.k ? o.k : c.frame0.size();
  if (c.k != c.frame0.size())
    throw std::invalid_argument(
        "--k disagrees with the number of --v vectors");
  std::string field;
  std::istringstream in(o.taus_text);
  while (std::getline(in, field, ','))
    c.taus.push_back(hisd::parse_tau(field));
  c.tau_ref = hisd::parse_tau(o.tau_ref_text);
  c.validate();
  return c;
}

void print_rate_table(const hisd::RateTable& table) {
  std::printf("%-12s %-13s %-8s", "tau", "err_x", "rate_x");
  for (std::size_t i = 1; i <= table.config.k; ++i) {
    std::printf(" %-13s %-8s", ("err_v" + std::to_string(i)).c_str(),
                ("rate_v" + std::to_string(i)).c_str());
  }
  std::printf("\n");
  for (std::size_t row = 0; row < table.rows.size(); ++row) {
    const hisd::ErrorReport& r = table.rows[row];
    const auto rate_cell = [&](std::size_t column) {
      if (row == 0 || !std::isfinite(table.rates[row - 1][column]))
        std::printf(" %-8s", "-");
      else
        std::printf(" %-8.4f", table.rates[row - 1][column]);
    };
    std::printf("%-12.10g %-13.6e", r.tau, r.err_x);
    rate_cell(0);
    for (std::size_t i = 0; i < table.config.k; ++i) {
      std::printf(" %-13.6e", r.err_v[i]);
      rate_cell(1 + i);
    }
    std::printf("\n");
  }
}

int cmd_converge(const ConvergeOptions& o) {
  std::optional<hisd::Expectations> expectations;
  const ExperimentConfig config = build_config(o, &expectations);
  if (o.expect && !expectations)
    throw std::invalid_argument("preset '" + o.preset_name +
                                "' has no published expectations");

  const std::size_t threads = thread_budget();
  const hisd::RateTable table = hisd::rate_table(config, threads);

  std::printf("model=%s mode=%s k=%zu T=%g tau_ref=%.10g threads=%zu\n",
              config.model.c_str(), hisd_tool::mode_name(config.mode),
              config.k, config.duration, config.tau_ref, threads);
  print_rate_table(table);

  int code = 0;
  nlohmann::json checks = nlohmann::json::array();
  if (o.expect) {
    const std::vector<std::string> mismatches =
        hisd::compare_to_expectations(table, *expectations);
    nlohmann::json detail = nlohmann::json::array();
    for (const std::string& m : mismatches) detail.push_back(m);
    checks.push_back({{"name", "published-table"},
                      {"passed", mismatches.empty()},
                      {"mismatches", std::move(detail)}});
    if (mismatches.empty()) {
      std::printf("[pass] published-table: errors within %.0f%% relative, "
                  "rates within %.2f absolute\n",
                  100.0 * expectations->err_rtol, expectations->rate_atol);
    } else {
      std::printf("[fail] published-table: %zu mismatches\n",
                  mismatches.size());
      for (const std::string& m : mismatches) std::printf("  %s\n", m.c_str());
      code = 1;
    }
  }

  const std::filesystem::path out =
      o.out.empty() ? std::filesystem::path("rate_table." + o.format)
                    : std::filesystem::path(o.out);
  if (o.format == "json")
    hisd::atomic_write_text(
        out, hisd_tool::rate_table_json(table, std::move(checks)).dump(2) +
                 "\n");
  else
    hisd::write_rate_table_csv(out, table);
  std::printf("wrote %s\n", out.string().c_str());
  return code;
}

// -------------------------------------------------------------- check ----

int report_decay(const char* quantity, double tau_coarse, double tau_fine,
                 double factor, bool at_noise_floor, double coarse_value,
                 double fine_value) {
  if (at_noise_floor) {
    std::printf("[pass] decay %s %.8g -> %.8g: values %.3e, %.3e are below "
                "the rounding noise floor; factor uninformative\n",
                quantity, tau_coarse, tau_fine, coarse_value, fine_value);
    return 0;
  }
  const bool ok = factor >= 3.5 && factor <= 4.5;
  std::printf("[%s] decay %s %.8g -> %.8g: factor %.4f (want [3.5, 4.5])\n",
              ok ? "pass" : "fail", quantity, tau_coarse, tau_fine, factor);
  return ok ? 0 : 1;
}

int check_lemmas(const std::string& preset_name) {
  const hisd::PresetBundle bundle = hisd::preset(preset_name);
  const hisd::LemmaReport report =
      hisd::lemma_suite(bundle.config, thread_budget());

  for (const hisd::LemmaStats& s : report.stats)
    std::printf("tau=%-10.8g norm_drift=%.6e cross=%.6e gs_gap=%.6e "
                "j_hat=%.6g\n",
                s.tau, s.max_norm_drift, s.max_cross, s.max_gs_gap, s.j_hat);

  int failures = 0;
  if (bundle.config.k == 1) {
    if (report.violations.empty()) {
      std::printf("[pass] per-step bounds (k=1): 0 violations of "
                  "tau^2 gamma^2 Jhat^2 across %zu runs\n",
                  report.stats.size());
    } else {
      std::printf("[fail] per-step bounds (k=1): %zu violations\n",
                  report.violations.size());
      for (const hisd::BoundViolation& v : report.violations)
        std::printf("  %s tau=%.8g step=%zu vector=%zu lhs=%.6e rhs=%.6e\n",
                    v.check.c_str(), v.tau, v.step, v.vector_index + 1, v.lhs,
                    v.rhs);
      ++failures;
    }
  } else {
    std::printf("[skip] per-step bounds: explicit bounds proven for k=1 "
                "only\n");
  }

  for (const hisd::DecayCheck& d : report.decay) {
    const auto stat_at = [&](double tau) -> const hisd::LemmaStats& {
      for (const hisd::LemmaStats& s : report.stats)
        if (s.tau == tau) return s;
      return report.stats.front();
    };
    const hisd::LemmaStats& coarse = stat_at(d.tau_coarse);
    const hisd::LemmaStats& fine = stat_at(d.tau_fine);
    failures += report_decay("norm-drift", d.tau_coarse, d.tau_fine,
                             d.norm_drift_factor, d.norm_drift_at_noise_floor,
                             coarse.max_norm_drift, fine.max_norm_drift);
    if (bundle.config.k >= 2)
      failures += report_decay("cross", d.tau_coarse, d.tau_fine,
                               d.cross_factor, d.cross_at_noise_floor,
                               coarse.max_cross, fine.max_cross);
    failures += report_decay("gs-gap", d.tau_coarse, d.tau_fine,
                             d.gs_gap_factor, d.gs_gap_at_noise_floor,
                             coarse.max_gs_gap, fine.max_gs_gap);
  }
  return failures ? 1 : 0;
}

int check_derivatives() {
  std::mt19937_64 rng(0x00c0ffee5eedULL);
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  int failures = 0;

  for (const std::string& name : hisd::landscape_names()) {
    const auto landscape = hisd::make_landscape(name);
    const auto energy = [&](const Point& p) { return landscape->energy(p); };
    double worst_force = 0.0;
    double worst_hessian = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const Point x(Vec{coord(rng), coord(rng)});
      const Vec force = landscape->force(x);
      Vec gradient = hisd::fd_gradient(energy, x);
      // force is the negative gradient
      hisd::axpy(gradient, 1.0, force);
      worst_force = std::max(
          worst_force, hisd::norm(gradient) / (1.0 + hisd::norm(force)));
      const Matrix analytic = landscape->neg_hessian(x);
      const Matrix fd = hisd::fd_hessian(energy, x);
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
          worst_hessian = std::max(
              worst_hessian, std::abs(analytic(i, j) + fd(i, j)));
    }
    const bool ok = worst_force <= 1e-6 && worst_hessian <= 1e-4;
    std::printf("[%s] derivatives %s: worst force residual %.3e "
                "(tol 1e-6 relative), worst neg-hessian entry %.3e "
                "(tol 1e-4)\n",
                ok ? "pass" : "fail", name.c_str(), worst_force,
                worst_hessian);
    failures += ok ? 0 : 1;
  }

  {
    const hisd::ToyRotational toy(1.0);
    const auto field = [&](const Point& p) { return toy.force(p); };
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      const Point x(Vec{coord(rng), coord(rng)});
      const Matrix analytic = toy.jacobian(x);
      const Matrix fd = hisd::fd_jacobian(field, x);
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
          worst = std::max(worst, std::abs(analytic(i, j) - fd(i, j)));
    }
    const bool ok = worst <= 1e-9;
    std::printf("[%s] derivatives toy-rotational: worst jacobian entry "
                "%.3e (tol 1e-9, linear field)\n",
                ok ? "pass" : "fail", worst);
    failures += ok ? 0 : 1;
  }

  {
    const auto eckhardt = hisd::make_landscape("eckhardt");
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const double x1 = coord(rng);
      const double x2 = coord(rng);
      worst = std::max(
          worst, std::abs(eckhardt->energy(Point(Vec{x1, x2})) -
                          eckhardt->energy(Point(Vec{-x1, x2}))));
    }
    const bool ok = worst <= 1e-14;
    std::printf("[%s] derivatives eckhardt-evenness: worst |E(x1,x2) - "
                "E(-x1,x2)| = %.3e (tol 1e-14)\n",
                ok ? "pass" : "fail", worst);
    failures += ok ? 0 : 1;
  }
  return failures ? 1 : 0;
}

double max_component_deviation(const Trajectory& a, const Trajectory& b) {
  if (a.records.size() != b.records.size())
    throw std::logic_error("trajectory lengths differ");
  double dev = 0.0;
  for (std::size_t n = 0; n < a.records.size(); ++n) {
    const SaddleState& sa = a.records[n].state;
    const SaddleState& sb = b.records[n].state;
    for (std::size_t d = 0; d < sa.x.size(); ++d)
      dev = std::max(dev, std::abs(sa.x[d] - sb.x[d]));
    for (std::size_t i = 0; i < sa.frame.count(); ++i)
      for (std::size_t d = 0; d < sa.frame[i].size(); ++d)
        dev = std::max(dev, std::abs(sa.frame[i][d] - sb.frame[i][d]));
  }
  return dev;
}

int check_ghisd_equiv() {
  int failures = 0;
  double overall = 0.0;
  for (const char* name : {"table1", "table2", "table3", "table4"}) {
    const ExperimentConfig config = hisd::preset(name).config;
    SchemeParams ph = config.params_for(1.0 / 128);
    SchemeParams pg = ph;
    pg.mode = Mode::kGHiSD;
    const auto landscape = hisd::make_landscape(config.model);
    const auto system = hisd::make_system(config.model);
    const SaddleState initial = config.initial_state();
    const Trajectory h =
        hisd::run_trajectory(initial, ph, *landscape, config.duration);
    const Trajectory g =
        hisd::run_trajectory(initial, pg, *system, config.duration);
    const double dev = max_component_deviation(h, g);
    overall = std::max(overall, dev);
    const bool ok = dev <= 1e-13;
    std::printf("[%s] ghisd-equiv %s k=%zu: max component deviation %.3e "
                "(tol 1e-13)\n",
                ok ? "pass" : "fail", config.model.c_str(), config.k, dev);
    failures += ok ? 0 : 1;
  }
  std::printf("max deviation across all cases: %.3e\n", overall);
  return failures ? 1 : 0;
}

struct CheckOptions {
  std::string suite;
  std::string preset_name;
};

int cmd_check(const CheckOptions& o) {
  if (o.suite == "lemmas") {
    if (o.preset_name.empty())
      throw std::invalid_argument("--suite lemmas requires --preset");
    return check_lemmas(o.preset_name);
  }
  if (o.suite == "derivatives") return check_derivatives();
  return check_ghisd_equiv();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Explicit Euler integrator for high-index saddle dynamics: "
               "single runs, convergence-rate tables, and property checks."};
  app.set_version_flag("--version", "1.0.0");
  app.require_subcommand(1);

  const std::vector<std::string> model_names = hisd::system_names();
  const std::vector<std::string> preset_names = hisd::preset_names();

  int exit_code = 0;

  RunOptions ro;
  CLI::App* run =
      app.add_subcommand("run", "integrate one trajectory and write it");
  run->add_option("--model", ro.model, "model: " + joined(model_names))
      ->required()
      ->check(CLI::IsMember(model_names));
  run->add_option("--mode", ro.mode_text, "dynamics family (default hisd)")
      ->check(CLI::IsMember({"hisd", "ghisd"}));
  run->add_option("--k", ro.k, "saddle index (default: number of --v)");
  run->add_option("--x0", ro.x0_text, "initial position, e.g. 1,1")
      ->required();
  run->add_option("--v", ro.v_texts,
                  "initial direction vector, repeat k times; scaled to unit "
                  "length on load")
      ->required();
  run->add_option("--tau", ro.tau_text, "step size, e.g. 1/256 or 0.05")
      ->required();
  run->add_option("--T", ro.duration, "integration time (default 1)");
  run->add_option("--beta", ro.beta, "position relaxation (default 1)");
  run->add_option("--gamma", ro.gamma, "direction relaxation (default 1)");
  run->add_flag("--ghisd-literal-bracket", ro.literal,
                "leave the lower-index projection sum of the non-gradient "
                "direction update unscaled by the step size");
  run->add_flag("--energy", ro.energy,
                "append an energy column (landscape models only)");
  run->add_flag("--record-intermediates", ro.intermediates,
                "include pre-orthonormalization directions in JSON output");
  run->add_option("--out,-o", ro.out, "output path (default trajectory.csv)");
  run->add_option("--format", ro.format, "csv or json (default csv)")
      ->check(CLI::IsMember({"csv", "json"}));
  run->callback([&] { exit_code = cmd_run(ro); });

  ConvergeOptions co;
  CLI::App* converge = app.add_subcommand(
      "converge", "compute a nested-grid error and rate table");
  CLI::Option* preset_opt =
      converge
          ->add_option("--preset", co.preset_name,
                       "canned experiment: " + joined(preset_names))
          ->check(CLI::IsMember(preset_names));
  CLI::Option* model_opt =
      converge->add_option("--model", co.model, "model: " + joined(model_names))
          ->check(CLI::IsMember(model_names));
  preset_opt->excludes(model_opt);
  converge->add_option("--mode", co.mode_text, "dynamics family")
      ->check(CLI::IsMember({"hisd", "ghisd"}))
      ->excludes(preset_opt);
  converge->add_option("--k", co.k, "saddle index")->excludes(preset_opt);
  converge->add_option("--x0", co.x0_text, "initial position")
      ->excludes(preset_opt);
  converge->add_option("--v", co.v_texts, "initial direction, repeat k times")
      ->excludes(preset_opt);
  converge
      ->add_option("--taus", co.taus_text,
                   "comma-separated coarse step sizes, e.g. 1/32,1/64")
      ->excludes(preset_opt);
  converge->add_option("--tau-ref", co.tau_ref_text, "reference step size")
      ->excludes(preset_opt);
  converge->add_option("--T", co.duration, "integration time (default 1)")
      ->excludes(preset_opt);
  converge->add_option("--beta", co.beta, "position relaxation (default 1)")
      ->excludes(preset_opt);
  converge->add_option("--gamma", co.gamma, "direction relaxation (default 1)")
      ->excludes(preset_opt);
  converge->add_flag("--ghisd-literal-bracket", co.literal,
                     "unscaled projection sum in ghisd mode")
      ->excludes(preset_opt);
  converge->add_flag("--expect", co.expect,
                     "compare against the published table and fail on "
                     "mismatch (table presets only)");
  converge->add_option("--out,-o", co.out,
                       "output path (default rate_table.csv)");
  converge->add_option("--format", co.format, "csv or json (default csv)")
      ->check(CLI::IsMember({"csv", "json"}));
  converge->callback([&] { exit_code = cmd_converge(co); });

  CheckOptions ko;
  CLI::App* check =
      app.add_subcommand("check", "run a property suite and report pass/fail");
  check
      ->add_option("--suite", ko.suite,
                   "lemmas, derivatives, or ghisd-equiv")
      ->required()
      ->check(CLI::IsMember({"lemmas", "derivatives", "ghisd-equiv"}));
  check->add_option("--preset", ko.preset_name,
                    "experiment for the lemmas suite: " + joined(preset_names))
      ->check(CLI::IsMember(preset_names));
  check->callback([&] { exit_code = cmd_check(ko); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const hisd::IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return exit_code;
}
