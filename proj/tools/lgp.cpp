// lgp: command-line driver for the Lambda-system gauge experiments.
//
// Exit status: 0 pass, 2 gate failure, 1 error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "lgp/dynamics.hpp"
#include "lgp/experiments.hpp"
#include "lgp/holonomy.hpp"
#include "lgp/kernels.hpp"
#include "lgp/lambda_gauge.hpp"

namespace {

using namespace lgp;
using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitError = 1;
constexpr int kExitGate = 2;

// The figure quoted for the largest population difference of the composed paths.
constexpr double kPublishedMaxPd = 0.20;

struct CommonOptions {
  std::string config;
  std::optional<double> delta, omega, beta, dt, duration;
  std::vector<double> alpha;
  std::optional<std::size_t> steps;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> output, format, connection;
};

void add_common(CLI::App* app, CommonOptions& o) {
  app->add_option("--config", o.config, "JSON config file; flags override its values")->check(CLI::ExistingFile);
  app->add_option("--delta", o.delta, "detuning Delta (units of Omega)");
  app->add_option("--omega", o.omega, "effective Rabi frequency Omega");
  app->add_option("--alpha", o.alpha, "Lissajous amplitude alpha; several values form the scan grid");
  app->add_option("--beta", o.beta, "Lissajous delay beta");
  app->add_option("--steps", o.steps, "Wilson-loop segments per loop");
  app->add_option("--dt", o.dt, "TDSE time step (default 0.01/sqrt(delta^2+omega^2))");
  app->add_option("--duration", o.duration, "Omega T per loop");
  app->add_option("--seed", o.seed, "seed for randomized checks");
  app->add_option("--workers", o.workers, "OpenMP threads (0: default)");
  app->add_option("--output", o.output, "output path (default stdout)");
  app->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--connection", o.connection, "lambda, large-detuning or abelian")
      ->check(CLI::IsMember({"lambda", "large-detuning", "abelian"}));
}

void set_alpha_beta(LoopSpec& loop, const std::optional<double>& alpha, const std::optional<double>& beta) {
  if (auto* l = std::get_if<Lissajous>(&loop.shape)) {
    if (alpha) l->alpha = *alpha;
    if (beta) l->beta = *beta;
  }
}

ExperimentConfig resolve(const CommonOptions& o, bool scan) {
  json overrides = json::object();
  if (o.delta) overrides["delta"] = *o.delta;
  if (o.omega) overrides["omega"] = *o.omega;
  if (o.dt) overrides["dt"] = *o.dt;
  if (o.duration) overrides["duration"] = *o.duration;
  if (o.steps) overrides["wilson_steps"] = *o.steps;
  if (o.seed) overrides["seed"] = *o.seed;
  if (o.workers) overrides["workers"] = *o.workers;
  if (o.output) overrides["output"] = *o.output;
  if (o.format) overrides["format"] = *o.format;
  if (o.connection) overrides["connection"] = *o.connection;
  if (o.beta) overrides["beta"] = *o.beta;
  if (scan && !o.alpha.empty()) overrides["alphas"] = o.alpha;

  ExperimentConfig c = default_config();
  if (!o.config.empty()) {
    std::ifstream in(o.config);
    if (!in) throw Error(Errc::io_failure, "cannot read " + o.config);
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw Error(Errc::invalid_spec, o.config + ": " + e.what());
    }
    c = config_from_json(doc, c);
  }
  c = config_from_json(overrides, c);
  if (!scan) {
    if (o.alpha.size() > 1) throw Error(Errc::invalid_params, "--alpha takes one value outside scan");
    const std::optional<double> a = o.alpha.empty() ? std::nullopt : std::optional(o.alpha.front());
    set_alpha_beta(c.loop1, a, o.beta);
    set_alpha_beta(c.loop2, a, o.beta);
  }
  return c;
}

void write_text(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_failure, "cannot open '" + path + "' for writing");
  out << text;
  if (!out.flush()) throw Error(Errc::io_failure, "write to '" + path + "' failed");
}

std::string num(double v) { return format_number(v); }

json matrix_json(const auto& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.dim; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.dim; ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

std::string matrix_text(const auto& m) {
  std::ostringstream os;
  for (std::size_t i = 0; i < m.dim; ++i) {
    os << "  [";
    for (std::size_t j = 0; j < m.dim; ++j) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%s%+.9f%+.9fi", j ? ", " : "", m(i, j).real(), m(i, j).imag());
      os << buf;
    }
    os << "]\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------

int run_abelian_loop(const CommonOptions& o, double theta0) {
  const auto c = resolve(o, false);
  const std::size_t n = o.steps ? *o.steps : 100000;
  const auto u = wilson_loop(discretize({Circle{theta0}}, n), AbelianTestField());
  const double expected = 0.5 * solid_angle(theta0);
  const double phase = std::arg(u.matrix(0, 0));
  const double error = std::abs(wrap_angle(phase - expected));
  const bool pass = error <= 1e-6;

  if (c.format == OutputFormat::json) {
    write_text(json{{"theta0", theta0}, {"steps", n}, {"phase", phase}, {"expected", expected},
                    {"error", error}, {"richardson_error", u.richardson_error}, {"pass", pass}}
                       .dump(2) + "\n",
               c.output);
  } else {
    write_text("theta0,steps,phase,expected,error,richardson_error\n" + num(theta0) + "," + std::to_string(n) +
                   "," + num(phase) + "," + num(expected) + "," + num(error) + "," + num(u.richardson_error) + "\n",
               c.output);
  }
  std::cerr << "abelian loop: phase " << num(phase) << " vs pi(1 - cos 2 theta0) = " << num(expected) << " (mod 2 pi)"
            << (pass ? "  PASS" : "  FAIL") << '\n';
  return pass ? kExitPass : kExitGate;
}

int run_curvature_map(const CommonOptions& o, std::size_t n_theta, std::size_t n_phi) {
  auto c = resolve(o, false);
  if (!o.connection) c.connection = ConnectionKind::large_detuning;
  const auto field = make_field(c.connection, c.params);
  const GridSpec grid{n_theta, n_phi};
  const auto norms = parallel::curvature_norms(*field, grid, c.workers);
  double sup = 0.0;
  for (double v : norms) sup = std::max(sup, v);

  std::ostringstream os;
  if (c.format == OutputFormat::json) {
    json values = json::array();
    for (std::size_t k = 0; k < norms.size(); ++k) {
      const auto p = grid.point(k / n_phi, k % n_phi);
      values.push_back({{"theta", p.theta}, {"phi", p.phi}, {"curvature_norm", norms[k]}});
    }
    os << json{{"connection", field->name()}, {"sup", sup}, {"values", values}}.dump(2) << '\n';
  } else {
    os << "theta,phi,curvature_norm\n";
    for (std::size_t k = 0; k < norms.size(); ++k) {
      const auto p = grid.point(k / n_phi, k % n_phi);
      os << num(p.theta) << ',' << num(p.phi) << ',' << num(norms[k]) << '\n';
    }
  }
  write_text(os.str(), c.output);
  std::cerr << field->name() << " curvature: sup ||F||_F = " << num(sup) << " over " << n_theta << "x" << n_phi
            << " grid\n";
  return kExitPass;
}

int run_spin_half(const CommonOptions& o, std::vector<double> b, const std::string& branch_name) {
  const auto c = resolve(o, false);
  const Branch branch = branch_name == "plus" ? Branch::plus : Branch::minus;
  const MagneticField field(b.at(0), b.at(1), b.at(2));

  json doc{{"field", b}, {"branch", branch_name}};
  try {
    doc["frame"] = matrix_json(spinhalf_frame(field));
  } catch (const Error& e) {
    doc["frame"] = to_string(e.code());
  }
  try {
    doc["adiabatic_connection"] = spinhalf_adiabatic_connection(field, branch);
  } catch (const Error& e) {
    doc["adiabatic_connection"] = to_string(e.code());
  }
  doc["curvature"] = spinhalf_curvature(field, branch);

  // Curl check at random off-pole points and the sphere flux.
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 100;) {
    const MagneticField r(u(rng), u(rng), u(rng));
    if (r.magnitude() < 0.1 || std::abs(r.bz()) > 0.9 * r.magnitude()) continue;
    ++k;
    const auto exact = spinhalf_curvature(r, branch);
    const auto fd = spinhalf_curvature_fd(r, branch);
    double scale = 0.0, diff = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        scale = std::max(scale, std::abs(exact[i][j]));
        diff = std::max(diff, std::abs(exact[i][j] - fd[i][j]));
      }
    worst = std::max(worst, diff / scale);
  }
  const double flux = parallel::monopole_flux(branch, field.magnitude(), 200, 400, c.workers);
  const double expected = branch == Branch::minus ? kTwoPi : -kTwoPi;
  const double flux_error = std::abs(flux - expected) / kTwoPi;
  const bool pass = worst <= 1e-6 && flux_error <= 0.005;
  doc["curl_relative_error"] = worst;
  doc["flux"] = flux;
  doc["flux_expected"] = expected;
  doc["flux_relative_error"] = flux_error;
  doc["pass"] = pass;

  write_text(doc.dump(2) + "\n", c.output);
  std::cerr << "spin-1/2 " << branch_name << ": flux " << num(flux) << " (expected " << num(expected)
            << "), curl rel. error " << num(worst) << (pass ? "  PASS" : "  FAIL") << '\n';
  return pass ? kExitPass : kExitGate;
}

int run_wilson(const CommonOptions& o, int which, bool full) {
  const auto c = resolve(o, false);
  const LoopSpec& spec = which == 2 ? c.loop2 : c.loop1;
  const auto loop = discretize(spec, c.wilson_steps);
  json doc{{"loop", loop_to_json(spec)}, {"steps", c.wilson_steps}};
  std::ostringstream text;
  if (full) {
    const auto u = wilson_loop(loop, LambdaFullField(gamma_angle(c.params)));
    const double dev = (u.matrix - Matrix3::identity()).frobenius_norm();
    doc.update({{"field", "lambda-full"},
                {"matrix", matrix_json(u.matrix)},
                {"deviation_from_identity", dev},
                {"unitarity_residual", unitarity_residual(u.matrix)},
                {"richardson_error", u.richardson_error}});
    text << "3x3 holonomy (" << c.wilson_steps << " steps):\n" << matrix_text(u.matrix)
         << "||U - I||_F = " << num(dev) << "\n";
  } else {
    const auto field = make_field(c.connection, c.params);
    const auto u = wilson_loop(loop, *field);
    const double dev = (u.matrix - Matrix2::identity()).frobenius_norm();
    doc.update({{"field", field->name()},
                {"matrix", matrix_json(u.matrix)},
                {"deviation_from_identity", dev},
                {"unitarity_residual", unitarity_residual(u.matrix)},
                {"richardson_error", u.richardson_error}});
    text << field->name() << " holonomy (" << c.wilson_steps << " steps):\n" << matrix_text(u.matrix)
         << "||U - I||_F = " << num(dev) << "\n";
  }
  text << "unitarity residual " << num(doc["unitarity_residual"].get<double>()) << ", richardson error "
       << num(doc["richardson_error"].get<double>()) << "\n";
  write_text(c.format == OutputFormat::json ? doc.dump(2) + "\n" : text.str(), c.output);
  return kExitPass;
}

json composed_json(const ComposedResult& r) {
  return json{{"pd", r.pd},
              {"order_a", r.order_a},
              {"order_b", r.order_b},
              {"commutator_norm", r.commutator_norm},
              {"richardson_error", r.richardson_error},
              {"leakage", r.leakage},
              {"norm_drift", r.norm_drift}};
}

int run_compose(const CommonOptions& o, const std::string& method) {
  const auto c = resolve(o, false);
  json doc{{"config", config_to_json(c)}};
  std::ostringstream text;
  if (method != "tdse") {
    const auto h = composed_path_pd(c, Method::holonomy);
    doc["holonomy"] = composed_json(h);
    text << "holonomy: P_d = " << num(h.pd) << ", ||[U1, U2]||_F = " << num(h.commutator_norm) << "\n";
  }
  if (method != "holonomy") {
    const auto t = composed_path_pd(c, Method::tdse);
    doc["tdse"] = composed_json(t);
    text << "tdse:     P_d = " << num(t.pd) << ", leakage = " << num(t.leakage) << ", norm drift = "
         << num(t.norm_drift) << "\n";
  }
  write_text(c.format == OutputFormat::json ? doc.dump(2) + "\n" : text.str(), c.output);
  return kExitPass;
}

int run_evolve(const CommonOptions& o, int which) {
  const auto c = resolve(o, false);
  const LoopSchedule schedule(which == 2 ? c.loop2 : c.loop1, c.duration);
  const auto rep = adiabaticity_report(schedule, c.params, c.time_step(), c.initial_state);
  const auto& e = rep.evolution;
  json doc{{"populations", e.populations},
           {"norm_drift", e.norm_drift},
           {"steps", e.steps},
           {"leakage", rep.leakage},
           {"dynamical_phase_bound", rep.dynamical_phase_bound},
           {"min_gap", rep.min_gap},
           {"non_adiabatic", rep.non_adiabatic}};
  std::ostringstream text;
  text << "populations " << num(e.populations[0]) << ", " << num(e.populations[1]) << ", " << num(e.populations[2])
       << "\nnorm drift " << num(e.norm_drift) << " over " << e.steps << " steps\n"
       << "leakage " << num(rep.leakage) << (rep.non_adiabatic ? " (non-adiabatic)" : "") << "\n"
       << "|E-| T = " << num(rep.dynamical_phase_bound) << " rad, gap " << num(rep.min_gap) << "\n";
  write_text(c.format == OutputFormat::json ? doc.dump(2) + "\n" : text.str(), c.output);
  return rep.non_adiabatic ? kExitGate : kExitPass;
}

int run_scan(const CommonOptions& o, double min_pd) {
  const auto c = resolve(o, true);
  const auto rows = alpha_scan(c, c.alphas, c.beta);
  if (c.output.empty())
    write_text(format_rows(rows, c.format), "");
  else
    emit(rows, c.format, c.output);

  double max_pd = 0.0, max_diff = 0.0, max_leak = 0.0, max_drift = 0.0;
  for (const auto& r : rows) {
    max_pd = std::max(max_pd, r.pd_holonomy);
    max_diff = std::max(max_diff, std::abs(r.pd_holonomy - r.pd_tdse));
    max_leak = std::max(max_leak, r.leakage);
    max_drift = std::max(max_drift, r.norm_drift);
  }
  const bool agree = max_diff <= kAgreementThreshold && max_leak <= kLeakageThreshold &&
                     (c.params.decay() || max_drift <= kNormDriftThreshold);
  const bool magnitude = max_pd >= min_pd;
  std::cerr << "max P_d = " << num(max_pd) << " (published maximum about " << num(kPublishedMaxPd)
            << "; required >= " << num(min_pd) << ")\n"
            << "max |pd_holonomy - pd_tdse| = " << num(max_diff) << ", max leakage = " << num(max_leak)
            << ", max norm drift = " << num(max_drift) << '\n'
            << "agreement gate " << (agree ? "PASS" : "FAIL") << ", magnitude gate " << (magnitude ? "PASS" : "FAIL")
            << '\n';
  return agree && magnitude ? kExitPass : kExitGate;
}

int run_report(const CommonOptions& o) {
  const auto c = resolve(o, false);
  const auto rep = two_method_report(c);
  auto doc = report_to_json(rep);
  doc["config"] = config_to_json(c);
  write_text(doc.dump(2) + "\n", c.output);
  std::cerr << "two-method report: " << (rep.pass ? "PASS" : "FAIL") << '\n';
  for (const auto& f : rep.failures) std::cerr << "  " << f << '\n';
  return rep.pass ? kExitPass : kExitGate;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-Abelian gauge structure of the Lambda system: holonomies, curvature and dynamics"};
  app.require_subcommand(1);

  CommonOptions opts;
  int status = kExitPass;

  double theta0 = kPi / 4;
  auto* abelian = app.add_subcommand("abelian-loop", "Wilson loop of the diagonal surrogate on a theta0 circle");
  add_common(abelian, opts);
  abelian->add_option("--theta0", theta0, "circle latitude")->check(CLI::Range(0.0, kPi / 2));

  std::size_t n_theta = 100, n_phi = 100;
  auto* curv = app.add_subcommand("curvature-map", "||F|| over a (theta, phi) grid");
  add_common(curv, opts);
  curv->add_option("--n-theta", n_theta, "theta samples")->check(CLI::PositiveNumber);
  curv->add_option("--n-phi", n_phi, "phi samples")->check(CLI::PositiveNumber);

  std::vector<double> b{1.0, 0.0, 0.0};
  std::string branch = "minus";
  auto* spin = app.add_subcommand("spin-half", "spin-1/2 frame, adiabatic connection and monopole flux");
  add_common(spin, opts);
  spin->add_option("--field", b, "B = bx by bz")->expected(3);
  spin->add_option("--branch", branch, "plus or minus")->check(CLI::IsMember({"plus", "minus"}));

  int which = 1;
  bool full = false;
  auto* wilson = app.add_subcommand("wilson", "holonomy of one loop");
  add_common(wilson, opts);
  wilson->add_option("--loop", which, "1 or 2")->check(CLI::IsMember({1, 2}));
  wilson->add_flag("--full", full, "unprojected 3x3 connection");

  std::string method = "both";
  auto* compose = app.add_subcommand("compose", "population difference between the two loop orders");
  add_common(compose, opts);
  compose->add_option("--method", method, "holonomy, tdse or both")
      ->check(CLI::IsMember({"holonomy", "tdse", "both"}));

  auto* evolve_cmd = app.add_subcommand("evolve", "Schroedinger evolution around one loop");
  add_common(evolve_cmd, opts);
  evolve_cmd->add_option("--loop", which, "1 or 2")->check(CLI::IsMember({1, 2}));

  double min_pd = 0.05;
  auto* scan = app.add_subcommand("scan", "P_d versus alpha, both methods");
  add_common(scan, opts);
  scan->add_option("--min-pd", min_pd, "magnitude gate on max P_d");

  auto* report = app.add_subcommand("report", "holonomy versus TDSE comparison");
  add_common(report, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitError;
  }

  try {
    if (*abelian) status = run_abelian_loop(opts, theta0);
    else if (*curv) status = run_curvature_map(opts, n_theta, n_phi);
    else if (*spin) status = run_spin_half(opts, b, branch);
    else if (*wilson) status = run_wilson(opts, which, full);
    else if (*compose) status = run_compose(opts, method);
    else if (*evolve_cmd) status = run_evolve(opts, which);
    else if (*scan) status = run_scan(opts, min_pd);
    else if (*report) status = run_report(opts);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return status;
}
