#include "lgp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lgp/kernels.hpp"

namespace lgp {

namespace {

using nlohmann::json;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::string kind_name(ConnectionKind k) {
  switch (k) {
    case ConnectionKind::lambda_doublet: return "lambda";
    case ConnectionKind::large_detuning: return "large-detuning";
    case ConnectionKind::abelian: return "abelian";
  }
  return "lambda";
}

ConnectionKind kind_from_name(const std::string& s) {
  if (s == "lambda") return ConnectionKind::lambda_doublet;
  if (s == "large-detuning") return ConnectionKind::large_detuning;
  if (s == "abelian") return ConnectionKind::abelian;
  throw Error(Errc::invalid_spec, "unknown connection '" + s + "'");
}

Lissajous with_alpha_beta(const LoopSpec& spec, double alpha, double beta) {
  const auto* l = std::get_if<Lissajous>(&spec.shape);
  if (!l) throw Error(Errc::invalid_spec, "alpha/beta scans need lissajous loops");
  Lissajous out = *l;
  out.alpha = alpha;
  out.beta = beta;
  return out;
}

std::array<double, 3> populations_after(const Matrix3& frame, const Matrix2& w, const QuantumState& psi0) {
  const Vector<3> c = frame.adjoint() * psi0.amplitudes;
  const Vector<3> moved{w(0, 0) * c[0] + w(0, 1) * c[1], w(1, 0) * c[0] + w(1, 1) * c[1], c[2]};
  return populations(QuantumState{frame * moved});
}

}  // namespace

double ExperimentConfig::time_step() const { return dt > 0.0 ? dt : max_time_step(params); }

ExperimentConfig default_config() { return ExperimentConfig{}; }

json loop_to_json(const LoopSpec& spec) {
  return std::visit(overloaded{
                        [](const Circle& c) { return json{{"type", "circle"}, {"theta0", c.theta0}}; },
                        [](const Lissajous& l) {
                          return json{{"type", "lissajous"},       {"alpha", l.alpha},
                                      {"beta", l.beta},            {"theta_amp", l.theta_amp},
                                      {"phi_amp", l.phi_amp},      {"phase_offset", l.phase_offset}};
                        },
                        [](const Stationary& p) {
                          return json{{"type", "stationary"}, {"theta", p.theta}, {"phi", p.phi}};
                        },
                        [](const Composite& c) {
                          json parts = json::array();
                          for (const auto& p : c.parts) parts.push_back(loop_to_json(p));
                          return json{{"type", "composite"}, {"parts", parts}};
                        },
                    },
                    spec.shape);
}

LoopSpec loop_from_json(const json& doc) {
  const auto type = doc.at("type").get<std::string>();
  if (type == "circle") return {Circle{doc.at("theta0").get<double>()}};
  if (type == "lissajous") {
    Lissajous l;
    l.alpha = doc.value("alpha", l.alpha);
    l.beta = doc.value("beta", l.beta);
    l.theta_amp = doc.value("theta_amp", l.theta_amp);
    l.phi_amp = doc.value("phi_amp", l.phi_amp);
    l.phase_offset = doc.value("phase_offset", l.phase_offset);
    return {l};
  }
  if (type == "stationary") return {Stationary{doc.value("theta", 0.0), doc.value("phi", 0.0)}};
  if (type == "composite") {
    Composite c;
    for (const auto& p : doc.at("parts")) c.parts.push_back(loop_from_json(p));
    return {c};
  }
  throw Error(Errc::invalid_spec, "unknown loop type '" + type + "'");
}

ExperimentConfig config_from_json(const json& doc, ExperimentConfig c) {
  try {
    const double delta = doc.value("delta", c.params.delta());
    const double omega = doc.value("omega", c.params.omega());
    std::optional<double> decay = c.params.decay();
    if (doc.contains("decay")) decay = doc["decay"].is_null() ? std::nullopt : std::optional(doc["decay"].get<double>());
    c.params = LambdaParams(delta, omega, decay);
    if (doc.contains("loop1")) c.loop1 = loop_from_json(doc["loop1"]);
    if (doc.contains("loop2")) c.loop2 = loop_from_json(doc["loop2"]);
    c.duration = doc.value("duration", c.duration);
    c.dt = doc.value("dt", c.dt);
    c.wilson_steps = doc.value("wilson_steps", c.wilson_steps);
    if (doc.contains("initial_state")) {
      const auto& s = doc["initial_state"];
      if (s.is_number_integer()) {
        c.initial_state = QuantumState::basis(s.get<std::size_t>());
      } else {
        // [[re, im], [re, im], [re, im]]
        for (std::size_t k = 0; k < 3; ++k) c.initial_state.amplitudes[k] = {s.at(k).at(0), s.at(k).at(1)};
      }
    }
    if (doc.contains("connection")) c.connection = kind_from_name(doc["connection"].get<std::string>());
    if (doc.contains("alphas")) c.alphas = doc["alphas"].get<std::vector<double>>();
    c.beta = doc.value("beta", c.beta);
    if (doc.contains("format")) {
      const auto f = doc["format"].get<std::string>();
      if (f != "csv" && f != "json") throw Error(Errc::invalid_spec, "format must be csv or json");
      c.format = f == "json" ? OutputFormat::json : OutputFormat::csv;
    }
    c.output = doc.value("output", c.output);
    c.seed = doc.value("seed", c.seed);
    c.workers = doc.value("workers", c.workers);
  } catch (const json::exception& e) {
    throw Error(Errc::invalid_spec, std::string("config: ") + e.what());
  }
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json state = json::array();
  for (const auto& a : c.initial_state.amplitudes) state.push_back({a.real(), a.imag()});
  json doc{
      {"delta", c.params.delta()},
      {"omega", c.params.omega()},
      {"loop1", loop_to_json(c.loop1)},
      {"loop2", loop_to_json(c.loop2)},
      {"duration", c.duration},
      {"dt", c.dt},
      {"wilson_steps", c.wilson_steps},
      {"initial_state", state},
      {"connection", kind_name(c.connection)},
      {"alphas", c.alphas},
      {"beta", c.beta},
      {"format", c.format == OutputFormat::json ? "json" : "csv"},
      {"output", c.output},
      {"seed", c.seed},
      {"workers", c.workers},
  };
  doc["decay"] = c.params.decay() ? json(*c.params.decay()) : json(nullptr);
  return doc;
}

std::unique_ptr<GaugeField<2>> make_field(ConnectionKind kind, const LambdaParams& params) {
  switch (kind) {
    case ConnectionKind::lambda_doublet: return std::make_unique<LambdaDoubletField>(gamma_angle(params));
    case ConnectionKind::large_detuning: return std::make_unique<LargeDetuningField>();
    case ConnectionKind::abelian: return std::make_unique<AbelianTestField>();
  }
  throw Error(Errc::invalid_spec, "unknown connection kind");
}

Matrix3 embedding_frame(ConnectionKind kind, const LambdaParams& params, const ParamPoint& p) {
  Matrix3 g = frame_matrix({p.theta, p.phi, gamma_angle(params)});
  if (kind == ConnectionKind::large_detuning) {
    for (std::size_t i = 0; i < 3; ++i) std::swap(g(i, 0), g(i, 1));
  }
  return g;
}

ComposedResult composed_path_pd(const ExperimentConfig& config, Method method) {
  validate(config.loop1);
  validate(config.loop2);
  const ParamPoint base = point_at(config.loop1, 0.0);
  const Matrix3 frame = embedding_frame(config.connection, config.params, base);
  const Matrix3 other = embedding_frame(config.connection, config.params, point_at(config.loop2, 0.0));
  if ((frame - other).frobenius_norm() > 1e-12)
    throw Error(Errc::invalid_spec, "loop1 and loop2 must start at the same frame point");

  ComposedResult r;
  if (method == Method::holonomy) {
    const auto field = make_field(config.connection, config.params);
    const auto w1 = wilson_loop(discretize(config.loop1, config.wilson_steps), *field);
    const auto w2 = wilson_loop(discretize(config.loop2, config.wilson_steps), *field);
    r.order_a = populations_after(frame, w2.matrix * w1.matrix, config.initial_state);
    r.order_b = populations_after(frame, w1.matrix * w2.matrix, config.initial_state);
    r.commutator_norm = loop_commutator_norm(w1, w2);
    r.richardson_error = std::max(w1.richardson_error, w2.richardson_error);
  } else {
    const double dt = config.time_step();
    const LoopSchedule a(LoopSpec{Composite{{config.loop1, config.loop2}}}, 2.0 * config.duration);
    const LoopSchedule b(LoopSpec{Composite{{config.loop2, config.loop1}}}, 2.0 * config.duration);
    const auto ra = evolve(a, config.params, config.initial_state, dt);
    const auto rb = evolve(b, config.params, config.initial_state, dt);
    r.order_a = ra.populations;
    r.order_b = rb.populations;
    r.leakage = std::max(doublet_leakage(config.params, a.at(a.duration()), ra.final_state),
                         doublet_leakage(config.params, b.at(b.duration()), rb.final_state));
    r.norm_drift = std::max(ra.norm_drift, rb.norm_drift);
  }
  r.pd = std::abs(r.order_a[0] - r.order_b[0]);
  return r;
}

ScanRow scan_row(const ExperimentConfig& config, double alpha, double beta) {
  ExperimentConfig c = config;
  c.loop1 = LoopSpec{with_alpha_beta(config.loop1, alpha, beta)};
  c.loop2 = LoopSpec{with_alpha_beta(config.loop2, alpha, beta)};
  const auto h = composed_path_pd(c, Method::holonomy);
  const auto t = composed_path_pd(c, Method::tdse);
  return {alpha, beta, h.pd, t.pd, h.commutator_norm, t.leakage, h.richardson_error, t.norm_drift};
}

std::vector<ScanRow> alpha_scan(const ExperimentConfig& config, const std::vector<double>& alphas, double beta) {
  return parallel::alpha_scan(config, alphas, beta);
}

TwoMethodReport two_method_report(const ExperimentConfig& config) {
  TwoMethodReport rep;
  rep.holonomy = composed_path_pd(config, Method::holonomy);
  rep.tdse = composed_path_pd(config, Method::tdse);
  for (std::size_t k = 0; k < 3; ++k) {
    rep.diff_order_a[k] = std::abs(rep.holonomy.order_a[k] - rep.tdse.order_a[k]);
    rep.diff_order_b[k] = std::abs(rep.holonomy.order_b[k] - rep.tdse.order_b[k]);
    rep.max_population_difference =
        std::max({rep.max_population_difference, rep.diff_order_a[k], rep.diff_order_b[k]});
  }
  rep.pd_difference = std::abs(rep.holonomy.pd - rep.tdse.pd);
  rep.dynamical_phase_bound = std::abs(spectrum(config.params).lower) * 2.0 * config.duration;
  rep.leakage = rep.tdse.leakage;
  rep.norm_drift = rep.tdse.norm_drift;

  if (rep.pd_difference > kAgreementThreshold)
    rep.failures.push_back("P_d differs between methods by " + format_number(rep.pd_difference));
  if (rep.max_population_difference > kAgreementThreshold)
    rep.failures.push_back("populations differ between methods by " + format_number(rep.max_population_difference));
  if (rep.leakage > kLeakageThreshold)
    rep.failures.push_back("non-adiabatic: doublet leakage " + format_number(rep.leakage));
  if (!config.params.decay() && rep.norm_drift > kNormDriftThreshold)
    rep.failures.push_back("norm drift " + format_number(rep.norm_drift));
  rep.pass = rep.failures.empty();
  return rep;
}

json report_to_json(const TwoMethodReport& r) {
  auto method = [](const ComposedResult& c) {
    return json{{"pd", c.pd},
                {"order_a", c.order_a},
                {"order_b", c.order_b},
                {"commutator_norm", c.commutator_norm},
                {"richardson_error", c.richardson_error},
                {"leakage", c.leakage},
                {"norm_drift", c.norm_drift}};
  };
  return json{{"holonomy", method(r.holonomy)},
              {"tdse", method(r.tdse)},
              {"diff_order_a", r.diff_order_a},
              {"diff_order_b", r.diff_order_b},
              {"pd_difference", r.pd_difference},
              {"max_population_difference", r.max_population_difference},
              {"dynamical_phase_bound", r.dynamical_phase_bound},
              {"leakage", r.leakage},
              {"norm_drift", r.norm_drift},
              {"threshold", kAgreementThreshold},
              {"pass", r.pass},
              {"failures", r.failures}};
}

// ---------------------------------------------------------------------------

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string format_rows(const std::vector<ScanRow>& rows, OutputFormat format) {
  std::ostringstream os;
  if (format == OutputFormat::csv) {
    os << kCsvHeader << '\n';
    for (const auto& r : rows) {
      os << format_number(r.alpha) << ',' << format_number(r.beta) << ',' << format_number(r.pd_holonomy) << ','
         << format_number(r.pd_tdse) << ',' << format_number(r.commutator_norm) << ',' << format_number(r.leakage)
         << ',' << format_number(r.richardson_error) << '\n';
    }
    return os.str();
  }
  // Values go through the 12-digit text form so both formats carry the same numbers.
  auto rounded = [](double v) { return std::stod(format_number(v)); };
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back(json{{"alpha", rounded(r.alpha)},
                       {"beta", rounded(r.beta)},
                       {"pd_holonomy", rounded(r.pd_holonomy)},
                       {"pd_tdse", rounded(r.pd_tdse)},
                       {"commutator_norm", rounded(r.commutator_norm)},
                       {"leakage", rounded(r.leakage)},
                       {"richardson_error", rounded(r.richardson_error)}});
  }
  os << arr.dump(2) << '\n';
  return os.str();
}

void emit(const std::vector<ScanRow>& rows, OutputFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_failure, "cannot open '" + path + "' for writing");
  out << format_rows(rows, format);
  out.flush();
  if (!out) throw Error(Errc::io_failure, "write to '" + path + "' failed");
}

std::vector<ScanRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw Error(Errc::invalid_spec, "unexpected CSV header");
  std::vector<ScanRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::array<double, 7> v{};
    std::istringstream fields(line);
    std::string cell;
    std::size_t k = 0;
    while (std::getline(fields, cell, ',')) {
      if (k >= v.size()) throw Error(Errc::invalid_spec, "too many CSV fields");
      v[k++] = std::stod(cell);
    }
    if (k != v.size()) throw Error(Errc::invalid_spec, "too few CSV fields");
    rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6]});
  }
  return rows;
}

std::vector<ScanRow> load_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_failure, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

}  // namespace lgp
