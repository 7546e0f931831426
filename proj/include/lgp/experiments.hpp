#pragma once

// Composed-path order dependence, alpha scans and the holonomy-vs-TDSE
// comparison, plus CSV/JSON emission.

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "lgp/dynamics.hpp"
#include "lgp/holonomy.hpp"
#include "lgp/lambda_gauge.hpp"

namespace lgp {

/// Connection used by the holonomy method.
enum class ConnectionKind { lambda_doublet, large_detuning, abelian };
enum class Method { holonomy, tdse };
enum class OutputFormat { csv, json };

struct ExperimentConfig {
  LambdaParams params{1000.0, 1.0};
  LoopSpec loop1{Lissajous{0.8, 0.5, kPi / 2, kPi, 0.0}};
  LoopSpec loop2{Lissajous{0.8, 0.5, kPi / 2, kPi, kPi / 2}};
  /// Omega T of each loop.
  double duration = 50.0;
  /// 0 selects max_time_step(params).
  double dt = 0.0;
  std::size_t wilson_steps = 4000;
  QuantumState initial_state = QuantumState::basis(0);
  ConnectionKind connection = ConnectionKind::lambda_doublet;
  std::vector<double> alphas{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  double beta = 0.5;
  OutputFormat format = OutputFormat::csv;
  std::string output;  // empty: stdout
  std::uint64_t seed = 20120901;
  int workers = 0;  // 0: OpenMP default

  double time_step() const;
};

ExperimentConfig default_config();

/// Overrides `base` with whatever fields the document carries.
ExperimentConfig config_from_json(const nlohmann::json& doc, ExperimentConfig base = default_config());
nlohmann::json config_to_json(const ExperimentConfig& config);
nlohmann::json loop_to_json(const LoopSpec& spec);
LoopSpec loop_from_json(const nlohmann::json& doc);

std::unique_ptr<GaugeField<2>> make_field(ConnectionKind kind, const LambdaParams& params);
/// Frame whose first two columns carry the doublet amplitudes for `kind`.
Matrix3 embedding_frame(ConnectionKind kind, const LambdaParams& params, const ParamPoint& p);

struct ComposedResult {
  double pd = 0.0;
  /// Populations after loop1 then loop2 (a) and loop2 then loop1 (b).
  std::array<double, 3> order_a{};
  std::array<double, 3> order_b{};
  // holonomy method
  double commutator_norm = 0.0;
  double richardson_error = 0.0;
  // tdse method
  double leakage = 0.0;
  double norm_drift = 0.0;
};

/// P_d = |P_1(order a) - P_1(order b)|. The two loops must share a base point.
ComposedResult composed_path_pd(const ExperimentConfig& config, Method method);

struct ScanRow {
  double alpha = 0.0;
  double beta = 0.0;
  double pd_holonomy = 0.0;
  double pd_tdse = 0.0;
  double commutator_norm = 0.0;
  double leakage = 0.0;
  double richardson_error = 0.0;
  /// Not emitted; kept for the acceptance gate.
  double norm_drift = 0.0;
};

/// Both methods at one (alpha, beta); both loops must be Lissajous.
ScanRow scan_row(const ExperimentConfig& config, double alpha, double beta);

/// One row per alpha in grid order, evaluated with the OpenMP kernel.
std::vector<ScanRow> alpha_scan(const ExperimentConfig& config, const std::vector<double>& alphas, double beta);

inline constexpr double kAgreementThreshold = 0.02;
inline constexpr double kNormDriftThreshold = 1e-8;

struct TwoMethodReport {
  ComposedResult holonomy;
  ComposedResult tdse;
  std::array<double, 3> diff_order_a{};
  std::array<double, 3> diff_order_b{};
  double pd_difference = 0.0;
  double max_population_difference = 0.0;
  double dynamical_phase_bound = 0.0;
  double leakage = 0.0;
  double norm_drift = 0.0;
  bool pass = false;
  std::vector<std::string> failures;
};

TwoMethodReport two_method_report(const ExperimentConfig& config);
nlohmann::json report_to_json(const TwoMethodReport& report);

inline constexpr const char* kCsvHeader = "alpha,beta,pd_holonomy,pd_tdse,commutator_norm,leakage,richardson_error";

/// 12 significant digits.
std::string format_number(double v);
std::string format_rows(const std::vector<ScanRow>& rows, OutputFormat format);
/// Throws IoFailure.
void emit(const std::vector<ScanRow>& rows, OutputFormat format, const std::string& path);
std::vector<ScanRow> parse_csv(const std::string& text);
std::vector<ScanRow> load_csv(const std::string& path);

}  // namespace lgp
