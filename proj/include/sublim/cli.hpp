#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sublim/convergence.hpp"
#include "sublim/sequences.hpp"

namespace sublim::cli {

/// Malformed configuration; `field` names the offending key path.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what);
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

enum ExitCode : int {
  kConverges = 0,
  kDoesNotConverge = 1,
  kInconclusive = 2,
  kUsageError = 3,
  kComputationError = 4,
};

struct SequenceSpec {
  std::string builtin;  // example33 | example36 | constant | "" for a family
  sequences::Example33Variant variant = sequences::Example33Variant::Amended;
  std::optional<sequences::RotationFamily> family;
  std::vector<Vector> basis;  // constant sequences
};

struct ExperimentConfig {
  SequenceSpec sequence;
  std::vector<Vector> candidate;  // rows spanning V; empty = the built-in's own V
  std::optional<Ideal> ideal;     // empty = the built-in's recommended ideal
  std::size_t horizon = 1000;
  std::vector<double> eps_grid = kDefaultEpsGrid;
  std::string report_path = "report.json";
  std::string trace_path = "trace.csv";

  /// horizon >= 16; eps grid strictly positive and strictly decreasing.
  void validate() const;
};

ExperimentConfig parse_config(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);

/// A manifest is either a single config or {"battery": [config, ...]} whose
/// entries inherit any top-level ideal / horizon / eps_grid they omit.
std::vector<ExperimentConfig> parse_manifest(const nlohmann::json& j);

struct Experiment {
  SubspaceSequence sequence;
  Subspace candidate;
  Ideal ideal;
};

Experiment build_experiment(const ExperimentConfig& c);

/// CSV with header n,gap,crit2_max_i,crit3_min_i,crit4_min_i,crit5_max_i and
/// 17 significant digits per float.
std::string trace_csv(const PointwiseTraces& traces);

nlohmann::json report_to_json(const ConvergenceReport& r);

/// The verdict content of a report, enough to compare two reports.
struct ReportVerdicts {
  Verdict overall = Verdict::Inconclusive;
  std::map<std::string, Verdict> criteria;
  std::map<std::string, std::vector<Membership>> per_eps;

  friend bool operator==(const ReportVerdicts&, const ReportVerdicts&) = default;
};

ReportVerdicts summarize(const ConvergenceReport& r);
ReportVerdicts parse_report(const nlohmann::json& j);

/// Row-per-vector numeric matrix; whitespace or comma separated, '#' comments.
std::vector<Vector> read_matrix(std::istream& in);
std::vector<Vector> read_matrix_file(const std::filesystem::path& p);

struct RunOutcome {
  int exit_code = kUsageError;
  std::vector<ConvergenceReport> reports;
};

/// Full five-criterion run; writes the report and trace into out_dir and exits
/// with the criterion (i) verdict.
RunOutcome run_analyze(const ExperimentConfig& c, const std::filesystem::path& out_dir, std::ostream& out);
/// Same outputs for every manifest entry; exit 0 iff every entry's
/// non-Inconclusive criteria agree.
RunOutcome run_suite(const std::vector<ExperimentConfig>& configs, const std::filesystem::path& out_dir,
                     std::ostream& out);
int run_gap(const std::filesystem::path& u, const std::filesystem::path& v, std::ostream& out);

/// argv entry point. Returns the process exit code.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace sublim::cli
