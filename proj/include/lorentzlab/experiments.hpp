#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lorentzlab {

/// Shared configuration for the experiment runners; parsed from a strict
/// JSON object (unknown keys rejected).
struct ExperimentConfig {
  std::uint64_t seed = 1;
  std::uint32_t dims = 8;
  std::uint32_t trials = 16;
  double epsilon = 0.05;
  double t = 1.0;
  std::optional<double> tol_abs;
  std::optional<double> tol_rel;
};

ExperimentConfig parse_config(const std::string& json_text);
std::string config_to_json(const ExperimentConfig& cfg);
std::uint64_t config_digest(const ExperimentConfig& cfg);

struct TrialRecord {
  std::uint32_t index = 0;
  std::uint64_t input_digest = 0;  // digest of the sampled trial inputs
  double defect = 0.0;
  double bound = 0.0;
  bool pass = false;
  bool excluded = false;
  std::string note;
};

struct ExperimentReport {
  std::string experiment;
  std::uint64_t config_digest = 0;
  std::vector<TrialRecord> trials;
  double max_defect = 0.0;
  bool pass = false;
  double wall_ms = 0.0;
  /// Digest of everything above except wall_ms; identical configs produce
  /// identical digests regardless of timing.
  std::uint64_t report_digest = 0;

  std::string to_json(int indent = 2) const;
  std::string to_csv() const;  // header trial,defect,bound,pass
};

ExperimentReport run_dense_conjugacy(const ExperimentConfig& cfg);
ExperimentReport run_no_dense_conjugacy(const ExperimentConfig& cfg);
ExperimentReport run_steinhaus(const ExperimentConfig& cfg);
ExperimentReport run_compactification_suite(const ExperimentConfig& cfg);
ExperimentReport run_decompositions(const ExperimentConfig& cfg);
ExperimentReport run_weak_continuity(const ExperimentConfig& cfg);

/// Dispatch by CLI subcommand name (dense-conjugacy, no-dense-conjugacy,
/// steinhaus, compactification, decompositions, weak-continuity).
ExperimentReport run_experiment(const std::string& name,
                                const ExperimentConfig& cfg);
std::vector<std::string> experiment_names();

}  // namespace lorentzlab
