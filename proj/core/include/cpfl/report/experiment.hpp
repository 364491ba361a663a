#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cpfl/report/config.hpp"
#include "cpfl/sim/engine.hpp"

namespace cpfl::report {

/// Everything the simulation and distillation stages consume, derived
/// deterministically from an ExperimentConfig.
struct PreparedExperiment {
  sim::SimulationInput sim;
  data::LabeledDataset test_set;
  data::UnlabeledDataset public_set;
  std::vector<data::LabeledDataset> client_data;  // full local data, by client id
};

PreparedExperiment prepare_experiment(const ExperimentConfig& config);

struct CohortRecord {
  int cohort = 0;
  int clients = 0;
  std::int64_t samples = 0;
  int rounds = 0;
  double finish_time_s = 0.0;
  double compute_s = 0.0;
  std::uint64_t bytes = 0;
  bool cap_hit = false;
};

/// Per-run results: accuracy metrics, timing, resource totals, the cohort
/// finish-time ECDF, per-cohort records, and the per-round event rows.
struct RunReport {
  ExperimentConfig config;
  double student_accuracy = 0.0;
  double teacher_accuracy_mean = 0.0;
  double teacher_accuracy_std = 0.0;
  double delta = 0.0;  // student - mean teacher
  double finish_time_s = 0.0;
  double compute_s = 0.0;
  std::uint64_t bytes = 0;
  double kd_time_s = 0.0;  // simulated; excluded from finish_time_s
  std::uint64_t model_bytes = 0;
  int rounds_total = 0;
  int cap_hit_cohorts = 0;
  std::vector<std::pair<double, double>> ecdf;
  std::vector<CohortRecord> cohorts;
  std::vector<sim::RoundUsage> events;
};

/// Stage 1 (parallel cohort FedAvg sessions) + stage 2 (weighted-logit
/// distillation) + evaluation on the held-out test set. Deterministic in the
/// config, including the worker count.
RunReport run_experiment(const ExperimentConfig& config);

/// Writes summary.csv, ecdf.csv, cohorts.csv and (when enabled) events.csv
/// with fixed 6-decimal formatting. Reruns produce identical bytes.
void emit_report(const RunReport& report, const std::string& out_dir);

/// Saves per-cohort model checkpoints and label distributions plus a
/// manifest (bundles.csv) under `dir`.
void save_bundles(const std::vector<sim::CohortModelBundle>& bundles, const std::string& dir);
std::vector<sim::CohortModelBundle> load_bundles(const std::string& dir);

}  // namespace cpfl::report
