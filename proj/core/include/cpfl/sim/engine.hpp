#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "cpfl/data/dataset.hpp"
#include "cpfl/fl/local.hpp"
#include "cpfl/nn/model.hpp"
#include "cpfl/nn/optimizer.hpp"
#include "cpfl/sim/ledger.hpp"
#include "cpfl/traces/traces.hpp"

namespace cpfl::sim {

/// One cohort's clients with their prepared data and device profiles.
/// Vectors are parallel to client_ids (ascending global ids).
struct CohortSpec {
  int cohort_index = 0;
  std::vector<int> client_ids;
  std::vector<data::LabeledDataset> train_sets;
  std::vector<std::optional<data::LabeledDataset>> val_sets;
  std::vector<traces::DeviceProfile> profiles;
  std::vector<data::LabelDistribution> label_dists;  // full local data
};

struct FlConfig {
  double participation_rate = 1.0;
  fl::LocalWork work = fl::LocalWork::epochs(1);
  int batch_size = 20;
  nn::OptimizerConfig optimizer;
  int window = 20;
  int patience = 50;
  int round_cap = 5000;
  std::uint64_t model_bytes = 0;  // checkpoint serialization length
};

/// Converged cohort model plus the metadata the global server needs.
struct CohortModelBundle {
  int cohort_index = 0;
  nn::MlpModel model;
  data::LabelDistribution label_distribution;
  double finish_time_s = 0.0;
  int rounds = 0;
  bool cap_hit = false;
};

/// Snapshot of one synchronous round, exposed through the observer hook.
struct RoundResult {
  int round = 0;
  nn::MlpModel aggregated_model;
  std::optional<double> mean_val_loss;  // absent when no participant reports
  double loss_signal = 0.0;             // value fed to the stopping criterion
  double duration_s = 0.0;
  double compute_s = 0.0;
  std::uint64_t bytes = 0;
};

struct CohortSessionResult {
  CohortModelBundle bundle;
  std::vector<RoundUsage> rounds;
  std::vector<ClientUsage> client_usage;  // parallel to spec.client_ids
  std::vector<double> loss_series;        // per-round stopping signal
};

/// Runs FedAvg rounds until the stopping criterion fires or the round cap is
/// hit (flagged, not an error). Per round: participants are sampled, train
/// locally from the current cohort model, the cohort clock advances by the
/// slowest participant, and every participant is charged its batches and
/// 2 x model_bytes. Seed tree (reproduced by reference implementations):
///   sample_base = derive_seed(cohort_seed, "sample"), passed per round to
///     fl::sample_participants;
///   local seed  = derive_seed(derive_seed(derive_seed(cohort_seed, "local"),
///     round), client_id).
/// Validation: after aggregation, each participant owning a validation set
/// evaluates the new model; the plain mean is the stopping signal. With no
/// reporter the mean train loss of the round's updates is used instead.
CohortSessionResult run_cohort_session(
    const CohortSpec& spec, const nn::MlpModel& initial_model, const FlConfig& config,
    std::uint64_t cohort_seed,
    const std::function<void(const RoundResult&)>& on_round = {});

struct SimClock {
  std::vector<double> cohort_time_s;
  double global_finish_s = 0.0;  // max over cohorts
};

struct SimulationInput {
  nn::MlpModel initial_model;
  std::vector<CohortSpec> cohorts;
  FlConfig fl;
  std::uint64_t master_seed = 0;
  int workers = 1;
};

struct SimulationResult {
  std::vector<CohortModelBundle> bundles;
  SimClock clock;
  ResourceLedger ledger;
};

/// Runs all cohort sessions independently (optionally on several worker
/// threads; results are a pure function of the input either way) and merges
/// the ledger in cohort order. Per-cohort seeds are
/// derive_seed(derive_seed(master_seed, "cohort"), cohort_index).
/// Structural inconsistencies (misaligned spec arrays, duplicate clients)
/// are rejected before any simulation.
SimulationResult run_simulation(const SimulationInput& input);

/// Step-function ECDF of cohort finish times: sorted (time, fraction <= time)
/// pairs, duplicates merged, final fraction 1.0.
std::vector<std::pair<double, double>> finish_time_ecdf(
    const std::vector<CohortModelBundle>& bundles);

}  // namespace cpfl::sim
