#include "cpfl/sim/engine.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <stdexcept>
#include <thread>

#include "cpfl/data/partition.hpp"
#include "cpfl/fl/cohort.hpp"
#include "cpfl/fl/fedavg.hpp"
#include "cpfl/fl/stopping.hpp"
#include "cpfl/nn/loss.hpp"

namespace cpfl::sim {

namespace {

void validate_spec(const CohortSpec& spec) {
  const std::size_t k = spec.client_ids.size();
  if (k == 0) throw std::invalid_argument("cohort " + std::to_string(spec.cohort_index) + " is empty");
  if (spec.train_sets.size() != k || spec.val_sets.size() != k || spec.profiles.size() != k ||
      spec.label_dists.size() != k)
    throw std::invalid_argument("cohort " + std::to_string(spec.cohort_index) +
                                ": client without data or profile");
  for (std::size_t i = 1; i < k; ++i)
    if (spec.client_ids[i] <= spec.client_ids[i - 1])
      throw std::invalid_argument("cohort client ids must be ascending and unique");
}

}  // namespace

CohortSessionResult run_cohort_session(const CohortSpec& spec, const nn::MlpModel& initial_model,
                                       const FlConfig& config, std::uint64_t cohort_seed,
                                       const std::function<void(const RoundResult&)>& on_round) {
  validate_spec(spec);

  CohortSessionResult result;
  result.client_usage.assign(spec.client_ids.size(), ClientUsage{});
  result.bundle.cohort_index = spec.cohort_index;
  result.bundle.label_distribution = data::aggregate_label_distributions(spec.label_dists);
  result.bundle.model = initial_model;

  std::map<int, std::size_t> local_index;
  for (std::size_t i = 0; i < spec.client_ids.size(); ++i) local_index[spec.client_ids[i]] = i;

  std::size_t total_rows = 0;
  for (const auto& train : spec.train_sets) total_rows += train.size();
  if (total_rows == 0) {
    // Nothing to train on; the cohort still ships its (initial) model.
    return result;
  }

  const std::uint64_t sample_base = derive_seed(cohort_seed, "sample");
  const std::uint64_t local_base = derive_seed(cohort_seed, "local");

  auto stopping = fl::StoppingState::create(config.window, config.patience);
  double clock_s = 0.0;
  bool have_signal = false;
  double last_signal = 0.0;

  for (int round = 1; round <= config.round_cap; ++round) {
    const auto participants =
        fl::sample_participants(spec.client_ids, config.participation_rate, round, sample_base);

    std::vector<nn::MlpModel> updates;
    std::vector<double> update_weights;
    std::vector<double> train_losses;
    std::vector<std::size_t> updaters;  // local indices, ascending
    double round_duration = 0.0;
    double round_compute = 0.0;
    std::uint64_t round_bytes = 0;

    for (int client_id : participants) {
      const std::size_t i = local_index.at(client_id);
      const std::uint64_t seed = derive_seed(derive_seed(local_base, static_cast<std::uint64_t>(round)),
                                             static_cast<std::uint64_t>(client_id));
      auto update = fl::local_update(result.bundle.model, spec.train_sets[i], config.work,
                                     config.batch_size, config.optimizer, seed);
      if (!update) continue;  // dataless client: skipped, no time or traffic

      const double duration =
          traces::client_round_duration(spec.profiles[i], config.model_bytes, update->batches);
      round_duration = std::max(round_duration, duration);
      round_compute += static_cast<double>(update->batches) * spec.profiles[i].compute_sec_per_batch;
      round_bytes += 2 * config.model_bytes;

      auto& usage = result.client_usage[i];
      usage.compute_s += static_cast<double>(update->batches) * spec.profiles[i].compute_sec_per_batch;
      usage.bytes_down += config.model_bytes;
      usage.bytes_up += config.model_bytes;

      updates.push_back(std::move(update->model));
      update_weights.push_back(static_cast<double>(spec.train_sets[i].size()));
      train_losses.push_back(update->train_loss);
      updaters.push_back(i);
    }

    std::optional<double> mean_val;
    if (!updates.empty()) {
      result.bundle.model = fl::fedavg_aggregate(updates, update_weights);

      double val_sum = 0.0;
      int reporters = 0;
      for (std::size_t i : updaters) {
        if (!spec.val_sets[i]) continue;
        val_sum += nn::evaluate(result.bundle.model, *spec.val_sets[i]).mean_loss;
        ++reporters;
      }
      if (reporters > 0) mean_val = val_sum / static_cast<double>(reporters);

      double signal;
      if (mean_val) {
        signal = *mean_val;
      } else {
        double train_sum = 0.0;
        for (double loss : train_losses) train_sum += loss;
        signal = train_sum / static_cast<double>(train_losses.size());
      }
      last_signal = signal;
      have_signal = true;
    }
    // A round whose sampled participants were all dataless repeats the last
    // signal (counts as no improvement); before any signal it just elapses.

    clock_s += round_duration;
    result.bundle.rounds = round;

    bool stop = false;
    if (have_signal) {
      stop = fl::smooth_and_check(stopping, last_signal);
      result.loss_series.push_back(last_signal);
    }

    RoundUsage usage;
    usage.cohort = spec.cohort_index;
    usage.round = round;
    usage.duration_s = round_duration;
    usage.loss_signal = have_signal ? last_signal : 0.0;
    usage.compute_s = round_compute;
    usage.bytes = round_bytes;
    result.rounds.push_back(usage);

    if (on_round) {
      RoundResult snapshot;
      snapshot.round = round;
      snapshot.aggregated_model = result.bundle.model;
      snapshot.mean_val_loss = mean_val;
      snapshot.loss_signal = usage.loss_signal;
      snapshot.duration_s = round_duration;
      snapshot.compute_s = round_compute;
      snapshot.bytes = round_bytes;
      on_round(snapshot);
    }

    if (stop) break;
    if (round == config.round_cap) result.bundle.cap_hit = true;
  }

  result.bundle.finish_time_s = clock_s;
  return result;
}

SimulationResult run_simulation(const SimulationInput& input) {
  if (input.cohorts.empty()) throw std::invalid_argument("run_simulation: no cohorts");

  int max_client = -1;
  std::vector<char> seen;
  for (const auto& spec : input.cohorts) {
    validate_spec(spec);
    for (int id : spec.client_ids) {
      if (id < 0) throw std::invalid_argument("run_simulation: negative client id");
      if (id > max_client) {
        max_client = id;
        seen.resize(static_cast<std::size_t>(max_client) + 1, 0);
      }
      if (seen[static_cast<std::size_t>(id)])
        throw std::invalid_argument("run_simulation: client " + std::to_string(id) +
                                    " assigned to more than one cohort");
      seen[static_cast<std::size_t>(id)] = 1;
    }
  }

  FlConfig fl_config = input.fl;
  fl_config.model_bytes = static_cast<std::uint64_t>(input.initial_model.serialize().size());

  const std::uint64_t cohort_base = derive_seed(input.master_seed, "cohort");
  const int n = static_cast<int>(input.cohorts.size());
  std::vector<CohortSessionResult> sessions(static_cast<std::size_t>(n));

  const int workers = std::max(1, std::min(input.workers, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i)
      sessions[static_cast<std::size_t>(i)] =
          run_cohort_session(input.cohorts[static_cast<std::size_t>(i)], input.initial_model,
                             fl_config, derive_seed(cohort_base, static_cast<std::uint64_t>(i)));
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1))
          sessions[static_cast<std::size_t>(i)] =
              run_cohort_session(input.cohorts[static_cast<std::size_t>(i)], input.initial_model,
                                 fl_config, derive_seed(cohort_base, static_cast<std::uint64_t>(i)));
      });
    }
    for (auto& t : pool) t.join();
  }

  // Merge in cohort order so output is independent of scheduling.
  SimulationResult result;
  result.ledger.clients.assign(static_cast<std::size_t>(max_client) + 1, ClientUsage{});
  result.ledger.final_upload_bytes.assign(static_cast<std::size_t>(n), fl_config.model_bytes);
  for (int i = 0; i < n; ++i) {
    auto& session = sessions[static_cast<std::size_t>(i)];
    const auto& spec = input.cohorts[static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k < spec.client_ids.size(); ++k)
      result.ledger.clients[static_cast<std::size_t>(spec.client_ids[k])] = session.client_usage[k];
    result.ledger.rounds.insert(result.ledger.rounds.end(), session.rounds.begin(),
                                session.rounds.end());
    result.clock.cohort_time_s.push_back(session.bundle.finish_time_s);
    result.bundles.push_back(std::move(session.bundle));
  }
  result.clock.global_finish_s = 0.0;
  for (double t : result.clock.cohort_time_s)
    result.clock.global_finish_s = std::max(result.clock.global_finish_s, t);
  return result;
}

std::vector<std::pair<double, double>> finish_time_ecdf(
    const std::vector<CohortModelBundle>& bundles) {
  if (bundles.empty()) throw std::invalid_argument("finish_time_ecdf: no bundles");
  std::vector<double> times;
  times.reserve(bundles.size());
  for (const auto& bundle : bundles) times.push_back(bundle.finish_time_s);
  std::sort(times.begin(), times.end());

  std::vector<std::pair<double, double>> ecdf;
  const double n = static_cast<double>(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double fraction = static_cast<double>(i + 1) / n;
    if (!ecdf.empty() && ecdf.back().first == times[i])
      ecdf.back().second = fraction;
    else
      ecdf.emplace_back(times[i], fraction);
  }
  return ecdf;
}

}  // namespace cpfl::sim
