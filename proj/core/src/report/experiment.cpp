#include "cpfl/report/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "cpfl/data/partition.hpp"
#include "cpfl/data/synthetic.hpp"
#include "cpfl/fl/cohort.hpp"
#include "cpfl/nn/loss.hpp"

namespace cpfl::report {

namespace {

nn::OptimizerConfig make_optimizer(const ExperimentConfig& config) {
  if (config.optimizer == "adam") return nn::OptimizerConfig::adam(config.lr);
  return nn::OptimizerConfig::sgd(config.lr, config.momentum);
}

std::vector<int> model_dims(const ExperimentConfig& config, int input_dim, int classes) {
  std::vector<int> dims;
  dims.push_back(input_dim);
  dims.insert(dims.end(), config.hidden_dims.begin(), config.hidden_dims.end());
  dims.push_back(classes);
  return dims;
}

}  // namespace

PreparedExperiment prepare_experiment(const ExperimentConfig& config) {
  config.validate();
  PreparedExperiment prep;

  data::LabeledDataset train;
  if (config.data_file.empty()) {
    // Train and test share the class means (one generator call) and split the
    // per-class sample blocks; the public set below is cross-domain instead.
    const int per_class = config.train_per_class + config.test_per_class;
    const auto full = data::gen_synthetic(config.classes, config.dim, per_class, config.spread,
                                          derive_seed(config.seed, "data"));
    std::vector<std::size_t> train_rows, test_rows;
    for (int c = 0; c < config.classes; ++c) {
      const std::size_t base = static_cast<std::size_t>(c) * static_cast<std::size_t>(per_class);
      for (int i = 0; i < per_class; ++i)
        (i < config.train_per_class ? train_rows : test_rows).push_back(base + static_cast<std::size_t>(i));
    }
    train = full.subset(train_rows);
    prep.test_set = full.subset(test_rows);
  } else {
    train = data::load_labeled_csv(config.data_file);
    prep.test_set = data::load_labeled_csv(config.test_file);
    const int classes = std::max(train.class_count, prep.test_set.class_count);
    train.class_count = classes;
    prep.test_set.class_count = classes;
  }

  if (config.label_noise > 0.0) {
    // Irreducible noise on the training pool: clients' local losses floor at
    // a positive level, which is what lets the patience criterion fire.
    std::mt19937_64 rng(derive_seed(config.seed, "labelnoise"));
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<int> relabel(0, train.class_count - 1);
    for (auto& label : train.labels)
      if (coin(rng) < config.label_noise) label = relabel(rng);
  }

  if (config.public_file.empty()) {
    // Cross-domain public set: fresh blob means from an independent seed.
    const int per_class = std::max(
        1, static_cast<int>(train.size()) * config.public_multiplier / train.class_count);
    const auto public_labeled =
        data::gen_synthetic(train.class_count, static_cast<int>(train.features.cols()), per_class,
                            config.spread, derive_seed(config.seed, "public"));
    prep.public_set.features = public_labeled.features;
  } else {
    prep.public_set = data::load_unlabeled_csv(config.public_file);
  }

  prep.client_data =
      data::dirichlet_partition(train, config.clients, config.alpha, derive_seed(config.seed, "partition"));

  auto profiles = config.trace_file.empty()
                      ? traces::gen_traces(config.trace_count > 0
                                               ? static_cast<std::size_t>(config.trace_count)
                                               : static_cast<std::size_t>(config.clients),
                                           derive_seed(config.seed, "traces"))
                      : traces::load_traces(config.trace_file);
  const auto assignment = traces::assign_profiles(static_cast<std::size_t>(config.clients),
                                                  profiles, derive_seed(config.seed, "assign"));

  const auto cohort_assignment = fl::partition_cohorts(config.clients, config.cohorts,
                                                       derive_seed(config.seed, "cohorts"));
  const std::uint64_t val_base = derive_seed(config.seed, "valsplit");
  const auto cohort_members = cohort_assignment.cohorts();
  prep.sim.cohorts.reserve(cohort_members.size());
  for (int i = 0; i < cohort_assignment.num_cohorts; ++i) {
    sim::CohortSpec spec;
    spec.cohort_index = i;
    for (int client : cohort_members[static_cast<std::size_t>(i)]) {
      const auto& local = prep.client_data[static_cast<std::size_t>(client)];
      auto split = data::split_validation(local, 0.1, 10,
                                          derive_seed(val_base, static_cast<std::uint64_t>(client)));
      spec.client_ids.push_back(client);
      spec.train_sets.push_back(std::move(split.train));
      if (split.validation)
        spec.val_sets.emplace_back(std::move(*split.validation));
      else
        spec.val_sets.emplace_back(std::nullopt);
      spec.profiles.push_back(assignment[static_cast<std::size_t>(client)]);
      spec.label_dists.push_back(data::label_distribution(local));
    }
    prep.sim.cohorts.push_back(std::move(spec));
  }

  prep.sim.initial_model = nn::MlpModel::glorot(
      model_dims(config, static_cast<int>(train.features.cols()), train.class_count),
      derive_seed(config.seed, "model"));
  prep.sim.fl.participation_rate = config.participation;
  prep.sim.fl.work = config.work;
  prep.sim.fl.batch_size = config.batch_size;
  prep.sim.fl.optimizer = make_optimizer(config);
  prep.sim.fl.window = config.window;
  prep.sim.fl.patience = config.patience;
  prep.sim.fl.round_cap = config.round_cap;
  prep.sim.master_seed = config.seed;
  prep.sim.workers = config.workers;
  return prep;
}

RunReport run_experiment(const ExperimentConfig& config) {
  auto prep = prepare_experiment(config);
  auto simulation = sim::run_simulation(prep.sim);

  RunReport report;
  report.config = config;
  report.model_bytes = static_cast<std::uint64_t>(prep.sim.initial_model.serialize().size());
  report.ecdf = sim::finish_time_ecdf(simulation.bundles);
  for (const auto& bundle : simulation.bundles) {
    CohortRecord record;
    record.cohort = bundle.cohort_index;
    record.clients =
        static_cast<int>(prep.sim.cohorts[static_cast<std::size_t>(bundle.cohort_index)].client_ids.size());
    record.samples = bundle.label_distribution.total();
    record.rounds = bundle.rounds;
    record.finish_time_s = bundle.finish_time_s;
    record.compute_s = simulation.ledger.cohort_compute_s(bundle.cohort_index);
    record.bytes = simulation.ledger.cohort_bytes(bundle.cohort_index);
    record.cap_hit = bundle.cap_hit;
    report.cohorts.push_back(record);
    report.rounds_total += bundle.rounds;
    if (bundle.cap_hit) ++report.cap_hit_cohorts;
  }
  report.compute_s = simulation.ledger.total_compute_s();
  report.bytes = simulation.ledger.total_bytes();
  report.events = simulation.ledger.rounds;

  // Distillation quorum: teachers are the cohorts finished by the time the
  // ceil(q*n)-th cohort completes; stragglers keep only rounds ending by then.
  std::vector<const sim::CohortModelBundle*> teachers;
  double finish = simulation.clock.global_finish_s;
  if (config.distill_quorum < 1.0) {
    std::vector<double> times = simulation.clock.cohort_time_s;
    std::sort(times.begin(), times.end());
    const std::size_t need = std::max<std::size_t>(
        1, static_cast<std::size_t>(
               std::ceil(config.distill_quorum * static_cast<double>(times.size()))));
    finish = times[need - 1];
    for (const auto& bundle : simulation.bundles)
      if (bundle.finish_time_s <= finish) teachers.push_back(&bundle);
  } else {
    for (const auto& bundle : simulation.bundles) teachers.push_back(&bundle);
  }
  report.finish_time_s = finish;

  std::vector<nn::MlpModel> teacher_models;
  std::vector<data::LabelDistribution> teacher_dists;
  for (const auto* bundle : teachers) {
    teacher_models.push_back(bundle->model);
    teacher_dists.push_back(bundle->label_distribution);
  }

  const auto weights = config.kd_weight_mode == "scalar"
                           ? distill::scalar_to_matrix(distill::compute_scalar_weights(teacher_dists),
                                                       prep.sim.initial_model.class_count())
                           : distill::compute_weights(teacher_dists);
  const auto targets = distill::build_soft_targets(teacher_models, prep.public_set, weights);
  const auto student = distill::train_student(
      nn::MlpModel::glorot(prep.sim.initial_model.layer_dims, derive_seed(config.seed, "student")),
      prep.public_set, targets, config.kd, derive_seed(config.seed, "distill"));

  // Simulated distillation cost: teacher inference plus student training, at
  // the configured global-server batch rate. Kept out of finish_time_s.
  const double public_batches = std::ceil(static_cast<double>(prep.public_set.size()) /
                                          static_cast<double>(config.kd.batch_size));
  report.kd_time_s = (static_cast<double>(teacher_models.size()) * public_batches +
                      static_cast<double>(config.kd.epochs) * public_batches) *
                     config.server_sec_per_batch;

  report.student_accuracy = nn::evaluate(student.model, prep.test_set).accuracy;
  double acc_sum = 0.0;
  std::vector<double> teacher_accs;
  for (const auto& model : teacher_models) {
    teacher_accs.push_back(nn::evaluate(model, prep.test_set).accuracy);
    acc_sum += teacher_accs.back();
  }
  report.teacher_accuracy_mean = acc_sum / static_cast<double>(teacher_accs.size());
  double var = 0.0;
  for (double acc : teacher_accs) {
    const double d = acc - report.teacher_accuracy_mean;
    var += d * d;
  }
  report.teacher_accuracy_std = std::sqrt(var / static_cast<double>(teacher_accs.size()));
  report.delta = report.student_accuracy - report.teacher_accuracy_mean;

  if (config.distill_quorum < 1.0) {
    // Straggler cohorts are cancelled at the quorum time: keep only their
    // rounds that completed by then and recompute the affected records.
    std::vector<char> straggler(simulation.bundles.size(), 0);
    for (const auto& bundle : simulation.bundles)
      if (bundle.finish_time_s > finish)
        straggler[static_cast<std::size_t>(bundle.cohort_index)] = 1;

    std::vector<sim::RoundUsage> events;
    std::vector<double> elapsed(simulation.bundles.size(), 0.0);
    for (const auto& row : report.events) {
      const auto cohort = static_cast<std::size_t>(row.cohort);
      elapsed[cohort] += row.duration_s;
      if (straggler[cohort] && elapsed[cohort] > finish) continue;
      events.push_back(row);
    }
    report.events = std::move(events);

    for (auto& record : report.cohorts) {
      if (!straggler[static_cast<std::size_t>(record.cohort)]) continue;
      record.finish_time_s = finish;
      record.rounds = 0;
      record.compute_s = 0.0;
      record.bytes = report.model_bytes;  // final upload still happens
      for (const auto& row : report.events) {
        if (row.cohort != record.cohort) continue;
        ++record.rounds;
        record.compute_s += row.compute_s;
        record.bytes += row.bytes;
      }
    }

    report.compute_s = 0.0;
    std::uint64_t bytes = 0;
    for (const auto& row : report.events) {
      report.compute_s += row.compute_s;
      bytes += row.bytes;
    }
    report.bytes =
        bytes + static_cast<std::uint64_t>(simulation.bundles.size()) * report.model_bytes;
  }

  return report;
}

}  // namespace cpfl::report
