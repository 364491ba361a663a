// Command-line front end: run full experiments, generate traces and
// datasets, rerun the distillation stage from saved bundles, and print the
// computable part of the risk bound.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cpfl/data/partition.hpp"
#include "cpfl/data/synthetic.hpp"
#include "cpfl/report/bound.hpp"
#include "cpfl/report/experiment.hpp"
#include "cpfl/traces/traces.hpp"

namespace {

using namespace cpfl;

// Every config key becomes a --key flag; values land in `overrides` and are
// applied on top of the (optional) config file, so flags win.
struct ConfigCli {
  std::string config_path;
  std::vector<std::pair<std::string, std::string>> overrides;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "experiment config file (key: value lines)");
    for (const auto& key : report::config_keys()) {
      auto handler = [this, key](const std::string& value) { overrides.emplace_back(key, value); };
      app->add_option_function<std::string>("--" + key, handler);
    }
    auto n_alias = [this](const std::string& value) { overrides.emplace_back("cohorts", value); };
    app->add_option_function<std::string>("--n", n_alias, "alias for --cohorts");
  }

  report::ExperimentConfig build() const {
    report::ExperimentConfig config;
    if (!config_path.empty()) config = report::parse_config_file(config_path);
    for (const auto& [key, value] : overrides) report::set_field(config, key, value);
    if (const char* env = std::getenv("CPFL_OUT_DIR"); env && *env) config.out_dir = env;
    config.validate();
    return config;
  }
};

int cmd_run(const ConfigCli& cli) {
  const auto config = cli.build();
  const auto report = report::run_experiment(config);
  report::emit_report(report, config.out_dir);
  if (config.save_bundles) {
    // Rerun stage 1 deterministically to write the bundles next to the report.
    auto prep = report::prepare_experiment(config);
    const auto sim = sim::run_simulation(prep.sim);
    report::save_bundles(sim.bundles, (std::filesystem::path(config.out_dir) / "bundles").string());
  }
  std::printf("n=%d clients=%d seed=%llu: student_accuracy=%.4f teacher_mean=%.4f delta=%+.4f\n",
              config.cohorts, config.clients, static_cast<unsigned long long>(config.seed),
              report.student_accuracy, report.teacher_accuracy_mean, report.delta);
  std::printf("finish_time_s=%.1f compute_s=%.1f bytes=%llu kd_time_s=%.1f -> %s\n",
              report.finish_time_s, report.compute_s,
              static_cast<unsigned long long>(report.bytes), report.kd_time_s,
              config.out_dir.c_str());
  if (report.cap_hit_cohorts > 0)
    std::fprintf(stderr, "warning: %d cohort(s) hit the round cap before converging\n",
                 report.cap_hit_cohorts);
  return 0;
}

int cmd_gen_traces(std::size_t count, std::uint64_t seed, const std::string& out) {
  traces::save_traces(traces::gen_traces(count, seed), out);
  std::printf("wrote %zu device profiles to %s\n", count, out.c_str());
  return 0;
}

int cmd_gen_data(int classes, int dim, int samples_per_class, double spread, std::uint64_t seed,
                 bool unlabeled, const std::string& out) {
  const auto dataset = data::gen_synthetic(classes, dim, samples_per_class, spread, seed);
  if (unlabeled) {
    data::save_unlabeled_csv(data::UnlabeledDataset{dataset.features}, out);
  } else {
    data::save_labeled_csv(dataset, out);
  }
  std::printf("wrote %zu samples (%d classes, dim %d) to %s\n", dataset.size(), classes, dim,
              out.c_str());
  return 0;
}

int cmd_distill_only(const std::string& bundles_dir, const std::string& public_path,
                     const std::string& out_dir, int epochs, int batch, double lr,
                     const std::string& weight_mode, std::uint64_t seed, bool export_targets) {
  const auto bundles = report::load_bundles(bundles_dir);
  if (bundles.empty()) throw std::runtime_error(bundles_dir + ": no bundles found");
  const auto public_set = data::load_unlabeled_csv(public_path);

  std::vector<nn::MlpModel> teachers;
  std::vector<data::LabelDistribution> dists;
  for (const auto& bundle : bundles) {
    teachers.push_back(bundle.model);
    dists.push_back(bundle.label_distribution);
  }
  const auto weights = weight_mode == "scalar"
                           ? distill::scalar_to_matrix(distill::compute_scalar_weights(dists),
                                                       teachers.front().class_count())
                           : distill::compute_weights(dists);
  const auto targets = distill::build_soft_targets(teachers, public_set, weights);

  distill::DistillSchedule schedule;
  schedule.epochs = epochs;
  schedule.batch_size = batch;
  schedule.learning_rate = lr;
  const auto student = distill::train_student(
      nn::MlpModel::glorot(teachers.front().layer_dims, derive_seed(seed, "student")), public_set,
      targets, schedule, derive_seed(seed, "distill"));
  if (student.batch_clamped)
    std::fprintf(stderr, "warning: batch size clamped to the public-set size\n");

  std::filesystem::create_directories(out_dir);
  const auto student_path = std::filesystem::path(out_dir) / "student.mdl";
  const auto bytes = student.model.serialize();
  std::ofstream out(student_path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (export_targets)
    distill::save_soft_targets_csv(targets,
                                   (std::filesystem::path(out_dir) / "soft_targets.csv").string());
  std::printf("distilled %zu teachers into %s (final loss %.6f)\n", teachers.size(),
              student_path.string().c_str(), student.epoch_losses.back());
  return 0;
}

int cmd_bound(const ConfigCli& cli, double delta, const std::string& out) {
  const auto config = cli.build();
  auto prep = report::prepare_experiment(config);
  const auto sim_result = sim::run_simulation(prep.sim);

  std::vector<data::LabelDistribution> dists;
  for (const auto& bundle : sim_result.bundles) dists.push_back(bundle.label_distribution);
  const auto weights = distill::compute_weights(dists);

  const auto groups = std::vector<sim::CohortSpec>(prep.sim.cohorts);
  std::vector<std::vector<data::LabeledDataset>> cohort_client_data;
  for (const auto& spec : groups) {
    std::vector<data::LabeledDataset> datasets;
    for (int id : spec.client_ids) datasets.push_back(prep.client_data[static_cast<std::size_t>(id)]);
    cohort_client_data.push_back(std::move(datasets));
  }

  const auto bound = report::bound_report(sim_result.bundles, cohort_client_data, weights, delta);
  std::printf("risk_term=%.6f hoeffding_term=%.6f delta=%.4f m=%lld\n", bound.risk_term,
              bound.hoeffding, bound.delta, static_cast<long long>(bound.m));
  std::printf("note: %s\n", bound.note.c_str());
  if (!out.empty()) {
    std::ofstream file(out, std::ios::trunc);
    file << "risk_term,hoeffding_term,delta,m\n";
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f,%lld\n", bound.risk_term, bound.hoeffding,
                  bound.delta, static_cast<long long>(bound.m));
    file << buf;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cohort-parallel federated learning simulator"};
  app.require_subcommand(1);

  ConfigCli run_cli;
  auto* run = app.add_subcommand("run", "run a full experiment (simulation + distillation)");
  run_cli.attach(run);

  auto* gen_traces = app.add_subcommand("gen-traces", "generate a device trace file");
  std::size_t trace_count = 64;
  std::uint64_t trace_seed = 1;
  std::string trace_out = "traces.csv";
  gen_traces->add_option("--count", trace_count, "number of device profiles");
  gen_traces->add_option("--seed", trace_seed, "generator seed");
  gen_traces->add_option("--out", trace_out, "output CSV path");

  auto* gen_data = app.add_subcommand("gen-data", "generate a synthetic dataset file");
  int gd_classes = 10, gd_dim = 16, gd_samples = 600;
  double gd_spread = 2.0;
  std::uint64_t gd_seed = 1;
  bool gd_unlabeled = false;
  std::string gd_out = "data.csv";
  gen_data->add_option("--classes", gd_classes);
  gen_data->add_option("--dim", gd_dim);
  gen_data->add_option("--samples-per-class", gd_samples);
  gen_data->add_option("--spread", gd_spread);
  gen_data->add_option("--seed", gd_seed);
  gen_data->add_flag("--unlabeled", gd_unlabeled, "omit the label column");
  gen_data->add_option("--out", gd_out);

  auto* distill_only =
      app.add_subcommand("distill-only", "run stage 2 from saved cohort bundles");
  std::string d_bundles, d_public, d_out = "distill_out";
  int d_epochs = 50, d_batch = 512;
  double d_lr = 0.001;
  std::string d_mode = "per-class";
  std::uint64_t d_seed = 1;
  bool d_export = false;
  distill_only->add_option("--bundles", d_bundles, "directory written by `run` with save_bundles")
      ->required();
  distill_only->add_option("--public", d_public, "unlabeled public dataset CSV")->required();
  distill_only->add_option("--out", d_out);
  distill_only->add_option("--kd-epochs", d_epochs);
  distill_only->add_option("--kd-batch", d_batch);
  distill_only->add_option("--kd-lr", d_lr);
  distill_only->add_option("--kd-weight-mode", d_mode)
      ->check(CLI::IsMember({"per-class", "scalar"}));
  distill_only->add_option("--seed", d_seed);
  distill_only->add_flag("--export-targets", d_export, "also write soft_targets.csv");

  ConfigCli bound_cli;
  auto* bound = app.add_subcommand("bound", "computable terms of the fused-model risk bound");
  bound_cli.attach(bound);
  double b_delta = 0.05;
  std::string b_out;
  bound->add_option("--delta", b_delta, "confidence parameter in (0,1)");
  bound->add_option("--out", b_out, "optional CSV output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_cli);
    if (gen_traces->parsed()) return cmd_gen_traces(trace_count, trace_seed, trace_out);
    if (gen_data->parsed())
      return cmd_gen_data(gd_classes, gd_dim, gd_samples, gd_spread, gd_seed, gd_unlabeled, gd_out);
    if (distill_only->parsed())
      return cmd_distill_only(d_bundles, d_public, d_out, d_epochs, d_batch, d_lr, d_mode, d_seed,
                              d_export);
    if (bound->parsed()) return cmd_bound(bound_cli, b_delta, b_out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
