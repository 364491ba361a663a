#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cpfl/distill/distill.hpp"
#include "cpfl/fl/local.hpp"

namespace cpfl::report {

/// Full experiment description. Every field maps to a config-file key and a
/// CLI flag of the same name; see parse_config_file for the file syntax.
struct ExperimentConfig {
  // population
  int clients = 64;
  int cohorts = 1;
  double alpha = 0.1;
  double participation = 1.0;

  // local training
  fl::LocalWork work = fl::LocalWork::epochs(1);
  int batch_size = 20;
  std::string optimizer = "sgd";  // sgd | adam
  double lr = 0.002;
  double momentum = 0.9;

  // stopping criterion
  int patience = 20;
  int window = 10;

  // dataset (synthetic unless files are given)
  int classes = 10;
  int dim = 16;
  int train_per_class = 600;
  int test_per_class = 200;
  double spread = 2.0;
  double label_noise = 0.1;  // fraction of train labels resampled uniformly
  int public_multiplier = 10;  // public-set size as a multiple of the train set
  std::vector<int> hidden_dims = {64};
  std::string data_file;
  std::string test_file;
  std::string public_file;

  // device traces (generated unless a file is given)
  std::string trace_file;
  int trace_count = 0;  // 0: one profile per client

  // distillation
  distill::DistillSchedule kd;
  std::string kd_weight_mode = "per-class";  // per-class | scalar
  double server_sec_per_batch = 0.1;         // simulated KD time accounting

  // run control
  std::uint64_t seed = 1;
  int round_cap = 5000;
  double distill_quorum = 1.0;
  int workers = 1;
  std::string out_dir = "out";
  bool emit_events = true;
  bool save_bundles = false;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Plain-text config: one `key: value` per line, `#`/`;` comments,
/// `[section]` headers accepted as organization and otherwise ignored.
/// Aliases: M=clients, n=cohorts, rate=participation, r=patience, w=window.
ExperimentConfig parse_config_file(const std::string& path);

/// Applies one `key`/`value` pair (same keys as the file). Used for CLI flag
/// overrides; throws on unknown keys or unparsable values, naming the field.
void set_field(ExperimentConfig& config, const std::string& key, const std::string& value);

/// Keys accepted by set_field, in canonical order (drives the CLI flags).
const std::vector<std::string>& config_keys();

}  // namespace cpfl::report
