#include "cpfl/report/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cpfl::report {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw std::invalid_argument("config field '" + key + "': invalid value '" + value + "'");
}

int to_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(value, &used);
    if (used != value.size()) bad_value(key, value);
    return v;
  } catch (const std::invalid_argument&) {
    bad_value(key, value);
  } catch (const std::out_of_range&) {
    bad_value(key, value);
  }
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) bad_value(key, value);
    return v;
  } catch (const std::invalid_argument&) {
    bad_value(key, value);
  } catch (const std::out_of_range&) {
    bad_value(key, value);
  }
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(value, &used);
    if (used != value.size()) bad_value(key, value);
    return static_cast<std::uint64_t>(v);
  } catch (const std::invalid_argument&) {
    bad_value(key, value);
  } catch (const std::out_of_range&) {
    bad_value(key, value);
  }
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  bad_value(key, value);
}

std::vector<int> to_int_list(const std::string& key, const std::string& value) {
  std::vector<int> out;
  std::istringstream stream(value);
  std::string item;
  while (std::getline(stream, item, ',')) out.push_back(to_int(key, trim(item)));
  if (out.empty()) bad_value(key, value);
  return out;
}

std::string canonical_key(std::string key) {
  if (key == "M") return "clients";
  if (key == "n") return "cohorts";
  if (key == "rate") return "participation";
  if (key == "r") return "patience";
  if (key == "w") return "window";
  return key;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "clients",       "cohorts",          "alpha",
      "participation", "local_epochs",     "local_steps",
      "batch_size",    "optimizer",        "lr",
      "momentum",      "patience",         "window",
      "classes",       "dim",              "train_per_class",
      "test_per_class", "spread",          "label_noise",
      "public_multiplier",
      "hidden",        "data_file",        "test_file",
      "public_file",   "trace_file",       "trace_count",
      "kd_epochs",     "kd_batch",         "kd_lr",
      "kd_weight_mode", "server_sec_per_batch", "seed",
      "round_cap",     "distill_quorum",   "workers",
      "out_dir",       "emit_events",      "save_bundles",
  };
  return keys;
}

void set_field(ExperimentConfig& config, const std::string& raw_key, const std::string& value) {
  const std::string key = canonical_key(raw_key);
  if (key == "clients") config.clients = to_int(key, value);
  else if (key == "cohorts") config.cohorts = to_int(key, value);
  else if (key == "alpha") config.alpha = to_double(key, value);
  else if (key == "participation") config.participation = to_double(key, value);
  else if (key == "local_epochs") config.work = fl::LocalWork::epochs(to_int(key, value));
  else if (key == "local_steps") config.work = fl::LocalWork::steps(to_int(key, value));
  else if (key == "batch_size") config.batch_size = to_int(key, value);
  else if (key == "optimizer") {
    if (value != "sgd" && value != "adam") bad_value(key, value);
    config.optimizer = value;
  } else if (key == "lr") config.lr = to_double(key, value);
  else if (key == "momentum") config.momentum = to_double(key, value);
  else if (key == "patience") config.patience = to_int(key, value);
  else if (key == "window") config.window = to_int(key, value);
  else if (key == "classes") config.classes = to_int(key, value);
  else if (key == "dim") config.dim = to_int(key, value);
  else if (key == "train_per_class") config.train_per_class = to_int(key, value);
  else if (key == "test_per_class") config.test_per_class = to_int(key, value);
  else if (key == "spread") config.spread = to_double(key, value);
  else if (key == "label_noise") config.label_noise = to_double(key, value);
  else if (key == "public_multiplier") config.public_multiplier = to_int(key, value);
  else if (key == "hidden") config.hidden_dims = to_int_list(key, value);
  else if (key == "data_file") config.data_file = value;
  else if (key == "test_file") config.test_file = value;
  else if (key == "public_file") config.public_file = value;
  else if (key == "trace_file") config.trace_file = value;
  else if (key == "trace_count") config.trace_count = to_int(key, value);
  else if (key == "kd_epochs") config.kd.epochs = to_int(key, value);
  else if (key == "kd_batch") config.kd.batch_size = to_int(key, value);
  else if (key == "kd_lr") config.kd.learning_rate = to_double(key, value);
  else if (key == "kd_weight_mode") {
    if (value != "per-class" && value != "scalar") bad_value(key, value);
    config.kd_weight_mode = value;
  } else if (key == "server_sec_per_batch") config.server_sec_per_batch = to_double(key, value);
  else if (key == "seed") config.seed = to_u64(key, value);
  else if (key == "round_cap") config.round_cap = to_int(key, value);
  else if (key == "distill_quorum") config.distill_quorum = to_double(key, value);
  else if (key == "workers") config.workers = to_int(key, value);
  else if (key == "out_dir") config.out_dir = value;
  else if (key == "emit_events") config.emit_events = to_bool(key, value);
  else if (key == "save_bundles") config.save_bundles = to_bool(key, value);
  else throw std::invalid_argument("config field '" + raw_key + "': unknown key");
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open config file");
  ExperimentConfig config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#' || stripped[0] == ';') continue;
    if (stripped.front() == '[' && stripped.back() == ']') continue;  // organizational section
    const auto colon = stripped.find(':');
    if (colon == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected `key: value`");
    const std::string key = trim(stripped.substr(0, colon));
    const std::string value = trim(stripped.substr(colon + 1));
    if (key.empty() || value.empty())
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected `key: value`");
    set_field(config, key, value);
  }
  return config;
}

void ExperimentConfig::validate() const {
  if (clients < 1) throw std::invalid_argument("config field 'clients': must be >= 1");
  if (cohorts < 1 || cohorts > clients)
    throw std::invalid_argument("config field 'cohorts': need 1 <= cohorts <= clients");
  if (!(alpha > 0.0)) throw std::invalid_argument("config field 'alpha': must be > 0");
  if (participation <= 0.0 || participation > 1.0)
    throw std::invalid_argument("config field 'participation': must be in (0,1]");
  if (work.amount < 1)
    throw std::invalid_argument("config field 'local_epochs/local_steps': must be >= 1");
  if (batch_size < 1) throw std::invalid_argument("config field 'batch_size': must be >= 1");
  if (!(lr > 0.0)) throw std::invalid_argument("config field 'lr': must be > 0");
  if (momentum < 0.0 || momentum >= 1.0)
    throw std::invalid_argument("config field 'momentum': must be in [0,1)");
  if (patience < 1) throw std::invalid_argument("config field 'patience': must be >= 1");
  if (window < 1) throw std::invalid_argument("config field 'window': must be >= 1");
  if (data_file.empty()) {
    if (classes < 2) throw std::invalid_argument("config field 'classes': must be >= 2");
    if (dim < 2) throw std::invalid_argument("config field 'dim': must be >= 2");
    if (train_per_class < 1)
      throw std::invalid_argument("config field 'train_per_class': must be >= 1");
    if (test_per_class < 1)
      throw std::invalid_argument("config field 'test_per_class': must be >= 1");
    if (!(spread >= 0.0)) throw std::invalid_argument("config field 'spread': must be >= 0");
  } else if (test_file.empty()) {
    throw std::invalid_argument("config field 'test_file': required when data_file is set");
  }
  if (label_noise < 0.0 || label_noise >= 1.0)
    throw std::invalid_argument("config field 'label_noise': must be in [0,1)");
  if (public_multiplier < 1)
    throw std::invalid_argument("config field 'public_multiplier': must be >= 1");
  for (int h : hidden_dims)
    if (h < 1) throw std::invalid_argument("config field 'hidden': dims must be >= 1");
  if (trace_count < 0) throw std::invalid_argument("config field 'trace_count': must be >= 0");
  if (kd.epochs < 1) throw std::invalid_argument("config field 'kd_epochs': must be >= 1");
  if (kd.batch_size < 1) throw std::invalid_argument("config field 'kd_batch': must be >= 1");
  if (!(kd.learning_rate > 0.0)) throw std::invalid_argument("config field 'kd_lr': must be > 0");
  if (!(server_sec_per_batch >= 0.0))
    throw std::invalid_argument("config field 'server_sec_per_batch': must be >= 0");
  if (round_cap < 1) throw std::invalid_argument("config field 'round_cap': must be >= 1");
  if (distill_quorum <= 0.0 || distill_quorum > 1.0)
    throw std::invalid_argument("config field 'distill_quorum': must be in (0,1]");
  if (workers < 1) throw std::invalid_argument("config field 'workers': must be >= 1");
}

}  // namespace cpfl::report
