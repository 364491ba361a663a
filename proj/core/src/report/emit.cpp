#include "cpfl/report/experiment.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "cpfl/data/partition.hpp"

namespace cpfl::report {

namespace {

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error(path.string() + ": cannot open file for writing");
  return out;
}

}  // namespace

void emit_report(const RunReport& report, const std::string& out_dir) {
  const std::filesystem::path dir(out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error(out_dir + ": cannot create directory: " + ec.message());

  {
    auto out = open_out(dir / "summary.csv");
    out << "n,clients,alpha,participation,seed,student_accuracy,teacher_accuracy_mean,"
           "teacher_accuracy_std,delta,finish_time_s,compute_s,bytes,kd_time_s,model_bytes,"
           "rounds_total,cap_hit_cohorts\n";
    out << report.config.cohorts << "," << report.config.clients << ","
        << fmt6(report.config.alpha) << "," << fmt6(report.config.participation) << ","
        << report.config.seed << "," << fmt6(report.student_accuracy) << ","
        << fmt6(report.teacher_accuracy_mean) << "," << fmt6(report.teacher_accuracy_std) << ","
        << fmt6(report.delta) << "," << fmt6(report.finish_time_s) << ","
        << fmt6(report.compute_s) << "," << report.bytes << "," << fmt6(report.kd_time_s) << ","
        << report.model_bytes << "," << report.rounds_total << "," << report.cap_hit_cohorts
        << "\n";
  }
  {
    auto out = open_out(dir / "ecdf.csv");
    out << "time_s,fraction\n";
    for (const auto& [time, fraction] : report.ecdf)
      out << fmt6(time) << "," << fmt6(fraction) << "\n";
  }
  {
    auto out = open_out(dir / "cohorts.csv");
    out << "cohort,clients,samples,rounds,finish_time_s,compute_s,bytes,cap_hit\n";
    for (const auto& record : report.cohorts)
      out << record.cohort << "," << record.clients << "," << record.samples << ","
          << record.rounds << "," << fmt6(record.finish_time_s) << "," << fmt6(record.compute_s)
          << "," << record.bytes << "," << (record.cap_hit ? 1 : 0) << "\n";
  }
  if (report.config.emit_events) {
    auto out = open_out(dir / "events.csv");
    out << "cohort,round,duration_s,val_loss,compute_s,bytes\n";
    for (const auto& row : report.events)
      out << row.cohort << "," << row.round << "," << fmt6(row.duration_s) << ","
          << fmt6(row.loss_signal) << "," << fmt6(row.compute_s) << "," << row.bytes << "\n";
  }
}

void save_bundles(const std::vector<sim::CohortModelBundle>& bundles, const std::string& dir) {
  const std::filesystem::path base(dir);
  std::error_code ec;
  std::filesystem::create_directories(base, ec);
  if (ec) throw std::runtime_error(dir + ": cannot create directory: " + ec.message());

  auto manifest = open_out(base / "bundles.csv");
  manifest << "cohort,model_file,dist_file,finish_time_s,rounds,cap_hit,samples\n";
  char name[64];
  for (const auto& bundle : bundles) {
    std::snprintf(name, sizeof(name), "cohort_%04d", bundle.cohort_index);
    const std::string model_file = std::string(name) + ".mdl";
    const std::string dist_file = std::string(name) + ".dist.csv";

    const auto bytes = bundle.model.serialize();
    std::ofstream model_out(base / model_file, std::ios::binary | std::ios::trunc);
    if (!model_out) throw std::runtime_error((base / model_file).string() + ": cannot write");
    model_out.write(reinterpret_cast<const char*>(bytes.data()),
                    static_cast<std::streamsize>(bytes.size()));

    auto dist_out = open_out(base / dist_file);
    dist_out << "class,count\n";
    for (std::size_t c = 0; c < bundle.label_distribution.counts.size(); ++c)
      dist_out << c << "," << bundle.label_distribution.counts[c] << "\n";

    manifest << bundle.cohort_index << "," << model_file << "," << dist_file << ","
             << fmt6(bundle.finish_time_s) << "," << bundle.rounds << ","
             << (bundle.cap_hit ? 1 : 0) << "," << bundle.label_distribution.total() << "\n";
  }
}

std::vector<sim::CohortModelBundle> load_bundles(const std::string& dir) {
  const std::filesystem::path base(dir);
  std::ifstream manifest(base / "bundles.csv");
  if (!manifest) throw std::runtime_error((base / "bundles.csv").string() + ": cannot open file");
  std::string line;
  if (!std::getline(manifest, line))
    throw std::runtime_error((base / "bundles.csv").string() + ":1: missing header");

  std::vector<sim::CohortModelBundle> bundles;
  while (std::getline(manifest, line)) {
    if (line.empty()) continue;
    sim::CohortModelBundle bundle;
    std::string model_file, dist_file, field;
    std::istringstream row(line);
    std::getline(row, field, ',');
    bundle.cohort_index = std::stoi(field);
    std::getline(row, model_file, ',');
    std::getline(row, dist_file, ',');
    std::getline(row, field, ',');
    bundle.finish_time_s = std::stod(field);
    std::getline(row, field, ',');
    bundle.rounds = std::stoi(field);
    std::getline(row, field, ',');
    bundle.cap_hit = field == "1";

    std::ifstream model_in(base / model_file, std::ios::binary);
    if (!model_in) throw std::runtime_error((base / model_file).string() + ": cannot open file");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(model_in)),
                                    std::istreambuf_iterator<char>());
    bundle.model = nn::MlpModel::deserialize(bytes);

    std::ifstream dist_in(base / dist_file);
    if (!dist_in) throw std::runtime_error((base / dist_file).string() + ": cannot open file");
    std::string dist_line;
    std::getline(dist_in, dist_line);  // header
    while (std::getline(dist_in, dist_line)) {
      if (dist_line.empty()) continue;
      const auto comma = dist_line.find(',');
      if (comma == std::string::npos)
        throw std::runtime_error((base / dist_file).string() + ": expected `class,count`");
      bundle.label_distribution.counts.push_back(std::stoll(dist_line.substr(comma + 1)));
    }
    bundles.push_back(std::move(bundle));
  }
  return bundles;
}

}  // namespace cpfl::report
