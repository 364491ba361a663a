#include "cpfl/data/dataset.hpp"

#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace cpfl::data {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

[[noreturn]] void fail(const std::string& path, std::size_t line_no, const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + what);
}

double parse_double(const std::string& s, const std::string& path, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) fail(path, line_no, "trailing characters in number '" + s + "'");
    return v;
  } catch (const std::invalid_argument&) {
    fail(path, line_no, "not a number: '" + s + "'");
  } catch (const std::out_of_range&) {
    fail(path, line_no, "number out of range: '" + s + "'");
  }
}

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

Matrix read_rows(std::ifstream& in, const std::string& path, std::size_t first_col,
                 std::size_t n_cols, std::vector<int>* labels) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != first_col + n_cols)
      fail(path, line_no, "expected " + std::to_string(first_col + n_cols) + " fields, got " +
                              std::to_string(fields.size()));
    if (labels) {
      const double lv = parse_double(fields[0], path, line_no);
      const int label = static_cast<int>(lv);
      if (lv != label || label < 0) fail(path, line_no, "label must be a non-negative integer");
      labels->push_back(label);
    }
    std::vector<double> row(n_cols);
    for (std::size_t c = 0; c < n_cols; ++c) row[c] = parse_double(fields[first_col + c], path, line_no);
    rows.push_back(std::move(row));
  }
  Matrix features(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n_cols));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < n_cols; ++c) features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return features;
}

}  // namespace

LabeledDataset LabeledDataset::subset(const std::vector<std::size_t>& rows) const {
  LabeledDataset out;
  out.class_count = class_count;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
  out.labels.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.features.row(static_cast<Eigen::Index>(i)) = features.row(static_cast<Eigen::Index>(rows[i]));
    out.labels.push_back(labels[rows[i]]);
  }
  return out;
}

void LabeledDataset::validate() const {
  if (static_cast<std::size_t>(features.rows()) != labels.size())
    throw std::invalid_argument("LabeledDataset: feature rows and label count differ");
  for (int label : labels)
    if (label < 0 || label >= class_count)
      throw std::invalid_argument("LabeledDataset: label out of [0, class_count)");
}

std::int64_t LabelDistribution::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

LabeledDataset load_labeled_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error(path + ":1: missing header");
  const auto cols = split_fields(header);
  if (cols.size() < 2 || cols[0] != "label")
    throw std::runtime_error(path + ":1: expected header `label,f0,...`");
  LabeledDataset dataset;
  dataset.features = read_rows(in, path, 1, cols.size() - 1, &dataset.labels);
  int max_label = -1;
  for (int label : dataset.labels) max_label = std::max(max_label, label);
  dataset.class_count = max_label + 1;
  return dataset;
}

UnlabeledDataset load_unlabeled_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open file");
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error(path + ":1: missing header");
  const auto cols = split_fields(header);
  if (cols.empty() || cols[0] != "f0")
    throw std::runtime_error(path + ":1: expected header `f0,f1,...`");
  UnlabeledDataset dataset;
  dataset.features = read_rows(in, path, 0, cols.size(), nullptr);
  return dataset;
}

void save_labeled_csv(const LabeledDataset& dataset, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  out << "label";
  for (Eigen::Index c = 0; c < dataset.features.cols(); ++c) out << ",f" << c;
  out << "\n";
  for (Eigen::Index r = 0; r < dataset.features.rows(); ++r) {
    out << dataset.labels[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < dataset.features.cols(); ++c)
      out << "," << fmt6(dataset.features(r, c));
    out << "\n";
  }
}

void save_unlabeled_csv(const UnlabeledDataset& dataset, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  for (Eigen::Index c = 0; c < dataset.features.cols(); ++c) out << (c ? "," : "") << "f" << c;
  out << "\n";
  for (Eigen::Index r = 0; r < dataset.features.rows(); ++r) {
    for (Eigen::Index c = 0; c < dataset.features.cols(); ++c)
      out << (c ? "," : "") << fmt6(dataset.features(r, c));
    out << "\n";
  }
}

}  // namespace cpfl::data
