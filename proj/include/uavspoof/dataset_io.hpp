#pragma once

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "uavspoof/config_io.hpp"
#include "uavspoof/dataset.hpp"

namespace uavspoof {

/// CSV layout: header `label,f1..fK`, then one window per row with label
/// 1 = spoofed. Values are written in shortest round-trip form.
inline std::string dataset_to_csv(const LabeledDataset& ds) {
  std::string out = "label";
  for (std::size_t k = 1; k <= ds.width(); ++k) out += ",f" + std::to_string(k);
  out += '\n';
  for (const auto& row : ds.rows) {
    out += row.label ? '1' : '0';
    for (double v : row.flattened) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

namespace detail {

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    cells.push_back(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return cells;
}

}  // namespace detail

/// Parses CSV text. Errors name the source, the line (header = line 1) and
/// the column.
inline LabeledDataset dataset_from_csv(const std::string& text, const std::string& source = "<csv>") {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error(source + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = detail::split_commas(line);
  if (header.empty() || header.front() != "label") throw Error(source + ":1: header must start with 'label'");
  for (std::size_t k = 1; k < header.size(); ++k)
    if (header[k] != "f" + std::to_string(k))
      throw Error(source + ":1, column " + std::to_string(k + 1) + ": expected 'f" + std::to_string(k) + "', got '" +
                  std::string(header[k]) + "'");
  const std::size_t width = header.size() - 1;
  if (width == 0) throw Error(source + ":1: header advertises no features");

  LabeledDataset ds;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = detail::split_commas(line);
    const std::string at = source + ":" + std::to_string(line_no);
    if (cells.size() != header.size())
      throw Error(at + ": row has " + std::to_string(cells.size() - 1) + " feature values, header advertises " +
                  std::to_string(width));
    FeatureVector fv;
    if (cells[0] == "1") fv.label = true;
    else if (cells[0] != "0")
      throw Error(at + ", column 1 (label): expected 0 or 1, got '" + std::string(cells[0]) + "'");
    fv.flattened.resize(width);
    for (std::size_t k = 0; k < width; ++k) {
      if (!parse_double(cells[k + 1], fv.flattened[k]) || !std::isfinite(fv.flattened[k]))
        throw Error(at + ", column " + std::to_string(k + 2) + " (f" + std::to_string(k + 1) + "): '" +
                    std::string(cells[k + 1]) + "' is not a finite number");
    }
    ds.rows.push_back(std::move(fv));
  }
  return ds;
}

inline void save_csv(const LabeledDataset& ds, const std::string& path) { write_file(path, dataset_to_csv(ds)); }

inline LabeledDataset load_csv(const std::string& path) { return dataset_from_csv(read_file(path), path); }

/// A dataset directory: train.csv, test.csv and the dataset.yaml sidecar
/// holding the generating spec, its hash and the CSV content hashes.
struct StoredDataset {
  DatasetSpec spec;
  std::string spec_hash;
  LabeledDataset train;
  LabeledDataset test;
};

inline constexpr const char* kSidecarName = "dataset.yaml";

inline void save_dataset(const std::filesystem::path& dir, const DatasetSpec& spec, const DatasetPair& data) {
  std::filesystem::create_directories(dir);
  const std::string train_csv = dataset_to_csv(data.train);
  const std::string test_csv = dataset_to_csv(data.test);
  write_file((dir / "train.csv").string(), train_csv);
  write_file((dir / "test.csv").string(), test_csv);

  YAML::Emitter out;
  out << YAML::BeginMap;
  emit_spec_fields(out, spec);
  out << YAML::Key << "spec_hash" << YAML::Value << spec_hash(spec);
  out << YAML::Key << "feature_width" << YAML::Value << data.train.width();
  out << YAML::Key << "train_sha256" << YAML::Value << sha256_hex(train_csv);
  out << YAML::Key << "test_sha256" << YAML::Value << sha256_hex(test_csv);
  out << YAML::EndMap;
  write_file((dir / kSidecarName).string(), std::string(out.c_str()) + "\n");
}

inline StoredDataset load_dataset(const std::filesystem::path& dir) {
  const std::string sidecar_path = (dir / kSidecarName).string();
  const std::string sidecar = read_file(sidecar_path);

  std::string stored_hash, train_sha, test_sha;
  std::size_t width = 0;
  using config_detail::Where;
  auto text_field = [](std::string& dst) {
    return [&dst](const YAML::Node& n, const Where& w) { dst = config_detail::scalar(n, w); };
  };
  StoredDataset sd;
  sd.spec = parse_spec(sidecar, sidecar_path,
                       {{"spec_hash", text_field(stored_hash)},
                        {"train_sha256", text_field(train_sha)},
                        {"test_sha256", text_field(test_sha)},
                        {"feature_width", [&width](const YAML::Node& n, const Where& w) {
                           width = config_detail::as_u64(n, w);
                         }}});
  sd.spec_hash = spec_hash(sd.spec);
  if (sd.spec_hash != stored_hash)
    throw Error(sidecar_path + ": spec_hash does not match the recorded spec (expected " + sd.spec_hash + ")");

  const std::string train_path = (dir / "train.csv").string();
  const std::string test_path = (dir / "test.csv").string();
  const std::string train_csv = read_file(train_path);
  const std::string test_csv = read_file(test_path);
  if (sha256_hex(train_csv) != train_sha) throw Error(train_path + ": content hash mismatch with " + kSidecarName);
  if (sha256_hex(test_csv) != test_sha) throw Error(test_path + ": content hash mismatch with " + kSidecarName);

  sd.train = dataset_from_csv(train_csv, train_path);
  sd.test = dataset_from_csv(test_csv, test_path);
  for (auto* ds : {&sd.train, &sd.test}) {
    ds->method = sd.spec.method;
    ds->n_bs = sd.spec.n_bs;
    ds->provenance = sd.spec_hash;
    if (ds->width() != width)
      throw Error(dir.string() + ": feature width " + std::to_string(ds->width()) + " differs from sidecar " +
                  std::to_string(width));
  }
  sd.train.split = SplitTag::kTrain;
  sd.test.split = SplitTag::kTest;
  return sd;
}

}  // namespace uavspoof
