#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "uavspoof/config_io.hpp"
#include "uavspoof/features.hpp"
#include "uavspoof/mlp.hpp"
#include "uavspoof/train.hpp"

namespace uavspoof {

inline constexpr const char* kModelFormat = "uavspoof-mlp";
inline constexpr int kModelFormatVersion = 1;

/// What a model was trained on and how.
struct ModelMetadata {
  FeatureMethod method = FeatureMethod::kWd;
  int n_bs = 0;
  std::string dataset_hash;
  TrainConfig train_config;
};

struct StoredModel {
  MlpModel model;
  ModelMetadata meta;
};

namespace model_detail {

inline nlohmann::json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

inline Eigen::VectorXd json_vector(const nlohmann::json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace model_detail

inline nlohmann::json model_to_json(const MlpModel& m, const ModelMetadata& meta) {
  using nlohmann::json;
  json layers = json::array();
  for (std::size_t l = 0; l < m.weights.size(); ++l) {
    const auto& w = m.weights[l];
    std::vector<double> row_major;
    row_major.reserve(static_cast<std::size_t>(w.size()));
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) row_major.push_back(w(r, c));
    layers.push_back({{"rows", w.rows()},
                      {"cols", w.cols()},
                      {"activation", l + 1 == m.weights.size() ? "logistic" : "relu"},
                      {"weights", row_major},
                      {"biases", model_detail::vector_json(m.biases[l])}});
  }
  json history = json::array();
  for (const auto& h : m.history)
    history.push_back(
        {{"epoch", h.epoch}, {"train_mse", h.train_mse}, {"val_mse", h.val_mse}, {"val_accuracy", h.val_accuracy}});
  const auto& tc = meta.train_config;
  return {{"format", kModelFormat},
          {"version", kModelFormatVersion},
          {"architecture",
           {{"input_width", m.architecture.input_width},
            {"hidden_layers", m.architecture.hidden_layers},
            {"neurons_per_hidden", m.architecture.neurons_per_hidden},
            {"hidden_activation", "relu"},
            {"output_activation", "logistic"}}},
          {"layers", layers},
          {"normalization", {{"mean", model_detail::vector_json(m.norm_mean)}, {"std", model_detail::vector_json(m.norm_std)}}},
          {"train_config",
           {{"learning_rate", tc.learning_rate},
            {"max_epochs", tc.max_epochs},
            {"patience", tc.patience},
            {"batch_size", tc.batch_size},
            {"validation_fraction", tc.validation_fraction},
            {"rng_seed", tc.rng_seed}}},
          {"dataset", {{"method", to_string(meta.method)}, {"n_bs", meta.n_bs}, {"spec_hash", meta.dataset_hash}}},
          {"best_epoch", m.best_epoch},
          {"history", history}};
}

inline StoredModel model_from_json(const nlohmann::json& j) {
  if (j.value("format", "") != kModelFormat) throw Error("not a uavspoof model file");
  if (j.value("version", 0) != kModelFormatVersion)
    throw Error("unsupported model format version " + std::to_string(j.value("version", 0)));
  StoredModel s;
  const auto& a = j.at("architecture");
  s.model = zero_model({a.at("input_width").get<std::size_t>(), a.at("hidden_layers").get<std::size_t>(),
                        a.at("neurons_per_hidden").get<std::size_t>()});
  const auto& layers = j.at("layers");
  if (layers.size() != s.model.weights.size()) throw Error("model layer count does not match architecture");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    auto& w = s.model.weights[l];
    const auto rows = layers[l].at("rows").get<Eigen::Index>();
    const auto cols = layers[l].at("cols").get<Eigen::Index>();
    const auto values = layers[l].at("weights").get<std::vector<double>>();
    if (rows != w.rows() || cols != w.cols() || static_cast<Eigen::Index>(values.size()) != rows * cols)
      throw Error("layer " + std::to_string(l) + " has inconsistent shape");
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) w(r, c) = values[static_cast<std::size_t>(r * cols + c)];
    s.model.biases[l] = model_detail::json_vector(layers[l].at("biases"));
    if (s.model.biases[l].size() != rows) throw Error("layer " + std::to_string(l) + " bias length mismatch");
  }
  s.model.norm_mean = model_detail::json_vector(j.at("normalization").at("mean"));
  s.model.norm_std = model_detail::json_vector(j.at("normalization").at("std"));
  const auto width = static_cast<Eigen::Index>(s.model.architecture.input_width);
  if (s.model.norm_mean.size() != width || s.model.norm_std.size() != width)
    throw Error("normalization width mismatch");
  if ((s.model.norm_std.array() <= 0.0).any()) throw Error("normalization std must be > 0");
  for (const auto& h : j.at("history"))
    s.model.history.push_back({h.at("epoch").get<std::size_t>(), h.at("train_mse").get<double>(),
                               h.at("val_mse").get<double>(), h.at("val_accuracy").get<double>()});
  s.model.best_epoch = j.value("best_epoch", std::size_t{0});

  const auto& tc = j.at("train_config");
  s.meta.train_config = {tc.at("learning_rate").get<double>(),   tc.at("max_epochs").get<std::size_t>(),
                         tc.at("patience").get<std::size_t>(),   tc.at("batch_size").get<std::size_t>(),
                         tc.at("validation_fraction").get<double>(), tc.at("rng_seed").get<std::uint64_t>()};
  const auto& ds = j.at("dataset");
  s.meta.method = parse_feature_method(ds.at("method").get<std::string>());
  s.meta.n_bs = ds.at("n_bs").get<int>();
  s.meta.dataset_hash = ds.at("spec_hash").get<std::string>();
  return s;
}

inline void save_model(const std::string& path, const MlpModel& m, const ModelMetadata& meta) {
  write_file(path, model_to_json(m, meta).dump(2) + "\n");
}

inline StoredModel load_model(const std::string& path) {
  try {
    return model_from_json(nlohmann::json::parse(read_file(path)));
  } catch (const nlohmann::json::exception& e) {
    throw Error(path + ": " + e.what());
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

/// Columns: epoch,train_mse,val_mse,val_accuracy
inline std::string history_csv(const std::vector<EpochRecord>& history) {
  std::string out = "epoch,train_mse,val_mse,val_accuracy\n";
  for (const auto& h : history)
    out += std::to_string(h.epoch) + "," + format_double(h.train_mse) + "," + format_double(h.val_mse) + "," +
           format_double(h.val_accuracy) + "\n";
  return out;
}

}  // namespace uavspoof
