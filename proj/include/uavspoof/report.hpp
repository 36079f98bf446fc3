#pragma once

#include <algorithm>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "uavspoof/features.hpp"
#include "uavspoof/mlp.hpp"
#include "uavspoof/tune.hpp"

namespace uavspoof {

/// Outcome of evaluating one detector on one test split.
struct ExperimentReport {
  std::string detector;  // "mlp" or "threshold"
  std::string dataset_hash;
  std::string model_hash;  // sha256 of the model file; empty for the threshold detector
  FeatureMethod method = FeatureMethod::kWd;
  int n_bs = 0;
  double threshold_db = 0.0;
  std::vector<EpochRecord> history;
  double test_accuracy = 0.0;
  double test_mse = 0.0;
  ConfusionMatrix confusion;
  double wall_clock_seconds = 0.0;
};

inline nlohmann::json report_to_json(const ExperimentReport& r) {
  using nlohmann::json;
  json history = json::array();
  for (const auto& h : r.history)
    history.push_back(
        {{"epoch", h.epoch}, {"train_mse", h.train_mse}, {"val_mse", h.val_mse}, {"val_accuracy", h.val_accuracy}});
  json j = {{"detector", r.detector},
            {"dataset_hash", r.dataset_hash},
            {"method", to_string(r.method)},
            {"n_bs", r.n_bs},
            {"test_size", r.confusion.total()},
            {"test_accuracy", r.test_accuracy},
            {"test_mse", r.test_mse},
            {"confusion", {{"tp", r.confusion.tp}, {"fp", r.confusion.fp}, {"fn", r.confusion.fn}, {"tn", r.confusion.tn}}},
            {"history", history},
            {"wall_clock_s", r.wall_clock_seconds}};
  if (r.detector == "threshold") j["threshold_db"] = r.threshold_db;
  else j["model_hash"] = r.model_hash;
  return j;
}

/// Grid table in the shape of the best-hyperparameter summary, one row per
/// configuration.
inline std::string grid_report_csv(const TuneResult& result, std::size_t input_width, FeatureMethod method,
                                   int n_bs) {
  std::string out =
      "scenario,method,learning_rate,inputs,hidden_layers,neurons,val_mse,val_accuracy,parameter_count,best_epoch,"
      "epochs_run,selected\n";
  for (std::size_t i = 0; i < result.entries.size(); ++i) {
    const auto& e = result.entries[i];
    out += std::to_string(n_bs) + "bs," + std::string(to_string(method)) + "," + format_double(e.learning_rate) +
           "," + std::to_string(input_width) + "," + std::to_string(e.hidden_layers) + "," +
           std::to_string(e.neurons) + "," + format_double(e.val_mse) + "," + format_double(e.val_accuracy) + "," +
           std::to_string(e.parameter_count) + "," + std::to_string(e.best_epoch) + "," +
           std::to_string(e.epochs_run) + "," + (i == result.best_index ? "1" : "0") + "\n";
  }
  return out;
}

/// One training run for the combined accuracy/MSE-per-epoch table.
struct RunHistory {
  int n_bs = 0;
  FeatureMethod method = FeatureMethod::kWd;
  std::vector<EpochRecord> history;
};

/// Columns scenario,method,epoch,accuracy,mse (validation metrics); rows
/// grouped by scenario (three, two, one BS), then method, epochs ascending.
inline std::string combined_report_csv(std::vector<RunHistory> runs) {
  std::stable_sort(runs.begin(), runs.end(), [](const RunHistory& a, const RunHistory& b) {
    return std::make_tuple(-a.n_bs, static_cast<int>(a.method)) < std::make_tuple(-b.n_bs, static_cast<int>(b.method));
  });
  std::string out = "scenario,method,epoch,accuracy,mse\n";
  for (auto& run : runs) {
    std::sort(run.history.begin(), run.history.end(),
              [](const EpochRecord& a, const EpochRecord& b) { return a.epoch < b.epoch; });
    for (const auto& h : run.history)
      out += std::to_string(run.n_bs) + "bs," + std::string(to_string(run.method)) + "," + std::to_string(h.epoch) +
             "," + format_double(h.val_accuracy) + "," + format_double(h.val_mse) + "\n";
  }
  return out;
}

}  // namespace uavspoof
