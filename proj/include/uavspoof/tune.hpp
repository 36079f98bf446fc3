#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "uavspoof/features.hpp"
#include "uavspoof/train.hpp"

namespace uavspoof {

struct TuneGrid {
  std::vector<double> learning_rates;
  std::vector<std::size_t> hidden_layers;
  std::vector<std::size_t> neurons;

  std::size_t size() const { return learning_rates.size() * hidden_layers.size() * neurons.size(); }
};

/// The full hyperparameter grid: 6 learning rates x 1..6 layers x 6 widths.
inline TuneGrid paper_grid() {
  return {{0.05, 0.01, 0.005, 0.001, 0.0005, 0.0001}, {1, 2, 3, 4, 5, 6}, {8, 16, 32, 64, 96, 128}};
}

struct Hyperparameters {
  double learning_rate = 0.001;
  std::size_t hidden_layers = 2;
  std::size_t neurons = 32;
};

/// Best published settings per feature method and base-station count.
inline Hyperparameters reference_hyperparameters(FeatureMethod method, int n_bs) {
  switch (n_bs) {
    case 3:
      if (method == FeatureMethod::kMvsk) return {0.005, 4, 96};
      if (method == FeatureMethod::kBox) return {0.001, 5, 96};
      return {0.0005, 3, 16};
    case 2:
      if (method == FeatureMethod::kMvsk) return {0.001, 2, 32};
      if (method == FeatureMethod::kBox) return {0.001, 5, 96};
      return {0.001, 2, 64};
    case 1:
      if (method == FeatureMethod::kMvsk) return {0.0001, 2, 96};
      if (method == FeatureMethod::kBox) return {0.001, 5, 96};
      return {0.0001, 2, 64};
    default: throw Error("n_bs must be 1, 2 or 3, got " + std::to_string(n_bs));
  }
}

struct GridEntry {
  double learning_rate = 0.0;
  std::size_t hidden_layers = 0;
  std::size_t neurons = 0;
  double val_mse = 0.0;       // of the returned best-epoch snapshot
  double val_accuracy = 0.0;  // at that epoch
  std::size_t parameter_count = 0;
  std::size_t best_epoch = 0;
  std::size_t epochs_run = 0;
};

struct TuneResult {
  std::vector<GridEntry> entries;  // grid order: lr-major, then layers, then neurons
  std::size_t best_index = 0;
  MlpModel best_model;
  std::vector<std::vector<EpochRecord>> histories;  // per entry, same order
};

/// Ordering used to pick the winner: lower validation MSE, then higher
/// validation accuracy, then fewer parameters.
inline bool better_entry(const GridEntry& a, const GridEntry& b) {
  if (a.val_mse != b.val_mse) return a.val_mse < b.val_mse;
  if (a.val_accuracy != b.val_accuracy) return a.val_accuracy > b.val_accuracy;
  return a.parameter_count < b.parameter_count;
}

inline GridEntry summarize(const MlpModel& m, double lr) {
  GridEntry e{lr, m.architecture.hidden_layers, m.architecture.neurons_per_hidden};
  const auto& rec = m.history.at(m.best_epoch - 1);
  e.val_mse = rec.val_mse;
  e.val_accuracy = rec.val_accuracy;
  e.parameter_count = m.architecture.parameter_count();
  e.best_epoch = m.best_epoch;
  e.epochs_run = m.history.size();
  return e;
}

/// Trains every grid configuration with `base` (learning rate overridden)
/// across up to `jobs` worker threads. Results do not depend on `jobs`.
inline TuneResult tune(const LabeledMatrix& data, const TuneGrid& grid, const TrainConfig& base,
                       std::size_t jobs = 1) {
  struct Job {
    double lr;
    MlpArchitecture arch;
  };
  std::vector<Job> work;
  for (double lr : grid.learning_rates)
    for (std::size_t layers : grid.hidden_layers)
      for (std::size_t neurons : grid.neurons) work.push_back({lr, {data.width(), layers, neurons}});
  if (work.empty()) throw Error("tuning grid is empty");

  std::vector<std::optional<MlpModel>> models(work.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < work.size();) {
      try {
        TrainConfig cfg = base;
        cfg.learning_rate = work[i].lr;
        models[i] = train(work[i].arch, data, cfg);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  jobs = std::clamp<std::size_t>(jobs, 1, work.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);

  TuneResult result;
  for (std::size_t i = 0; i < work.size(); ++i) {
    result.entries.push_back(summarize(*models[i], work[i].lr));
    result.histories.push_back(models[i]->history);
    if (i > 0 && better_entry(result.entries[i], result.entries[result.best_index])) result.best_index = i;
  }
  result.best_model = std::move(*models[result.best_index]);
  return result;
}

}  // namespace uavspoof
