#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "uavspoof/common.hpp"
#include "uavspoof/mlp.hpp"

namespace uavspoof {

struct TrainConfig {
  double learning_rate = 0.001;
  std::size_t max_epochs = 500;
  std::size_t patience = 15;
  std::size_t batch_size = 32;
  double validation_fraction = 0.2;
  std::uint64_t rng_seed = 0;
};

inline void validate(const TrainConfig& c) {
  if (!(c.learning_rate > 0.0)) throw Error("learning_rate must be > 0");
  if (c.max_epochs < 1) throw Error("max_epochs must be >= 1");
  if (c.patience < 1) throw Error("patience must be >= 1");
  if (c.batch_size < 1) throw Error("batch_size must be >= 1");
  if (!(c.validation_fraction > 0.0 && c.validation_fraction < 1.0))
    throw Error("validation_fraction must be in (0, 1)");
}

/// Adam with bias-corrected moment estimates.
class AdamOptimizer {
 public:
  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEpsilon = 1e-8;

  AdamOptimizer(const MlpModel& m, double learning_rate) : lr_(learning_rate) {
    for (std::size_t l = 0; l < m.weights.size(); ++l) {
      mw_.push_back(Eigen::MatrixXd::Zero(m.weights[l].rows(), m.weights[l].cols()));
      vw_.push_back(mw_.back());
      mb_.push_back(Eigen::VectorXd::Zero(m.biases[l].size()));
      vb_.push_back(mb_.back());
    }
  }

  void step(MlpModel& m, const Gradients& g) {
    ++t_;
    const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(t_));
    for (std::size_t l = 0; l < m.weights.size(); ++l) {
      update(m.weights[l], g.weights[l], mw_[l], vw_[l], c1, c2);
      update(m.biases[l], g.biases[l], mb_[l], vb_[l], c1, c2);
    }
  }

 private:
  template <typename P, typename G>
  void update(P& param, const G& grad, P& m, P& v, double c1, double c2) const {
    m = kBeta1 * m + (1.0 - kBeta1) * grad;
    v = kBeta2 * v + (1.0 - kBeta2) * grad.cwiseProduct(grad);
    param.array() -= lr_ * (m.array() / c1) / ((v.array() / c2).sqrt() + kEpsilon);
  }

  double lr_;
  std::size_t t_ = 0;
  std::vector<Eigen::MatrixXd> mw_, vw_;
  std::vector<Eigen::VectorXd> mb_, vb_;
};

/// Tracks the best validation loss; signals a stop after `patience`
/// consecutive epochs without strict improvement.
class EarlyStopping {
 public:
  explicit EarlyStopping(std::size_t patience) : patience_(patience) {}

  /// Returns true when `loss` is a new best.
  bool update(std::size_t epoch, double loss) {
    if (loss < best_loss_) {
      best_loss_ = loss;
      best_epoch_ = epoch;
      stale_ = 0;
      return true;
    }
    ++stale_;
    return false;
  }

  bool should_stop() const { return stale_ >= patience_; }
  double best_loss() const { return best_loss_; }
  std::size_t best_epoch() const { return best_epoch_; }

 private:
  std::size_t patience_;
  double best_loss_ = std::numeric_limits<double>::infinity();
  std::size_t best_epoch_ = 0;
  std::size_t stale_ = 0;
};

/// Deterministic train/validation split of sample indices.
struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
};

inline Split split_indices(std::size_t n, double validation_fraction, std::uint64_t seed) {
  if (n < 2) throw Error("need at least 2 samples to split off a validation set");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  auto n_val = static_cast<std::size_t>(std::llround(validation_fraction * static_cast<double>(n)));
  n_val = std::clamp<std::size_t>(n_val, 1, n - 1);
  return {std::vector<std::size_t>(idx.begin() + static_cast<std::ptrdiff_t>(n_val), idx.end()),
          std::vector<std::size_t>(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_val))};
}

/// Per-feature mean and standard deviation; zero deviations become 1.
inline void fit_normalization(MlpModel& m, const Eigen::MatrixXd& features) {
  const double n = static_cast<double>(features.cols());
  m.norm_mean = features.rowwise().mean();
  const Eigen::MatrixXd centered = features.colwise() - m.norm_mean;
  m.norm_std = (centered.array().square().rowwise().sum() / n).sqrt();
  for (Eigen::Index i = 0; i < m.norm_std.size(); ++i)
    if (!(m.norm_std(i) > 0.0) || !std::isfinite(m.norm_std(i))) m.norm_std(i) = 1.0;
}

struct Evaluation {
  double mse = 0.0;
  double accuracy = 0.0;
};

inline Evaluation evaluate(const MlpModel& m, const LabeledMatrix& data) {
  const Eigen::RowVectorXd p = predict(m, data.features);
  return {loss_mse(as_span(p), as_span(data.labels)), accuracy(as_span(p), as_span(data.labels))};
}

/// Trains with Adam on minibatches, early-stopping on validation MSE, and
/// returns the best-validation snapshot carrying the full epoch history.
inline MlpModel train(const MlpArchitecture& arch, const LabeledMatrix& data, const TrainConfig& cfg) {
  validate(arch);
  validate(cfg);
  if (data.size() == 0) throw Error("training set is empty");
  if (data.width() != arch.input_width)
    throw Error("dataset width " + std::to_string(data.width()) + " does not match architecture input " +
                std::to_string(arch.input_width));
  std::size_t positives = 0;
  for (Eigen::Index i = 0; i < data.labels.size(); ++i) {
    const double y = data.labels(i);
    if (y != 0.0 && y != 1.0) throw Error("labels must be 0 or 1");
    positives += y == 1.0 ? 1 : 0;
  }
  if (positives == 0 || positives == data.size()) throw Error("training set contains a single class");

  const std::uint64_t seed = derive_seed(cfg.rng_seed, stream::kTraining);
  const Split split = split_indices(data.size(), cfg.validation_fraction, derive_seed(seed, 0));
  const LabeledMatrix train_set = select_columns(data, split.train);
  const LabeledMatrix val_set = select_columns(data, split.validation);

  MlpModel model = init_model(arch, derive_seed(seed, 1));
  fit_normalization(model, train_set.features);
  AdamOptimizer adam(model, cfg.learning_rate);
  EarlyStopping stopper(cfg.patience);
  std::mt19937_64 rng(derive_seed(seed, 2));

  MlpModel best = model;
  std::vector<EpochRecord> history;
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      const LabeledMatrix batch =
          select_columns(train_set, std::span<const std::size_t>(order).subspan(start, end - start));
      adam.step(model, backprop_gradients(model, batch));
    }
    const Evaluation tr = evaluate(model, train_set);
    const Evaluation va = evaluate(model, val_set);
    history.push_back({epoch, tr.mse, va.mse, va.accuracy});
    if (stopper.update(epoch, va.mse)) best = model;
    if (stopper.should_stop()) break;
  }
  best.history = std::move(history);
  best.best_epoch = stopper.best_epoch();
  return best;
}

}  // namespace uavspoof
