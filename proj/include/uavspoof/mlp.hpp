#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "uavspoof/common.hpp"

namespace uavspoof {

/// ReLU hidden layers of equal width feeding one logistic output unit.
struct MlpArchitecture {
  std::size_t input_width = 1;
  std::size_t hidden_layers = 1;
  std::size_t neurons_per_hidden = 8;

  std::size_t layer_count() const { return hidden_layers + 1; }
  std::size_t parameter_count() const {
    const std::size_t h = neurons_per_hidden;
    return (input_width * h + h) + (hidden_layers - 1) * (h * h + h) + (h + 1);
  }
};

inline void validate(const MlpArchitecture& a) {
  if (a.input_width < 1 || a.hidden_layers < 1 || a.neurons_per_hidden < 1)
    throw Error("architecture needs input_width, hidden_layers and neurons_per_hidden >= 1");
}

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_mse = 0.0;
  double val_mse = 0.0;
  double val_accuracy = 0.0;
};

/// Samples stored one per column.
struct LabeledMatrix {
  Eigen::MatrixXd features;  // input_width x samples
  Eigen::VectorXd labels;    // 0 or 1

  std::size_t size() const { return static_cast<std::size_t>(features.cols()); }
  std::size_t width() const { return static_cast<std::size_t>(features.rows()); }
};

/// Picks the listed columns (samples) of `data`.
inline LabeledMatrix select_columns(const LabeledMatrix& data, std::span<const std::size_t> idx) {
  LabeledMatrix out{Eigen::MatrixXd(data.features.rows(), static_cast<Eigen::Index>(idx.size())),
                    Eigen::VectorXd(static_cast<Eigen::Index>(idx.size()))};
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const auto c = static_cast<Eigen::Index>(idx[i]);
    out.features.col(static_cast<Eigen::Index>(i)) = data.features.col(c);
    out.labels(static_cast<Eigen::Index>(i)) = data.labels(c);
  }
  return out;
}

struct MlpModel {
  MlpArchitecture architecture;
  std::vector<Eigen::MatrixXd> weights;  // layer l: out x in
  std::vector<Eigen::VectorXd> biases;
  Eigen::VectorXd norm_mean;
  Eigen::VectorXd norm_std;  // entries > 0
  std::vector<EpochRecord> history;
  std::size_t best_epoch = 0;
};

/// Zero weights, identity normalization.
inline MlpModel zero_model(const MlpArchitecture& arch) {
  validate(arch);
  MlpModel m;
  m.architecture = arch;
  const auto in = static_cast<Eigen::Index>(arch.input_width);
  const auto h = static_cast<Eigen::Index>(arch.neurons_per_hidden);
  Eigen::Index fan_in = in;
  for (std::size_t l = 0; l < arch.layer_count(); ++l) {
    const Eigen::Index fan_out = l + 1 == arch.layer_count() ? 1 : h;
    m.weights.push_back(Eigen::MatrixXd::Zero(fan_out, fan_in));
    m.biases.push_back(Eigen::VectorXd::Zero(fan_out));
    fan_in = fan_out;
  }
  m.norm_mean = Eigen::VectorXd::Zero(in);
  m.norm_std = Eigen::VectorXd::Ones(in);
  return m;
}

/// Glorot-uniform weights in +/- sqrt(6 / (fan_in + fan_out)), zero biases.
inline MlpModel init_model(const MlpArchitecture& arch, std::uint64_t seed) {
  MlpModel m = zero_model(arch);
  std::mt19937_64 rng(seed);
  for (auto& w : m.weights) {
    const double limit = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
    std::uniform_real_distribution<double> u(-limit, limit);
    for (Eigen::Index c = 0; c < w.cols(); ++c)
      for (Eigen::Index r = 0; r < w.rows(); ++r) w(r, c) = u(rng);
  }
  return m;
}

inline double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

inline Eigen::MatrixXd normalize(const MlpModel& m, const Eigen::MatrixXd& raw) {
  return (raw.colwise() - m.norm_mean).array().colwise() / m.norm_std.array();
}

/// Batched forward pass on raw (unnormalized) inputs; one output per column.
inline Eigen::RowVectorXd predict(const MlpModel& m, const Eigen::MatrixXd& raw) {
  if (static_cast<std::size_t>(raw.rows()) != m.architecture.input_width)
    throw Error("input width " + std::to_string(raw.rows()) + " does not match model width " +
                std::to_string(m.architecture.input_width));
  Eigen::MatrixXd a = normalize(m, raw);
  for (std::size_t l = 0; l < m.weights.size(); ++l) {
    Eigen::MatrixXd z = (m.weights[l] * a).colwise() + m.biases[l];
    a = l + 1 == m.weights.size() ? z : Eigen::MatrixXd(z.cwiseMax(0.0));
  }
  return a.row(0).unaryExpr([](double z) { return sigmoid(z); });
}

inline double forward(const MlpModel& m, std::span<const double> x) {
  const Eigen::Map<const Eigen::VectorXd> col(x.data(), static_cast<Eigen::Index>(x.size()));
  return predict(m, Eigen::MatrixXd(col))(0);
}

/// Gradients of the mean squared error with the same shapes as the model.
struct Gradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
  double loss = 0.0;
};

/// Exact gradients of MSE through the logistic output and ReLU hiddens.
/// The ReLU derivative at exactly 0 is taken as 0.
inline Gradients backprop_gradients(const MlpModel& m, const LabeledMatrix& batch) {
  if (batch.size() == 0) throw Error("backprop on empty batch");
  const std::size_t n_layers = m.weights.size();
  std::vector<Eigen::MatrixXd> acts;  // acts[0] = normalized input, acts[l+1] = output of layer l
  acts.reserve(n_layers + 1);
  acts.push_back(normalize(m, batch.features));
  for (std::size_t l = 0; l < n_layers; ++l) {
    Eigen::MatrixXd z = (m.weights[l] * acts.back()).colwise() + m.biases[l];
    if (l + 1 == n_layers)
      acts.push_back(z.unaryExpr([](double v) { return sigmoid(v); }));
    else
      acts.push_back(z.cwiseMax(0.0));
  }
  const double count = static_cast<double>(batch.size());
  const Eigen::RowVectorXd y_hat = acts.back().row(0);
  const Eigen::RowVectorXd err = y_hat - batch.labels.transpose();

  Gradients g;
  g.loss = err.squaredNorm() / count;
  g.weights.resize(n_layers);
  g.biases.resize(n_layers);
  // dL/dz at the output: 2 (y_hat - y) / M * y_hat (1 - y_hat)
  Eigen::MatrixXd delta = (2.0 / count) * err.array() * y_hat.array() * (1.0 - y_hat.array());
  for (std::size_t l = n_layers; l-- > 0;) {
    g.weights[l] = delta * acts[l].transpose();
    g.biases[l] = delta.rowwise().sum();
    if (l > 0) {
      Eigen::MatrixXd back = m.weights[l].transpose() * delta;
      delta = back.array() * (acts[l].array() > 0.0).cast<double>();
    }
  }
  return g;
}

// ---- metrics ---------------------------------------------------------------

inline double loss_mse(std::span<const double> predictions, std::span<const double> labels) {
  if (predictions.empty()) throw Error("loss_mse of empty input");
  if (predictions.size() != labels.size()) throw Error("loss_mse length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double d = labels[i] - predictions[i];
    acc += d * d;
  }
  return acc / static_cast<double>(predictions.size());
}

/// Positive class = spoofed.
struct ConfusionMatrix {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;

  std::size_t total() const { return tp + fp + fn + tn; }
  double accuracy() const {
    if (total() == 0) throw Error("accuracy of empty confusion matrix");
    return static_cast<double>(tp + tn) / static_cast<double>(total());
  }
};

inline ConfusionMatrix confusion(std::span<const double> predictions, std::span<const double> labels,
                                 double cut = 0.5) {
  if (predictions.size() != labels.size()) throw Error("confusion length mismatch");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const bool pred = predictions[i] >= cut;
    const bool truth = labels[i] >= 0.5;
    if (pred && truth) ++cm.tp;
    else if (pred) ++cm.fp;
    else if (truth) ++cm.fn;
    else ++cm.tn;
  }
  return cm;
}

inline double accuracy(std::span<const double> predictions, std::span<const double> labels, double cut = 0.5) {
  if (predictions.empty()) throw Error("accuracy of empty input");
  return confusion(predictions, labels, cut).accuracy();
}

inline std::span<const double> as_span(const Eigen::RowVectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}
inline std::span<const double> as_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

}  // namespace uavspoof
