#pragma once

// Reference implementations used only by tests. Each one takes a different
// route from the library code it checks.

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "uavspoof/mlp.hpp"

namespace uavspoof::oracle {

struct NaiveMoments {
  double mean, variance, skewness, kurtosis;
  // Magnitudes of the standardized sums behind skewness and kurtosis:
  // E|d|^3 / m2^1.5 and m4 / m2^2 + 3. Rounding error scales with these,
  // not with the (possibly vanishing) moment itself.
  double skewness_scale = 1.0, kurtosis_scale = 1.0;
};

/// Explicit two-pass summation in extended precision.
inline NaiveMoments naive_mvsk(const std::vector<double>& xs) {
  const long double n = static_cast<long double>(xs.size());
  long double sum = 0;
  for (double x : xs) sum += x;
  const long double mean = sum / n;
  long double s2 = 0, s3 = 0, s4 = 0, a3 = 0;
  for (double x : xs) {
    const long double d = x - mean;
    s2 += d * d;
    s3 += d * d * d;
    a3 += std::abs(d * d * d);
    s4 += d * d * d * d;
  }
  if (s2 == 0) return {static_cast<double>(mean), 0, 0, 0};
  const long double m2 = s2 / n, m3 = s3 / n, m4 = s4 / n;
  return {static_cast<double>(mean),
          static_cast<double>(s2 / (n - 1)),
          static_cast<double>(m3 / std::pow(m2, 1.5L)),
          static_cast<double>(m4 / (m2 * m2) - 3),
          static_cast<double>(a3 / n / std::pow(m2, 1.5L)),
          static_cast<double>(m4 / (m2 * m2) + 3)};
}

/// Integral over the real line of |F_a(x) - F_b(x)| for the two empirical
/// CDFs, evaluated exactly piece by piece between consecutive sample points.
inline double cdf_area(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<double> pts(a);
  pts.insert(pts.end(), b.begin(), b.end());
  std::sort(pts.begin(), pts.end());
  auto cdf = [](const std::vector<double>& s, double x) {
    return static_cast<double>(std::upper_bound(s.begin(), s.end(), x) - s.begin()) / static_cast<double>(s.size());
  };
  double area = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double width = pts[i + 1] - pts[i];
    if (width > 0) area += std::abs(cdf(a, pts[i]) - cdf(b, pts[i])) * width;
  }
  return area;
}

/// Scalar loop evaluation of the network on one raw input.
inline double straight_line_forward(const MlpModel& m, const std::vector<double>& x) {
  std::vector<double> a(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    a[i] = (x[i] - m.norm_mean(static_cast<Eigen::Index>(i))) / m.norm_std(static_cast<Eigen::Index>(i));
  for (std::size_t l = 0; l < m.weights.size(); ++l) {
    const auto& w = m.weights[l];
    std::vector<double> next(static_cast<std::size_t>(w.rows()));
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      double z = m.biases[l](r);
      for (Eigen::Index c = 0; c < w.cols(); ++c) z += w(r, c) * a[static_cast<std::size_t>(c)];
      if (l + 1 == m.weights.size()) next[static_cast<std::size_t>(r)] = 1.0 / (1.0 + std::exp(-z));
      else next[static_cast<std::size_t>(r)] = z > 0 ? z : 0.0;
    }
    a = std::move(next);
  }
  return a[0];
}

inline double straight_line_mse(const MlpModel& m, const LabeledMatrix& batch) {
  double acc = 0.0;
  for (Eigen::Index c = 0; c < batch.features.cols(); ++c) {
    std::vector<double> x(batch.features.col(c).data(), batch.features.col(c).data() + batch.features.rows());
    const double d = straight_line_forward(m, x) - batch.labels(c);
    acc += d * d;
  }
  return acc / static_cast<double>(batch.features.cols());
}

/// Central finite difference of the loss with respect to every parameter,
/// in the same layout as Gradients (weights then biases per layer).
struct NumericGradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
};

inline NumericGradients finite_difference(MlpModel m, const LabeledMatrix& batch, double h = 1e-5) {
  NumericGradients g;
  for (std::size_t l = 0; l < m.weights.size(); ++l) {
    g.weights.push_back(Eigen::MatrixXd::Zero(m.weights[l].rows(), m.weights[l].cols()));
    for (Eigen::Index i = 0; i < m.weights[l].size(); ++i) {
      double& p = m.weights[l].data()[i];
      const double saved = p;
      p = saved + h;
      const double up = straight_line_mse(m, batch);
      p = saved - h;
      const double down = straight_line_mse(m, batch);
      p = saved;
      g.weights[l].data()[i] = (up - down) / (2 * h);
    }
    g.biases.push_back(Eigen::VectorXd::Zero(m.biases[l].size()));
    for (Eigen::Index i = 0; i < m.biases[l].size(); ++i) {
      double& p = m.biases[l](i);
      const double saved = p;
      p = saved + h;
      const double up = straight_line_mse(m, batch);
      p = saved - h;
      const double down = straight_line_mse(m, batch);
      p = saved;
      g.biases[l](i) = (up - down) / (2 * h);
    }
  }
  return g;
}

/// |a - n| / max(|a| + |n|, floor); the floor keeps vanishing gradients from
/// turning rounding noise into large ratios.
inline double relative_error(double analytic, double numeric, double floor = 1e-6) {
  return std::abs(analytic - numeric) / std::max(std::abs(analytic) + std::abs(numeric), floor);
}

/// Random model with random normalization statistics and a random batch.
struct GradientCase {
  MlpModel model;
  LabeledMatrix batch;
};

/// Smallest |pre-activation| over every hidden unit and sample.
inline double min_hidden_preactivation(const MlpModel& m, const LabeledMatrix& batch) {
  Eigen::MatrixXd a = normalize(m, batch.features);
  double out = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l + 1 < m.weights.size(); ++l) {
    const Eigen::MatrixXd z = (m.weights[l] * a).colwise() + m.biases[l];
    out = std::min(out, z.cwiseAbs().minCoeff());
    a = z.cwiseMax(0.0);
  }
  return out;
}

/// Random draw whose hidden pre-activations all sit at least `kink_margin`
/// away from the ReLU kink, so a central difference never straddles it.
inline GradientCase random_gradient_case(std::mt19937_64& rng, double kink_margin = 1e-3) {
  std::uniform_int_distribution<std::size_t> width(1, 5), layers(1, 3), neurons(1, 6), batch_size(1, 8);
  const MlpArchitecture arch{width(rng), layers(rng), neurons(rng)};
  GradientCase gc{init_model(arch, rng()), {}};
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> pos(0.5, 2.0);
  for (auto& b : gc.model.biases)
    for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = 0.3 * gauss(rng);
  for (Eigen::Index i = 0; i < gc.model.norm_mean.size(); ++i) {
    gc.model.norm_mean(i) = gauss(rng);
    gc.model.norm_std(i) = pos(rng);
  }
  const auto n = static_cast<Eigen::Index>(batch_size(rng));
  gc.batch.features = Eigen::MatrixXd(static_cast<Eigen::Index>(arch.input_width), n);
  gc.batch.labels = Eigen::VectorXd(n);
  std::bernoulli_distribution coin(0.5);
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = 0; r < gc.batch.features.rows(); ++r) gc.batch.features(r, c) = 2.0 * gauss(rng);
    gc.batch.labels(c) = coin(rng) ? 1.0 : 0.0;
  }
  if (min_hidden_preactivation(gc.model, gc.batch) < kink_margin) return random_gradient_case(rng, kink_margin);
  return gc;
}

/// Largest relative error over all parameters of one case.
inline double max_gradient_error(const GradientCase& gc) {
  const Gradients analytic = backprop_gradients(gc.model, gc.batch);
  const NumericGradients numeric = finite_difference(gc.model, gc.batch);
  double worst = 0.0;
  for (std::size_t l = 0; l < analytic.weights.size(); ++l) {
    for (Eigen::Index i = 0; i < analytic.weights[l].size(); ++i)
      worst = std::max(worst, relative_error(analytic.weights[l].data()[i], numeric.weights[l].data()[i]));
    for (Eigen::Index i = 0; i < analytic.biases[l].size(); ++i)
      worst = std::max(worst, relative_error(analytic.biases[l](i), numeric.biases[l](i)));
  }
  return worst;
}

/// Random series drawn from a random family (normal, exponential, uniform,
/// or lattice with ties), with a random offset and scale.
inline std::vector<double> random_series(std::mt19937_64& rng, std::size_t min_len = 2, std::size_t max_len = 200) {
  std::uniform_int_distribution<std::size_t> len(min_len, max_len);
  std::uniform_int_distribution<int> family(0, 3);
  std::uniform_real_distribution<double> offset(-100.0, 100.0), scale(0.01, 10.0);
  const std::size_t n = len(rng);
  const int f = family(rng);
  const double off = offset(rng), sc = scale(rng);
  std::normal_distribution<double> gauss;
  std::exponential_distribution<double> expo(1.0);
  std::uniform_real_distribution<double> unif;
  std::uniform_int_distribution<int> lattice(0, 4);
  std::vector<double> xs(n);
  for (auto& x : xs) {
    switch (f) {
      case 0: x = gauss(rng); break;
      case 1: x = expo(rng); break;
      case 2: x = unif(rng); break;
      default: x = lattice(rng); break;
    }
    x = off + sc * x;
  }
  return xs;
}

}  // namespace uavspoof::oracle
