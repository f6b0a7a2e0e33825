// Copyright 2026 The tabcondense Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tabcondense/autoencoder.hpp"

#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "tabcondense/error.hpp"
#include "tabcondense/random.hpp"

namespace tabcondense {

namespace {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using RowMajorMap =
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                   Eigen::RowMajor>>;

RowMajorMap as_eigen(const Matrix& m) {
  return RowMajorMap(m.values().data(), static_cast<Eigen::Index>(m.rows()),
                     static_cast<Eigen::Index>(m.cols()));
}

Matrix to_matrix(const Mat& m) {
  Matrix out(static_cast<std::size_t>(m.rows()),
             static_cast<std::size_t>(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = m(r, c);
    }
  }
  return out;
}

struct Param {
  Mat w;
  Vec b;
};

std::vector<Param> to_params(const std::vector<Autoencoder::Layer>& layers) {
  std::vector<Param> params;
  for (const auto& layer : layers) {
    params.push_back({as_eigen(layer.weight),
                      Eigen::Map<const Vec>(layer.bias.data(),
                                            static_cast<Eigen::Index>(layer.bias.size()))});
  }
  return params;
}

void from_params(const std::vector<Param>& params,
                 std::vector<Autoencoder::Layer>& layers) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    layers[i].weight = to_matrix(params[i].w);
    layers[i].bias.assign(params[i].b.data(),
                          params[i].b.data() + params[i].b.size());
  }
}

void activate(Mat& m, Activation act) {
  if (act == Activation::tanh) m = m.array().tanh().matrix();
}

/// Batch rows of x are samples. Returns (pre,post) activations per layer.
struct Forward {
  Mat h0, z, h2, y;
};

Forward forward(const std::vector<Param>& p, const Mat& x, Activation act) {
  Forward f;
  f.h0 = (x * p[0].w.transpose()).rowwise() + p[0].b.transpose();
  activate(f.h0, act);
  f.z = (f.h0 * p[1].w.transpose()).rowwise() + p[1].b.transpose();
  f.h2 = (f.z * p[2].w.transpose()).rowwise() + p[2].b.transpose();
  activate(f.h2, act);
  f.y = (f.h2 * p[3].w.transpose()).rowwise() + p[3].b.transpose();
  return f;
}

Mat act_grad(const Mat& upstream, const Mat& post, Activation act) {
  if (act == Activation::identity) return upstream;
  return (upstream.array() * (1.0 - post.array().square())).matrix();
}

struct AdamState {
  std::vector<Param> m, v;
  std::size_t step = 0;
};

}  // namespace

Autoencoder::Autoencoder(const AutoencoderConfig& config, std::uint64_t seed)
    : config_(config) {
  if (config.input_dim == 0 || config.latent_dim == 0 || config.hidden_dim == 0) {
    throw InvalidArgument("encoding", "autoencoder dimensions must be positive");
  }
  const std::size_t shapes[4][2] = {{config.hidden_dim, config.input_dim},
                                    {config.latent_dim, config.hidden_dim},
                                    {config.hidden_dim, config.latent_dim},
                                    {config.input_dim, config.hidden_dim}};
  Rng rng(derive_seed(seed, 0xae));
  for (const auto& [out, in] : shapes) {
    Layer layer{Matrix(out, in), std::vector<double>(out, 0.0)};
    const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
    for (double& w : layer.weight.values()) w = (2.0 * rng.uniform() - 1.0) * limit;
    layers_.push_back(std::move(layer));
  }
}

std::vector<double> Autoencoder::train(const Matrix& inputs,
                                       const TrainingOptions& options) {
  if (inputs.cols() != config_.input_dim) {
    throw InvalidArgument("encoding", "autoencoder input width mismatch");
  }
  if (inputs.rows() == 0) throw InvalidArgument("encoding", "no training rows");
  if (options.epochs == 0 || options.batch_size == 0 ||
      !(options.learning_rate > 0.0)) {
    throw InvalidArgument("encoding", "invalid autoencoder training options");
  }

  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  const Activation act = config_.activation;
  const Mat x_all = as_eigen(inputs);
  std::vector<Param> p = to_params(layers_);
  AdamState adam;
  for (const auto& q : p) {
    adam.m.push_back({Mat::Zero(q.w.rows(), q.w.cols()), Vec::Zero(q.b.size())});
    adam.v.push_back({Mat::Zero(q.w.rows(), q.w.cols()), Vec::Zero(q.b.size())});
  }

  std::vector<std::size_t> order(inputs.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> epoch_losses;
  const std::size_t n = inputs.rows();

  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    Rng rng(derive_seed(options.seed, 0xe90c, epoch));
    rng.shuffle(std::span<std::size_t>(order));
    double loss_sum = 0.0;
    std::size_t batches = 0;

    for (std::size_t start = 0; start < n; start += options.batch_size) {
      const std::size_t b = std::min(options.batch_size, n - start);
      Mat x(static_cast<Eigen::Index>(b), x_all.cols());
      for (std::size_t i = 0; i < b; ++i) {
        x.row(static_cast<Eigen::Index>(i)) =
            x_all.row(static_cast<Eigen::Index>(order[start + i]));
      }
      const Forward f = forward(p, x, act);
      const Mat residual = f.y - x;
      const double loss = residual.squaredNorm() / static_cast<double>(b);
      if (!std::isfinite(loss)) {
        throw NumericalError("encoding",
                             "autoencoder loss became non-finite at epoch " +
                                 std::to_string(epoch + 1) +
                                 "; lower the learning rate");
      }
      loss_sum += loss;
      ++batches;

      std::vector<Param> g(4);
      Mat dy = residual * (2.0 / static_cast<double>(b));
      g[3] = {dy.transpose() * f.h2, dy.colwise().sum().transpose()};
      Mat da2 = act_grad(dy * p[3].w, f.h2, act);
      g[2] = {da2.transpose() * f.z, da2.colwise().sum().transpose()};
      Mat dz = da2 * p[2].w;
      g[1] = {dz.transpose() * f.h0, dz.colwise().sum().transpose()};
      Mat da0 = act_grad(dz * p[1].w, f.h0, act);
      g[0] = {da0.transpose() * x, da0.colwise().sum().transpose()};

      ++adam.step;
      const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(adam.step));
      const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(adam.step));
      const double lr = options.learning_rate;
      for (std::size_t i = 0; i < 4; ++i) {
        auto& m = adam.m[i];
        auto& v = adam.v[i];
        m.w = kBeta1 * m.w + (1.0 - kBeta1) * g[i].w;
        m.b = kBeta1 * m.b + (1.0 - kBeta1) * g[i].b;
        v.w = kBeta2 * v.w + (1.0 - kBeta2) * g[i].w.cwiseProduct(g[i].w);
        v.b = kBeta2 * v.b + (1.0 - kBeta2) * g[i].b.cwiseProduct(g[i].b);
        p[i].w.array() -= lr * (m.w.array() / bc1) /
                          ((v.w.array() / bc2).sqrt() + kEps);
        p[i].b.array() -= lr * (m.b.array() / bc1) /
                          ((v.b.array() / bc2).sqrt() + kEps);
      }
    }
    epoch_losses.push_back(loss_sum / static_cast<double>(batches));
  }
  from_params(p, layers_);
  return epoch_losses;
}

Matrix Autoencoder::encode(const Matrix& inputs) const {
  const auto p = to_params(layers_);
  Mat h0 = (as_eigen(inputs) * p[0].w.transpose()).rowwise() + p[0].b.transpose();
  activate(h0, config_.activation);
  const Mat z = (h0 * p[1].w.transpose()).rowwise() + p[1].b.transpose();
  return to_matrix(z);
}

Matrix Autoencoder::reconstruct(const Matrix& inputs) const {
  const auto p = to_params(layers_);
  return to_matrix(forward(p, as_eigen(inputs), config_.activation).y);
}

double Autoencoder::reconstruction_loss(const Matrix& inputs) const {
  const auto p = to_params(layers_);
  const Mat x = as_eigen(inputs);
  const Forward f = forward(p, x, config_.activation);
  return (f.y - x).squaredNorm() / static_cast<double>(inputs.rows());
}

}  // namespace tabcondense
