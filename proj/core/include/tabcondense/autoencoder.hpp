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

#pragma once

#include <cstdint>
#include <vector>

#include "tabcondense/matrix.hpp"

namespace tabcondense {

enum class Activation { tanh, identity };

struct AutoencoderConfig {
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 16;
  std::size_t latent_dim = 1;
  Activation activation = Activation::tanh;
};

struct TrainingOptions {
  std::size_t epochs = 10;
  std::size_t batch_size = 256;
  double learning_rate = 1e-2;
  std::uint64_t seed = 0;
};

/// input -> hidden (act) -> latent (linear) -> hidden (act) -> input (linear).
/// Trained with Adam on mean squared reconstruction error, loss per row being
/// the squared L2 norm of the residual.
class Autoencoder {
 public:
  struct Layer {
    Matrix weight;  // out x in
    std::vector<double> bias;
  };

  Autoencoder() = default;
  /// Glorot-uniform weights, zero biases, drawn from `seed`.
  Autoencoder(const AutoencoderConfig& config, std::uint64_t seed);

  const AutoencoderConfig& config() const noexcept { return config_; }
  const std::vector<Layer>& layers() const noexcept { return layers_; }
  std::vector<Layer>& layers() noexcept { return layers_; }

  /// Runs `options.epochs` full shuffled passes and returns the mean batch
  /// loss of each epoch. Throws NumericalError on a non-finite loss.
  std::vector<double> train(const Matrix& inputs, const TrainingOptions& options);

  Matrix encode(const Matrix& inputs) const;
  Matrix reconstruct(const Matrix& inputs) const;
  /// Mean over rows of ||x - D(E(x))||^2.
  double reconstruction_loss(const Matrix& inputs) const;

 private:
  AutoencoderConfig config_;
  std::vector<Layer> layers_;  // enc hidden, enc latent, dec hidden, dec out
};

}  // namespace tabcondense
