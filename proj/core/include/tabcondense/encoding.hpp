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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tabcondense/autoencoder.hpp"
#include "tabcondense/dataset_io.hpp"
#include "tabcondense/encoded_dataset.hpp"
#include "tabcondense/matrix.hpp"
#include "tabcondense/random.hpp"

namespace tabcondense {

/// How categorical columns are mapped to numbers. `hybrid` is the default
/// pipeline; the others are simple variants kept for ablation runs.
enum class CategoricalMode { hybrid, label, target, onehot_pca };

std::string_view to_string(CategoricalMode mode) noexcept;
CategoricalMode parse_categorical_mode(std::string_view text);

struct EncodingParams {
  std::size_t ngram_n = 3;
  std::size_t ae_epochs = 10;
  double ae_learning_rate = 1e-2;
  /// 0 selects max(4 * latent_dim, 16).
  std::size_t ae_hidden_dim = 0;
  std::size_t ae_batch_size = 256;
  double lambda_smooth = 10.0;
  double noise_sigma = 0.05;
  std::uint64_t seed = 0;
  CategoricalMode mode = CategoricalMode::hybrid;

  /// Throws InvalidArgument on out-of-range fields.
  void validate() const;
};

// ---------------------------------------------------------------------------
// String similarity

/// Jaccard similarity of the n-gram sets of `a` and `b`, each padded with
/// n-1 boundary markers on both sides. Two empty strings score 1; an empty
/// string against a non-empty one scores 0.
double ngram_similarity(std::string_view a, std::string_view b, std::size_t n);

/// Row i is [sim(values[i], d_1), ..., sim(values[i], d_k)]. Throws
/// InvalidArgument when a value is missing from the dictionary.
Matrix similarity_encode_column(std::span<const std::string> values,
                                std::span<const std::string> dictionary,
                                std::size_t n);

/// Distinct values of a column in ascending byte order.
std::vector<std::string> build_dictionary(std::span<const std::string> values);

// ---------------------------------------------------------------------------
// Target encoding and normalization

/// (m * local_mean + lambda * global_mean) / (m + lambda).
double target_encode_value(std::size_t m, double local_mean, double global_mean,
                           double lambda);

/// Affine map of [lo, hi] onto [0, 1]; a degenerate range maps to 0.5.
struct MinMax {
  double lo = 0.0;
  double hi = 0.0;

  static MinMax fit(std::span<const double> values);
  double apply(double v) const noexcept;
  /// apply() clamped to [0, 1], for rows outside the fitted range.
  double apply_clamped(double v) const noexcept;
};

std::vector<double> minmax_normalize(std::span<const double> values);

/// Fitted lookup for one categorical column: raw value text -> statistic,
/// followed by a MinMax fitted on the training column.
struct CategoryLookup {
  std::vector<std::string> keys;  // sorted
  std::vector<double> values;
  double fallback = 0.0;          // for values unseen at fit time
  MinMax range;

  double raw(std::string_view key) const;
};

struct TargetEncodedColumn {
  std::vector<double> encoded;
  CategoryLookup lookup;
  bool binary = false;
};

/// The label signal used by target encoding: y for two classes, y/(C-1)
/// otherwise.
double label_signal(int label, std::size_t num_classes);

/// Columns whose values are exactly {0, 1} pass through unchanged. Other
/// columns get the smoothed statistic, per-cell N(0, sigma^2) noise from
/// `rng`, then min-max over the column.
TargetEncodedColumn target_encode_column(std::span<const std::int64_t> values,
                                         std::span<const int> labels,
                                         std::size_t num_classes,
                                         const EncodingParams& params, Rng& rng);

// ---------------------------------------------------------------------------
// Whole-table encoding

/// Everything needed to re-encode rows of the same schema.
class FittedEncoder {
 public:
  EncodingParams params;
  CategoricalMode mode = CategoricalMode::hybrid;
  std::vector<ColumnSchema> columns;
  std::vector<std::string> feature_names;
  std::size_t num_classes = 0;

  std::vector<MinMax> numeric;
  std::vector<std::vector<std::string>> string_dictionaries;
  std::optional<Autoencoder> autoencoder;
  std::vector<MinMax> latent_range;
  /// One per categorical column handled by lookup (integer columns in
  /// hybrid mode; every categorical column in label/target modes).
  std::vector<CategoryLookup> lookups;
  /// onehot_pca: vocabulary per categorical column, projection, range.
  std::vector<std::vector<std::string>> onehot_vocab;
  std::vector<double> pca_mean;
  Matrix pca_components;  // components x onehot_dim
  std::vector<MinMax> pca_range;

  std::size_t dim() const noexcept { return feature_names.size(); }

  /// Encodes rows with the fitted state (no noise, clamped to [0,1]).
  Matrix transform(const RawTable& table) const;

  std::string to_json() const;
  static FittedEncoder from_json(std::string_view text);
};

struct EncodingResult {
  EncodedDataset dataset;
  FittedEncoder encoder;
  /// Mean reconstruction loss per epoch; empty without string columns.
  std::vector<double> ae_epoch_losses;
  bool ae_retried = false;
};

/// Output columns: numeric, then string latent, then integer categorical
/// (hybrid mode). Throws InvalidArgument when a class has no rows.
EncodingResult encode_dataset(const RawTable& table, const EncodingParams& params);

}  // namespace tabcondense
