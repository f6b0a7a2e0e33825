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

#include <cstddef>
#include <string>
#include <vector>

#include "tabcondense/matrix.hpp"

namespace tabcondense {

/// All-numeric table in [0,1] with contiguous labels and per-class row
/// indices. Construct through `make_encoded_dataset`, which checks the
/// invariants.
struct EncodedDataset {
  Matrix features;
  std::vector<int> labels;
  std::vector<std::vector<std::size_t>> class_index;
  std::vector<std::size_t> class_sizes;
  std::vector<std::string> feature_names;

  std::size_t num_rows() const noexcept { return labels.size(); }
  std::size_t num_classes() const noexcept { return class_sizes.size(); }
  std::size_t dim() const noexcept { return features.cols(); }

  /// Rows of class `c`, in original order.
  Matrix class_points(std::size_t c) const {
    return features.select_rows(class_index[c]);
  }
};

/// Builds the class index and validates: labels in [0, num_classes),
/// every class non-empty, every feature finite and in [0,1].
/// Throws InvalidArgument naming the first violation.
EncodedDataset make_encoded_dataset(Matrix features, std::vector<int> labels,
                                    std::size_t num_classes,
                                    std::vector<std::string> feature_names = {});

}  // namespace tabcondense
