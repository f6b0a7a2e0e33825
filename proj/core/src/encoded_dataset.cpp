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

#include "tabcondense/encoded_dataset.hpp"

#include <cmath>

#include "tabcondense/condensed_table.hpp"
#include "tabcondense/error.hpp"

namespace tabcondense {

EncodedDataset make_encoded_dataset(Matrix features, std::vector<int> labels,
                                    std::size_t num_classes,
                                    std::vector<std::string> feature_names) {
  if (features.rows() != labels.size()) {
    throw InvalidArgument("encoding", "feature rows and label count differ");
  }
  if (num_classes == 0) throw InvalidArgument("encoding", "no classes");
  const auto values = features.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw InvalidArgument(
          "encoding", "feature value outside [0,1] at row " +
                          std::to_string(i / features.cols()) + ", column " +
                          std::to_string(i % features.cols()));
    }
  }

  EncodedDataset ds;
  ds.class_index.resize(num_classes);
  for (std::size_t r = 0; r < labels.size(); ++r) {
    const int y = labels[r];
    if (y < 0 || static_cast<std::size_t>(y) >= num_classes) {
      throw InvalidArgument("encoding", "label " + std::to_string(y) +
                                            " out of range at row " +
                                            std::to_string(r));
    }
    ds.class_index[static_cast<std::size_t>(y)].push_back(r);
  }
  ds.class_sizes.resize(num_classes);
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (ds.class_index[c].empty()) {
      throw InvalidArgument("encoding",
                            "class " + std::to_string(c) + " has no rows");
    }
    ds.class_sizes[c] = ds.class_index[c].size();
  }
  if (feature_names.empty()) {
    for (std::size_t j = 0; j < features.cols(); ++j) {
      feature_names.push_back("f" + std::to_string(j));
    }
  }
  ds.features = std::move(features);
  ds.labels = std::move(labels);
  ds.feature_names = std::move(feature_names);
  return ds;
}

std::vector<std::size_t> CondensedTable::label_counts(
    std::size_t num_classes) const {
  std::vector<std::size_t> counts(num_classes, 0);
  for (int y : labels) {
    if (y >= 0 && static_cast<std::size_t>(y) < num_classes) {
      ++counts[static_cast<std::size_t>(y)];
    }
  }
  return counts;
}

}  // namespace tabcondense
