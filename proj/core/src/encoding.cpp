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

#include "tabcondense/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/Dense>
#include <json.hpp>

#include "tabcondense/error.hpp"

namespace tabcondense {

using nlohmann::json;

namespace {

const auto& numbers(const ColumnData& d) { return std::get<std::vector<double>>(d); }
const auto& strings(const ColumnData& d) {
  return std::get<std::vector<std::string>>(d);
}
const auto& integers(const ColumnData& d) {
  return std::get<std::vector<std::int64_t>>(d);
}

/// Cell text used as the lookup key for any categorical column.
std::vector<std::string> category_keys(const ColumnData& d) {
  if (std::holds_alternative<std::vector<std::string>>(d)) return strings(d);
  const auto& ints = integers(d);
  std::vector<std::string> keys(ints.size());
  std::transform(ints.begin(), ints.end(), keys.begin(),
                 [](std::int64_t v) { return std::to_string(v); });
  return keys;
}

/// Distinct keys in natural order: numeric for integer columns, byte order
/// for strings.
std::vector<std::string> ordered_categories(const ColumnData& d) {
  if (std::holds_alternative<std::vector<std::string>>(d)) {
    return build_dictionary(strings(d));
  }
  std::vector<std::int64_t> v = integers(d);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  std::vector<std::string> out;
  for (auto x : v) out.push_back(std::to_string(x));
  return out;
}

CategoryLookup make_lookup(std::vector<std::pair<std::string, double>> entries,
                           double fallback) {
  std::sort(entries.begin(), entries.end());
  CategoryLookup lookup;
  for (auto& [k, v] : entries) {
    lookup.keys.push_back(std::move(k));
    lookup.values.push_back(v);
  }
  lookup.fallback = fallback;
  return lookup;
}

bool is_categorical(const ColumnSchema& c) { return c.kind != ColumnKind::numeric; }

void check_table(const RawTable& table, const std::vector<ColumnSchema>& columns) {
  if (table.columns.size() != columns.size()) {
    throw InvalidArgument("encoding", "table schema differs from fitted schema");
  }
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (table.columns[c].name != columns[c].name ||
        table.columns[c].kind != columns[c].kind) {
      throw InvalidArgument("encoding", "column '" + table.columns[c].name +
                                            "' differs from fitted schema");
    }
  }
}

json minmax_json(const MinMax& m) { return json::array({m.lo, m.hi}); }
MinMax minmax_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    rows.push_back(std::vector<double>(m.row(r).begin(), m.row(r).end()));
  }
  return rows;
}

Matrix matrix_from(const json& j, std::size_t cols_if_empty = 0) {
  const std::size_t rows = j.size();
  const std::size_t cols = rows ? j.at(0).size() : cols_if_empty;
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = j.at(r).at(c).get<double>();
  }
  return m;
}

}  // namespace

std::string_view to_string(CategoricalMode mode) noexcept {
  switch (mode) {
    case CategoricalMode::hybrid:
      return "hybrid";
    case CategoricalMode::label:
      return "label";
    case CategoricalMode::target:
      return "target";
    case CategoricalMode::onehot_pca:
      return "onehot_pca";
  }
  return "hybrid";
}

CategoricalMode parse_categorical_mode(std::string_view text) {
  if (text == "hybrid" || text == "hcfe") return CategoricalMode::hybrid;
  if (text == "label") return CategoricalMode::label;
  if (text == "target") return CategoricalMode::target;
  if (text == "onehot_pca" || text == "onehot-pca") return CategoricalMode::onehot_pca;
  throw InvalidArgument("encoding", "unknown encoding mode '" + std::string(text) + "'");
}

void EncodingParams::validate() const {
  if (ngram_n < 1) throw InvalidArgument("encoding", "ngram_n must be >= 1");
  if (ae_epochs < 1) throw InvalidArgument("encoding", "ae_epochs must be >= 1");
  if (ae_batch_size < 1) throw InvalidArgument("encoding", "ae_batch_size must be >= 1");
  if (!(ae_learning_rate > 0.0) || !std::isfinite(ae_learning_rate)) {
    throw InvalidArgument("encoding", "ae_learning_rate must be positive");
  }
  if (!(lambda_smooth >= 0.0)) throw InvalidArgument("encoding", "lambda must be >= 0");
  if (!(noise_sigma >= 0.0)) throw InvalidArgument("encoding", "sigma must be >= 0");
}

EncodingResult encode_dataset(const RawTable& table, const EncodingParams& params) {
  params.validate();
  const std::size_t n = table.num_rows();
  const std::size_t num_classes = table.num_classes();
  if (n == 0) throw InvalidArgument("encoding", "table has no rows");

  EncodingResult result;
  FittedEncoder& enc = result.encoder;
  enc.params = params;
  enc.mode = params.mode;
  enc.columns = table.columns;
  enc.num_classes = num_classes;

  std::vector<std::vector<double>> out_columns;

  // Numeric columns first, in schema order.
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (table.columns[c].kind != ColumnKind::numeric) continue;
    const auto& v = numbers(table.data[c]);
    enc.numeric.push_back(MinMax::fit(v));
    std::vector<double> col(n);
    for (std::size_t r = 0; r < n; ++r) col[r] = enc.numeric.back().apply(v[r]);
    out_columns.push_back(std::move(col));
    enc.feature_names.push_back(table.columns[c].name);
  }

  if (params.mode == CategoricalMode::hybrid) {
    // String columns: similarity encode, concatenate, compress.
    std::vector<Matrix> blocks;
    std::size_t d_str = 0;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (table.columns[c].kind != ColumnKind::categorical_string) continue;
      const auto& v = strings(table.data[c]);
      enc.string_dictionaries.push_back(build_dictionary(v));
      blocks.push_back(
          similarity_encode_column(v, enc.string_dictionaries.back(), params.ngram_n));
      d_str += blocks.back().cols();
    }
    if (!blocks.empty()) {
      Matrix concat(n, d_str);
      std::size_t offset = 0;
      for (const auto& b : blocks) {
        for (std::size_t r = 0; r < n; ++r) {
          std::copy(b.row(r).begin(), b.row(r).end(), concat.row(r).begin() + offset);
        }
        offset += b.cols();
      }
      AutoencoderConfig cfg;
      cfg.input_dim = d_str;
      cfg.latent_dim = blocks.size();
      cfg.hidden_dim = params.ae_hidden_dim
                           ? params.ae_hidden_dim
                           : std::max<std::size_t>(4 * cfg.latent_dim, 16);
      TrainingOptions opts{params.ae_epochs, params.ae_batch_size,
                           params.ae_learning_rate, derive_seed(params.seed, 0xa7)};
      Autoencoder ae(cfg, opts.seed);
      auto losses = ae.train(concat, opts);
      if (losses.size() > 1 && !(losses.back() < losses.front())) {
        opts.learning_rate *= 0.5;
        ae = Autoencoder(cfg, opts.seed);
        losses = ae.train(concat, opts);
        result.ae_retried = true;
      }
      result.ae_epoch_losses = std::move(losses);

      const Matrix z = ae.encode(concat);
      for (std::size_t j = 0; j < z.cols(); ++j) {
        std::vector<double> col(n);
        for (std::size_t r = 0; r < n; ++r) col[r] = z(r, j);
        enc.latent_range.push_back(MinMax::fit(col));
        for (double& x : col) x = enc.latent_range.back().apply(x);
        out_columns.push_back(std::move(col));
        enc.feature_names.push_back("str_latent_" + std::to_string(j));
      }
      enc.autoencoder = std::move(ae);
    }

    // Integer columns: {0,1} for binary, smoothed noisy target otherwise.
    Rng noise(derive_seed(params.seed, 0x7e));
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (table.columns[c].kind != ColumnKind::categorical_integer) continue;
      auto te = target_encode_column(integers(table.data[c]), table.labels,
                                     num_classes, params, noise);
      enc.lookups.push_back(std::move(te.lookup));
      out_columns.push_back(std::move(te.encoded));
      enc.feature_names.push_back(table.columns[c].name);
    }
  } else if (params.mode == CategoricalMode::label ||
             params.mode == CategoricalMode::target) {
    double global = 0.0;
    for (int y : table.labels) global += label_signal(y, num_classes);
    global /= static_cast<double>(n);

    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (!is_categorical(table.columns[c])) continue;
      const auto keys = category_keys(table.data[c]);
      std::vector<std::pair<std::string, double>> entries;
      if (params.mode == CategoricalMode::label) {
        const auto cats = ordered_categories(table.data[c]);
        for (std::size_t i = 0; i < cats.size(); ++i) {
          entries.emplace_back(cats[i], static_cast<double>(i));
        }
      } else {
        std::map<std::string, std::pair<double, std::size_t>> acc;
        for (std::size_t r = 0; r < n; ++r) {
          auto& a = acc[keys[r]];
          a.first += label_signal(table.labels[r], num_classes);
          ++a.second;
        }
        for (const auto& [k, a] : acc) {
          entries.emplace_back(k, a.first / static_cast<double>(a.second));
        }
      }
      CategoryLookup lookup = make_lookup(std::move(entries),
                                          params.mode == CategoricalMode::target ? global : 0.0);
      std::vector<double> col(n);
      for (std::size_t r = 0; r < n; ++r) col[r] = lookup.raw(keys[r]);
      lookup.range = MinMax::fit(col);
      for (double& x : col) x = lookup.range.apply(x);
      enc.lookups.push_back(std::move(lookup));
      out_columns.push_back(std::move(col));
      enc.feature_names.push_back(table.columns[c].name);
    }
  } else {  // onehot_pca
    std::size_t cat_count = 0;
    std::size_t width = 0;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (!is_categorical(table.columns[c])) continue;
      enc.onehot_vocab.push_back(ordered_categories(table.data[c]));
      width += enc.onehot_vocab.back().size();
      ++cat_count;
    }
    if (cat_count > 0) {
      Eigen::MatrixXd onehot = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                     static_cast<Eigen::Index>(width));
      std::size_t offset = 0, vi = 0;
      for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (!is_categorical(table.columns[c])) continue;
        const auto keys = category_keys(table.data[c]);
        for (std::size_t r = 0; r < n; ++r) {
          const auto pos = std::find(enc.onehot_vocab[vi].begin(),
                                     enc.onehot_vocab[vi].end(), keys[r]) -
                           enc.onehot_vocab[vi].begin();
          onehot(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(offset) + pos) = 1.0;
        }
        offset += enc.onehot_vocab[vi].size();
        ++vi;
      }
      const Eigen::VectorXd mean = onehot.colwise().mean().transpose();
      const Eigen::MatrixXd centered = onehot.rowwise() - mean.transpose();
      const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
      const std::size_t q = std::min(cat_count, width);
      enc.pca_components = Matrix(q, width);
      for (std::size_t i = 0; i < q; ++i) {
        // Eigenvalues ascend; take from the top and fix the sign so the
        // largest-magnitude entry is positive.
        Eigen::VectorXd v = solver.eigenvectors().col(static_cast<Eigen::Index>(width - 1 - i));
        Eigen::Index arg = 0;
        v.cwiseAbs().maxCoeff(&arg);
        if (v(arg) < 0) v = -v;
        for (std::size_t j = 0; j < width; ++j) {
          enc.pca_components(i, j) = v(static_cast<Eigen::Index>(j));
        }
      }
      enc.pca_mean.assign(mean.data(), mean.data() + mean.size());
      for (std::size_t i = 0; i < q; ++i) {
        std::vector<double> col(n);
        for (std::size_t r = 0; r < n; ++r) {
          double s = 0.0;
          for (std::size_t j = 0; j < width; ++j) {
            s += centered(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) *
                 enc.pca_components(i, j);
          }
          col[r] = s;
        }
        enc.pca_range.push_back(MinMax::fit(col));
        for (double& x : col) x = enc.pca_range.back().apply(x);
        out_columns.push_back(std::move(col));
        enc.feature_names.push_back("pca_" + std::to_string(i));
      }
    }
  }

  Matrix features(n, out_columns.size());
  for (std::size_t j = 0; j < out_columns.size(); ++j) {
    for (std::size_t r = 0; r < n; ++r) features(r, j) = out_columns[j][r];
  }
  result.dataset = make_encoded_dataset(std::move(features), table.labels, num_classes,
                                        enc.feature_names);
  return result;
}

Matrix FittedEncoder::transform(const RawTable& table) const {
  check_table(table, columns);
  const std::size_t n = table.num_rows();
  std::vector<std::vector<double>> out_columns;

  std::size_t ni = 0;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].kind != ColumnKind::numeric) continue;
    const auto& v = numbers(table.data[c]);
    std::vector<double> col(n);
    for (std::size_t r = 0; r < n; ++r) col[r] = numeric[ni].apply_clamped(v[r]);
    out_columns.push_back(std::move(col));
    ++ni;
  }

  if (mode == CategoricalMode::hybrid) {
    if (autoencoder) {
      std::vector<Matrix> blocks;
      std::size_t d_str = 0, si = 0;
      for (std::size_t c = 0; c < columns.size(); ++c) {
        if (columns[c].kind != ColumnKind::categorical_string) continue;
        blocks.push_back(similarity_encode_column(strings(table.data[c]),
                                                  string_dictionaries[si++],
                                                  params.ngram_n));
        d_str += blocks.back().cols();
      }
      Matrix concat(n, d_str);
      std::size_t offset = 0;
      for (const auto& b : blocks) {
        for (std::size_t r = 0; r < n; ++r) {
          std::copy(b.row(r).begin(), b.row(r).end(), concat.row(r).begin() + offset);
        }
        offset += b.cols();
      }
      const Matrix z = autoencoder->encode(concat);
      for (std::size_t j = 0; j < z.cols(); ++j) {
        std::vector<double> col(n);
        for (std::size_t r = 0; r < n; ++r) col[r] = latent_range[j].apply_clamped(z(r, j));
        out_columns.push_back(std::move(col));
      }
    }
    std::size_t li = 0;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (columns[c].kind != ColumnKind::categorical_integer) continue;
      const auto keys = category_keys(table.data[c]);
      std::vector<double> col(n);
      for (std::size_t r = 0; r < n; ++r) {
        col[r] = lookups[li].range.apply_clamped(lookups[li].raw(keys[r]));
      }
      out_columns.push_back(std::move(col));
      ++li;
    }
  } else if (mode == CategoricalMode::label || mode == CategoricalMode::target) {
    std::size_t li = 0;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (!is_categorical(columns[c])) continue;
      const auto keys = category_keys(table.data[c]);
      std::vector<double> col(n);
      for (std::size_t r = 0; r < n; ++r) {
        col[r] = lookups[li].range.apply_clamped(lookups[li].raw(keys[r]));
      }
      out_columns.push_back(std::move(col));
      ++li;
    }
  } else if (!onehot_vocab.empty()) {
    const std::size_t width = pca_mean.size();
    Matrix centered(n, width);
    std::size_t offset = 0, vi = 0;
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t j = 0; j < width; ++j) centered(r, j) = -pca_mean[j];
    }
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (!is_categorical(columns[c])) continue;
      const auto keys = category_keys(table.data[c]);
      const auto& vocab = onehot_vocab[vi];
      for (std::size_t r = 0; r < n; ++r) {
        const auto it = std::find(vocab.begin(), vocab.end(), keys[r]);
        if (it != vocab.end()) {
          centered(r, offset + static_cast<std::size_t>(it - vocab.begin())) += 1.0;
        }
      }
      offset += vocab.size();
      ++vi;
    }
    for (std::size_t i = 0; i < pca_components.rows(); ++i) {
      std::vector<double> col(n);
      for (std::size_t r = 0; r < n; ++r) {
        double s = 0.0;
        for (std::size_t j = 0; j < width; ++j) s += centered(r, j) * pca_components(i, j);
        col[r] = pca_range[i].apply_clamped(s);
      }
      out_columns.push_back(std::move(col));
    }
  }

  Matrix features(n, out_columns.size());
  for (std::size_t j = 0; j < out_columns.size(); ++j) {
    for (std::size_t r = 0; r < n; ++r) features(r, j) = out_columns[j][r];
  }
  return features;
}

std::string FittedEncoder::to_json() const {
  json j;
  j["format"] = "tabcondense-encoder";
  j["version"] = 1;
  j["mode"] = std::string(tabcondense::to_string(mode));
  j["num_classes"] = num_classes;
  j["params"] = {{"ngram_n", params.ngram_n},
                 {"ae_epochs", params.ae_epochs},
                 {"ae_learning_rate", params.ae_learning_rate},
                 {"ae_hidden_dim", params.ae_hidden_dim},
                 {"ae_batch_size", params.ae_batch_size},
                 {"lambda", params.lambda_smooth},
                 {"sigma", params.noise_sigma},
                 {"seed", params.seed}};
  j["columns"] = json::array();
  for (const auto& c : columns) {
    j["columns"].push_back({{"name", c.name}, {"kind", std::string(tabcondense::to_string(c.kind))}});
  }
  j["feature_names"] = feature_names;
  j["numeric"] = json::array();
  for (const auto& m : numeric) j["numeric"].push_back(minmax_json(m));
  j["string_dictionaries"] = string_dictionaries;
  if (autoencoder) {
    const auto& cfg = autoencoder->config();
    json ae;
    ae["input_dim"] = cfg.input_dim;
    ae["hidden_dim"] = cfg.hidden_dim;
    ae["latent_dim"] = cfg.latent_dim;
    ae["activation"] = cfg.activation == Activation::tanh ? "tanh" : "identity";
    ae["layers"] = json::array();
    for (const auto& layer : autoencoder->layers()) {
      ae["layers"].push_back({{"weight", matrix_json(layer.weight)}, {"bias", layer.bias}});
    }
    j["autoencoder"] = std::move(ae);
  }
  j["latent_range"] = json::array();
  for (const auto& m : latent_range) j["latent_range"].push_back(minmax_json(m));
  j["lookups"] = json::array();
  for (const auto& l : lookups) {
    j["lookups"].push_back({{"keys", l.keys},
                            {"values", l.values},
                            {"fallback", l.fallback},
                            {"range", minmax_json(l.range)}});
  }
  j["onehot_vocab"] = onehot_vocab;
  j["pca_mean"] = pca_mean;
  j["pca_components"] = matrix_json(pca_components);
  j["pca_range"] = json::array();
  for (const auto& m : pca_range) j["pca_range"].push_back(minmax_json(m));
  return j.dump(1);
}

FittedEncoder FittedEncoder::from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("encoder document: ") + e.what());
  }
  try {
    if (j.at("format") != "tabcondense-encoder") {
      throw ParseError("not an encoder document");
    }
    FittedEncoder enc;
    enc.mode = parse_categorical_mode(j.at("mode").get<std::string>());
    enc.num_classes = j.at("num_classes").get<std::size_t>();
    const auto& p = j.at("params");
    enc.params.ngram_n = p.at("ngram_n").get<std::size_t>();
    enc.params.ae_epochs = p.at("ae_epochs").get<std::size_t>();
    enc.params.ae_learning_rate = p.at("ae_learning_rate").get<double>();
    enc.params.ae_hidden_dim = p.at("ae_hidden_dim").get<std::size_t>();
    enc.params.ae_batch_size = p.at("ae_batch_size").get<std::size_t>();
    enc.params.lambda_smooth = p.at("lambda").get<double>();
    enc.params.noise_sigma = p.at("sigma").get<double>();
    enc.params.seed = p.at("seed").get<std::uint64_t>();
    enc.params.mode = enc.mode;
    for (const auto& c : j.at("columns")) {
      enc.columns.push_back({c.at("name").get<std::string>(),
                             parse_column_kind(c.at("kind").get<std::string>()),
                             std::nullopt});
    }
    enc.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    for (const auto& m : j.at("numeric")) enc.numeric.push_back(minmax_from(m));
    enc.string_dictionaries =
        j.at("string_dictionaries").get<std::vector<std::vector<std::string>>>();
    if (j.contains("autoencoder")) {
      const auto& ae = j.at("autoencoder");
      AutoencoderConfig cfg;
      cfg.input_dim = ae.at("input_dim").get<std::size_t>();
      cfg.hidden_dim = ae.at("hidden_dim").get<std::size_t>();
      cfg.latent_dim = ae.at("latent_dim").get<std::size_t>();
      cfg.activation = ae.at("activation") == "tanh" ? Activation::tanh : Activation::identity;
      Autoencoder model(cfg, 0);
      auto& layers = model.layers();
      const auto& jl = ae.at("layers");
      if (jl.size() != layers.size()) throw ParseError("autoencoder layer count");
      for (std::size_t i = 0; i < layers.size(); ++i) {
        layers[i].weight = matrix_from(jl.at(i).at("weight"));
        layers[i].bias = jl.at(i).at("bias").get<std::vector<double>>();
      }
      enc.autoencoder = std::move(model);
    }
    for (const auto& m : j.at("latent_range")) enc.latent_range.push_back(minmax_from(m));
    for (const auto& l : j.at("lookups")) {
      CategoryLookup lookup;
      lookup.keys = l.at("keys").get<std::vector<std::string>>();
      lookup.values = l.at("values").get<std::vector<double>>();
      lookup.fallback = l.at("fallback").get<double>();
      lookup.range = minmax_from(l.at("range"));
      enc.lookups.push_back(std::move(lookup));
    }
    enc.onehot_vocab = j.at("onehot_vocab").get<std::vector<std::vector<std::string>>>();
    enc.pca_mean = j.at("pca_mean").get<std::vector<double>>();
    enc.pca_components = matrix_from(j.at("pca_components"), enc.pca_mean.size());
    for (const auto& m : j.at("pca_range")) enc.pca_range.push_back(minmax_from(m));
    return enc;
  } catch (const json::exception& e) {
    throw ParseError(std::string("encoder document: ") + e.what());
  }
}

}  // namespace tabcondense
