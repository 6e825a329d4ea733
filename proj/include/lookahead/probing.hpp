// Copyright 2026 The lookahead Authors
//
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

// Linear probes: 10-way softmax regression that reads one result digit out
// of a frozen hidden-state vector.
//
// Training is full-batch gradient descent from zero weights on
//   L(W, b) = mean_n CE(softmax(W x_n + b), y_n) + (l2 / 2) * ||W||^2
// with features standardized by train-split statistics. A step that would
// raise the loss is halved until it does not, so the recorded loss history
// is non-increasing. All reductions run in a fixed order.
//
// Probe files are JSON lines
//   {"sample_id": 7, "layer": 3, "vector": [0.1, ...], "s2": 4, "s1": 0, "s0": 2}
// or a packed little-endian binary file:
//   "LKPB" | u32 version=1 | u32 dim | u32 count
//   count x ( u64 sample_id | u32 layer | u8 s2 | u8 s1 | u8 s0 | u8 0 | dim x f32 )

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "lookahead/datasets.hpp"
#include "lookahead/rng.hpp"

namespace lookahead::probing {

inline constexpr int kClasses = 10;
inline constexpr std::size_t kDefaultTrain = 4500;
inline constexpr std::size_t kDefaultTest = 500;

enum class Target { kS2 = 0, kS1 = 1, kS0 = 2 };

inline const char* to_string(Target t) {
  switch (t) {
    case Target::kS2: return "s2";
    case Target::kS1: return "s1";
    case Target::kS0: return "s0";
  }
  return "s2";
}

inline Target parse_target(const std::string& name) {
  if (name == "s2") return Target::kS2;
  if (name == "s1") return Target::kS1;
  if (name == "s0") return Target::kS0;
  throw ValidationError("unknown probe target '" + name + "' (s2|s1|s0)");
}

enum class Split { kTrain, kTest };

struct ProbeSample {
  std::uint64_t sample_id = 0;
  int layer = 0;
  std::vector<float> vector;
  std::array<int, 3> labels{};  // s2, s1, s0

  int label(Target t) const { return labels[static_cast<std::size_t>(t)]; }
};

struct ProbeDataset {
  Split split = Split::kTrain;
  std::size_t dim = 0;
  std::vector<ProbeSample> samples;

  std::set<int> layers() const {
    std::set<int> out;
    for (const auto& s : samples) out.insert(s.layer);
    return out;
  }

  /// Appends a sample after checking its dimension and labels.
  void add(ProbeSample sample) {
    const auto name = "sample " + std::to_string(sample.sample_id);
    if (sample.vector.empty()) throw ValidationError(name + ": empty feature vector");
    if (samples.empty() && dim == 0) dim = sample.vector.size();
    if (sample.vector.size() != dim) {
      throw ValidationError(name + ": dimension " + std::to_string(sample.vector.size()) +
                            " != " + std::to_string(dim));
    }
    for (int l : sample.labels) {
      if (l < 0 || l >= kClasses) {
        throw ValidationError(name + ": label " + std::to_string(l) + " outside [0, 9]");
      }
    }
    for (float v : sample.vector) {
      if (!std::isfinite(v)) throw ValidationError(name + ": non-finite feature");
    }
    samples.push_back(std::move(sample));
  }
};

// File I/O -------------------------------------------------------------------

namespace detail {

inline constexpr char kMagic[4] = {'L', 'K', 'P', 'B'};
inline constexpr std::uint32_t kVersion = 1;

template <typename T>
void put_le(std::string& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xff));
  }
}

template <typename T>
T get_le(const std::string& in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) throw ParseError(0, "truncated binary probe file");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  }
  pos += sizeof(T);
  return static_cast<T>(v);
}

}  // namespace detail

inline ProbeDataset parse_probe_jsonl(std::istream& in, Split split) {
  ProbeDataset data;
  data.split = split;
  lookahead::detail::for_each_jsonl(in, [&](const nlohmann::json& j, std::size_t line) {
    try {
      ProbeSample s;
      s.sample_id = j.at("sample_id").get<std::uint64_t>();
      s.layer = j.at("layer").get<int>();
      s.vector = j.at("vector").get<std::vector<float>>();
      s.labels = {j.at("s2").get<int>(), j.at("s1").get<int>(), j.at("s0").get<int>()};
      data.add(std::move(s));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line, e.what());
    } catch (const ValidationError& e) {
      throw ParseError(line, e.what());
    }
  });
  return data;
}

inline ProbeDataset parse_probe_binary(const std::string& bytes, Split split) {
  if (bytes.size() < 16 || std::memcmp(bytes.data(), detail::kMagic, 4) != 0) {
    throw ParseError(0, "not a binary probe file");
  }
  std::size_t pos = 4;
  const auto version = detail::get_le<std::uint32_t>(bytes, pos);
  if (version != detail::kVersion) {
    throw ParseError(0, "unsupported probe file version " + std::to_string(version));
  }
  const auto dim = detail::get_le<std::uint32_t>(bytes, pos);
  const auto count = detail::get_le<std::uint32_t>(bytes, pos);
  ProbeDataset data;
  data.split = split;
  data.dim = dim;
  for (std::uint32_t r = 0; r < count; ++r) {
    ProbeSample s;
    s.sample_id = detail::get_le<std::uint64_t>(bytes, pos);
    s.layer = static_cast<int>(detail::get_le<std::uint32_t>(bytes, pos));
    for (auto& l : s.labels) l = detail::get_le<std::uint8_t>(bytes, pos);
    detail::get_le<std::uint8_t>(bytes, pos);
    s.vector.resize(dim);
    for (auto& v : s.vector) v = std::bit_cast<float>(detail::get_le<std::uint32_t>(bytes, pos));
    data.add(std::move(s));
  }
  if (pos != bytes.size()) throw ParseError(0, "trailing bytes after binary probe records");
  return data;
}

/// Loads JSON-lines or packed binary, detected by the magic bytes.
inline ProbeDataset load_probe_data(const std::string& path, Split split = Split::kTrain) {
  const auto bytes = read_text(path);
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), detail::kMagic, 4) == 0) {
    return parse_probe_binary(bytes, split);
  }
  std::istringstream in(bytes);
  return parse_probe_jsonl(in, split);
}

inline std::string probe_to_jsonl(const ProbeDataset& data) {
  std::string out;
  for (const auto& s : data.samples) {
    nlohmann::ordered_json j;
    j["sample_id"] = s.sample_id;
    j["layer"] = s.layer;
    j["vector"] = s.vector;
    j["s2"] = s.labels[0];
    j["s1"] = s.labels[1];
    j["s0"] = s.labels[2];
    out += j.dump();
    out += '\n';
  }
  return out;
}

inline std::string probe_to_binary(const ProbeDataset& data) {
  std::string out(detail::kMagic, 4);
  detail::put_le<std::uint32_t>(out, detail::kVersion);
  detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(data.dim));
  detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(data.samples.size()));
  for (const auto& s : data.samples) {
    detail::put_le<std::uint64_t>(out, s.sample_id);
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(s.layer));
    for (int l : s.labels) detail::put_le<std::uint8_t>(out, static_cast<std::uint8_t>(l));
    detail::put_le<std::uint8_t>(out, 0);
    for (float v : s.vector) detail::put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(v));
  }
  return out;
}

// Model ----------------------------------------------------------------------

/// Dense row-major feature matrix with its labels.
struct Batch {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> x;
  std::vector<int> y;

  const double* row(std::size_t i) const { return x.data() + i * cols; }
};

struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  std::vector<double> apply(const std::vector<float>& v) const {
    std::vector<double> out(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) out[j] = (v[j] - mean[j]) / scale[j];
    return out;
  }
};

/// Per-feature mean and standard deviation of one layer of a train split.
/// Constant features get scale 1.
inline Standardizer fit_standardizer(const ProbeDataset& data, int layer) {
  if (data.split != Split::kTrain) {
    throw ValidationError("standardization statistics must come from the train split");
  }
  Standardizer st;
  st.mean.assign(data.dim, 0.0);
  st.scale.assign(data.dim, 0.0);
  std::size_t n = 0;
  for (const auto& s : data.samples) {
    if (s.layer != layer) continue;
    ++n;
    for (std::size_t j = 0; j < data.dim; ++j) st.mean[j] += s.vector[j];
  }
  if (n == 0) throw ValidationError("no train samples for layer " + std::to_string(layer));
  for (auto& m : st.mean) m /= static_cast<double>(n);
  for (const auto& s : data.samples) {
    if (s.layer != layer) continue;
    for (std::size_t j = 0; j < data.dim; ++j) {
      const double dlt = s.vector[j] - st.mean[j];
      st.scale[j] += dlt * dlt;
    }
  }
  for (auto& sc : st.scale) {
    sc = std::sqrt(sc / static_cast<double>(n));
    if (sc < 1e-12) sc = 1.0;
  }
  return st;
}

inline Standardizer identity_standardizer(std::size_t dim) {
  return {std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0)};
}

inline Batch make_batch(const ProbeDataset& data, int layer, Target target,
                        const Standardizer& st) {
  Batch b;
  b.cols = data.dim;
  for (const auto& s : data.samples) {
    if (s.layer != layer) continue;
    auto row = st.apply(s.vector);
    b.x.insert(b.x.end(), row.begin(), row.end());
    b.y.push_back(s.label(target));
    ++b.rows;
  }
  return b;
}

/// Weights are kClasses x dim, row-major.
struct Params {
  std::vector<double> weight;
  std::vector<double> bias;

  static Params zeros(std::size_t dim) {
    return {std::vector<double>(kClasses * dim, 0.0), std::vector<double>(kClasses, 0.0)};
  }
};

struct LossAndGradient {
  double loss = 0.0;
  Params grad;
};

inline void logits_into(const Params& p, const double* x, std::size_t dim,
                        std::array<double, kClasses>& z) {
  for (int c = 0; c < kClasses; ++c) {
    double acc = p.bias[c];
    const double* w = p.weight.data() + static_cast<std::size_t>(c) * dim;
    for (std::size_t j = 0; j < dim; ++j) acc += w[j] * x[j];
    z[c] = acc;
  }
}

/// Mean softmax cross-entropy plus (l2/2)||W||^2, and its exact gradient.
inline LossAndGradient loss_and_gradient(const Params& p, const Batch& batch, double l2,
                                         bool want_grad = true) {
  const std::size_t dim = batch.cols;
  LossAndGradient out;
  if (want_grad) out.grad = Params::zeros(dim);
  std::array<double, kClasses> z{};
  for (std::size_t i = 0; i < batch.rows; ++i) {
    const double* x = batch.row(i);
    logits_into(p, x, dim, z);
    const double zmax = *std::max_element(z.begin(), z.end());
    double denom = 0.0;
    for (auto& v : z) {
      v = std::exp(v - zmax);
      denom += v;
    }
    const int y = batch.y[i];
    out.loss += -std::log(z[y] / denom);
    if (!want_grad) continue;
    for (int c = 0; c < kClasses; ++c) {
      const double delta = z[c] / denom - (c == y ? 1.0 : 0.0);
      out.grad.bias[c] += delta;
      double* g = out.grad.weight.data() + static_cast<std::size_t>(c) * dim;
      for (std::size_t j = 0; j < dim; ++j) g[j] += delta * x[j];
    }
  }
  const double inv_n = batch.rows ? 1.0 / static_cast<double>(batch.rows) : 0.0;
  out.loss *= inv_n;
  double sq = 0.0;
  for (double w : p.weight) sq += w * w;
  out.loss += 0.5 * l2 * sq;
  if (want_grad) {
    for (auto& g : out.grad.bias) g *= inv_n;
    for (std::size_t j = 0; j < p.weight.size(); ++j) {
      out.grad.weight[j] = out.grad.weight[j] * inv_n + l2 * p.weight[j];
    }
  }
  return out;
}

struct Hyper {
  double learning_rate = 0.1;
  int max_epochs = 500;
  double l2 = 1e-4;
  double tolerance = 1e-7;
  bool standardize = true;
};

struct LinearProbe {
  int layer = 0;
  Target target = Target::kS2;
  Params params;
  Standardizer standardizer;
  int epochs_run = 0;
  double final_loss = 0.0;
  std::vector<double> loss_history;  // entry 0 is the loss at initialization

  int predict(const std::vector<float>& v) const {
    const auto x = standardizer.apply(v);
    std::array<double, kClasses> z{};
    logits_into(params, x.data(), x.size(), z);
    return static_cast<int>(std::max_element(z.begin(), z.end()) - z.begin());
  }
};

inline LinearProbe train_probe(const ProbeDataset& data, Target target, int layer,
                               const Hyper& hyper = {}) {
  if (data.split != Split::kTrain) throw ValidationError("probes train on the train split only");
  LinearProbe probe;
  probe.layer = layer;
  probe.target = target;
  probe.standardizer =
      hyper.standardize ? fit_standardizer(data, layer) : identity_standardizer(data.dim);
  const auto batch = make_batch(data, layer, target, probe.standardizer);
  if (batch.rows == 0) throw ValidationError("no train samples for layer " + std::to_string(layer));
  if (std::set<int>(batch.y.begin(), batch.y.end()).size() < 2) {
    throw ValidationError("degenerate train split: fewer than 2 distinct labels for " +
                          std::string(to_string(target)) + " at layer " + std::to_string(layer));
  }

  probe.params = Params::zeros(batch.cols);
  auto current = loss_and_gradient(probe.params, batch, hyper.l2);
  probe.loss_history.push_back(current.loss);
  for (int epoch = 0; epoch < hyper.max_epochs; ++epoch) {
    double step = hyper.learning_rate;
    Params next;
    LossAndGradient evaluated;
    bool accepted = false;
    for (int halving = 0; halving < 40; ++halving, step *= 0.5) {
      next = probe.params;
      for (std::size_t j = 0; j < next.weight.size(); ++j) {
        next.weight[j] -= step * current.grad.weight[j];
      }
      for (int c = 0; c < kClasses; ++c) next.bias[c] -= step * current.grad.bias[c];
      evaluated = loss_and_gradient(next, batch, hyper.l2);
      if (evaluated.loss <= current.loss) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    const double improvement = current.loss - evaluated.loss;
    probe.params = std::move(next);
    current = std::move(evaluated);
    probe.loss_history.push_back(current.loss);
    probe.epochs_run = epoch + 1;
    if (improvement < hyper.tolerance) break;
  }
  probe.final_loss = current.loss;
  for (double w : probe.params.weight) {
    if (!std::isfinite(w)) throw ValidationError("probe training diverged");
  }
  return probe;
}

inline double eval_probe(const LinearProbe& probe, const ProbeDataset& data) {
  if (data.dim != probe.standardizer.mean.size() && !data.samples.empty()) {
    throw ValidationError("dimension mismatch: probe expects " +
                          std::to_string(probe.standardizer.mean.size()) + ", data has " +
                          std::to_string(data.dim));
  }
  std::size_t n = 0, correct = 0;
  for (const auto& s : data.samples) {
    if (s.layer != probe.layer) continue;
    ++n;
    if (probe.predict(s.vector) == s.label(probe.target)) ++correct;
  }
  if (n == 0) {
    throw ValidationError("empty evaluation split for layer " + std::to_string(probe.layer));
  }
  return static_cast<double>(correct) / static_cast<double>(n);
}

/// Largest relative error between the analytic gradient and central finite
/// differences, over `n_checks` parameters chosen at random.
inline double grad_check(const Params& params, const Batch& batch, double l2, double epsilon,
                         std::size_t n_checks = 40, std::uint64_t seed = 0) {
  if (epsilon <= 0) throw ValidationError("epsilon must be > 0");
  const auto analytic = loss_and_gradient(params, batch, l2);
  const std::size_t n_weight = params.weight.size();
  const std::size_t total = n_weight + params.bias.size();
  Rng rng(seed);
  double worst = 0.0;
  for (std::size_t check = 0; check < n_checks; ++check) {
    const auto idx = static_cast<std::size_t>(uniform_below(rng, total));
    Params plus = params, minus = params;
    double& vp = idx < n_weight ? plus.weight[idx] : plus.bias[idx - n_weight];
    double& vm = idx < n_weight ? minus.weight[idx] : minus.bias[idx - n_weight];
    vp += epsilon;
    vm -= epsilon;
    const double numeric = (loss_and_gradient(plus, batch, l2, false).loss -
                            loss_and_gradient(minus, batch, l2, false).loss) /
                           (2.0 * epsilon);
    const double exact =
        idx < n_weight ? analytic.grad.weight[idx] : analytic.grad.bias[idx - n_weight];
    const double denom = std::max({std::abs(numeric), std::abs(exact), 1e-8});
    worst = std::max(worst, std::abs(numeric - exact) / denom);
  }
  return worst;
}

// Sweeps ---------------------------------------------------------------------

struct SweepCell {
  int layer = 0;
  Target target = Target::kS2;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
};

inline std::vector<SweepCell> sweep(const ProbeDataset& train, const ProbeDataset& test,
                                    const std::vector<Target>& targets,
                                    const std::vector<int>& layers, const Hyper& hyper = {}) {
  if (test.split != Split::kTest) throw ValidationError("sweep needs a test split to evaluate");
  if (!train.samples.empty() && !test.samples.empty() && train.dim != test.dim) {
    throw ValidationError("dimension mismatch: train " + std::to_string(train.dim) + ", test " +
                          std::to_string(test.dim));
  }
  const auto train_layers = train.layers();
  const auto test_layers = test.layers();
  std::vector<int> missing;
  for (int l : layers) {
    if (!train_layers.contains(l) || !test_layers.contains(l)) missing.push_back(l);
  }
  if (!missing.empty()) {
    std::string list;
    for (std::size_t i = 0; i < missing.size(); ++i) list += (i ? ", " : "") + std::to_string(missing[i]);
    throw ValidationError("layers missing from probe data: " + list);
  }
  std::vector<SweepCell> cells;
  for (int layer : layers) {
    for (Target target : targets) {
      const auto probe = train_probe(train, target, layer, hyper);
      SweepCell cell;
      cell.layer = layer;
      cell.target = target;
      cell.train_accuracy = eval_probe(probe, train);
      cell.test_accuracy = eval_probe(probe, test);
      for (const auto& s : train.samples) cell.n_train += s.layer == layer;
      for (const auto& s : test.samples) cell.n_test += s.layer == layer;
      cells.push_back(cell);
    }
  }
  return cells;
}

inline std::string sweep_to_csv(const std::vector<SweepCell>& cells) {
  std::string out = "layer,target,train_acc,test_acc,n_train,n_test\n";
  char buf[160];
  for (const auto& c : cells) {
    std::snprintf(buf, sizeof buf, "%d,%s,%.3f,%.3f,%zu,%zu\n", c.layer, to_string(c.target),
                  c.train_accuracy, c.test_accuracy, c.n_train, c.n_test);
    out += buf;
  }
  return out;
}

// Synthetic fixtures -----------------------------------------------------------

/// Box-Muller on two 53-bit uniforms; portable unlike std::normal_distribution.
inline double standard_normal(Rng& rng) {
  constexpr double kTwoPi = 6.283185307179586;
  const double u1 = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

/// Gaussian features where layer l carries target (l mod 3) as a strong
/// class-mean offset in dims 0..9 and every other target is noise. Samples
/// 0..n_train-1 form the train split, the rest the test split.
struct Fixture {
  ProbeDataset train;
  ProbeDataset test;
};

inline Fixture make_fixture(std::size_t n_train, std::size_t n_test, std::size_t dim, int layers,
                            std::uint64_t seed, double signal = 6.0) {
  if (dim < static_cast<std::size_t>(kClasses)) throw ValidationError("fixture dim must be >= 10");
  Fixture f;
  f.train.split = Split::kTrain;
  f.test.split = Split::kTest;
  f.train.dim = f.test.dim = dim;
  Rng rng(derive_seed(seed, "probe-fixture"));
  auto noise = [](Rng& r) { return standard_normal(r); };
  for (std::size_t i = 0; i < n_train + n_test; ++i) {
    std::array<int, 3> labels{};
    for (auto& l : labels) l = static_cast<int>(uniform_below(rng, kClasses));
    for (int layer = 0; layer < layers; ++layer) {
      ProbeSample s;
      s.sample_id = i;
      s.layer = layer;
      s.labels = labels;
      s.vector.resize(dim);
      for (auto& v : s.vector) v = static_cast<float>(noise(rng));
      s.vector[static_cast<std::size_t>(labels[static_cast<std::size_t>(layer % 3)])] +=
          static_cast<float>(signal);
      (i < n_train ? f.train : f.test).add(std::move(s));
    }
  }
  return f;
}

/// Randomly permutes one target's labels across samples of each layer.
inline void shuffle_labels(ProbeDataset& data, Target target, std::uint64_t seed) {
  Rng rng(derive_seed(seed, "shuffle"));
  const auto t = static_cast<std::size_t>(target);
  for (int layer : data.layers()) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < data.samples.size(); ++i) {
      if (data.samples[i].layer == layer) idx.push_back(i);
    }
    for (std::size_t i = idx.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_below(rng, i));
      std::swap(data.samples[idx[i - 1]].labels[t], data.samples[idx[j]].labels[t]);
    }
  }
}

}  // namespace lookahead::probing
