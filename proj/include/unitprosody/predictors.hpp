// unitprosody/predictors.hpp

// Copyright 2026 The unitprosody Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef UNITPROSODY_PREDICTORS_HPP_
#define UNITPROSODY_PREDICTORS_HPP_

// Emotion encoder, speaker table, and the emotion-conditioned duration and
// pitch predictors.
//
// Both predictors share one architecture: a unit embedding table, the
// emotion embedding concatenated to every timestep, a stack of same-padded
// 1-D convolutions with tanh, and a per-timestep affine head. The duration
// head emits one real per unit; the pitch head emits d logits per frame.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "unitprosody/error.hpp"
#include "unitprosody/io.hpp"
#include "unitprosody/random.hpp"
#include "unitprosody/unit_codec.hpp"

namespace unitprosody {

inline constexpr std::size_t kEmotionDim = 96;

struct EmotionEmbedding {
  std::vector<double> values = std::vector<double>(kEmotionDim, 0.0);

  bool operator==(const EmotionEmbedding &) const = default;
};

/// Affine bottleneck D -> 96 followed by mean pooling over time.
class EmotionEncoder {
 public:
  EmotionEncoder(std::size_t input_dim, std::vector<double> weight, std::vector<double> bias)
      : input_dim_(input_dim), weight_(std::move(weight)), bias_(std::move(bias)) {
    require(weight_.size() == kEmotionDim * input_dim_ && bias_.size() == kEmotionDim,
            Errc::dimension_mismatch, "bottleneck shape must be 96 x D");
  }

  static EmotionEncoder random(std::size_t input_dim, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> w(kEmotionDim * input_dim), b(kEmotionDim, 0.0);
    const double scale = 1.0 / std::sqrt(static_cast<double>(input_dim));
    for (auto &x : w) x = rng.normal(0.0, scale);
    return EmotionEncoder(input_dim, std::move(w), std::move(b));
  }

  std::size_t input_dim() const { return input_dim_; }

  std::vector<double> project(std::span<const double> frame) const {
    std::vector<double> out(bias_);
    for (std::size_t o = 0; o < kEmotionDim; ++o)
      for (std::size_t i = 0; i < input_dim_; ++i) out[o] += weight_[o * input_dim_ + i] * frame[i];
    return out;
  }

  EmotionEmbedding encode(const FrameFeatures &f) const {
    require(f.num_frames() >= 1, Errc::invalid_argument,
            "emotion encoder needs at least one frame");
    require(f.dim == input_dim_, Errc::dimension_mismatch,
            "feature dimension does not match bottleneck input");
    EmotionEmbedding e;
    for (std::size_t t = 0; t < f.num_frames(); ++t) {
      auto p = project(f.frame(t));
      for (std::size_t o = 0; o < kEmotionDim; ++o) e.values[o] += p[o];
    }
    for (auto &v : e.values) v /= static_cast<double>(f.num_frames());
    return e;
  }

 private:
  std::size_t input_dim_;
  std::vector<double> weight_;  // row-major 96 x D
  std::vector<double> bias_;
};

inline EmotionEmbedding encode_emotion(const FrameFeatures &f, const EmotionEncoder &enc) {
  return enc.encode(f);
}

class SpeakerTable {
 public:
  explicit SpeakerTable(std::size_t dim = 16) : dim_(dim) {
    require(dim >= 1, Errc::invalid_argument, "speaker embedding dimension must be >= 1");
  }

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return entries_.size(); }

  void insert(const std::string &id, std::vector<double> v) {
    require(v.size() == dim_, Errc::dimension_mismatch,
            "speaker vector for " + id + " has wrong dimension");
    entries_[id] = std::move(v);
  }

  /// Adds `id` with a seeded random vector unless it is already present.
  void ensure(const std::string &id, std::uint64_t seed) {
    if (entries_.count(id)) return;
    Rng rng(seed ^ io::fnv1a(id));
    std::vector<double> v(dim_);
    for (auto &x : v) x = rng.normal(0.0, 0.1);
    entries_[id] = std::move(v);
  }

  const std::vector<double> &lookup(const std::string &id) const {
    auto it = entries_.find(id);
    if (it == entries_.end()) fail(Errc::unknown_speaker, "unknown speaker '" + id + "'");
    return it->second;
  }

  std::vector<double> &mutable_entry(const std::string &id) {
    auto it = entries_.find(id);
    if (it == entries_.end()) fail(Errc::unknown_speaker, "unknown speaker '" + id + "'");
    return it->second;
  }

  const std::map<std::string, std::vector<double>> &entries() const { return entries_; }

 private:
  std::size_t dim_;
  std::map<std::string, std::vector<double>> entries_;
};

inline const std::vector<double> &speaker_lookup(const SpeakerTable &t, const std::string &id) {
  return t.lookup(id);
}

// ---------------------------------------------------------------------------

enum class PredictorKind { duration, pitch };

inline std::string_view kind_name(PredictorKind k) {
  return k == PredictorKind::duration ? "duration" : "pitch";
}

struct PredictorArch {
  PredictorKind kind = PredictorKind::duration;
  std::size_t num_units = 100;  // K
  std::size_t unit_dim = 32;    // E
  std::size_t emotion_dim = kEmotionDim;
  std::size_t channels = 64;
  std::size_t kernel = 3;
  std::size_t layers = 2;
  std::size_t out_dim = 1;  // 1 for duration, d for pitch

  static PredictorArch duration(std::size_t k) {
    PredictorArch a;
    a.num_units = k;
    return a;
  }
  static PredictorArch pitch(std::size_t k, std::size_t d) {
    PredictorArch a;
    a.kind = PredictorKind::pitch;
    a.num_units = k;
    a.out_dim = d;
    return a;
  }

  bool operator==(const PredictorArch &) const = default;

  void validate() const {
    require(num_units >= 1 && unit_dim >= 1 && channels >= 1 && layers >= 1 && out_dim >= 1,
            Errc::invalid_argument, "predictor sizes must be positive");
    require(kernel % 2 == 1, Errc::invalid_argument, "kernel width must be odd");
    require(kind == PredictorKind::pitch || out_dim == 1, Errc::invalid_argument,
            "duration head has exactly one output");
  }
};

/// One training sequence. Duration examples carry reduced units and one
/// target per unit; pitch examples carry frame-rate units and one bin index
/// per frame (-1 for unvoiced frames, i.e. an all-zero target vector).
struct PredictorExample {
  std::vector<Unit> units;
  std::vector<double> emotion;
  std::vector<double> duration_targets;
  std::vector<int> bin_targets;
};

/// All parameters live in one flat vector. Layout, in order:
///   unit embedding        K x E
///   per conv layer l:     weight C_out x C_in x kernel, bias C_out
///   head                  weight out_dim x C, bias out_dim
/// where C_in = E + emotion_dim for the first layer and C afterwards.
class PredictorModel {
 public:
  struct Block {
    std::size_t weight, bias, in, out;
  };

  explicit PredictorModel(const PredictorArch &arch, std::uint64_t seed = 0) : arch_(arch) {
    arch_.validate();
    layout();
    Rng rng(seed);
    for (std::size_t i = 0; i < arch_.num_units * arch_.unit_dim; ++i) params_[i] = rng.normal();
    for (const auto &b : conv_) {
      const double scale = 1.0 / std::sqrt(static_cast<double>(b.in * arch_.kernel));
      for (std::size_t i = 0; i < b.out * b.in * arch_.kernel; ++i)
        params_[b.weight + i] = rng.normal(0.0, scale);
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(arch_.channels));
    for (std::size_t i = 0; i < head_.out * head_.in; ++i) params_[head_.weight + i] = rng.normal(0.0, scale);
  }

  const PredictorArch &arch() const { return arch_; }
  std::span<double> params() { return params_; }
  std::span<const double> params() const { return params_; }
  std::size_t num_params() const { return params_.size(); }

  std::span<const double> unit_embedding(Unit u) const {
    return {params_.data() + static_cast<std::size_t>(u) * arch_.unit_dim, arch_.unit_dim};
  }

  /// Raw outputs, row-major T x out_dim (durations, or pitch logits).
  std::vector<double> forward(std::span<const Unit> units, std::span<const double> emotion) const {
    Activations<double> act;
    run<double>(params_, units, emotion, act);
    return act.out;
  }

  /// Loss of one example and, if `grad` is non-empty, its gradient added
  /// into `grad` scaled by `weight`.
  double loss_and_grad(const PredictorExample &ex, std::span<double> grad, double weight = 1.0) const {
    Activations<double> act;
    run<double>(params_, ex.units, ex.emotion, act);
    if (ex.units.empty()) return 0.0;
    std::vector<double> dout;
    const double loss = loss_terms<double>(ex, act.out, grad.empty() ? nullptr : &dout);
    if (!grad.empty()) backward(ex.units, act, dout, grad, weight);
    return loss;
  }

  /// Loss of one example under `params` (same layout as params()), computed
  /// in extended precision. Finite-difference checks use this so that
  /// cancellation noise stays far below the gradients being compared.
  long double loss_extended(const PredictorExample &ex, std::span<const long double> params) const {
    require(params.size() == params_.size(), Errc::dimension_mismatch, "parameter vector has the wrong size");
    Activations<long double> act;
    run<long double>(params, ex.units, ex.emotion, act);
    if (ex.units.empty()) return 0.0L;
    return loss_terms<long double>(ex, act.out, nullptr);
  }

  template <class R = double>
  static R sigmoid(R z) {
    return z >= 0 ? R(1) / (R(1) + std::exp(-z)) : std::exp(z) / (R(1) + std::exp(z));
  }

 private:
  template <class R>
  struct Activations {
    std::vector<std::vector<R>> h;  // h[0] = input, h[l+1] = tanh output of layer l
    std::vector<R> out;
  };

  // Mean loss over the example; fills dL/d(out) when `dout` is given.
  template <class R>
  R loss_terms(const PredictorExample &ex, const std::vector<R> &out, std::vector<R> *dout) const {
    const std::size_t T = ex.units.size(), D = arch_.out_dim;
    if (dout) dout->assign(T * D, R(0));
    R loss = 0;
    if (arch_.kind == PredictorKind::duration) {
      require(ex.duration_targets.size() == T, Errc::dimension_mismatch,
              "duration targets must match unit count");
      for (std::size_t t = 0; t < T; ++t) {
        const R e = out[t] - static_cast<R>(ex.duration_targets[t]);
        loss += e * e;
        if (dout) (*dout)[t] = R(2) * e / static_cast<R>(T);
      }
      return loss / static_cast<R>(T);
    }
    require(ex.bin_targets.size() == T, Errc::dimension_mismatch, "bin targets must match frame count");
    const R norm = R(1) / static_cast<R>(T * D);
    for (std::size_t t = 0; t < T; ++t) {
      require(ex.bin_targets[t] >= -1 && ex.bin_targets[t] < static_cast<int>(D), Errc::invalid_argument,
              "bin target out of range");
      for (std::size_t j = 0; j < D; ++j) {
        const R z = out[t * D + j];
        const R y = ex.bin_targets[t] == static_cast<int>(j) ? R(1) : R(0);
        // softplus(z) - y z is the BCE of sigmoid(z) against y.
        const R sp = z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
        loss += sp - y * z;
        if (dout) (*dout)[t * D + j] = (sigmoid<R>(z) - y) * norm;
      }
    }
    return loss * norm;
  }

  void layout() {
    std::size_t off = arch_.num_units * arch_.unit_dim;
    std::size_t in = arch_.unit_dim + arch_.emotion_dim;
    for (std::size_t l = 0; l < arch_.layers; ++l) {
      Block b{off, off + arch_.channels * in * arch_.kernel, in, arch_.channels};
      off = b.bias + arch_.channels;
      conv_.push_back(b);
      in = arch_.channels;
    }
    head_ = Block{off, off + arch_.out_dim * in, in, arch_.out_dim};
    off = head_.bias + arch_.out_dim;
    params_.assign(off, 0.0);
  }

  template <class R>
  void run(std::span<const R> p, std::span<const Unit> units, std::span<const double> emotion,
           Activations<R> &act) const {
    require(emotion.size() == arch_.emotion_dim, Errc::dimension_mismatch,
            "emotion embedding has dimension " + std::to_string(emotion.size()) + ", model expects " +
                std::to_string(arch_.emotion_dim));
    const std::size_t T = units.size();
    const std::size_t E = arch_.unit_dim, Q = arch_.emotion_dim, in0 = E + Q;
    act.h.assign(arch_.layers + 1, {});
    auto &x = act.h[0];
    x.assign(T * in0, R(0));
    for (std::size_t t = 0; t < T; ++t) {
      require(units[t] >= 0 && static_cast<std::size_t>(units[t]) < arch_.num_units,
              Errc::invalid_argument,
              "unit id " + std::to_string(units[t]) + " outside [0, " +
                  std::to_string(arch_.num_units) + ")");
      const auto e = p.subspan(static_cast<std::size_t>(units[t]) * E, E);
      std::copy(e.begin(), e.end(), x.begin() + static_cast<long>(t * in0));
      std::copy(emotion.begin(), emotion.end(), x.begin() + static_cast<long>(t * in0 + E));
    }
    const long K = static_cast<long>(arch_.kernel), pad = K / 2;
    for (std::size_t l = 0; l < conv_.size(); ++l) {
      const auto &b = conv_[l];
      const auto &in = act.h[l];
      auto &out = act.h[l + 1];
      out.assign(T * b.out, R(0));
      for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t o = 0; o < b.out; ++o) {
          R s = p[b.bias + o];
          const R *w = p.data() + b.weight + o * b.in * arch_.kernel;
          for (long k = 0; k < K; ++k) {
            const long src = static_cast<long>(t) + k - pad;
            if (src < 0 || src >= static_cast<long>(T)) continue;
            const R *xi = in.data() + static_cast<std::size_t>(src) * b.in;
            for (std::size_t i = 0; i < b.in; ++i) s += w[i * arch_.kernel + k] * xi[i];
          }
          out[t * b.out + o] = std::tanh(s);
        }
      }
    }
    const auto &top = act.h.back();
    act.out.assign(T * head_.out, R(0));
    for (std::size_t t = 0; t < T; ++t)
      for (std::size_t j = 0; j < head_.out; ++j) {
        R s = p[head_.bias + j];
        for (std::size_t c = 0; c < head_.in; ++c)
          s += p[head_.weight + j * head_.in + c] * top[t * head_.in + c];
        act.out[t * head_.out + j] = s;
      }
  }

  void backward(std::span<const Unit> units, const Activations<double> &act, const std::vector<double> &dout,
                std::span<double> grad, double weight) const {
    const std::size_t T = units.size();
    const auto &top = act.h.back();
    std::vector<double> dh(T * head_.in, 0.0);
    for (std::size_t t = 0; t < T; ++t)
      for (std::size_t j = 0; j < head_.out; ++j) {
        const double g = dout[t * head_.out + j];
        if (g == 0.0) continue;
        grad[head_.bias + j] += weight * g;
        for (std::size_t c = 0; c < head_.in; ++c) {
          grad[head_.weight + j * head_.in + c] += weight * g * top[t * head_.in + c];
          dh[t * head_.in + c] += g * params_[head_.weight + j * head_.in + c];
        }
      }
    const long K = static_cast<long>(arch_.kernel), pad = K / 2;
    for (std::size_t l = conv_.size(); l-- > 0;) {
      const auto &b = conv_[l];
      const auto &in = act.h[l];
      const auto &out = act.h[l + 1];
      std::vector<double> dx(T * b.in, 0.0);
      for (std::size_t t = 0; t < T; ++t) {
        for (std::size_t o = 0; o < b.out; ++o) {
          const double y = out[t * b.out + o];
          const double dz = dh[t * b.out + o] * (1.0 - y * y);
          if (dz == 0.0) continue;
          grad[b.bias + o] += weight * dz;
          const std::size_t wrow = b.weight + o * b.in * arch_.kernel;
          for (long k = 0; k < K; ++k) {
            const long src = static_cast<long>(t) + k - pad;
            if (src < 0 || src >= static_cast<long>(T)) continue;
            const std::size_t s = static_cast<std::size_t>(src);
            for (std::size_t i = 0; i < b.in; ++i) {
              grad[wrow + i * arch_.kernel + k] += weight * dz * in[s * b.in + i];
              dx[s * b.in + i] += dz * params_[wrow + i * arch_.kernel + k];
            }
          }
        }
      }
      dh = std::move(dx);
    }
    // The emotion slice of the input gradient has no parameters behind it.
    const std::size_t E = arch_.unit_dim, in0 = E + arch_.emotion_dim;
    for (std::size_t t = 0; t < T; ++t) {
      const std::size_t row = static_cast<std::size_t>(units[t]) * E;
      for (std::size_t e = 0; e < E; ++e) grad[row + e] += weight * dh[t * in0 + e];
    }
  }

  PredictorArch arch_;
  std::vector<double> params_;
  std::vector<Block> conv_;
  Block head_{};
};

// ---------------------------------------------------------------------------
// Inference.

inline std::int32_t round_duration(double raw) {
  if (!std::isfinite(raw)) return 1;
  return static_cast<std::int32_t>(std::lround(std::clamp(raw, 1.0, 1e6)));
}

inline std::vector<std::int32_t> predict_durations(const ReducedUnitSequence &reduced,
                                                   const EmotionEmbedding &emo,
                                                   const PredictorModel &model) {
  require(model.arch().kind == PredictorKind::duration, Errc::invalid_argument,
          "predict_durations needs a duration model");
  auto raw = model.forward(reduced.units, emo.values);
  std::vector<std::int32_t> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = round_duration(raw[i]);
  return out;
}

/// Per-frame sigmoid activations, one vector of size d per input frame.
inline std::vector<std::vector<double>> predict_pitch(const UnitSequence &units,
                                                      const EmotionEmbedding &emo,
                                                      const PredictorModel &model,
                                                      std::size_t quantizer_bins) {
  require(model.arch().kind == PredictorKind::pitch, Errc::invalid_argument,
          "predict_pitch needs a pitch model");
  require(model.arch().out_dim == quantizer_bins, Errc::dimension_mismatch,
          "pitch model emits " + std::to_string(model.arch().out_dim) + " bins, quantizer has " +
              std::to_string(quantizer_bins));
  auto raw = model.forward(units.units, emo.values);
  const std::size_t d = quantizer_bins;
  std::vector<std::vector<double>> out(units.units.size(), std::vector<double>(d));
  for (std::size_t t = 0; t < out.size(); ++t)
    for (std::size_t j = 0; j < d; ++j) out[t][j] = PredictorModel::sigmoid(raw[t * d + j]);
  return out;
}

// ---------------------------------------------------------------------------
// Training.

struct TrainingConfig {
  double learning_rate = 0.01;
  int epochs = 50;
  std::size_t batch_size = 8;
  std::uint64_t seed = 0;
  PredictorKind loss = PredictorKind::duration;

  void validate() const {
    require(learning_rate >= 0.0 && std::isfinite(learning_rate), Errc::invalid_argument,
            "learning rate must be finite and >= 0");
    require(epochs >= 1 && batch_size >= 1, Errc::invalid_argument,
            "epochs and batch size must be positive");
  }
};

/// Plain minibatch SGD. Returns the per-epoch mean example loss, measured on
/// each batch before its update.
inline std::vector<double> train_predictor(PredictorModel &model,
                                           std::span<const PredictorExample> data,
                                           const TrainingConfig &cfg) {
  cfg.validate();
  require(!data.empty(), Errc::insufficient_data, "insufficient data: empty training set");
  require(cfg.loss == model.arch().kind, Errc::invalid_argument,
          "training loss does not match the model head");
  Rng rng(cfg.seed);
  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<double> grad(model.num_params());
  std::vector<double> history;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    double total = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      const double w = 1.0 / static_cast<double>(end - start);
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t i = start; i < end; ++i) total += model.loss_and_grad(data[order[i]], grad, w);
      if (!std::isfinite(total)) fail(Errc::diverged, "training diverged: non-finite loss");
      auto p = model.params();
      for (std::size_t i = 0; i < p.size(); ++i) p[i] -= cfg.learning_rate * grad[i];
    }
    history.push_back(total / static_cast<double>(data.size()));
  }
  return history;
}

inline double evaluate_loss(const PredictorModel &model, std::span<const PredictorExample> data) {
  double total = 0.0;
  for (const auto &ex : data) total += model.loss_and_grad(ex, {});
  return data.empty() ? 0.0 : total / static_cast<double>(data.size());
}

// ---------------------------------------------------------------------------
// Gradient check.

struct GradCheckOptions {
  // 0 checks every parameter; otherwise a seeded random subset of this size.
  std::size_t max_params = 0;
  std::uint64_t seed = 0;
  // Applied to the analytic gradient before comparison (test hook).
  std::function<void(std::span<double>)> tamper;
};

/// Relative error with a 1e-6 floor on the denominator, so parameters whose
/// true gradient is essentially zero are compared absolutely.
inline double gradient_relative_error(double analytic, double numeric) {
  const double den = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
  return std::abs(analytic - numeric) / den;
}

/// Maximum relative error between backprop and central finite differences,
/// the latter evaluated in extended precision.
inline double grad_check(const PredictorModel &model, const PredictorExample &sample,
                         double epsilon, const GradCheckOptions &opts = {}) {
  require(epsilon >= 1e-7 && epsilon <= 1e-3, Errc::invalid_argument,
          "epsilon must lie in [1e-7, 1e-3]");
  std::vector<double> analytic(model.num_params(), 0.0);
  model.loss_and_grad(sample, analytic);
  if (opts.tamper) opts.tamper(analytic);

  std::vector<std::size_t> idx(model.num_params());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  if (opts.max_params && opts.max_params < idx.size()) {
    Rng rng(opts.seed);
    rng.shuffle(idx);
    idx.resize(opts.max_params);
  }
  const auto params = model.params();
  std::vector<long double> p(params.begin(), params.end());
  double worst = 0.0;
  for (std::size_t i : idx) {
    const long double orig = p[i];
    p[i] = orig + epsilon;
    const long double up = model.loss_extended(sample, p);
    p[i] = orig - epsilon;
    const long double down = model.loss_extended(sample, p);
    p[i] = orig;
    const auto numeric = static_cast<double>((up - down) / (2.0L * epsilon));
    worst = std::max(worst, gradient_relative_error(analytic[i], numeric));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Binary formats.

inline std::string encode_checkpoint(const PredictorModel &m) {
  const auto &a = m.arch();
  std::ostringstream head;
  head << "PPM1\n"
       << kind_name(a.kind) << ' ' << a.num_units << ' ' << a.unit_dim << ' ' << a.emotion_dim << ' '
       << a.channels << ' ' << a.kernel << ' ' << a.layers << ' ' << a.out_dim << '\n';
  std::string out = head.str();
  out.reserve(out.size() + 4 * m.num_params());
  for (double v : m.params()) io::put_f32(out, static_cast<float>(v));
  return out;
}

inline PredictorModel decode_checkpoint(const std::string &bytes) {
  io::ByteReader r(bytes, "checkpoint");
  require(r.line() == "PPM1", Errc::parse, "checkpoint: bad magic");
  auto toks = io::split_ws(r.line());
  require(toks.size() == 8, Errc::parse, "checkpoint: header needs 8 fields");
  PredictorArch a;
  if (toks[0] == "duration") a.kind = PredictorKind::duration;
  else if (toks[0] == "pitch") a.kind = PredictorKind::pitch;
  else fail(Errc::parse, "checkpoint: unknown predictor kind " + toks[0]);
  std::size_t *fields[] = {&a.num_units, &a.unit_dim, &a.emotion_dim, &a.channels,
                           &a.kernel, &a.layers, &a.out_dim};
  for (std::size_t i = 0; i < 7; ++i) {
    const long long v = io::parse_int(toks[i + 1], "checkpoint");
    require(v >= 1 && v < (1LL << 24), Errc::parse, "checkpoint: implausible size");
    *fields[i] = static_cast<std::size_t>(v);
  }
  PredictorModel m(a);
  require(r.remaining() == 4 * m.num_params(), Errc::parse,
          "checkpoint: parameter count does not match architecture");
  for (auto &v : m.params()) v = r.f32();
  return m;
}

/// "EMB1", u32 count, u32 dimension, then count*dimension float32 values.
inline std::string encode_embeddings(std::span<const std::vector<double>> rows) {
  const std::size_t dim = rows.empty() ? 0 : rows[0].size();
  std::string out = "EMB1";
  io::put_u32(out, static_cast<std::uint32_t>(rows.size()));
  io::put_u32(out, static_cast<std::uint32_t>(dim));
  for (const auto &r : rows) {
    require(r.size() == dim, Errc::dimension_mismatch, "embedding rows differ in dimension");
    for (double v : r) io::put_f32(out, static_cast<float>(v));
  }
  return out;
}

inline std::vector<std::vector<double>> decode_embeddings(const std::string &bytes) {
  io::ByteReader r(bytes, "embedding file");
  require(r.bytes(4) == "EMB1", Errc::parse, "embedding file: bad magic");
  const std::uint32_t count = r.u32(), dim = r.u32();
  require(r.remaining() == 4ull * count * dim, Errc::parse, "embedding file: size mismatch");
  std::vector<std::vector<double>> rows(count, std::vector<double>(dim));
  for (auto &row : rows)
    for (auto &v : row) v = r.f32();
  return rows;
}

}  // namespace unitprosody

#endif  // UNITPROSODY_PREDICTORS_HPP_
