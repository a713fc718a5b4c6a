// unitprosody/config.hpp

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

#ifndef UNITPROSODY_CONFIG_HPP_
#define UNITPROSODY_CONFIG_HPP_

// Pipeline configuration. Files are UTF-8 key=value lines under [section]
// headers; '#' and ';' start comments (mid-line only after whitespace). Precedence, lowest first: built-in
// defaults, the file (an explicit path, else $PROSODY_UNITS_CONFIG),
// command-line overrides of the form section.key=value.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <type_traits>
#include <vector>

#include "unitprosody/error.hpp"
#include "unitprosody/io.hpp"

namespace unitprosody {

inline constexpr const char *kConfigEnvVar = "PROSODY_UNITS_CONFIG";

struct PipelineConfig {
  // [units]
  std::size_t codebook_size = 100;
  int kmeans_iters = 50;
  std::uint64_t kmeans_seed = 0;
  double unit_frame_period = 0.020;
  // [pitch]
  double f_min = 60.0;
  double f_max = 400.0;
  double pitch_frame_period = 0.010;
  double voicing_threshold = 0.5;
  std::size_t bins = 32;
  double range_lo = -3.0;
  double range_hi = 3.0;
  // [model]
  std::size_t unit_dim = 32;
  std::size_t channels = 64;
  std::size_t kernel = 3;
  std::size_t layers = 2;
  double duration_lr = 0.01;
  double pitch_lr = 0.5;
  int epochs = 50;
  std::size_t batch_size = 8;
  std::uint64_t model_seed = 0;
  std::uint64_t emotion_seed = 0;
  std::size_t speaker_dim = 16;
  // [synth]
  int sample_rate = 16000;
  std::size_t harmonics = 8;
  std::uint64_t synth_seed = 0;
  // [eval]
  std::string hypotheses;
  std::string references;
  bool lowercase = false;
  double slda_alpha = 0.01;

  void validate() const;
};

namespace detail {

struct ConfigKey {
  std::function<void(PipelineConfig &, const std::string &)> set;
  std::function<std::string(const PipelineConfig &)> get;
};

template <class T>
ConfigKey config_key(T PipelineConfig::*member) {
  ConfigKey k;
  k.set = [member](PipelineConfig &c, const std::string &v) {
    if constexpr (std::is_same_v<T, std::string>) {
      c.*member = v;
    } else if constexpr (std::is_same_v<T, bool>) {
      if (v == "true" || v == "1" || v == "yes") c.*member = true;
      else if (v == "false" || v == "0" || v == "no") c.*member = false;
      else fail(Errc::config, "expected a boolean, got '" + v + "'");
    } else if constexpr (std::is_floating_point_v<T>) {
      try {
        c.*member = io::parse_real(v, "value");
      } catch (const Error &e) {
        fail(Errc::config, e.what());
      }
    } else {
      long long x = 0;
      try {
        x = io::parse_int(v, "value");
      } catch (const Error &e) {
        fail(Errc::config, e.what());
      }
      if constexpr (std::is_unsigned_v<T>)
        if (x < 0) fail(Errc::config, "expected a non-negative integer, got '" + v + "'");
      c.*member = static_cast<T>(x);
    }
  };
  k.get = [member](const PipelineConfig &c) {
    if constexpr (std::is_same_v<T, std::string>) return c.*member;
    else if constexpr (std::is_same_v<T, bool>) return std::string(c.*member ? "true" : "false");
    else if constexpr (std::is_floating_point_v<T>) return io::format_real(c.*member);
    else return std::to_string(c.*member);
  };
  return k;
}

inline const std::map<std::string, ConfigKey> &config_keys() {
  static const std::map<std::string, ConfigKey> keys = {
      {"units.codebook_size", config_key(&PipelineConfig::codebook_size)},
      {"units.kmeans_iters", config_key(&PipelineConfig::kmeans_iters)},
      {"units.kmeans_seed", config_key(&PipelineConfig::kmeans_seed)},
      {"units.frame_period", config_key(&PipelineConfig::unit_frame_period)},
      {"pitch.f_min", config_key(&PipelineConfig::f_min)},
      {"pitch.f_max", config_key(&PipelineConfig::f_max)},
      {"pitch.frame_period", config_key(&PipelineConfig::pitch_frame_period)},
      {"pitch.voicing_threshold", config_key(&PipelineConfig::voicing_threshold)},
      {"pitch.bins", config_key(&PipelineConfig::bins)},
      {"pitch.range_lo", config_key(&PipelineConfig::range_lo)},
      {"pitch.range_hi", config_key(&PipelineConfig::range_hi)},
      {"model.unit_dim", config_key(&PipelineConfig::unit_dim)},
      {"model.channels", config_key(&PipelineConfig::channels)},
      {"model.kernel", config_key(&PipelineConfig::kernel)},
      {"model.layers", config_key(&PipelineConfig::layers)},
      {"model.duration_lr", config_key(&PipelineConfig::duration_lr)},
      {"model.pitch_lr", config_key(&PipelineConfig::pitch_lr)},
      {"model.epochs", config_key(&PipelineConfig::epochs)},
      {"model.batch_size", config_key(&PipelineConfig::batch_size)},
      {"model.seed", config_key(&PipelineConfig::model_seed)},
      {"model.emotion_seed", config_key(&PipelineConfig::emotion_seed)},
      {"model.speaker_dim", config_key(&PipelineConfig::speaker_dim)},
      {"synth.sample_rate", config_key(&PipelineConfig::sample_rate)},
      {"synth.harmonics", config_key(&PipelineConfig::harmonics)},
      {"synth.seed", config_key(&PipelineConfig::synth_seed)},
      {"eval.hypotheses", config_key(&PipelineConfig::hypotheses)},
      {"eval.references", config_key(&PipelineConfig::references)},
      {"eval.lowercase", config_key(&PipelineConfig::lowercase)},
      {"eval.slda_alpha", config_key(&PipelineConfig::slda_alpha)},
  };
  return keys;
}

inline std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

inline void PipelineConfig::validate() const {
  auto check = [](bool ok, const std::string &what) {
    if (!ok) fail(Errc::config, what);
  };
  check(codebook_size >= 1, "units.codebook_size must be >= 1");
  check(kmeans_iters >= 1, "units.kmeans_iters must be >= 1");
  check(unit_frame_period > 0, "units.frame_period must be > 0");
  check(f_min > 0 && f_max > f_min, "pitch range needs 0 < f_min < f_max");
  check(pitch_frame_period > 0, "pitch.frame_period must be > 0");
  check(voicing_threshold > 0 && voicing_threshold < 1, "pitch.voicing_threshold must lie in (0, 1)");
  check(bins >= 2, "pitch.bins must be >= 2");
  check(range_lo < range_hi, "pitch range_lo must be < range_hi");
  check(unit_dim >= 1 && channels >= 1 && layers >= 1, "model sizes must be >= 1");
  check(kernel % 2 == 1, "model.kernel must be odd");
  check(duration_lr > 0 && pitch_lr > 0, "learning rates must be > 0");
  check(epochs >= 1 && batch_size >= 1, "model.epochs and model.batch_size must be >= 1");
  check(speaker_dim >= 1, "model.speaker_dim must be >= 1");
  check(sample_rate >= 8000, "synth.sample_rate must be >= 8000");
  check(f_max < sample_rate / 2.0, "pitch.f_max must be below the Nyquist frequency");
  const double hop = unit_frame_period * sample_rate;
  check(std::abs(hop - std::round(hop)) < 1e-9, "units.frame_period * synth.sample_rate must be an integer");
  check(harmonics >= 1, "synth.harmonics must be >= 1");
  check(slda_alpha > 0 && slda_alpha <= 1, "eval.slda_alpha must lie in (0, 1]");
}

/// Applies one "section.key=value" assignment.
inline void apply_config_override(PipelineConfig &cfg, const std::string &assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) fail(Errc::config, "override '" + assignment + "' is not section.key=value");
  const auto key = detail::trim(assignment.substr(0, eq));
  const auto &keys = detail::config_keys();
  auto it = keys.find(key);
  if (it == keys.end()) fail(Errc::config, "unknown config key '" + key + "'");
  try {
    it->second.set(cfg, detail::trim(assignment.substr(eq + 1)));
  } catch (const Error &e) {
    fail(Errc::config, key + ": " + e.what());
  }
}

inline void apply_config_text(PipelineConfig &cfg, const std::string &text) {
  std::string section;
  const auto lines = io::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto line = lines[i];
    for (std::size_t c = 1; c < line.size(); ++c)
      if ((line[c] == '#' || line[c] == ';') && (line[c - 1] == ' ' || line[c - 1] == '\t')) {
        line.resize(c);
        break;
      }
    line = detail::trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    const std::string where = "config line " + std::to_string(i + 1);
    if (line.front() == '[') {
      if (line.back() != ']') fail(Errc::config, where + ": unterminated section header");
      section = detail::trim(line.substr(1, line.size() - 2));
      continue;
    }
    if (section.empty()) fail(Errc::config, where + ": key outside any [section]");
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(Errc::config, where + ": expected key=value");
    try {
      apply_config_override(cfg, section + "." + detail::trim(line.substr(0, eq)) + "=" + line.substr(eq + 1));
    } catch (const Error &e) {
      fail(Errc::config, where + ": " + e.what());
    }
  }
}

/// Defaults, then `path` (or $PROSODY_UNITS_CONFIG when `path` is empty),
/// then `overrides`; validated before returning.
inline PipelineConfig load_config(const std::filesystem::path &path = {},
                                  const std::vector<std::string> &overrides = {}) {
  PipelineConfig cfg;
  std::filesystem::path file = path;
  if (file.empty())
    if (const char *env = std::getenv(kConfigEnvVar); env && *env) file = env;
  if (!file.empty()) {
    std::string text;
    try {
      text = io::read_file(file);
    } catch (const Error &e) {
      fail(Errc::config, std::string("cannot read config: ") + e.what());
    }
    apply_config_text(cfg, text);
  }
  for (const auto &o : overrides) apply_config_override(cfg, o);
  cfg.validate();
  return cfg;
}

/// Canonical text form; parses back to the same configuration.
inline std::string format_config(const PipelineConfig &cfg) {
  std::string out, section;
  for (const auto &[key, k] : detail::config_keys()) {
    const auto dot = key.find('.');
    const auto sec = key.substr(0, dot);
    if (sec != section) {
      out += (out.empty() ? "[" : "\n[") + sec + "]\n";
      section = sec;
    }
    out += key.substr(dot + 1) + " = " + k.get(cfg) + "\n";
  }
  return out;
}

}  // namespace unitprosody

#endif  // UNITPROSODY_CONFIG_HPP_
