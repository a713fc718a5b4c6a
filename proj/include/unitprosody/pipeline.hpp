// unitprosody/pipeline.hpp

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

#ifndef UNITPROSODY_PIPELINE_HPP_
#define UNITPROSODY_PIPELINE_HPP_

// Stage runner. Artifacts live under one output directory:
//
//   units/codebook.txt, units/<id>.units, units/<id>.reduced
//   prosody/<id>.f0.csv, prosody/speaker_stats.csv,
//   prosody/duration.ppm, prosody/pitch.ppm,
//   prosody/<id>.pred.reduced, prosody/<id>.pred.f0.csv
//   synth/<id>.cnd, synth/<id>.wav
//   eval/features_source.csv, eval/features_synth.csv, eval/report.txt
//   <stage>_summary.txt
//
// Each stage reads the previous stage's outputs. A missing or bad input
// fails that utterance only; the stage carries on with the rest.

#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "unitprosody/acoustic_features.hpp"
#include "unitprosody/bleu.hpp"
#include "unitprosody/conditioning.hpp"
#include "unitprosody/config.hpp"
#include "unitprosody/dsp.hpp"
#include "unitprosody/error.hpp"
#include "unitprosody/io.hpp"
#include "unitprosody/manifest.hpp"
#include "unitprosody/pitch.hpp"
#include "unitprosody/predictors.hpp"
#include "unitprosody/slda.hpp"
#include "unitprosody/stats.hpp"
#include "unitprosody/unit_codec.hpp"
#include "unitprosody/waveform.hpp"

namespace unitprosody {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;

inline int exit_code_for(Errc c) {
  switch (c) {
    case Errc::config:
    case Errc::invalid_argument: return kExitConfig;
    case Errc::io:
    case Errc::parse: return kExitIo;
    default: return kExitFailure;
  }
}

/// "E<exit code> <error name>: <message>"
inline std::string format_error(const Error &e) {
  return "E" + std::to_string(exit_code_for(e.code())) + " " + std::string(errc_name(e.code())) + ": " +
         e.what();
}

enum class Stage { units, prosody, synth, eval };

inline std::string_view stage_name(Stage s) {
  switch (s) {
    case Stage::units: return "units";
    case Stage::prosody: return "prosody";
    case Stage::synth: return "synth";
    case Stage::eval: return "eval";
  }
  return "?";
}

inline Stage parse_stage(const std::string &s) {
  for (Stage st : {Stage::units, Stage::prosody, Stage::synth, Stage::eval})
    if (stage_name(st) == s) return st;
  fail(Errc::config, "unknown stage '" + s + "' (expected units, prosody, synth or eval)");
}

struct UtteranceStatus {
  std::string utterance_id;
  std::optional<std::string> error;  // formatted, set on failure
};

struct StageSummary {
  Stage stage = Stage::units;
  std::vector<UtteranceStatus> items;

  std::size_t failed() const {
    std::size_t n = 0;
    for (const auto &i : items) n += i.error.has_value();
    return n;
  }
  std::size_t ok() const { return items.size() - failed(); }
  int exit_code() const { return failed() ? kExitFailure : kExitOk; }

  std::string text() const {
    std::string out;
    for (const auto &i : items)
      out += i.utterance_id + (i.error ? " failed " + *i.error : std::string(" ok")) + "\n";
    out += std::to_string(ok()) + " ok, " + std::to_string(failed()) + " failed\n";
    return out;
  }
};

inline std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Frame features.

/// MFCC-13 frames, one per `frame_period`, each from a 25 ms window centred
/// in its hop.
inline FrameFeatures mfcc_features(const Waveform &w, double frame_period) {
  const auto hop = static_cast<std::size_t>(std::lround(frame_period * w.sample_rate));
  require(hop >= 1, Errc::invalid_argument, "frame period shorter than one sample");
  const std::size_t n = w.samples.size() / hop;
  if (n == 0) fail(Errc::insufficient_data, "waveform shorter than one frame");
  const auto len = static_cast<std::size_t>(std::lround(0.025 * w.sample_rate));
  dsp::MfccComputer mfcc(w.sample_rate, len);
  FrameFeatures f;
  f.dim = 13;
  f.frame_period = frame_period;
  for (std::size_t t = 0; t < n; ++t) {
    auto frame = dsp::centered_frame(w.samples, t * hop + hop / 2, len);
    f.push_back(mfcc(frame));
  }
  return f;
}

/// A .wav path yields MFCCs; anything else is read as an "N D" feature file.
inline FrameFeatures load_frame_features(const std::filesystem::path &path, double frame_period) {
  if (path.extension() == ".wav") return mfcc_features(read_wav(path), frame_period);
  auto f = parse_features(io::read_file(path), frame_period);
  f.validate();
  return f;
}

inline EmotionEmbedding utterance_emotion(const FrameFeatures &f, const PipelineConfig &cfg) {
  return EmotionEncoder::random(f.dim, cfg.emotion_seed).encode(f);
}

inline TrackerConfig tracker_config(const PipelineConfig &cfg) {
  TrackerConfig t;
  t.f_min = cfg.f_min;
  t.f_max = cfg.f_max;
  t.frame_period = cfg.pitch_frame_period;
  t.voicing_threshold = cfg.voicing_threshold;
  return t;
}

inline PredictorArch duration_arch(const PipelineConfig &cfg, std::size_t k) {
  auto a = PredictorArch::duration(k);
  a.unit_dim = cfg.unit_dim;
  a.channels = cfg.channels;
  a.kernel = cfg.kernel;
  a.layers = cfg.layers;
  return a;
}

inline PredictorArch pitch_arch(const PipelineConfig &cfg, std::size_t k) {
  auto a = duration_arch(cfg, k);
  a.kind = PredictorKind::pitch;
  a.out_dim = cfg.bins;
  return a;
}

/// Resamples a pitch track onto exactly `frames` frames at the unit rate.
inline PitchTrack align_track(const PitchTrack &t, std::size_t frames, double unit_period) {
  require(frames >= 1, Errc::invalid_argument, "cannot align to zero frames");
  const double rate = static_cast<double>(frames) / (static_cast<double>(t.size()) * t.frame_period);
  auto f0 = interpolate_f0(t, rate);
  f0.resize(frames, f0.empty() ? 0.0 : f0.back());
  return PitchTrack::from_f0(std::move(f0), unit_period);
}

/// Bin index per frame; -1 on unvoiced frames.
inline std::vector<int> pitch_targets(const PitchTrack &t, const SpeakerPitchStats &s,
                                      const PitchQuantizer &q) {
  std::vector<int> out(t.size(), -1);
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t.voiced[i]) out[i] = static_cast<int>(q.bin_index(normalize_value(t.f0_hz[i], s)));
  return out;
}

/// Expressivity analysis of paired source/target feature rows: standardized
/// distances (scale pooled over both sides), one-way ANOVA of distance by
/// label, stepwise selection of source features by label, and per-feature
/// source/target correlation. Analyses that do not apply are reported as
/// skipped.
inline std::string analysis_report(std::span<const std::pair<std::string, FeatureVector>> source,
                                   std::span<const std::pair<std::string, FeatureVector>> target,
                                   std::span<const std::optional<std::string>> labels, double alpha) {
  require(source.size() == target.size() && labels.size() == source.size(), Errc::unaligned,
          "unaligned streams: source, target and label counts differ");
  std::string report;
  if (source.empty()) return report;
  std::vector<FeatureVector> pool;
  for (std::size_t i = 0; i < source.size(); ++i) {
    require(source[i].first == target[i].first, Errc::unaligned,
            "unaligned streams: " + source[i].first + " vs " + target[i].first);
    pool.push_back(source[i].second);
    pool.push_back(target[i].second);
  }
  const auto scale = pool_scale(pool);
  std::vector<double> dist;
  for (std::size_t i = 0; i < source.size(); ++i) {
    dist.push_back(standardized_euclidean(source[i].second, target[i].second, scale));
    report += "distance " + source[i].first + " = " + fixed6(dist.back()) + "\n";
  }
  report += "mean_distance = " + fixed6(stats::mean_of(dist)) + "\n";

  std::map<std::string, std::vector<double>> groups;
  for (std::size_t i = 0; i < dist.size(); ++i)
    if (labels[i]) groups[*labels[i]].push_back(dist[i]);
  if (groups.size() >= 2) {
    std::vector<std::vector<double>> g;
    std::map<std::string, int> label_index;
    for (auto &[lab, v] : groups) {
      label_index.emplace(lab, static_cast<int>(g.size()));
      g.push_back(v);
    }
    try {
      const auto a = stats::anova_oneway(g);
      report += "anova F = " + fixed6(a.f) + " p = " + fixed6(a.p) + " df = " + io::format_real(a.df_between) +
                ", " + io::format_real(a.df_within) + "\n";
    } catch (const Error &e) {
      report += "anova skipped: " + std::string(e.what()) + "\n";
    }
    std::vector<std::size_t> labelled;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i]) labelled.push_back(i);
    Eigen::MatrixXd x(static_cast<Eigen::Index>(labelled.size()), kNumAcousticFeatures);
    std::vector<int> y;
    for (std::size_t j = 0; j < labelled.size(); ++j) {
      for (std::size_t c = 0; c < kNumAcousticFeatures; ++c)
        x(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(c)) = source[labelled[j]].second[c];
      y.push_back(label_index.at(*labels[labelled[j]]));
    }
    try {
      const auto s = forward_slda(x, y, alpha);
      report += "slda selected =";
      for (const auto &st : s.steps)
        report += " " + feature_names()[st.feature] + " (lambda " + fixed6(st.wilks_lambda) + ")";
      report += "\n";
    } catch (const Error &e) {
      report += "slda skipped: " + std::string(e.what()) + "\n";
    }
  }

  for (std::size_t c = 0; c < kNumAcousticFeatures; ++c) {
    std::vector<double> a, b;
    for (std::size_t i = 0; i < source.size(); ++i) {
      a.push_back(source[i].second[c]);
      b.push_back(target[i].second[c]);
    }
    try {
      const auto p = stats::pearson(a, b);
      report += "pearson " + feature_names()[c] + " rho = " + fixed6(p.rho) + " p = " + fixed6(p.p) + "\n";
    } catch (const Error &e) {
      report += "pearson " + feature_names()[c] + " skipped: " + e.what() + "\n";
    }
  }
  return report;
}

// ---------------------------------------------------------------------------

namespace detail {

inline std::string single_line(const std::filesystem::path &p) {
  auto lines = io::split_lines(io::read_file(p));
  return lines.empty() ? std::string() : lines.front();
}

class StageRunner {
 public:
  StageRunner(const PipelineConfig &cfg, const Manifest &m, std::filesystem::path out, Stage stage)
      : cfg_(cfg), m_(m), out_(std::move(out)) {
    summary_.stage = stage;
    for (const auto &r : m.records) summary_.items.push_back({r.utterance_id, std::nullopt});
  }

  bool alive(std::size_t i) const { return !summary_.items[i].error; }

  // Runs `fn` for every still-healthy utterance, recording failures.
  template <class Fn>
  void each(Fn &&fn) {
    for (std::size_t i = 0; i < m_.records.size(); ++i) {
      if (!alive(i)) continue;
      try {
        fn(i, m_.records[i]);
      } catch (const Error &e) {
        summary_.items[i].error = format_error(e);
      } catch (const std::exception &e) {
        summary_.items[i].error = "E1 internal: " + std::string(e.what());
      }
    }
  }

  void fail_item(std::size_t i, const Error &e) { summary_.items[i].error = format_error(e); }

  std::filesystem::path path(const std::string &rel) const { return out_ / rel; }

  StageSummary finish() {
    io::write_file_atomic(out_ / (std::string(stage_name(summary_.stage)) + "_summary.txt"), summary_.text());
    return summary_;
  }

  const PipelineConfig &cfg_;
  const Manifest &m_;
  std::filesystem::path out_;
  StageSummary summary_;
};

inline StageSummary run_units(StageRunner &r) {
  const auto &cfg = r.cfg_;
  std::vector<FrameFeatures> feats(r.m_.size());
  r.each([&](std::size_t i, const ManifestRecord &rec) {
    feats[i] = load_frame_features(r.m_.resolve(rec), cfg.unit_frame_period);
  });
  std::vector<FrameFeatures> pool;
  for (std::size_t i = 0; i < feats.size(); ++i)
    if (r.alive(i)) pool.push_back(feats[i]);
  if (pool.empty()) return r.finish();
  const auto cb = kmeans_fit(pool, cfg.codebook_size, cfg.kmeans_iters, cfg.kmeans_seed);
  io::write_file_atomic(r.path("units/codebook.txt"), format_codebook(cb));
  r.each([&](std::size_t i, const ManifestRecord &rec) {
    const auto seq = quantize(feats[i], cb);
    io::write_file_atomic(r.path("units/" + rec.utterance_id + ".units"), format_units(seq) + "\n");
    io::write_file_atomic(r.path("units/" + rec.utterance_id + ".reduced"), format_reduced(reduce(seq)) + "\n");
  });
  return r.finish();
}

/// Everything the predictors train on, gathered from the units stage
/// outputs and the audio. Tracks are written to prosody/<id>.f0.csv and
/// speaker statistics to prosody/speaker_stats.csv along the way.
struct ProsodyInputs {
  std::size_t num_units = 0;
  std::vector<ReducedUnitSequence> reduced;
  std::vector<EmotionEmbedding> emotion;
  std::map<std::string, SpeakerPitchStats> stats;
  std::vector<PredictorExample> duration_data, pitch_data;
};

inline ProsodyInputs prepare_prosody(StageRunner &r) {
  const auto &cfg = r.cfg_;
  const std::size_t n = r.m_.size();
  const auto cb = parse_codebook(io::read_file(r.path("units/codebook.txt")));
  const PitchQuantizer q(cfg.bins, cfg.range_lo, cfg.range_hi);
  ProsodyInputs in;
  in.num_units = cb.size();
  in.reduced.resize(n);
  in.emotion.resize(n);

  std::vector<PitchTrack> tracks(n);
  std::vector<UnitSequence> units(n);
  r.each([&](std::size_t i, const ManifestRecord &rec) {
    const auto audio = r.m_.resolve(rec);
    if (audio.extension() != ".wav") fail(Errc::invalid_argument, "prosody needs a .wav audio_path");
    const auto wave = read_wav(audio);
    tracks[i] = track_f0(wave, tracker_config(cfg));
    units[i] = parse_units(single_line(r.path("units/" + rec.utterance_id + ".units")));
    units[i].frame_period = cfg.unit_frame_period;
    in.reduced[i] = parse_reduced(single_line(r.path("units/" + rec.utterance_id + ".reduced")));
    if (units[i].units.empty()) fail(Errc::insufficient_data, "empty unit sequence");
    for (Unit u : units[i].units)
      require(static_cast<std::size_t>(u) < in.num_units, Errc::invalid_argument, "unit outside the codebook");
    in.emotion[i] = utterance_emotion(mfcc_features(wave, cfg.unit_frame_period), cfg);
    io::write_file_atomic(r.path("prosody/" + rec.utterance_id + ".f0.csv"), format_f0_csv(tracks[i]));
  });

  // Per-speaker statistics over that speaker's healthy utterances.
  std::map<std::string, std::vector<std::size_t>> by_speaker;
  for (std::size_t i = 0; i < n; ++i)
    if (r.alive(i)) by_speaker[r.m_.records[i].speaker_id].push_back(i);
  for (const auto &[spk, idx] : by_speaker) {
    std::vector<PitchTrack> ts;
    for (auto i : idx) ts.push_back(tracks[i]);
    try {
      in.stats[spk] = speaker_stats(ts, spk);
    } catch (const Error &e) {
      for (auto i : idx) r.fail_item(i, e);
    }
  }
  if (in.stats.empty()) return in;
  std::vector<SpeakerPitchStats> rows;
  for (const auto &[spk, s] : in.stats) rows.push_back(s);
  io::write_file_atomic(r.path("prosody/speaker_stats.csv"), format_speaker_stats_csv(rows));

  r.each([&](std::size_t i, const ManifestRecord &rec) {
    PredictorExample d;
    d.units = in.reduced[i].units;
    d.emotion = in.emotion[i].values;
    for (auto v : in.reduced[i].durations) d.duration_targets.push_back(v);
    const auto aligned = align_track(tracks[i], units[i].units.size(), cfg.unit_frame_period);
    PredictorExample p;
    p.units = units[i].units;
    p.emotion = in.emotion[i].values;
    p.bin_targets = pitch_targets(aligned, in.stats.at(rec.speaker_id), q);
    in.duration_data.push_back(std::move(d));
    in.pitch_data.push_back(std::move(p));
  });
  return in;
}

inline PredictorModel train_from_inputs(const PipelineConfig &cfg, const ProsodyInputs &in, PredictorKind kind) {
  require(!in.duration_data.empty(), Errc::insufficient_data, "insufficient data: no usable utterances");
  TrainingConfig tc;
  tc.epochs = cfg.epochs;
  tc.batch_size = cfg.batch_size;
  tc.seed = cfg.model_seed;
  tc.loss = kind;
  if (kind == PredictorKind::duration) {
    PredictorModel m(duration_arch(cfg, in.num_units), cfg.model_seed);
    tc.learning_rate = cfg.duration_lr;
    train_predictor(m, in.duration_data, tc);
    return m;
  }
  PredictorModel m(pitch_arch(cfg, in.num_units), cfg.model_seed + 1);
  tc.learning_rate = cfg.pitch_lr;
  train_predictor(m, in.pitch_data, tc);
  return m;
}

inline StageSummary run_prosody(StageRunner &r) {
  const auto &cfg = r.cfg_;
  const auto in = prepare_prosody(r);
  if (in.duration_data.empty()) return r.finish();
  const auto dur = train_from_inputs(cfg, in, PredictorKind::duration);
  const auto pit = train_from_inputs(cfg, in, PredictorKind::pitch);
  io::write_file_atomic(r.path("prosody/duration.ppm"), encode_checkpoint(dur));
  io::write_file_atomic(r.path("prosody/pitch.ppm"), encode_checkpoint(pit));

  const PitchQuantizer q(cfg.bins, cfg.range_lo, cfg.range_hi);
  r.each([&](std::size_t i, const ManifestRecord &rec) {
    ReducedUnitSequence pred{in.reduced[i].units, predict_durations(in.reduced[i], in.emotion[i], dur)};
    const auto frames = expand(pred, cfg.unit_frame_period);
    const auto act = predict_pitch(frames, in.emotion[i], pit, cfg.bins);
    std::vector<double> f0(act.size());
    for (std::size_t t = 0; t < act.size(); ++t) f0[t] = bins_to_f0(act[t], q, in.stats.at(rec.speaker_id));
    io::write_file_atomic(r.path("prosody/" + rec.utterance_id + ".pred.reduced"), format_reduced(pred) + "\n");
    io::write_file_atomic(r.path("prosody/" + rec.utterance_id + ".pred.f0.csv"),
                          format_f0_csv(PitchTrack::from_f0(std::move(f0), cfg.unit_frame_period)));
  });
  return r.finish();
}

inline StageSummary run_synth(StageRunner &r) {
  const auto &cfg = r.cfg_;
  const auto dur = decode_checkpoint(io::read_file(r.path("prosody/duration.ppm")));
  const auto table = UnitEmbeddingTable::from_model(dur);
  SpeakerTable speakers(cfg.speaker_dim);
  SynthConfig sc;
  sc.harmonics = cfg.harmonics;
  r.each([&](std::size_t i, const ManifestRecord &rec) {
    (void)i;
    const auto pred = parse_reduced(single_line(r.path("prosody/" + rec.utterance_id + ".pred.reduced")));
    const auto frames = expand(pred, cfg.unit_frame_period);
    const auto track = parse_f0_csv(io::read_file(r.path("prosody/" + rec.utterance_id + ".pred.f0.csv")));
    const auto emo = utterance_emotion(load_frame_features(r.m_.resolve(rec), cfg.unit_frame_period), cfg);
    speakers.ensure(rec.speaker_id, cfg.model_seed);
    const auto cond = assemble_conditioning(frames, table, track.f0_hz, emo, speakers.lookup(rec.speaker_id));
    io::write_file_atomic(r.path("synth/" + rec.utterance_id + ".cnd"), encode_conditioning(cond));
    auto utt = sc;
    utt.noise_seed = cfg.synth_seed ^ io::fnv1a(rec.utterance_id);
    write_wav(r.path("synth/" + rec.utterance_id + ".wav"), toy_synthesize(cond, cfg.sample_rate, utt));
  });
  return r.finish();
}

inline StageSummary run_eval(StageRunner &r) {
  const auto &cfg = r.cfg_;
  std::string report;
  if (!cfg.hypotheses.empty() || !cfg.references.empty()) {
    if (cfg.hypotheses.empty() || cfg.references.empty())
      fail(Errc::config, "eval needs both eval.hypotheses and eval.references");
    const auto corpus = TokenizedCorpus::from_lines(io::split_lines(io::read_file(cfg.hypotheses)),
                                                    io::split_lines(io::read_file(cfg.references)),
                                                    cfg.lowercase);
    const auto st = bleu_stats(corpus);
    char buf[64];
    std::snprintf(buf, sizeof buf, "BLEU = %.2f", st.score());
    report += std::string(buf) + "\n";
    for (std::size_t k = 1; k <= 4; ++k) report += "precision_" + std::to_string(k) + " = " + fixed6(st.precision(k)) + "\n";
    report += "brevity_penalty = " + fixed6(st.brevity_penalty()) + "\n";
  }

  const std::size_t n = r.m_.size();
  std::vector<FeatureVector> src(n), syn(n);
  const auto tc = tracker_config(cfg);
  r.each([&](std::size_t i, const ManifestRecord &rec) {
    const auto a = read_wav(r.m_.resolve(rec));
    const auto b = read_wav(r.path("synth/" + rec.utterance_id + ".wav"));
    src[i] = extract_features(a, track_f0(a, tc));
    syn[i] = extract_features(b, track_f0(b, tc));
  });

  std::vector<std::pair<std::string, FeatureVector>> src_rows, syn_rows;
  std::vector<std::size_t> ok;
  for (std::size_t i = 0; i < n; ++i)
    if (r.alive(i)) {
      ok.push_back(i);
      src_rows.emplace_back(r.m_.records[i].utterance_id, src[i]);
      syn_rows.emplace_back(r.m_.records[i].utterance_id, syn[i]);
    }
  io::write_file_atomic(r.path("eval/features_source.csv"), format_feature_csv(src_rows));
  io::write_file_atomic(r.path("eval/features_synth.csv"), format_feature_csv(syn_rows));

  std::vector<std::optional<std::string>> labels;
  for (auto i : ok) labels.push_back(r.m_.records[i].emotion_label);
  report += analysis_report(src_rows, syn_rows, labels, cfg.slda_alpha);
  io::write_file_atomic(r.path("eval/report.txt"), report);
  return r.finish();
}

}  // namespace detail

/// Runs one stage over the manifest, writing artifacts and
/// <out_dir>/<stage>_summary.txt. Throws only on whole-stage problems
/// (configuration, missing shared inputs such as the codebook).
inline StageSummary run_pipeline(const PipelineConfig &cfg, const Manifest &manifest, Stage stage,
                                 const std::filesystem::path &out_dir) {
  cfg.validate();
  detail::StageRunner r(cfg, manifest, out_dir, stage);
  switch (stage) {
    case Stage::units: return detail::run_units(r);
    case Stage::prosody: return detail::run_prosody(r);
    case Stage::synth: return detail::run_synth(r);
    case Stage::eval: return detail::run_eval(r);
  }
  fail(Errc::config, "unknown stage");
}

/// Trains one predictor from `work_dir`, which must hold the units stage
/// outputs for `manifest`. Utterances that cannot be used are listed in the
/// returned summary.
inline std::pair<PredictorModel, StageSummary> train_from_corpus(const PipelineConfig &cfg,
                                                                 const Manifest &manifest,
                                                                 const std::filesystem::path &work_dir,
                                                                 PredictorKind kind) {
  cfg.validate();
  detail::StageRunner r(cfg, manifest, work_dir, Stage::prosody);
  const auto in = detail::prepare_prosody(r);
  auto model = detail::train_from_inputs(cfg, in, kind);
  return {std::move(model), r.summary_};
}

}  // namespace unitprosody

#endif  // UNITPROSODY_PIPELINE_HPP_
