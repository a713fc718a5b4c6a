// tools/unitprosody.cc

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

// Command-line front end. Exit codes: 0 success, 1 processing failure
// (including partial failure of a stage), 2 configuration or usage error,
// 3 I/O or input format error. Every failure prints one line on stderr that
// starts with "E<code> <error name>:".

#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "unitprosody/pipeline.hpp"

namespace fs = std::filesystem;
using namespace unitprosody;

namespace {

std::string read_line_file(const fs::path &p) {
  auto lines = io::split_lines(io::read_file(p));
  return lines.empty() ? std::string() : lines.front();
}

std::vector<std::string> read_lines(const fs::path &p) {
  auto lines = io::split_lines(io::read_file(p));
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::string join_lines(const std::vector<std::string> &lines) {
  std::string out;
  for (const auto &l : lines) out += l + "\n";
  return out;
}

SpeakerPitchStats pick_stats(const fs::path &path, const std::string &speaker) {
  const auto all = parse_speaker_stats_csv(io::read_file(path));
  if (speaker.empty()) {
    require(all.size() == 1, Errc::invalid_argument, "stats file has several speakers; pass --speaker");
    return all.front();
  }
  for (const auto &s : all)
    if (s.speaker_id == speaker) return s;
  fail(Errc::unknown_speaker, "unknown speaker '" + speaker + "'");
}

std::vector<std::pair<std::string, std::string>> parse_label_csv(const std::string &text) {
  std::vector<std::pair<std::string, std::string>> out;
  const auto lines = io::split_lines(text);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto comma = lines[i].find(',');
    if (comma == std::string::npos) fail(Errc::parse, "label file line " + std::to_string(i + 1) + " lacks a comma");
    out.emplace_back(lines[i].substr(0, comma), lines[i].substr(comma + 1));
  }
  return out;
}

struct Globals {
  std::string config;
  std::vector<std::string> overrides;
  PipelineConfig load() const { return load_config(config, overrides); }
};

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"unitprosody: discrete-unit prosody toolkit"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "config file (default: $PROSODY_UNITS_CONFIG)");
  app.add_option("--set", g.overrides, "override, section.key=value (repeatable)");
  std::function<int()> action;

  // ------------------------------------------------------------- units
  auto *units = app.add_subcommand("units", "unit discovery and run-length coding");
  units->require_subcommand(1);

  struct {
    std::vector<std::string> features;
    std::string out;
    std::size_t k = 100;
    int iters = 50;
    std::uint64_t seed = 0;
    double period = 0.020;
  } fit;
  auto *fit_cmd = units->add_subcommand("fit", "k-means codebook from feature files or .wav");
  fit_cmd->add_option("--features", fit.features)->required();
  fit_cmd->add_option("-k,--codebook-size", fit.k);
  fit_cmd->add_option("--iters", fit.iters);
  fit_cmd->add_option("--seed", fit.seed);
  fit_cmd->add_option("--frame-period", fit.period);
  fit_cmd->add_option("-o,--out", fit.out)->required();
  fit_cmd->callback([&] {
    action = [&] {
      std::vector<FrameFeatures> data;
      for (const auto &f : fit.features) data.push_back(load_frame_features(f, fit.period));
      const auto rep = kmeans_fit_report(data, fit.k, fit.iters, fit.seed);
      io::write_file_atomic(fit.out, format_codebook(rep.codebook));
      std::cout << "iterations = " << rep.iterations << "\ninertia = " << fixed6(rep.inertia.back()) << "\n";
      return kExitOk;
    };
  });

  struct {
    std::string codebook, features, out;
    double period = 0.020;
  } quant;
  auto *quant_cmd = units->add_subcommand("quantize", "nearest-centroid unit sequence");
  quant_cmd->add_option("--codebook", quant.codebook)->required();
  quant_cmd->add_option("--features", quant.features)->required();
  quant_cmd->add_option("--frame-period", quant.period);
  quant_cmd->add_option("-o,--out", quant.out)->required();
  quant_cmd->callback([&] {
    action = [&] {
      const auto cb = parse_codebook(io::read_file(quant.codebook));
      const auto seq = quantize(load_frame_features(quant.features, quant.period), cb);
      io::write_file_atomic(quant.out, format_units(seq) + "\n");
      return kExitOk;
    };
  });

  struct {
    std::string in, out;
  } rle;
  auto *reduce_cmd = units->add_subcommand("reduce", "collapse repeats into unit:duration tokens");
  reduce_cmd->add_option("-i,--in", rle.in)->required();
  reduce_cmd->add_option("-o,--out", rle.out)->required();
  reduce_cmd->callback([&] {
    action = [&] {
      std::vector<std::string> out;
      for (const auto &l : read_lines(rle.in)) out.push_back(format_reduced(reduce(parse_units(l))));
      io::write_file_atomic(rle.out, join_lines(out));
      return kExitOk;
    };
  });
  auto *expand_cmd = units->add_subcommand("expand", "inverse of reduce");
  expand_cmd->add_option("-i,--in", rle.in)->required();
  expand_cmd->add_option("-o,--out", rle.out)->required();
  expand_cmd->callback([&] {
    action = [&] {
      std::vector<std::string> out;
      for (const auto &l : read_lines(rle.in)) out.push_back(format_units(expand(parse_reduced(l))));
      io::write_file_atomic(rle.out, join_lines(out));
      return kExitOk;
    };
  });

  // ------------------------------------------------------------- pitch
  auto *pitch = app.add_subcommand("pitch", "F0 tracking, speaker statistics, quantization");
  pitch->require_subcommand(1);

  struct {
    std::string in, out;
    TrackerConfig cfg;
  } trk;
  auto *track_cmd = pitch->add_subcommand("track", "F0 track of a .wav file");
  track_cmd->add_option("-i,--in", trk.in)->required();
  track_cmd->add_option("-o,--out", trk.out)->required();
  track_cmd->add_option("--f-min", trk.cfg.f_min);
  track_cmd->add_option("--f-max", trk.cfg.f_max);
  track_cmd->add_option("--frame-period", trk.cfg.frame_period);
  track_cmd->add_option("--voicing-threshold", trk.cfg.voicing_threshold);
  track_cmd->callback([&] {
    action = [&] {
      io::write_file_atomic(trk.out, format_f0_csv(track_f0(read_wav(trk.in), trk.cfg)));
      return kExitOk;
    };
  });

  struct {
    std::vector<std::string> in;
    std::string speaker, out;
  } st;
  auto *stats_cmd = pitch->add_subcommand("stats", "per-speaker mean and std of voiced F0");
  stats_cmd->add_option("-i,--in", st.in, "F0 CSV files of one speaker")->required();
  stats_cmd->add_option("--speaker", st.speaker)->required();
  stats_cmd->add_option("-o,--out", st.out)->required();
  stats_cmd->callback([&] {
    action = [&] {
      std::vector<PitchTrack> tracks;
      for (const auto &f : st.in) tracks.push_back(parse_f0_csv(io::read_file(f)));
      const std::vector<SpeakerPitchStats> rows{speaker_stats(tracks, st.speaker)};
      io::write_file_atomic(st.out, format_speaker_stats_csv(rows));
      return kExitOk;
    };
  });

  struct {
    std::string in, stats, speaker, out;
    std::size_t bins = 32;
    double lo = -3.0, hi = 3.0;
  } pq;
  auto *pq_cmd = pitch->add_subcommand("quantize", "normalized F0 bin index per frame (-1 unvoiced)");
  pq_cmd->add_option("-i,--in", pq.in)->required();
  pq_cmd->add_option("--stats", pq.stats)->required();
  pq_cmd->add_option("--speaker", pq.speaker);
  pq_cmd->add_option("--bins", pq.bins);
  pq_cmd->add_option("--lo", pq.lo);
  pq_cmd->add_option("--hi", pq.hi);
  pq_cmd->add_option("-o,--out", pq.out)->required();
  pq_cmd->callback([&] {
    action = [&] {
      const auto track = parse_f0_csv(io::read_file(pq.in));
      const auto bins = pitch_targets(track, pick_stats(pq.stats, pq.speaker), PitchQuantizer(pq.bins, pq.lo, pq.hi));
      std::string out = "time_s,bin\n";
      for (std::size_t i = 0; i < bins.size(); ++i) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6f,%d\n", track.time(i), bins[i]);
        out += buf;
      }
      io::write_file_atomic(pq.out, out);
      return kExitOk;
    };
  });

  // ------------------------------------------------------------- train
  auto *train = app.add_subcommand("train", "train a predictor on a manifest after the units stage");
  train->require_subcommand(1);
  struct {
    std::string manifest, work, out;
  } tr;
  for (auto kind : {PredictorKind::duration, PredictorKind::pitch}) {
    auto *cmd = train->add_subcommand(std::string(kind_name(kind)), "train the " + std::string(kind_name(kind)) + " predictor");
    cmd->add_option("--manifest", tr.manifest)->required();
    cmd->add_option("--work", tr.work, "directory holding units/ from the units stage")->required();
    cmd->add_option("-o,--out", tr.out)->required();
    cmd->callback([&, kind] {
      action = [&, kind] {
        auto [model, summary] = train_from_corpus(g.load(), parse_manifest(tr.manifest), tr.work, kind);
        io::write_file_atomic(tr.out, encode_checkpoint(model));
        std::cout << summary.text();
        return summary.exit_code();
      };
    });
  }

  // ------------------------------------------------------------- infer
  struct {
    std::string duration_model, reduced, features, out;
    std::string pitch_model, stats, speaker, f0_out;
    double period = 0.020;
    std::uint64_t emotion_seed = 0;
    double lo = -3.0, hi = 3.0;
  } inf;
  auto *infer = app.add_subcommand("infer", "predict durations (and optionally F0) for a reduced sequence");
  infer->add_option("--duration-model", inf.duration_model)->required();
  infer->add_option("--reduced", inf.reduced)->required();
  infer->add_option("--features", inf.features, "feature file or .wav the emotion embedding is pooled from")->required();
  infer->add_option("-o,--out", inf.out)->required();
  infer->add_option("--pitch-model", inf.pitch_model);
  infer->add_option("--stats", inf.stats);
  infer->add_option("--speaker", inf.speaker);
  infer->add_option("--f0-out", inf.f0_out);
  infer->add_option("--frame-period", inf.period);
  infer->add_option("--emotion-seed", inf.emotion_seed);
  infer->add_option("--lo", inf.lo);
  infer->add_option("--hi", inf.hi);
  infer->callback([&] {
    action = [&] {
      const auto dur = decode_checkpoint(io::read_file(inf.duration_model));
      const auto r = parse_reduced(read_line_file(inf.reduced));
      const auto f = load_frame_features(inf.features, inf.period);
      const auto emo = EmotionEncoder::random(f.dim, inf.emotion_seed).encode(f);
      ReducedUnitSequence pred{r.units, predict_durations(r, emo, dur)};
      io::write_file_atomic(inf.out, format_reduced(pred) + "\n");
      if (!inf.pitch_model.empty()) {
        require(!inf.stats.empty() && !inf.f0_out.empty(), Errc::invalid_argument,
                "--pitch-model needs --stats and --f0-out");
        const auto pit = decode_checkpoint(io::read_file(inf.pitch_model));
        const auto stats = pick_stats(inf.stats, inf.speaker);
        const PitchQuantizer q(pit.arch().out_dim, inf.lo, inf.hi);
        const auto act = predict_pitch(expand(pred, inf.period), emo, pit, q.d());
        std::vector<double> f0;
        for (const auto &a : act) f0.push_back(bins_to_f0(a, q, stats));
        io::write_file_atomic(inf.f0_out, format_f0_csv(PitchTrack::from_f0(std::move(f0), inf.period)));
      }
      return kExitOk;
    };
  });

  // ------------------------------------------------------------- assemble
  struct {
    std::string units, reduced, f0, model, features, speaker, out;
    double period = 0.020;
    std::size_t speaker_dim = 16;
    std::uint64_t seed = 0, emotion_seed = 0;
  } as;
  auto *assemble = app.add_subcommand("assemble", "frame-rate conditioning matrix");
  auto *as_units = assemble->add_option("--units", as.units, "frame-rate unit file");
  auto *as_reduced = assemble->add_option("--reduced", as.reduced, "reduced file, expanded first");
  as_units->excludes(as_reduced);
  assemble->add_option("--f0", as.f0, "F0 CSV, resampled onto the unit frames")->required();
  assemble->add_option("--model", as.model, "checkpoint supplying unit embeddings")->required();
  assemble->add_option("--features", as.features, "emotion source")->required();
  assemble->add_option("--speaker", as.speaker)->required();
  assemble->add_option("--speaker-dim", as.speaker_dim);
  assemble->add_option("--seed", as.seed, "speaker table seed");
  assemble->add_option("--emotion-seed", as.emotion_seed);
  assemble->add_option("--frame-period", as.period);
  assemble->add_option("-o,--out", as.out)->required();
  assemble->callback([&] {
    action = [&] {
      require(!as.units.empty() || !as.reduced.empty(), Errc::invalid_argument, "pass --units or --reduced");
      auto units = as.units.empty() ? expand(parse_reduced(read_line_file(as.reduced)), as.period)
                                    : parse_units(read_line_file(as.units));
      units.frame_period = as.period;
      const auto track = parse_f0_csv(io::read_file(as.f0));
      std::vector<double> f0 = track.f0_hz;
      if (std::abs(track.frame_period - as.period) > 1e-9)
        f0 = align_track(track, units.units.size(), as.period).f0_hz;
      const auto f = load_frame_features(as.features, as.period);
      const auto emo = EmotionEncoder::random(f.dim, as.emotion_seed).encode(f);
      SpeakerTable speakers(as.speaker_dim);
      speakers.ensure(as.speaker, as.seed);
      const auto table = UnitEmbeddingTable::from_model(decode_checkpoint(io::read_file(as.model)));
      io::write_file_atomic(as.out, encode_conditioning(assemble_conditioning(units, table, f0, emo,
                                                                              speakers.lookup(as.speaker))));
      return kExitOk;
    };
  });

  // ------------------------------------------------------------- synth
  struct {
    std::string in, out;
    int sample_rate = 16000;
    SynthConfig cfg;
  } sy;
  auto *synth = app.add_subcommand("synth", "render a conditioning matrix with the harmonic synthesizer");
  synth->add_option("-i,--in", sy.in)->required();
  synth->add_option("-o,--out", sy.out)->required();
  synth->add_option("--sample-rate", sy.sample_rate);
  synth->add_option("--harmonics", sy.cfg.harmonics);
  synth->add_option("--seed", sy.cfg.noise_seed);
  synth->callback([&] {
    action = [&] {
      write_wav(sy.out, toy_synthesize(decode_conditioning(io::read_file(sy.in)), sy.sample_rate, sy.cfg));
      return kExitOk;
    };
  });

  // ------------------------------------------------------------- eval
  auto *eval = app.add_subcommand("eval", "evaluation and analysis");
  eval->require_subcommand(1);

  struct {
    std::string hyp, ref;
    bool lowercase = false;
  } bl;
  auto *bleu_cmd = eval->add_subcommand("bleu", "corpus BLEU of parallel hypothesis/reference files");
  bleu_cmd->add_option("--hyp", bl.hyp)->required();
  bleu_cmd->add_option("--ref", bl.ref)->required();
  bleu_cmd->add_flag("--lowercase", bl.lowercase);
  bleu_cmd->callback([&] {
    action = [&] {
      const auto s = bleu_stats(TokenizedCorpus::from_lines(read_lines(bl.hyp), read_lines(bl.ref), bl.lowercase));
      char buf[64];
      std::snprintf(buf, sizeof buf, "BLEU = %.2f", s.score());
      std::cout << buf << "\n";
      for (std::size_t n = 1; n <= 4; ++n) std::cout << "precision_" << n << " = " << fixed6(s.precision(n)) << "\n";
      std::cout << "brevity_penalty = " << fixed6(s.brevity_penalty()) << "\n";
      return kExitOk;
    };
  });

  struct {
    std::vector<std::string> in;
    std::string out;
    TrackerConfig tracker;
  } fe;
  auto *feat_cmd = eval->add_subcommand("features", "six acoustic features per .wav (id = file stem)");
  feat_cmd->add_option("-i,--in", fe.in)->required();
  feat_cmd->add_option("-o,--out", fe.out)->required();
  feat_cmd->callback([&] {
    action = [&] {
      std::vector<std::pair<std::string, FeatureVector>> rows;
      for (const auto &p : fe.in) {
        const auto w = read_wav(p);
        rows.emplace_back(fs::path(p).stem().string(), extract_features(w, track_f0(w, fe.tracker)));
      }
      io::write_file_atomic(fe.out, format_feature_csv(rows));
      return kExitOk;
    };
  });

  struct {
    std::string features, labels, source, target, out;
    double alpha = 0.01;
  } an;
  auto *slda_cmd = eval->add_subcommand("slda", "forward stepwise discriminant selection");
  slda_cmd->add_option("--features", an.features)->required();
  slda_cmd->add_option("--labels", an.labels, "CSV utterance_id,label")->required();
  slda_cmd->add_option("--alpha", an.alpha);
  slda_cmd->callback([&] {
    action = [&] {
      const auto rows = parse_feature_csv(io::read_file(an.features));
      std::map<std::string, std::string> label_of;
      for (auto &[id, lab] : parse_label_csv(io::read_file(an.labels))) label_of[id] = lab;
      std::map<std::string, int> index;
      Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), kNumAcousticFeatures);
      std::vector<int> y;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        auto it = label_of.find(rows[i].first);
        if (it == label_of.end()) fail(Errc::unaligned, "unaligned streams: no label for " + rows[i].first);
        y.push_back(index.emplace(it->second, static_cast<int>(index.size())).first->second);
        for (std::size_t c = 0; c < kNumAcousticFeatures; ++c)
          x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i].second[c];
      }
      const auto res = forward_slda(x, y, an.alpha);
      for (const auto &s : res.steps)
        std::cout << "step " << feature_names()[s.feature] << " lambda = " << fixed6(s.wilks_lambda)
                  << " F = " << fixed6(s.f_stat) << " p = " << fixed6(s.p_value) << "\n";
      if (res.rejected)
        std::cout << "stop " << feature_names()[res.rejected->feature] << " p = " << fixed6(res.rejected->p_value)
                  << "\n";
      return kExitOk;
    };
  });

  auto *report_cmd = eval->add_subcommand("report", "expressivity report for paired feature tables");
  report_cmd->add_option("--source", an.source)->required();
  report_cmd->add_option("--target", an.target)->required();
  report_cmd->add_option("--labels", an.labels, "CSV utterance_id,label");
  report_cmd->add_option("--alpha", an.alpha);
  report_cmd->add_option("-o,--out", an.out);
  report_cmd->callback([&] {
    action = [&] {
      const auto src = parse_feature_csv(io::read_file(an.source));
      const auto tgt = parse_feature_csv(io::read_file(an.target));
      std::map<std::string, std::string> label_of;
      if (!an.labels.empty())
        for (auto &[id, lab] : parse_label_csv(io::read_file(an.labels))) label_of[id] = lab;
      std::vector<std::optional<std::string>> labels;
      for (const auto &[id, v] : src) {
        auto it = label_of.find(id);
        labels.push_back(it == label_of.end() ? std::nullopt : std::optional<std::string>(it->second));
      }
      const auto text = analysis_report(src, tgt, labels, an.alpha);
      if (an.out.empty()) std::cout << text;
      else io::write_file_atomic(an.out, text);
      return kExitOk;
    };
  });

  // ------------------------------------------------------------- run
  struct {
    std::string stage, manifest, out;
  } rn;
  auto *run = app.add_subcommand("run", "run pipeline stages over a manifest");
  run->add_option("--stage", rn.stage, "units, prosody, synth, eval or all")->required();
  run->add_option("--manifest", rn.manifest)->required();
  run->add_option("--out", rn.out, "output directory")->required();
  run->callback([&] {
    action = [&] {
      const auto cfg = g.load();
      const auto manifest = parse_manifest(rn.manifest);
      std::vector<Stage> stages;
      if (rn.stage == "all") stages = {Stage::units, Stage::prosody, Stage::synth, Stage::eval};
      else stages = {parse_stage(rn.stage)};
      int code = kExitOk;
      for (Stage s : stages) {
        const auto summary = run_pipeline(cfg, manifest, s, rn.out);
        std::cout << "[" << stage_name(s) << "]\n" << summary.text();
        code = std::max(code, summary.exit_code());
      }
      return code;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    std::cerr << "E2 usage: " << e.what() << "\n";
    return kExitConfig;
  }
  try {
    return action ? action() : kExitConfig;
  } catch (const Error &e) {
    std::cerr << format_error(e) << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception &e) {
    std::cerr << "E1 internal: " << e.what() << "\n";
    return kExitFailure;
  }
}
