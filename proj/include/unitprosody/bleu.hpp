// unitprosody/bleu.hpp

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

#ifndef UNITPROSODY_BLEU_HPP_
#define UNITPROSODY_BLEU_HPP_

// Corpus-level BLEU: n-gram matches and totals are summed over segments
// before any ratio is taken.

#include <cctype>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "unitprosody/error.hpp"
#include "unitprosody/io.hpp"

namespace unitprosody {

using Tokens = std::vector<std::string>;

/// Splits ASCII punctuation into separate tokens, then splits on whitespace.
inline Tokens tokenize(const std::string &line, bool lowercase = false) {
  Tokens out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) out.push_back(std::move(cur));
    cur.clear();
  };
  for (char ch : line) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      flush();
    } else if (c < 128 && std::ispunct(c)) {
      flush();
      out.emplace_back(1, ch);
    } else {
      cur += (lowercase && c < 128) ? static_cast<char>(std::tolower(c)) : ch;
    }
  }
  flush();
  return out;
}

struct TokenizedCorpus {
  std::vector<Tokens> hypotheses;
  std::vector<Tokens> references;

  static TokenizedCorpus from_lines(const std::vector<std::string> &hyp,
                                    const std::vector<std::string> &ref, bool lowercase = false) {
    require(hyp.size() == ref.size(), Errc::dimension_mismatch,
            "hypothesis and reference files differ in line count (" + std::to_string(hyp.size()) +
                " vs " + std::to_string(ref.size()) + ")");
    TokenizedCorpus c;
    for (const auto &h : hyp) c.hypotheses.push_back(tokenize(h, lowercase));
    for (const auto &r : ref) c.references.push_back(tokenize(r, lowercase));
    return c;
  }
};

struct BleuStats {
  std::vector<std::size_t> matches;  // clipped, per order 1..max_n
  std::vector<std::size_t> totals;
  std::size_t hyp_len = 0;
  std::size_t ref_len = 0;

  double precision(std::size_t n) const {
    return totals[n - 1] ? static_cast<double>(matches[n - 1]) / static_cast<double>(totals[n - 1]) : 0.0;
  }
  double brevity_penalty() const {
    if (hyp_len == 0) return 0.0;
    return std::exp(std::min(0.0, 1.0 - static_cast<double>(ref_len) / static_cast<double>(hyp_len)));
  }
  /// 100 * BP * geometric mean of the precisions; 0 if any precision is 0.
  double score() const {
    double log_sum = 0.0;
    for (std::size_t n = 1; n <= matches.size(); ++n) {
      const double p = precision(n);
      if (p <= 0.0) return 0.0;
      log_sum += std::log(p);
    }
    return 100.0 * brevity_penalty() * std::exp(log_sum / static_cast<double>(matches.size()));
  }
};

inline BleuStats bleu_stats(const TokenizedCorpus &c, std::size_t max_n = 4) {
  require(!c.hypotheses.empty(), Errc::invalid_argument, "BLEU needs a non-empty corpus");
  require(c.hypotheses.size() == c.references.size(), Errc::dimension_mismatch,
          "hypotheses and references differ in count");
  require(max_n >= 1, Errc::invalid_argument, "BLEU max order must be >= 1");
  BleuStats s;
  s.matches.assign(max_n, 0);
  s.totals.assign(max_n, 0);
  for (std::size_t seg = 0; seg < c.hypotheses.size(); ++seg) {
    const auto &hyp = c.hypotheses[seg];
    const auto &ref = c.references[seg];
    s.hyp_len += hyp.size();
    s.ref_len += ref.size();
    for (std::size_t n = 1; n <= max_n; ++n) {
      std::map<Tokens, std::size_t> ref_counts, hyp_counts;
      for (std::size_t i = 0; i + n <= ref.size(); ++i)
        ++ref_counts[Tokens(ref.begin() + static_cast<long>(i), ref.begin() + static_cast<long>(i + n))];
      for (std::size_t i = 0; i + n <= hyp.size(); ++i)
        ++hyp_counts[Tokens(hyp.begin() + static_cast<long>(i), hyp.begin() + static_cast<long>(i + n))];
      for (const auto &[gram, count] : hyp_counts) {
        auto it = ref_counts.find(gram);
        if (it != ref_counts.end()) s.matches[n - 1] += std::min(count, it->second);
        s.totals[n - 1] += count;
      }
    }
  }
  return s;
}

inline double bleu(const TokenizedCorpus &c, std::size_t max_n = 4) {
  return bleu_stats(c, max_n).score();
}

}  // namespace unitprosody

#endif  // UNITPROSODY_BLEU_HPP_
