// unitprosody/dsp.hpp

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

#ifndef UNITPROSODY_DSP_HPP_
#define UNITPROSODY_DSP_HPP_

// Small signal-processing kit shared by the tracker, the feature extractors
// and the synthesizer.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "unitprosody/error.hpp"

namespace unitprosody::dsp {

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

/// In-place iterative radix-2 FFT; size must be a power of two.
inline void fft(std::vector<std::complex<double>> &a) {
  const std::size_t n = a.size();
  require(n > 0 && (n & (n - 1)) == 0, Errc::invalid_argument,
          "fft size must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> w = std::polar(1.0, ang * static_cast<double>(k));
        const auto u = a[i + k];
        const auto v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
}

/// Magnitude spectrum (bins 0..n/2) of a real frame zero-padded to `nfft`.
inline std::vector<double> magnitude_spectrum(std::span<const double> frame,
                                              std::size_t nfft) {
  std::vector<std::complex<double>> buf(nfft);
  for (std::size_t i = 0; i < frame.size() && i < nfft; ++i) buf[i] = frame[i];
  fft(buf);
  std::vector<double> mag(nfft / 2 + 1);
  for (std::size_t k = 0; k < mag.size(); ++k) mag[k] = std::abs(buf[k]);
  return mag;
}

// Symmetric Hann window.
inline std::vector<double> hann(std::size_t n) {
  std::vector<double> w(n);
  if (n == 1) {
    w[0] = 1.0;
    return w;
  }
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / static_cast<double>(n - 1));
  return w;
}

inline std::vector<double> hamming(std::size_t n) {
  std::vector<double> w(n);
  if (n == 1) {
    w[0] = 1.0;
    return w;
  }
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * i / static_cast<double>(n - 1));
  return w;
}

/// Extracts `len` samples centred on `center`, zero-padding outside the signal.
inline std::vector<double> centered_frame(std::span<const double> x,
                                          long center, std::size_t len) {
  std::vector<double> f(len, 0.0);
  const long start = center - static_cast<long>(len / 2);
  for (std::size_t i = 0; i < len; ++i) {
    const long j = start + static_cast<long>(i);
    if (j >= 0 && j < static_cast<long>(x.size())) f[i] = x[static_cast<std::size_t>(j)];
  }
  return f;
}

inline double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
inline double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

/// Triangular mel filterbank over `nfft/2+1` power-spectrum bins.
class MelFilterbank {
 public:
  MelFilterbank(std::size_t num_filters, std::size_t nfft, int sample_rate,
                double f_lo = 20.0, double f_hi = -1.0)
      : num_bins_(nfft / 2 + 1), weights_(num_filters) {
    if (f_hi <= 0.0) f_hi = sample_rate / 2.0;
    const double m_lo = hz_to_mel(f_lo), m_hi = hz_to_mel(f_hi);
    std::vector<double> edges(num_filters + 2);
    for (std::size_t i = 0; i < edges.size(); ++i)
      edges[i] = mel_to_hz(m_lo + (m_hi - m_lo) * i / static_cast<double>(num_filters + 1));
    const double bin_hz = static_cast<double>(sample_rate) / nfft;
    for (std::size_t m = 0; m < num_filters; ++m) {
      weights_[m].assign(num_bins_, 0.0);
      for (std::size_t k = 0; k < num_bins_; ++k) {
        const double f = k * bin_hz;
        double w = 0.0;
        if (f > edges[m] && f <= edges[m + 1])
          w = (f - edges[m]) / (edges[m + 1] - edges[m]);
        else if (f > edges[m + 1] && f < edges[m + 2])
          w = (edges[m + 2] - f) / (edges[m + 2] - edges[m + 1]);
        weights_[m][k] = w;
      }
    }
  }

  std::vector<double> apply(std::span<const double> power) const {
    std::vector<double> out(weights_.size(), 0.0);
    for (std::size_t m = 0; m < weights_.size(); ++m)
      for (std::size_t k = 0; k < num_bins_ && k < power.size(); ++k)
        out[m] += weights_[m][k] * power[k];
    return out;
  }

 private:
  std::size_t num_bins_;
  std::vector<std::vector<double>> weights_;
};

/// Orthonormal DCT-II, first `num_out` coefficients.
inline std::vector<double> dct2(std::span<const double> x, std::size_t num_out) {
  const std::size_t n = x.size();
  std::vector<double> out(num_out, 0.0);
  for (std::size_t k = 0; k < num_out; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      s += x[i] * std::cos(std::numbers::pi * k * (i + 0.5) / static_cast<double>(n));
    out[k] = s * std::sqrt((k == 0 ? 1.0 : 2.0) / static_cast<double>(n));
  }
  return out;
}

/// MFCCs of one frame (Hamming window, log mel energies, DCT-II).
class MfccComputer {
 public:
  MfccComputer(int sample_rate, std::size_t frame_len, std::size_t num_ceps = 13,
               std::size_t num_filters = 26)
      : frame_len_(frame_len),
        nfft_(next_pow2(frame_len)),
        num_ceps_(num_ceps),
        window_(hamming(frame_len)),
        bank_(num_filters, nfft_, sample_rate) {}

  std::vector<double> operator()(std::span<const double> frame) const {
    std::vector<double> w(frame_len_, 0.0);
    for (std::size_t i = 0; i < frame_len_ && i < frame.size(); ++i)
      w[i] = frame[i] * window_[i];
    auto mag = magnitude_spectrum(w, nfft_);
    for (auto &m : mag) m = m * m;
    auto mel = bank_.apply(mag);
    for (auto &e : mel) e = std::log(std::max(e, 1e-10));
    return dct2(mel, num_ceps_);
  }

 private:
  std::size_t frame_len_, nfft_, num_ceps_;
  std::vector<double> window_;
  MelFilterbank bank_;
};

/// Autocorrelation-method LPC via Levinson-Durbin. Returns a[0..order] with
/// a[0] = 1, for the predictor polynomial A(z) = sum_k a[k] z^-k.
inline std::vector<double> lpc(std::span<const double> frame, std::size_t order) {
  std::vector<double> r(order + 1, 0.0);
  for (std::size_t lag = 0; lag <= order; ++lag)
    for (std::size_t i = lag; i < frame.size(); ++i) r[lag] += frame[i] * frame[i - lag];
  std::vector<double> a(order + 1, 0.0);
  a[0] = 1.0;
  if (r[0] <= 0.0) return a;
  double err = r[0];
  std::vector<double> prev(order + 1);
  for (std::size_t i = 1; i <= order; ++i) {
    double acc = r[i];
    for (std::size_t j = 1; j < i; ++j) acc += a[j] * r[i - j];
    const double k = -acc / err;
    prev = a;
    for (std::size_t j = 1; j < i; ++j) a[j] = prev[j] + k * prev[i - j];
    a[i] = k;
    err *= (1.0 - k * k);
    if (err <= 0.0) break;
  }
  return a;
}

/// Roots of A(z) expressed in z (i.e. of z^p + a1 z^(p-1) + ... + ap),
/// via the eigenvalues of the companion matrix.
inline std::vector<std::complex<double>> lpc_roots(std::span<const double> a) {
  const std::size_t p = a.size() - 1;
  if (p == 0) return {};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
  for (std::size_t j = 0; j < p; ++j) companion(0, j) = -a[j + 1];
  for (std::size_t i = 1; i < p; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
  std::vector<std::complex<double>> roots(p);
  for (std::size_t i = 0; i < p; ++i) roots[i] = es.eigenvalues()[i];
  return roots;
}

/// Least-squares slope of y against x.
inline double ls_slope(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) return 0.0;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

}  // namespace unitprosody::dsp

#endif  // UNITPROSODY_DSP_HPP_
