// Copyright 2026 The hetspec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Thin FFTW wrapper. Plans are cached per (size, direction) and created under a
// lock; execution uses the new-array interface, which FFTW guarantees to be
// thread-safe. FFTW_UNALIGNED keeps the chosen codelets independent of buffer
// alignment so the same input always yields bit-identical output.

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "hetspec/errors.hpp"

namespace hetspec {

using cvec = std::vector<std::complex<double>>;

namespace detail {

class FftPlanCache {
 public:
  static FftPlanCache& instance() {
    static FftPlanCache cache;
    return cache;
  }

  fftw_plan get(std::size_t n, int sign) {
    std::lock_guard lock(mu_);
    auto key = std::make_pair(n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    cvec scratch(n);
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), p, p, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw domain_error("FFTW could not create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

  FftPlanCache(const FftPlanCache&) = delete;
  FftPlanCache& operator=(const FftPlanCache&) = delete;

 private:
  FftPlanCache() = default;
  ~FftPlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  std::mutex mu_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

inline void execute(cvec& data, int sign) {
  if (data.empty()) return;
  fftw_plan plan = FftPlanCache::instance().get(data.size(), sign);
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, p, p);
}

}  // namespace detail

/// In-place forward DFT, X_k = Σ x_n e^{-2πikn/N} (unnormalized).
inline void fft_forward(cvec& data) { detail::execute(data, FFTW_FORWARD); }

/// In-place inverse DFT, x_n = Σ X_k e^{+2πikn/N} (unnormalized).
inline void fft_inverse(cvec& data) { detail::execute(data, FFTW_BACKWARD); }

/// Frequency of DFT bin k for a length-n transform at `sample_rate`, mapped
/// to [-fs/2, fs/2).
inline double bin_frequency(std::size_t k, std::size_t n, double sample_rate) {
  const double df = sample_rate / static_cast<double>(n);
  const auto half = n / 2;
  return k < (n - half) ? static_cast<double>(k) * df
                        : -static_cast<double>(n - k) * df;
}

}  // namespace hetspec
