#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "senti/error.hpp"
#include "senti/nn/model.hpp"

namespace senti::nn {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  std::uint64_t t = 0;
  std::array<std::vector<double>, kNumArrays> m;
  std::array<std::vector<double>, kNumArrays> v;

  template <class T>
  static AdamState for_params(const ModelParams<T>& p) {
    AdamState s;
    const auto arrs = p.arrays();
    for (std::size_t a = 0; a < kNumArrays; ++a) {
      s.m[a].assign(arrs[a].size(), 0.0);
      s.v[a].assign(arrs[a].size(), 0.0);
    }
    return s;
  }

  bool operator==(const AdamState&) const = default;
};

// p <- p - lr * mhat / (sqrt(vhat) + eps), bias-corrected.
template <class T>
void adam_step(ModelParams<T>& p, const ModelParams<double>& g, AdamState& st, double lr, const AdamConfig& cfg = {}) {
  auto params = p.arrays();
  const auto grads = g.arrays();
  for (std::size_t a = 0; a < kNumArrays; ++a)
    if (params[a].size() != grads[a].size() || st.m[a].size() != params[a].size() || st.v[a].size() != params[a].size())
      throw InputError(std::string("adam_step: shape mismatch in ") + kArrayNames[a]);
  ++st.t;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(st.t));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(st.t));
  for (std::size_t a = 0; a < kNumArrays; ++a) {
    auto& m = st.m[a];
    auto& v = st.v[a];
    for (std::size_t k = 0; k < params[a].size(); ++k) {
      const double gk = grads[a][k];
      m[k] = cfg.beta1 * m[k] + (1.0 - cfg.beta1) * gk;
      v[k] = cfg.beta2 * v[k] + (1.0 - cfg.beta2) * gk * gk;
      const double step = lr * (m[k] / bc1) / (std::sqrt(v[k] / bc2) + cfg.eps);
      const double updated = static_cast<double>(params[a][k]) - step;
      if (!std::isfinite(updated)) throw NumericError(std::string("non-finite Adam update in ") + kArrayNames[a]);
      params[a][k] = static_cast<T>(updated);
    }
  }
}

}  // namespace senti::nn
