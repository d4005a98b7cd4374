#pragma once

#include <cmath>
#include <numeric>
#include <vector>

#include "sedkit/types.hpp"

namespace sedkit {

/// Bank of oriented band-pass filters defined directly in the frequency
/// domain (log-Gabor radial profile, Gaussian angular profile). Transfer
/// functions are real and pi-periodic in orientation, so filtering a real
/// image keeps the spectrum conjugate-symmetric. The DC bin is zero: flat
/// images produce no response.
struct GaborBank {
  int size = 0;                           // spatial resolution S
  std::vector<int> orientations_per_scale;
  std::vector<std::vector<float>> filters;  // each size*size, FFT index layout

  int filter_count() const { return static_cast<int>(filters.size()); }
  int scales() const { return static_cast<int>(orientations_per_scale.size()); }
};

struct GaborBankParams {
  std::vector<int> orientations_per_scale = {16, 16, 16, 16};
  double max_frequency = 0.35;       // cycles/pixel of the finest scale
  double scale_step = 2.0;           // frequency ratio between scales
  double radial_sigma_ratio = 0.65;  // log-Gabor sigma_f / f0
  double angular_sigma_factor = 0.6; // sigma_theta = factor * pi / orientations
};

inline GaborBank make_gabor_bank(int size,
                                 const GaborBankParams& params = {}) {
  if (size < 2) throw ConfigError("gabor bank needs size >= 2");
  GaborBank bank;
  bank.size = size;
  bank.orientations_per_scale = params.orientations_per_scale;

  const double log_sigma = std::log(params.radial_sigma_ratio);
  const double radial_denom = 2.0 * log_sigma * log_sigma;

  for (int s = 0; s < bank.scales(); ++s) {
    const double f0 = params.max_frequency / std::pow(params.scale_step, s);
    const int n_orient = params.orientations_per_scale[s];
    const double sigma_theta = params.angular_sigma_factor * M_PI / n_orient;
    for (int o = 0; o < n_orient; ++o) {
      const double theta0 = M_PI * o / n_orient;
      std::vector<float> filter(static_cast<std::size_t>(size) * size, 0.0f);
      for (int ky = 0; ky < size; ++ky) {
        const double fy = (ky <= size / 2 ? ky : ky - size) / static_cast<double>(size);
        for (int kx = 0; kx < size; ++kx) {
          const double fx =
              (kx <= size / 2 ? kx : kx - size) / static_cast<double>(size);
          const double fr = std::sqrt(fx * fx + fy * fy);
          if (fr == 0.0) continue;  // no DC response
          const double lr = std::log(fr / f0);
          const double radial = std::exp(-lr * lr / radial_denom);
          // orientation distance folded to [-pi/2, pi/2): the filter covers
          // both symmetric lobes of the spectrum
          double dt = std::atan2(fy, fx) - theta0;
          while (dt >= M_PI / 2) dt -= M_PI;
          while (dt < -M_PI / 2) dt += M_PI;
          const double angular =
              std::exp(-dt * dt / (2.0 * sigma_theta * sigma_theta));
          filter[static_cast<std::size_t>(ky) * size + kx] =
              static_cast<float>(radial * angular);
        }
      }
      bank.filters.push_back(std::move(filter));
    }
  }
  return bank;
}

/// The 64-filter default: 4 scales of 16 orientations.
inline GaborBank make_default_gabor_bank(int size) {
  return make_gabor_bank(size, GaborBankParams{});
}

}  // namespace sedkit
