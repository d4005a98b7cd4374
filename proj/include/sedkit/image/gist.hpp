#pragma once

#include <complex>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "sedkit/image/gabor.hpp"
#include "sedkit/image/image.hpp"
#include "sedkit/types.hpp"

namespace sedkit {

namespace detail {

// In-place 2D FFT via row-column decomposition.
inline void fft_2d(std::vector<std::complex<double>>& data, int n, bool inverse) {
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> line(n), out(n);
  for (int y = 0; y < n; ++y) {
    auto* row = data.data() + static_cast<std::size_t>(y) * n;
    for (int x = 0; x < n; ++x) line[x] = row[x];
    if (inverse)
      fft.inv(out, line);
    else
      fft.fwd(out, line);
    for (int x = 0; x < n; ++x) row[x] = out[x];
  }
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) line[y] = data[static_cast<std::size_t>(y) * n + x];
    if (inverse)
      fft.inv(out, line);
    else
      fft.fwd(out, line);
    for (int y = 0; y < n; ++y) data[static_cast<std::size_t>(y) * n + x] = out[y];
  }
}

}  // namespace detail

inline bool gist_block_count_supported(int blocks) {
  return blocks == 1 || blocks == 2 || blocks == 4 || blocks == 8 || blocks == 16;
}

/// Oriented spatial-frequency energy aggregated over a blocks x blocks grid:
/// per filter, the mean response magnitude of each non-overlapping block,
/// concatenated filter-major and L2-normalized. Dimension is
/// blocks^2 * filter_count.
inline FeatureVector gist_descriptor(const StandardImage& img, int blocks,
                                     const GaborBank& bank,
                                     std::string name = "gist") {
  if (!gist_block_count_supported(blocks))
    throw ConfigError("unsupported gist block count: " + std::to_string(blocks));
  if (img.size != bank.size)
    throw DataError("gabor bank size does not match image size");
  if (img.size % blocks != 0)
    throw ConfigError("image size must be divisible by the block count");

  const int s = img.size;
  const int block_px = s / blocks;
  const std::size_t n = static_cast<std::size_t>(s) * s;

  std::vector<std::complex<double>> spectrum(n);
  for (std::size_t i = 0; i < n; ++i) spectrum[i] = img.pixels[i];
  detail::fft_2d(spectrum, s, false);

  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(blocks) * blocks * bank.filter_count());
  std::vector<std::complex<double>> response(n);
  for (const auto& filter : bank.filters) {
    for (std::size_t i = 0; i < n; ++i) response[i] = spectrum[i] * static_cast<double>(filter[i]);
    detail::fft_2d(response, s, true);
    for (int by = 0; by < blocks; ++by) {
      for (int bx = 0; bx < blocks; ++bx) {
        double acc = 0.0;
        for (int y = by * block_px; y < (by + 1) * block_px; ++y) {
          for (int x = bx * block_px; x < (bx + 1) * block_px; ++x)
            acc += std::abs(response[static_cast<std::size_t>(y) * s + x]);
        }
        values.push_back(acc / (static_cast<double>(block_px) * block_px));
      }
    }
  }
  FeatureVector v = FeatureVector::dense(std::move(name), std::move(values));
  v.l2_normalize();
  return v;
}

}  // namespace sedkit
