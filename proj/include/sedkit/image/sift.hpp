#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <tuple>
#include <vector>

#include "sedkit/image/image.hpp"
#include "sedkit/types.hpp"

namespace sedkit {

struct DescriptorLocation {
  float x = 0.0f;
  float y = 0.0f;
  float scale = 0.0f;
};

/// A set of 128-dimensional gradient-orientation descriptors with their
/// image locations. Every descriptor is unit length or exactly zero (the
/// zero-contrast case).
struct LocalDescriptorSet {
  std::vector<std::array<float, 128>> descriptors;
  std::vector<DescriptorLocation> locations;

  std::size_t size() const { return descriptors.size(); }

  /// Flattens to a row-major matrix, one descriptor per row.
  DataMatrix to_matrix() const {
    DataMatrix m(descriptors.size(), 128);
    for (std::size_t i = 0; i < descriptors.size(); ++i)
      for (int j = 0; j < 128; ++j) m.at(i, j) = descriptors[i][j];
    return m;
  }
};

struct SiftParams {
  int scales_per_octave = 3;
  float sigma0 = 1.6f;           // blur of the first pyramid level
  float assumed_blur = 0.5f;     // blur already present in the input
  float contrast_threshold = 0.03f;  // on interpolated DoG values, [0,1] input
  float edge_ratio = 10.0f;
  int max_octaves = 6;
  float peak_ratio = 0.8f;           // secondary orientation acceptance
  float descriptor_norm_floor = 1e-4f;  // below this the descriptor is zeroed
};

namespace sift_detail {

struct Level {
  int width = 0, height = 0;
  std::vector<float> px;
  float at(int y, int x) const { return px[static_cast<std::size_t>(y) * width + x]; }
  float& at(int y, int x) { return px[static_cast<std::size_t>(y) * width + x]; }
};

inline Level gaussian_blur(const Level& src, float sigma) {
  if (sigma <= 0.0f) return src;
  const int radius = std::max(1, static_cast<int>(std::ceil(4.0f * sigma)));
  std::vector<float> kernel(2 * radius + 1);
  float sum = 0.0f;
  for (int i = -radius; i <= radius; ++i) {
    const float v = std::exp(-0.5f * i * i / (sigma * sigma));
    kernel[i + radius] = v;
    sum += v;
  }
  for (float& v : kernel) v /= sum;

  const int w = src.width, h = src.height;
  auto clamp = [](int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); };
  Level tmp{w, h, std::vector<float>(src.px.size())};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      float acc = 0.0f;
      for (int i = -radius; i <= radius; ++i)
        acc += kernel[i + radius] * src.at(y, clamp(x + i, 0, w - 1));
      tmp.at(y, x) = acc;
    }
  }
  Level out{w, h, std::vector<float>(src.px.size())};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      float acc = 0.0f;
      for (int i = -radius; i <= radius; ++i)
        acc += kernel[i + radius] * tmp.at(clamp(y + i, 0, h - 1), x);
      out.at(y, x) = acc;
    }
  }
  return out;
}

inline Level half_downsample(const Level& src) {
  Level out{src.width / 2, src.height / 2, {}};
  out.px.resize(static_cast<std::size_t>(out.width) * out.height);
  for (int y = 0; y < out.height; ++y)
    for (int x = 0; x < out.width; ++x) out.at(y, x) = src.at(2 * y, 2 * x);
  return out;
}

struct GradientField {
  int width = 0, height = 0;
  std::vector<float> mag, ori;  // orientation in [0, 2*pi)
};

inline GradientField gradients(const Level& img) {
  GradientField g;
  g.width = img.width;
  g.height = img.height;
  g.mag.assign(img.px.size(), 0.0f);
  g.ori.assign(img.px.size(), 0.0f);
  for (int y = 1; y + 1 < img.height; ++y) {
    for (int x = 1; x + 1 < img.width; ++x) {
      const float dx = 0.5f * (img.at(y, x + 1) - img.at(y, x - 1));
      const float dy = 0.5f * (img.at(y + 1, x) - img.at(y - 1, x));
      const std::size_t i = static_cast<std::size_t>(y) * img.width + x;
      g.mag[i] = std::sqrt(dx * dx + dy * dy);
      float o = std::atan2(dy, dx);
      if (o < 0.0f) o += 2.0f * static_cast<float>(M_PI);
      g.ori[i] = o;
    }
  }
  return g;
}

/// Accumulates the 4x4x8 gradient histogram around (cx, cy) with spatial bin
/// width `bin_size`, rotated by `angle`, and writes the normalized 128-d
/// descriptor. Returns false (zero descriptor) when the patch has no
/// contrast.
inline bool accumulate_descriptor(const GradientField& grad, float cx, float cy,
                                  float bin_size, float angle,
                                  float norm_floor,
                                  std::array<float, 128>& out) {
  constexpr int kSpatialBins = 4;
  constexpr int kOrientationBins = 8;
  const float cos_a = std::cos(angle), sin_a = std::sin(angle);
  const float bins_radius = (kSpatialBins + 1.0f) * 0.5f;
  const float radius = bin_size * bins_radius * std::sqrt(2.0f);
  const int x_lo = std::max(1, static_cast<int>(std::floor(cx - radius)));
  const int x_hi = std::min(grad.width - 2, static_cast<int>(std::ceil(cx + radius)));
  const int y_lo = std::max(1, static_cast<int>(std::floor(cy - radius)));
  const int y_hi = std::min(grad.height - 2, static_cast<int>(std::ceil(cy + radius)));

  float hist[kSpatialBins][kSpatialBins][kOrientationBins] = {};
  const float sigma = 0.5f * kSpatialBins;  // in bin units

  for (int y = y_lo; y <= y_hi; ++y) {
    for (int x = x_lo; x <= x_hi; ++x) {
      const float dx = (x - cx) / bin_size;
      const float dy = (y - cy) / bin_size;
      // rotate into the descriptor frame
      const float rx = cos_a * dx + sin_a * dy;
      const float ry = -sin_a * dx + cos_a * dy;
      const float rbin = ry + kSpatialBins / 2.0f - 0.5f;
      const float cbin = rx + kSpatialBins / 2.0f - 0.5f;
      if (rbin <= -1.0f || rbin >= kSpatialBins || cbin <= -1.0f ||
          cbin >= kSpatialBins)
        continue;
      const std::size_t i = static_cast<std::size_t>(y) * grad.width + x;
      const float mag = grad.mag[i];
      if (mag == 0.0f) continue;
      float obin = (grad.ori[i] - angle) * kOrientationBins /
                   (2.0f * static_cast<float>(M_PI));
      while (obin < 0.0f) obin += kOrientationBins;
      while (obin >= kOrientationBins) obin -= kOrientationBins;
      const float weight =
          std::exp(-(rx * rx + ry * ry) / (2.0f * sigma * sigma)) * mag;

      const int r0 = static_cast<int>(std::floor(rbin));
      const int c0 = static_cast<int>(std::floor(cbin));
      const int o0 = static_cast<int>(std::floor(obin));
      const float dr = rbin - r0, dc = cbin - c0, dob = obin - o0;
      for (int ri = 0; ri <= 1; ++ri) {
        const int r = r0 + ri;
        if (r < 0 || r >= kSpatialBins) continue;
        const float wr = weight * (ri ? dr : 1.0f - dr);
        for (int ci = 0; ci <= 1; ++ci) {
          const int c = c0 + ci;
          if (c < 0 || c >= kSpatialBins) continue;
          const float wc = wr * (ci ? dc : 1.0f - dc);
          for (int oi = 0; oi <= 1; ++oi) {
            const int o = (o0 + oi) % kOrientationBins;
            hist[r][c][o] += wc * (oi ? dob : 1.0f - dob);
          }
        }
      }
    }
  }

  int k = 0;
  for (int r = 0; r < kSpatialBins; ++r)
    for (int c = 0; c < kSpatialBins; ++c)
      for (int o = 0; o < kOrientationBins; ++o) out[k++] = hist[r][c][o];

  float norm = 0.0f;
  for (float v : out) norm += v * v;
  norm = std::sqrt(norm);
  if (norm < norm_floor) {
    out.fill(0.0f);
    return false;
  }
  // clamp large components, renormalize
  for (float& v : out) v = std::min(v / norm, 0.2f);
  norm = 0.0f;
  for (float v : out) norm += v * v;
  norm = std::sqrt(norm);
  for (float& v : out) v /= norm;
  return true;
}

}  // namespace sift_detail

/// Keypoint-driven descriptors: difference-of-Gaussians extrema with subpixel
/// localization, per-keypoint orientation assignment, 4x4x8 gradient
/// histograms. A featureless image yields an empty set.
inline LocalDescriptorSet sparse_sift(const StandardImage& img,
                                      const SiftParams& params = {}) {
  using namespace sift_detail;
  LocalDescriptorSet result;
  const int s = params.scales_per_octave;
  const int n_levels = s + 3;

  Level base{img.size, img.size, img.pixels};
  {
    const float delta = std::sqrt(std::max(
        0.0f, params.sigma0 * params.sigma0 - params.assumed_blur * params.assumed_blur));
    base = gaussian_blur(base, delta);
  }

  int octaves = 0;
  for (int sz = img.size; sz >= 16 && octaves < params.max_octaves; sz /= 2)
    ++octaves;

  std::vector<double> level_sigma(n_levels);
  for (int l = 0; l < n_levels; ++l)
    level_sigma[l] = params.sigma0 * std::pow(2.0, static_cast<double>(l) / s);

  // adjacent tied pixels can converge to one subpixel point; collapse them
  std::set<std::tuple<int, long, long, long, long>> emitted;

  Level octave_base = std::move(base);
  for (int o = 0; o < octaves; ++o) {
    // Gaussian stack
    std::vector<Level> gauss(n_levels);
    gauss[0] = octave_base;
    for (int l = 1; l < n_levels; ++l) {
      const double inc = std::sqrt(level_sigma[l] * level_sigma[l] -
                                   level_sigma[l - 1] * level_sigma[l - 1]);
      gauss[l] = gaussian_blur(gauss[l - 1], static_cast<float>(inc));
    }
    std::vector<Level> dog(n_levels - 1);
    for (int l = 0; l + 1 < n_levels; ++l) {
      dog[l] = gauss[l];
      for (std::size_t i = 0; i < dog[l].px.size(); ++i)
        dog[l].px[i] = gauss[l + 1].px[i] - gauss[l].px[i];
    }
    std::vector<GradientField> grads(n_levels);

    const int w = octave_base.width, h = octave_base.height;
    const float prelim = 0.5f * params.contrast_threshold;
    for (int l = 1; l + 1 < static_cast<int>(dog.size()); ++l) {
      for (int y = 1; y + 1 < h; ++y) {
        for (int x = 1; x + 1 < w; ++x) {
          const float v = dog[l].at(y, x);
          if (std::abs(v) < prelim) continue;
          bool is_max = v > 0.0f, is_min = v < 0.0f;
          for (int dl = -1; dl <= 1 && (is_max || is_min); ++dl)
            for (int dy = -1; dy <= 1; ++dy)
              for (int dx = -1; dx <= 1; ++dx) {
                if (dl == 0 && dy == 0 && dx == 0) continue;
                const float nv = dog[l + dl].at(y + dy, x + dx);
                if (nv > v) is_max = false;
                if (nv < v) is_min = false;
              }
          if (!is_max && !is_min) continue;

          // iterative quadratic localization
          int px = x, py = y, pl = l;
          float ox = 0, oy = 0, ol = 0, contrast = 0;
          bool ok = false;
          for (int iter = 0; iter < 5; ++iter) {
            const auto& d0 = dog[pl - 1];
            const auto& d1 = dog[pl];
            const auto& d2 = dog[pl + 1];
            const float gx = 0.5f * (d1.at(py, px + 1) - d1.at(py, px - 1));
            const float gy = 0.5f * (d1.at(py + 1, px) - d1.at(py - 1, px));
            const float gl = 0.5f * (d2.at(py, px) - d0.at(py, px));
            const float hxx = d1.at(py, px + 1) + d1.at(py, px - 1) - 2 * d1.at(py, px);
            const float hyy = d1.at(py + 1, px) + d1.at(py - 1, px) - 2 * d1.at(py, px);
            const float hll = d2.at(py, px) + d0.at(py, px) - 2 * d1.at(py, px);
            const float hxy = 0.25f * (d1.at(py + 1, px + 1) - d1.at(py + 1, px - 1) -
                                       d1.at(py - 1, px + 1) + d1.at(py - 1, px - 1));
            const float hxl = 0.25f * (d2.at(py, px + 1) - d2.at(py, px - 1) -
                                       d0.at(py, px + 1) + d0.at(py, px - 1));
            const float hyl = 0.25f * (d2.at(py + 1, px) - d2.at(py - 1, px) -
                                       d0.at(py + 1, px) + d0.at(py - 1, px));
            // solve H * off = -g (3x3 via adjugate)
            const float det = hxx * (hyy * hll - hyl * hyl) -
                              hxy * (hxy * hll - hyl * hxl) +
                              hxl * (hxy * hyl - hyy * hxl);
            if (std::abs(det) < 1e-20f) break;
            const float inv = 1.0f / det;
            const float a00 = (hyy * hll - hyl * hyl) * inv;
            const float a01 = (hxl * hyl - hxy * hll) * inv;
            const float a02 = (hxy * hyl - hxl * hyy) * inv;
            const float a11 = (hxx * hll - hxl * hxl) * inv;
            const float a12 = (hxy * hxl - hxx * hyl) * inv;
            const float a22 = (hxx * hyy - hxy * hxy) * inv;
            ox = -(a00 * gx + a01 * gy + a02 * gl);
            oy = -(a01 * gx + a11 * gy + a12 * gl);
            ol = -(a02 * gx + a12 * gy + a22 * gl);
            if (std::abs(ox) < 0.6f && std::abs(oy) < 0.6f && std::abs(ol) < 0.6f) {
              contrast = d1.at(py, px) + 0.5f * (gx * ox + gy * oy + gl * ol);
              // edge response on the spatial hessian
              const float tr = hxx + hyy;
              const float det2 = hxx * hyy - hxy * hxy;
              const float r = params.edge_ratio;
              if (det2 > 0 && tr * tr * r < det2 * (r + 1) * (r + 1)) ok = true;
              break;
            }
            px += static_cast<int>(std::lround(ox));
            py += static_cast<int>(std::lround(oy));
            pl += static_cast<int>(std::lround(ol));
            if (px < 1 || px + 1 >= w || py < 1 || py + 1 >= h || pl < 1 ||
                pl + 1 >= static_cast<int>(dog.size()))
              break;
          }
          if (!ok || std::abs(contrast) < params.contrast_threshold) continue;

          const double scale_in_octave =
              params.sigma0 * std::pow(2.0, (pl + ol) / static_cast<double>(s));
          const int grad_level =
              std::clamp(pl, 1, n_levels - 2);
          if (grads[grad_level].width == 0)
            grads[grad_level] = gradients(gauss[grad_level]);
          const auto& grad = grads[grad_level];

          // orientation histogram
          const float kx = px + ox, ky = py + oy;
          constexpr int kOriBins = 36;
          float hist[kOriBins] = {};
          const float sigma_w = 1.5f * static_cast<float>(scale_in_octave);
          const int radius = static_cast<int>(std::lround(3.0f * sigma_w));
          for (int dy = -radius; dy <= radius; ++dy) {
            for (int dx = -radius; dx <= radius; ++dx) {
              const int yy = static_cast<int>(std::lround(ky)) + dy;
              const int xx = static_cast<int>(std::lround(kx)) + dx;
              if (xx < 1 || xx + 1 >= w || yy < 1 || yy + 1 >= h) continue;
              const std::size_t gi = static_cast<std::size_t>(yy) * w + xx;
              if (grad.mag[gi] == 0.0f) continue;
              const float wgt = std::exp(-(dx * dx + dy * dy) /
                                         (2.0f * sigma_w * sigma_w)) *
                                grad.mag[gi];
              int bin = static_cast<int>(
                  std::lround(grad.ori[gi] * kOriBins / (2.0 * M_PI)));
              bin %= kOriBins;
              hist[bin] += wgt;
            }
          }
          for (int pass = 0; pass < 2; ++pass) {
            float smoothed[kOriBins];
            for (int b = 0; b < kOriBins; ++b)
              smoothed[b] = 0.25f * hist[(b + kOriBins - 1) % kOriBins] +
                            0.5f * hist[b] + 0.25f * hist[(b + 1) % kOriBins];
            std::copy(smoothed, smoothed + kOriBins, hist);
          }
          float peak = *std::max_element(hist, hist + kOriBins);
          if (peak <= 0.0f) continue;

          for (int b = 0; b < kOriBins; ++b) {
            const float hl = hist[(b + kOriBins - 1) % kOriBins];
            const float hr = hist[(b + 1) % kOriBins];
            if (hist[b] <= hl || hist[b] <= hr ||
                hist[b] < params.peak_ratio * peak)
              continue;
            const float denom = hl - 2 * hist[b] + hr;
            const float offset = denom != 0.0f ? 0.5f * (hl - hr) / denom : 0.0f;
            float angle = (b + offset) * 2.0f * static_cast<float>(M_PI) / kOriBins;
            if (angle < 0) angle += 2.0f * static_cast<float>(M_PI);

            const auto key = std::make_tuple(
                o, std::lround(kx * 2.0f), std::lround(ky * 2.0f),
                std::lround((pl + ol) * 2.0f),
                std::lround(angle * 18.0f / static_cast<float>(M_PI)));
            if (!emitted.insert(key).second) continue;

            std::array<float, 128> desc;
            const float bin_size = 3.0f * static_cast<float>(scale_in_octave);
            if (!accumulate_descriptor(grad, kx, ky, bin_size, angle,
                                       params.descriptor_norm_floor, desc))
              continue;
            const float octave_scale = static_cast<float>(1 << o);
            result.descriptors.push_back(desc);
            result.locations.push_back(
                {kx * octave_scale, ky * octave_scale,
                 static_cast<float>(scale_in_octave) * octave_scale});
          }
        }
      }
    }
    if (o + 1 < octaves) octave_base = half_downsample(gauss[s]);
  }
  return result;
}

/// Descriptors on a regular grid at a single fixed scale, no detection.
/// Count is exactly floor((S - patch)/step + 1)^2; zero-contrast patches
/// produce the defined zero descriptor so the grid stays complete.
inline LocalDescriptorSet dense_sift(const StandardImage& img, int step,
                                     int patch,
                                     const SiftParams& params = {}) {
  using namespace sift_detail;
  if (step < 1) throw ConfigError("dense sampling step must be >= 1");
  if (patch > img.size)
    throw ConfigError("dense patch size exceeds the image size");
  if (patch < 4) throw ConfigError("dense patch size must be >= 4");

  Level base{img.size, img.size, img.pixels};
  GradientField grad = gradients(base);

  LocalDescriptorSet result;
  const int positions = (img.size - patch) / step + 1;
  result.descriptors.reserve(static_cast<std::size_t>(positions) * positions);
  const float bin_size = patch / 4.0f;
  for (int gy = 0; gy < positions; ++gy) {
    for (int gx = 0; gx < positions; ++gx) {
      const float cx = gx * step + (patch - 1) / 2.0f;
      const float cy = gy * step + (patch - 1) / 2.0f;
      std::array<float, 128> desc;
      accumulate_descriptor(grad, cx, cy, bin_size, 0.0f,
                            params.descriptor_norm_floor, desc);
      result.descriptors.push_back(desc);
      result.locations.push_back({cx, cy, static_cast<float>(patch)});
    }
  }
  return result;
}

}  // namespace sedkit
