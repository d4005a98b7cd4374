#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "sedkit/io/binary.hpp"
#include "sedkit/parallel.hpp"
#include "sedkit/random.hpp"
#include "sedkit/types.hpp"

namespace sedkit {

struct Codebook {
  std::uint32_t k = 0;
  std::uint32_t dim = 0;
  std::uint64_t seed = 0;
  std::string training_sample_spec;
  std::vector<double> centroids;  // k x dim row-major

  const double* centroid(std::uint32_t c) const {
    return centroids.data() + static_cast<std::size_t>(c) * dim;
  }
};

struct KMeansOptions {
  std::uint32_t max_iter = 100;
  double tol = 1e-6;      // max centroid shift (L2) to declare convergence
  std::uint32_t restarts = 1;
  unsigned workers = 1;
};

struct KMeansResult {
  Codebook codebook;
  std::vector<std::uint32_t> assignments;
  double inertia = 0.0;
  std::uint32_t iterations = 0;
  std::vector<double> inertia_history;  // one entry per assignment pass
};

namespace detail {

inline std::uint32_t nearest_centroid(const double* x, const Codebook& cb,
                                      double* best_dist = nullptr) {
  std::uint32_t best = 0;
  double bd = std::numeric_limits<double>::infinity();
  for (std::uint32_t c = 0; c < cb.k; ++c) {
    const double d = squared_distance(x, cb.centroid(c), cb.dim);
    if (d < bd) {  // ties keep the lowest index
      bd = d;
      best = c;
    }
  }
  if (best_dist) *best_dist = bd;
  return best;
}

inline KMeansResult lloyd_single(const DataMatrix& sample, std::uint32_t k,
                                 Rng rng, const KMeansOptions& opt) {
  const std::size_t n = sample.rows;
  const std::uint32_t dim = static_cast<std::uint32_t>(sample.cols);

  KMeansResult res;
  Codebook& cb = res.codebook;
  cb.k = k;
  cb.dim = dim;
  cb.centroids.assign(static_cast<std::size_t>(k) * dim, 0.0);

  // k-means++ seeding
  {
    std::vector<double> min_dist(n, std::numeric_limits<double>::infinity());
    const std::size_t first = rng.uniform_index(n);
    std::copy_n(sample.row(first), dim, cb.centroids.begin());
    for (std::uint32_t c = 1; c < k; ++c) {
      const double* prev = cb.centroid(c - 1);
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        min_dist[i] =
            std::min(min_dist[i], squared_distance(sample.row(i), prev, dim));
        total += min_dist[i];
      }
      std::size_t pick = 0;
      if (total > 0.0) {
        double u = rng.uniform() * total, acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          acc += min_dist[i];
          if (u < acc) {
            pick = i;
            break;
          }
          pick = i;
        }
      } else {
        pick = rng.uniform_index(n);
      }
      std::copy_n(sample.row(pick), dim, cb.centroids.begin() +
                                             static_cast<std::size_t>(c) * dim);
    }
  }

  res.assignments.assign(n, 0);
  std::vector<double> dists(n, 0.0);
  double prev_inertia = std::numeric_limits<double>::infinity();

  for (std::uint32_t iter = 0; iter < opt.max_iter; ++iter) {
    // assignment; per-point results are independent, reduction is sequential
    parallel_for(n, opt.workers, [&](std::size_t i) {
      res.assignments[i] = nearest_centroid(sample.row(i), cb, &dists[i]);
    });
    std::vector<std::uint64_t> counts(k, 0);
    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      ++counts[res.assignments[i]];
      inertia += dists[i];
    }

    // empty clusters are re-seeded to the point farthest from its centroid
    for (std::uint32_t c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[res.assignments[i]] > 1 && dists[i] > far_d) {
          far_d = dists[i];
          far = i;
        }
      }
      if (far_d < 0.0) continue;
      std::copy_n(sample.row(far), dim,
                  cb.centroids.begin() + static_cast<std::size_t>(c) * dim);
      --counts[res.assignments[far]];
      inertia -= dists[far];
      res.assignments[far] = c;
      dists[far] = 0.0;
      ++counts[c];
    }

    res.inertia_history.push_back(inertia);
    if (inertia > prev_inertia + 1e-9 * std::max(1.0, prev_inertia))
      throw std::logic_error("k-means inertia increased between sweeps");
    prev_inertia = inertia;
    res.inertia = inertia;
    res.iterations = iter + 1;

    // update step
    std::vector<double> next(static_cast<std::size_t>(k) * dim, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double* x = sample.row(i);
      double* target = next.data() +
                       static_cast<std::size_t>(res.assignments[i]) * dim;
      for (std::uint32_t j = 0; j < dim; ++j) target[j] += x[j];
    }
    double shift = 0.0;
    for (std::uint32_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      double* target = next.data() + static_cast<std::size_t>(c) * dim;
      double d = 0.0;
      for (std::uint32_t j = 0; j < dim; ++j) {
        target[j] /= static_cast<double>(counts[c]);
        const double delta = target[j] - cb.centroids[static_cast<std::size_t>(c) * dim + j];
        d += delta * delta;
      }
      shift = std::max(shift, std::sqrt(d));
    }
    for (std::uint32_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      std::copy_n(next.data() + static_cast<std::size_t>(c) * dim, dim,
                  cb.centroids.begin() + static_cast<std::size_t>(c) * dim);
    }
    if (shift < opt.tol) break;
  }

  // final assignment so inertia matches the returned centroids
  parallel_for(n, opt.workers, [&](std::size_t i) {
    res.assignments[i] = nearest_centroid(sample.row(i), cb, &dists[i]);
  });
  double inertia = 0.0;
  for (std::size_t i = 0; i < n; ++i) inertia += dists[i];
  res.inertia_history.push_back(inertia);
  if (inertia > prev_inertia + 1e-9 * std::max(1.0, prev_inertia))
    throw std::logic_error("k-means inertia increased between sweeps");
  res.inertia = inertia;
  return res;
}

}  // namespace detail

/// Lloyd iterations from k-means++ seeding; squared Euclidean distance.
/// Deterministic given the seed; restarts keep the lowest final inertia.
inline KMeansResult kmeans_codebook(const DataMatrix& sample, std::uint32_t k,
                                    std::uint64_t seed,
                                    const KMeansOptions& opt = {}) {
  if (k < 1) throw ConfigError("codebook size must be >= 1");
  if (sample.rows < k)
    throw DataError("k-means sample smaller than requested codebook: " +
                    std::to_string(sample.rows) + " < " + std::to_string(k));
  if (!sample.all_finite()) throw DataError("k-means sample contains non-finite values");

  Rng root(seed);
  KMeansResult best;
  bool have = false;
  const std::uint32_t restarts = std::max<std::uint32_t>(1, opt.restarts);
  for (std::uint32_t r = 0; r < restarts; ++r) {
    KMeansResult res = detail::lloyd_single(sample, k, root.fork(r), opt);
    if (!have || res.inertia < best.inertia) {
      best = std::move(res);
      have = true;
    }
  }
  best.codebook.seed = seed;
  return best;
}

inline constexpr std::uint32_t kCodebookFormatVersion = 1;

inline void save_codebook(const Codebook& cb, const std::filesystem::path& path) {
  BinaryWriter w(path);
  w.magic("SEDC", kCodebookFormatVersion);
  w.u32(cb.k);
  w.u32(cb.dim);
  w.u64(cb.seed);
  w.str(cb.training_sample_spec);
  w.vec_f64(cb.centroids);
  w.close();
}

inline Codebook load_codebook(const std::filesystem::path& path) {
  BinaryReader r(path);
  if (r.magic("SEDC") != kCodebookFormatVersion)
    throw DataError("unsupported codebook version in " + path.string());
  Codebook cb;
  cb.k = r.u32();
  cb.dim = r.u32();
  cb.seed = r.u64();
  cb.training_sample_spec = r.str();
  cb.centroids = r.vec_f64();
  if (cb.centroids.size() != static_cast<std::size_t>(cb.k) * cb.dim)
    throw DataError("codebook centroid size mismatch in " + path.string());
  return cb;
}

}  // namespace sedkit
