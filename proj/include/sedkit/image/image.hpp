#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "sedkit/types.hpp"

namespace sedkit {

/// Square grayscale image with intensities in [0, 1]; the working format for
/// all visual descriptors. One experiment uses a single fixed size.
struct StandardImage {
  std::string source_id;
  int size = 0;
  std::vector<float> pixels;  // row-major, size*size

  float at(int y, int x) const { return pixels[static_cast<std::size_t>(y) * size + x]; }
  float& at(int y, int x) { return pixels[static_cast<std::size_t>(y) * size + x]; }
};

inline constexpr int kDefaultImageSize = 256;

namespace detail {

inline StandardImage standardize_mat(cv::Mat gray, int size,
                                     const std::string& source_id) {
  if (gray.empty())
    throw DataError("cannot decode image for record: " + source_id);
  cv::Mat resized;
  if (gray.rows == size && gray.cols == size) {
    resized = gray;
  } else {
    // aspect-distorting resize to the fixed square working size
    cv::resize(gray, resized, cv::Size(size, size), 0, 0, cv::INTER_AREA);
  }
  StandardImage out;
  out.source_id = source_id;
  out.size = size;
  out.pixels.resize(static_cast<std::size_t>(size) * size);
  for (int y = 0; y < size; ++y) {
    const uchar* row = resized.ptr<uchar>(y);
    for (int x = 0; x < size; ++x)
      out.pixels[static_cast<std::size_t>(y) * size + x] = row[x] / 255.0f;
  }
  return out;
}

}  // namespace detail

inline StandardImage standardize_image(const std::filesystem::path& path,
                                       int size, const std::string& source_id) {
  cv::Mat gray = cv::imread(path.string(), cv::IMREAD_GRAYSCALE);
  if (gray.empty())
    throw DataError("cannot decode image '" + path.string() +
                    "' for record: " + source_id);
  return detail::standardize_mat(std::move(gray), size, source_id);
}

inline StandardImage standardize_image(const std::vector<std::uint8_t>& bytes,
                                       int size, const std::string& source_id) {
  cv::Mat gray = cv::imdecode(cv::Mat(1, static_cast<int>(bytes.size()), CV_8UC1,
                                      const_cast<std::uint8_t*>(bytes.data())),
                              cv::IMREAD_GRAYSCALE);
  return detail::standardize_mat(std::move(gray), size, source_id);
}

inline void write_image_png(const StandardImage& img,
                            const std::filesystem::path& path) {
  cv::Mat m(img.size, img.size, CV_8UC1);
  for (int y = 0; y < img.size; ++y) {
    uchar* row = m.ptr<uchar>(y);
    for (int x = 0; x < img.size; ++x) {
      float v = img.at(y, x);
      v = v < 0.0f ? 0.0f : (v > 1.0f ? 1.0f : v);
      row[x] = static_cast<uchar>(v * 255.0f + 0.5f);
    }
  }
  if (!cv::imwrite(path.string(), m))
    throw DataError("cannot write image: " + path.string());
}

}  // namespace sedkit
