#pragma once

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "sedkit/types.hpp"

namespace sedkit {

/// Little-endian binary writer for model and cache files.
class BinaryWriter {
 public:
  explicit BinaryWriter(const std::filesystem::path& path)
      : path_(path.string()), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw DataError("cannot open for writing: " + path_);
  }

  void magic(const char tag[4], std::uint32_t version) {
    out_.write(tag, 4);
    u32(version);
  }

  void u8(std::uint8_t v) { raw(&v, 1); }
  void u32(std::uint32_t v) { raw(&v, sizeof v); }
  void u64(std::uint64_t v) { raw(&v, sizeof v); }
  void i64(std::int64_t v) { raw(&v, sizeof v); }
  void f64(double v) { raw(&v, sizeof v); }

  void str(const std::string& s) {
    u64(s.size());
    raw(s.data(), s.size());
  }

  void vec_f64(const std::vector<double>& v) {
    u64(v.size());
    raw(v.data(), v.size() * sizeof(double));
  }

  void vec_f32(const std::vector<float>& v) {
    u64(v.size());
    raw(v.data(), v.size() * sizeof(float));
  }

  void vec_u32(const std::vector<std::uint32_t>& v) {
    u64(v.size());
    raw(v.data(), v.size() * sizeof(std::uint32_t));
  }

  void close() {
    out_.close();
    if (!out_) throw DataError("write failed: " + path_);
  }

 private:
  void raw(const void* p, std::size_t n) {
    out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
    if (!out_) throw DataError("write failed: " + path_);
  }

  std::string path_;
  std::ofstream out_;
};

class BinaryReader {
 public:
  explicit BinaryReader(const std::filesystem::path& path)
      : path_(path.string()), in_(path, std::ios::binary) {
    if (!in_) throw DataError("cannot open for reading: " + path_);
  }

  /// Checks the 4-byte tag and returns the stored version.
  std::uint32_t magic(const char tag[4]) {
    char got[4];
    raw(got, 4);
    if (std::memcmp(got, tag, 4) != 0)
      throw DataError("bad file magic in " + path_);
    return u32();
  }

  std::uint8_t u8() { std::uint8_t v; raw(&v, 1); return v; }
  std::uint32_t u32() { std::uint32_t v; raw(&v, sizeof v); return v; }
  std::uint64_t u64() { std::uint64_t v; raw(&v, sizeof v); return v; }
  std::int64_t i64() { std::int64_t v; raw(&v, sizeof v); return v; }
  double f64() { double v; raw(&v, sizeof v); return v; }

  std::string str() {
    std::string s(checked_count(u64(), 1), '\0');
    raw(s.data(), s.size());
    return s;
  }

  std::vector<double> vec_f64() {
    std::vector<double> v(checked_count(u64(), sizeof(double)));
    raw(v.data(), v.size() * sizeof(double));
    return v;
  }

  std::vector<float> vec_f32() {
    std::vector<float> v(checked_count(u64(), sizeof(float)));
    raw(v.data(), v.size() * sizeof(float));
    return v;
  }

  std::vector<std::uint32_t> vec_u32() {
    std::vector<std::uint32_t> v(checked_count(u64(), sizeof(std::uint32_t)));
    raw(v.data(), v.size() * sizeof(std::uint32_t));
    return v;
  }

 private:
  std::size_t checked_count(std::uint64_t n, std::size_t elem) {
    // guards against corrupt counts blowing up allocation
    if (n > (1ULL << 40) / elem) throw DataError("corrupt length in " + path_);
    return static_cast<std::size_t>(n);
  }

  void raw(void* p, std::size_t n) {
    in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n)
      throw DataError("truncated file: " + path_);
  }

  std::string path_;
  std::ifstream in_;
};

}  // namespace sedkit
