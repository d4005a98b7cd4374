#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "sedkit/types.hpp"

namespace sedkit {

struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;
  bool operator==(const GeoPoint&) const = default;
};

/// One image plus its contextual metadata, label, and split assignment.
struct MediaRecord {
  std::string id;
  std::optional<std::string> title;
  std::vector<std::string> tags;
  std::string user;
  std::optional<std::int64_t> timestamp;
  std::optional<GeoPoint> geo;
  std::optional<std::string> image_path;
  std::optional<ClassLabel> label;
  std::optional<Split> split;

  bool operator==(const MediaRecord&) const = default;
};

enum class MetadataFormat { csv, json_lines };

inline MetadataFormat metadata_format_from_name(std::string_view name) {
  if (name == "csv") return MetadataFormat::csv;
  if (name == "json-lines" || name == "jsonl") return MetadataFormat::json_lines;
  throw ConfigError("unknown metadata format: " + std::string(name));
}

/// Per-class counts and normalized priors over a labeled record set.
struct CorpusStats {
  std::array<std::uint64_t, kNumClasses> counts{};
  std::array<double, kNumClasses> priors{};
  std::uint64_t total = 0;
};

/// Immutable after construction; safe for concurrent reads.
class Corpus {
 public:
  Corpus() = default;

  explicit Corpus(std::vector<MediaRecord> records)
      : records_(std::move(records)) {
    for (std::size_t i = 0; i < records_.size(); ++i) {
      auto [it, inserted] = index_.emplace(records_[i].id, i);
      if (!inserted)
        throw DataError("duplicate record id: " + records_[i].id);
    }
  }

  const std::vector<MediaRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  bool contains(const std::string& id) const { return index_.count(id) > 0; }

  const MediaRecord& by_id(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw DataError("unknown record id: " + id);
    return records_[it->second];
  }

  std::vector<std::size_t> split_indices(Split s) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < records_.size(); ++i) {
      if (records_[i].split == s) out.push_back(i);
    }
    return out;
  }

 private:
  std::vector<MediaRecord> records_;
  std::unordered_map<std::string, std::size_t> index_;
};

namespace detail {

// RFC-4180 style CSV: quoted fields may contain commas, escaped quotes and
// newlines. Returns one row per call; `line` tracks the physical line of the
// row start for error messages.
inline bool read_csv_row(std::istream& in, std::vector<std::string>& fields,
                         std::size_t& line, std::size_t& row_start_line) {
  fields.clear();
  int c = in.get();
  if (c == EOF) return false;
  row_start_line = line;
  std::string field;
  bool quoted = false;
  while (true) {
    if (c == EOF) {
      fields.push_back(field);
      return true;
    }
    char ch = static_cast<char>(c);
    if (quoted) {
      if (ch == '"') {
        int peek = in.peek();
        if (peek == '"') {
          field.push_back('"');
          in.get();
        } else {
          quoted = false;
        }
      } else {
        if (ch == '\n') ++line;
        field.push_back(ch);
      }
    } else if (ch == '"' && field.empty()) {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(field);
      field.clear();
    } else if (ch == '\n') {
      ++line;
      if (!field.empty() && field.back() == '\r') field.pop_back();
      fields.push_back(field);
      return true;
    } else {
      field.push_back(ch);
    }
    c = in.get();
  }
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline std::vector<std::string> split_tags(const std::string& s) {
  std::vector<std::string> tags;
  if (s.empty()) return tags;
  std::size_t start = 0;
  while (true) {
    std::size_t bar = s.find('|', start);
    if (bar == std::string::npos) {
      tags.push_back(s.substr(start));
      break;
    }
    tags.push_back(s.substr(start, bar - start));
    start = bar + 1;
  }
  return tags;
}

inline std::string join_tags(const std::vector<std::string>& tags) {
  std::string out;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (i) out.push_back('|');
    out += tags[i];
  }
  return out;
}

inline double parse_double_field(const std::string& s, const char* what,
                                 std::size_t line) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(std::string("malformed ") + what + ": '" + s + "'", line);
  }
}

inline std::int64_t parse_int_field(const std::string& s, const char* what,
                                    std::size_t line) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ParseError(std::string("malformed ") + what + ": '" + s + "'", line);
  return v;
}

}  // namespace detail

inline constexpr const char* kCsvHeader =
    "id,title,tags,user,timestamp,lat,lon,image_path,label,split";

/// Parses a metadata file into records. Missing optional fields stay absent.
/// Reports malformed rows with their line number and rejects duplicate ids.
inline std::vector<MediaRecord> parse_metadata(const std::filesystem::path& path,
                                               MetadataFormat format) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open metadata file: " + path.string());

  std::vector<MediaRecord> records;
  std::unordered_set<std::string> seen;

  auto check_id = [&](const MediaRecord& r, std::size_t line) {
    if (r.id.empty()) throw ParseError("record with empty id", line);
    if (!seen.insert(r.id).second)
      throw ParseError("duplicate record id: " + r.id, line);
  };

  if (format == MetadataFormat::csv) {
    std::vector<std::string> fields;
    std::size_t line = 1, row_line = 1;
    bool first = true;
    while (detail::read_csv_row(in, fields, line, row_line)) {
      if (first) {
        first = false;
        if (!fields.empty() && fields[0] == "id") continue;  // header row
      }
      if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
      if (fields.size() != 10)
        throw ParseError("expected 10 columns, got " +
                             std::to_string(fields.size()),
                         row_line);
      MediaRecord r;
      r.id = fields[0];
      if (!fields[1].empty()) r.title = fields[1];
      r.tags = detail::split_tags(fields[2]);
      r.user = fields[3];
      if (!fields[4].empty())
        r.timestamp = detail::parse_int_field(fields[4], "timestamp", row_line);
      const bool has_lat = !fields[5].empty();
      const bool has_lon = !fields[6].empty();
      if (has_lat != has_lon)
        throw ParseError("geo requires both lat and lon", row_line);
      if (has_lat) {
        r.geo = GeoPoint{detail::parse_double_field(fields[5], "lat", row_line),
                         detail::parse_double_field(fields[6], "lon", row_line)};
      }
      if (!fields[7].empty()) r.image_path = fields[7];
      if (!fields[8].empty()) {
        auto l = label_from_name(fields[8]);
        if (!l) throw ParseError("unknown label: '" + fields[8] + "'", row_line);
        r.label = *l;
      }
      if (!fields[9].empty()) {
        auto s = split_from_name(fields[9]);
        if (!s) throw ParseError("unknown split: '" + fields[9] + "'", row_line);
        r.split = *s;
      }
      check_id(r, row_line);
      records.push_back(std::move(r));
    }
  } else {
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
      ++line;
      if (raw.empty()) continue;
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(raw);
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid json: ") + e.what(), line);
      }
      if (!j.is_object()) throw ParseError("expected a json object", line);
      MediaRecord r;
      try {
        r.id = j.at("id").get<std::string>();
        if (j.contains("title")) r.title = j["title"].get<std::string>();
        if (j.contains("tags")) r.tags = j["tags"].get<std::vector<std::string>>();
        if (j.contains("user")) r.user = j["user"].get<std::string>();
        if (j.contains("timestamp")) r.timestamp = j["timestamp"].get<std::int64_t>();
        if (j.contains("lat") != j.contains("lon"))
          throw ParseError("geo requires both lat and lon", line);
        if (j.contains("lat"))
          r.geo = GeoPoint{j["lat"].get<double>(), j["lon"].get<double>()};
        if (j.contains("image_path")) r.image_path = j["image_path"].get<std::string>();
        if (j.contains("label")) {
          auto l = label_from_name(j["label"].get<std::string>());
          if (!l)
            throw ParseError("unknown label: '" +
                                 j["label"].get<std::string>() + "'",
                             line);
          r.label = *l;
        }
        if (j.contains("split")) {
          auto s = split_from_name(j["split"].get<std::string>());
          if (!s)
            throw ParseError("unknown split: '" +
                                 j["split"].get<std::string>() + "'",
                             line);
          r.split = *s;
        }
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad field: ") + e.what(), line);
      }
      check_id(r, line);
      records.push_back(std::move(r));
    }
  }
  return records;
}

/// Writes records back out; parse(serialize(x)) round-trips field-identically.
inline void serialize_metadata(const std::vector<MediaRecord>& records,
                               const std::filesystem::path& path,
                               MetadataFormat format) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  if (format == MetadataFormat::csv) {
    out << kCsvHeader << "\n";
    for (const auto& r : records) {
      std::ostringstream ts, lat, lon;
      if (r.timestamp) ts << *r.timestamp;
      if (r.geo) {
        lat.precision(17);
        lon.precision(17);
        lat << r.geo->lat;
        lon << r.geo->lon;
      }
      out << detail::csv_escape(r.id) << ','
          << detail::csv_escape(r.title.value_or("")) << ','
          << detail::csv_escape(detail::join_tags(r.tags)) << ','
          << detail::csv_escape(r.user) << ',' << ts.str() << ',' << lat.str()
          << ',' << lon.str() << ','
          << detail::csv_escape(r.image_path.value_or("")) << ','
          << (r.label ? label_name(*r.label) : "") << ','
          << (r.split ? split_name(*r.split) : "") << "\n";
    }
  } else {
    for (const auto& r : records) {
      nlohmann::json j;
      j["id"] = r.id;
      if (r.title) j["title"] = *r.title;
      if (!r.tags.empty()) j["tags"] = r.tags;
      if (!r.user.empty()) j["user"] = r.user;
      if (r.timestamp) j["timestamp"] = *r.timestamp;
      if (r.geo) {
        j["lat"] = r.geo->lat;
        j["lon"] = r.geo->lon;
      }
      if (r.image_path) j["image_path"] = *r.image_path;
      if (r.label) j["label"] = label_name(*r.label);
      if (r.split) j["split"] = split_name(*r.split);
      out << j.dump() << "\n";
    }
  }
  if (!out) throw DataError("write failed: " + path.string());
}

/// Applies a complete id -> split table. The table must cover every record
/// and reference only known ids.
inline Corpus assign_splits(std::vector<MediaRecord> records,
                            const std::map<std::string, Split>& split_table) {
  std::unordered_set<std::string> ids;
  for (const auto& r : records) ids.insert(r.id);
  std::vector<std::string> unknown;
  for (const auto& [id, s] : split_table) {
    if (!ids.count(id)) unknown.push_back(id);
  }
  if (!unknown.empty()) {
    std::string msg = "split table references unknown ids:";
    for (const auto& id : unknown) msg += " " + id;
    throw DataError(msg);
  }
  std::vector<std::string> missing;
  for (auto& r : records) {
    auto it = split_table.find(r.id);
    if (it == split_table.end()) {
      missing.push_back(r.id);
    } else {
      r.split = it->second;
    }
  }
  if (!missing.empty()) {
    std::string msg = "records with no split assignment:";
    for (const auto& id : missing) msg += " " + id;
    throw DataError(msg);
  }
  return Corpus(std::move(records));
}

/// Exact per-class counts and normalized priors over one split. Every record
/// in the split must be labeled.
inline CorpusStats class_priors(const Corpus& corpus, Split split) {
  CorpusStats stats;
  for (const auto& r : corpus.records()) {
    if (r.split != split) continue;
    if (!r.label)
      throw DataError("unlabeled record in split: " + r.id);
    ++stats.counts[static_cast<std::size_t>(*r.label)];
    ++stats.total;
  }
  if (stats.total > 0) {
    for (std::size_t i = 0; i < kNumClasses; ++i) {
      stats.priors[i] =
          static_cast<double>(stats.counts[i]) / static_cast<double>(stats.total);
    }
  }
  return stats;
}

}  // namespace sedkit
