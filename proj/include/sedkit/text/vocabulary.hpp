#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "sedkit/text/preprocess.hpp"
#include "sedkit/types.hpp"

namespace sedkit {

/// The top-N corpus terms with their document frequencies. Ordering is by
/// collection frequency descending, ties broken lexicographically.
struct Vocabulary {
  std::vector<std::string> terms;
  std::vector<std::uint64_t> document_frequency;  // aligned with terms
  std::uint64_t corpus_size = 0;                  // number of documents
  std::uint64_t requested_size = 0;               // N as asked for
  std::unordered_map<std::string, std::uint32_t> index;

  std::size_t size() const { return terms.size(); }

  /// True when the corpus had fewer than N distinct terms.
  bool truncated() const { return terms.size() < requested_size; }

  void rebuild_index() {
    index.clear();
    for (std::uint32_t i = 0; i < terms.size(); ++i) index.emplace(terms[i], i);
  }
};

inline Vocabulary build_vocabulary(const std::vector<TokenList>& documents,
                                   std::size_t n) {
  if (n < 1) throw ConfigError("vocabulary size must be >= 1");
  std::map<std::string, std::uint64_t> collection_freq;
  std::map<std::string, std::uint64_t> doc_freq;
  for (const auto& doc : documents) {
    std::map<std::string, std::uint64_t> seen;
    for (const auto& tok : doc) {
      ++collection_freq[tok];
      ++seen[tok];
    }
    for (const auto& [tok, cnt] : seen) ++doc_freq[tok];
  }
  std::vector<std::pair<std::string, std::uint64_t>> ranked(
      collection_freq.begin(), collection_freq.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (ranked.size() > n) ranked.resize(n);

  Vocabulary vocab;
  vocab.corpus_size = documents.size();
  vocab.requested_size = n;
  vocab.terms.reserve(ranked.size());
  vocab.document_frequency.reserve(ranked.size());
  for (const auto& [term, cf] : ranked) {
    vocab.terms.push_back(term);
    vocab.document_frequency.push_back(doc_freq[term]);
  }
  vocab.rebuild_index();
  return vocab;
}

inline constexpr std::uint32_t kVocabularyFormatVersion = 1;

inline void save_vocabulary(const Vocabulary& vocab,
                            const std::filesystem::path& path) {
  nlohmann::json j;
  j["format_version"] = kVocabularyFormatVersion;
  j["n"] = vocab.requested_size;
  j["corpus_size"] = vocab.corpus_size;
  j["terms"] = vocab.terms;
  j["document_frequency"] = vocab.document_frequency;
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  out << j.dump(2) << "\n";
}

inline Vocabulary load_vocabulary(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open vocabulary: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("invalid vocabulary file: " + std::string(e.what()));
  }
  if (j.value("format_version", 0u) != kVocabularyFormatVersion)
    throw DataError("unsupported vocabulary format version in " + path.string());
  Vocabulary vocab;
  vocab.requested_size = j.at("n").get<std::uint64_t>();
  vocab.corpus_size = j.at("corpus_size").get<std::uint64_t>();
  vocab.terms = j.at("terms").get<std::vector<std::string>>();
  vocab.document_frequency =
      j.at("document_frequency").get<std::vector<std::uint64_t>>();
  if (vocab.terms.size() != vocab.document_frequency.size())
    throw DataError("vocabulary term/df length mismatch in " + path.string());
  vocab.rebuild_index();
  return vocab;
}

}  // namespace sedkit
