#pragma once

#include <array>
#include <filesystem>
#include <fstream>
#include <string>
#include <unordered_set>

#include "sedkit/types.hpp"

namespace sedkit {

/// Pinned English stop-word list. The same list ships as
/// data/stopwords_en.txt; a unit test keeps file and header in sync.
inline constexpr const char* kStopwordListVersion = "en-1";

inline constexpr std::array<const char*, 128> kDefaultStopwords = {
    "about",   "above",    "after",    "again",      "against",   "all",
    "am",      "an",       "and",      "any",        "are",       "as",
    "at",      "be",       "because",  "been",       "before",    "being",
    "below",   "between",  "both",     "but",        "by",        "cannot",
    "could",   "did",      "do",       "does",       "doing",     "down",
    "during",  "each",     "few",      "for",        "from",      "further",
    "had",     "has",      "have",     "having",     "he",        "her",
    "here",    "hers",     "herself",  "him",        "himself",   "his",
    "how",     "i",        "if",       "in",         "into",      "is",
    "it",      "its",      "itself",   "just",       "me",        "more",
    "most",    "my",       "myself",   "no",         "nor",       "not",
    "now",     "of",       "off",      "on",         "once",      "only",
    "or",      "other",    "ought",    "our",        "ours",      "ourselves",
    "out",     "over",     "own",      "same",       "she",       "should",
    "so",      "some",     "such",     "than",       "that",      "the",
    "their",   "theirs",   "them",     "themselves", "then",      "there",
    "these",   "they",     "this",     "those",      "through",   "to",
    "too",     "under",    "until",    "up",         "very",      "was",
    "we",      "were",     "what",     "when",       "where",     "which",
    "while",   "who",      "whom",     "why",        "will",      "with",
    "within",  "without",  "would",    "you",        "your",      "yours",
    "yourself", "yourselves",
};

struct StopwordList {
  std::string version;
  std::unordered_set<std::string> terms;

  bool contains(const std::string& term) const { return terms.count(term) > 0; }
};

inline const StopwordList& default_stopwords() {
  static const StopwordList list = [] {
    StopwordList l;
    l.version = kStopwordListVersion;
    for (const char* w : kDefaultStopwords) l.terms.insert(w);
    return l;
  }();
  return list;
}

/// Loads a one-term-per-line UTF-8 list. Blank lines are skipped.
inline StopwordList load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open stop-word list: " + path.string());
  StopwordList list;
  list.version = path.filename().string();
  std::string word;
  while (std::getline(in, word)) {
    if (!word.empty() && word.back() == '\r') word.pop_back();
    if (!word.empty()) list.terms.insert(word);
  }
  return list;
}

}  // namespace sedkit
