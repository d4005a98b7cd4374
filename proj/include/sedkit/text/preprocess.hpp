#pragma once

#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "sedkit/stopwords.hpp"

namespace sedkit {

using TokenList = std::vector<std::string>;

namespace detail {

// Whole-chunk ASCII emoticons dropped before character filtering. Symbol
// emoticons and emoji would die at the letters-only stage anyway; this list
// catches the letter-bearing ones ("xd" variants etc.).
inline const std::unordered_set<std::string>& ascii_emoticons() {
  static const std::unordered_set<std::string> set = {
      ":)",  ":(",  ":d",  ":p",  ":o",   ":s",   ":|",  ":/",  ":3",
      ":*",  ":x",  ":-)", ":-(", ":-d",  ":-p",  ";)",  ";-)", ";d",
      "=)",  "=(",  "=d",  "xd",  "xdd",  "xddd", "^_^", "^^",  "<3",
      "</3", ":'(", "o_o", "o.o", "-_-",  "t_t",  ";_;", "._.",
  };
  return set;
}

// Removes <...> spans, gluing the surrounding text. A '<' with no closing
// '>' is kept and later acts as a token boundary.
inline std::string strip_html_tags(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '<') {
      std::size_t close = s.find('>', i + 1);
      if (close != std::string::npos) {
        i = close + 1;
        continue;
      }
    }
    out.push_back(s[i]);
    ++i;
  }
  return out;
}

inline char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline std::string ascii_lowercase(const std::string& s) {
  std::string out = s;
  for (char& c : out) c = ascii_lower(c);
  return out;
}

inline bool is_token_char(char c) { return c >= 'a' && c <= 'z'; }

inline void tokenize_text(const std::string& text, const StopwordList& stopwords,
                          std::size_t min_length, TokenList& out) {
  const std::string stripped = strip_html_tags(text);
  std::size_t i = 0;
  const std::size_t n = stripped.size();
  while (i < n) {
    while (i < n && (stripped[i] == ' ' || stripped[i] == '\t' ||
                     stripped[i] == '\n' || stripped[i] == '\r'))
      ++i;
    std::size_t start = i;
    while (i < n && stripped[i] != ' ' && stripped[i] != '\t' &&
           stripped[i] != '\n' && stripped[i] != '\r')
      ++i;
    if (i == start) continue;
    std::string chunk = ascii_lowercase(stripped.substr(start, i - start));
    if (ascii_emoticons().count(chunk)) continue;
    // letter runs only: digits, punctuation, markup leftovers and any
    // non-ASCII byte (emoji included) split tokens
    std::string token;
    auto flush = [&] {
      if (token.size() >= min_length && !stopwords.contains(token))
        out.push_back(token);
      token.clear();
    };
    for (char c : chunk) {
      if (is_token_char(c)) {
        token.push_back(c);
      } else {
        flush();
      }
    }
    flush();
  }
}

}  // namespace detail

/// Turns a title and tag list into filtered lowercase tokens: HTML tags
/// removed, non-letter characters treated as boundaries, stop words and
/// terms shorter than `min_length` dropped. Title terms come first, then
/// tags, preserving input order. Idempotent on its own output.
inline TokenList preprocess(const std::optional<std::string>& title,
                            const std::vector<std::string>& tags,
                            const StopwordList& stopwords = default_stopwords(),
                            std::size_t min_length = 4) {
  TokenList out;
  if (title) detail::tokenize_text(*title, stopwords, min_length, out);
  for (const auto& tag : tags)
    detail::tokenize_text(tag, stopwords, min_length, out);
  return out;
}

}  // namespace sedkit
