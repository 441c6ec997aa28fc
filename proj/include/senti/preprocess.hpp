#pragma once

// Six-step text preparation: case fold -> clean -> normalize slang ->
// tokenize -> remove stopwords -> stem. The order is fixed; each step can be
// switched off except tokenization, which always runs because the pipeline
// returns tokens.

#include <array>
#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "senti/error.hpp"
#include "senti/stemmer.hpp"

namespace senti::preprocess {

using TokenList = std::vector<std::string>;
using SlangMap = std::unordered_map<std::string, std::string>;
using StopwordSet = std::unordered_set<std::string>;

enum class Step : std::size_t { CaseFold, Clean, Normalize, Tokenize, Stopwords, Stem };
inline constexpr std::size_t kNumSteps = 6;

struct PreprocessConfig {
  std::array<bool, kNumSteps> enabled{true, true, true, true, true, true};
  SlangMap slang;
  StopwordSet stopwords;
  RootDictionary roots;

  bool on(Step s) const { return enabled[static_cast<std::size_t>(s)]; }
  void set(Step s, bool v) { enabled[static_cast<std::size_t>(s)] = v; }
};

namespace detail {

inline std::vector<std::string> read_lines(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw InputError(std::string("cannot open ") + what + ": " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

// Decodes one UTF-8 sequence at s[i]. Malformed bytes decode as themselves
// with length 1 so callers never stall on bad input.
inline char32_t decode_utf8(std::string_view s, std::size_t i, std::size_t& len) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  auto cont = [&](std::size_t k) {
    return i + k < s.size() && (static_cast<unsigned char>(s[i + k]) & 0xC0) == 0x80;
  };
  auto byte = [&](std::size_t k) { return static_cast<char32_t>(static_cast<unsigned char>(s[i + k]) & 0x3F); };
  if (b0 < 0x80) {
    len = 1;
    return b0;
  }
  if ((b0 & 0xE0) == 0xC0 && b0 >= 0xC2 && cont(1)) {
    len = 2;
    return (static_cast<char32_t>(b0 & 0x1F) << 6) | byte(1);
  }
  if ((b0 & 0xF0) == 0xE0 && cont(1) && cont(2)) {
    len = 3;
    return (static_cast<char32_t>(b0 & 0x0F) << 12) | (byte(1) << 6) | byte(2);
  }
  if ((b0 & 0xF8) == 0xF0 && b0 <= 0xF4 && cont(1) && cont(2) && cont(3)) {
    len = 4;
    return (static_cast<char32_t>(b0 & 0x07) << 18) | (byte(1) << 12) | (byte(2) << 6) | byte(3);
  }
  len = 1;
  return 0xFFFFFFFF;  // malformed marker
}

inline void encode_utf8(char32_t c, std::string& out) {
  if (c < 0x80) {
    out.push_back(static_cast<char>(c));
  } else if (c < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (c >> 6)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else if (c < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (c >> 12)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (c >> 18)));
    out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  }
}

// Simple (1:1) lowercase mapping for Latin, Greek and Cyrillic scripts.
inline char32_t to_lower(char32_t c) {
  if (c >= 'A' && c <= 'Z') return c + 32;
  if (c < 0x80) return c;
  if ((c >= 0xC0 && c <= 0xDE && c != 0xD7)) return c + 32;
  if (c >= 0x100 && c <= 0x17F) {
    // Latin Extended-A pairs: even=upper up to U+0137, odd=upper in U+0139..U+0148 and U+0179..U+017E.
    if (c == 0x130) return 'i';
    if ((c <= 0x137 || (c >= 0x14A && c <= 0x177)) && c % 2 == 0) return c + 1;
    if (((c >= 0x139 && c <= 0x148) || (c >= 0x179 && c <= 0x17E)) && c % 2 == 1) return c + 1;
    if (c == 0x178) return 0xFF;
    return c;
  }
  if (c >= 0x391 && c <= 0x3AB && c != 0x3A2) return c + 32;
  if (c >= 0x410 && c <= 0x42F) return c + 32;
  if (c >= 0x400 && c <= 0x40F) return c + 80;
  return c;
}

inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
inline bool is_lower_ascii(char c) { return c >= 'a' && c <= 'z'; }
inline bool is_alpha_ascii(char c) { return is_lower_ascii(c) || (c >= 'A' && c <= 'Z'); }
inline bool is_digit(char c) { return c >= '0' && c <= '9'; }
inline bool is_url_scheme_char(char c) { return is_alpha_ascii(c) || is_digit(c) || c == '+' || c == '.' || c == '-'; }

// Length of a URL span starting at i (scheme:// or www.), 0 when none.
inline std::size_t url_span(std::string_view s, std::size_t i) {
  if (i > 0 && is_url_scheme_char(s[i - 1])) return 0;
  std::size_t j = i;
  if (s.substr(i, 4) == "www." || s.substr(i, 4) == "WWW.") {
    j = i + 4;
  } else {
    if (i >= s.size() || !is_alpha_ascii(s[i])) return 0;
    while (j < s.size() && is_url_scheme_char(s[j])) ++j;
    if (s.substr(j, 3) != "://") return 0;
    j += 3;
  }
  while (j < s.size() && !is_space(s[j])) ++j;
  return j - i;
}

}  // namespace detail

inline StopwordSet load_stopwords(const std::string& path) {
  StopwordSet out;
  for (auto& l : detail::read_lines(path, "stopword list"))
    if (!l.empty()) out.insert(std::move(l));
  return out;
}

// slang<TAB>standard per line.
inline SlangMap load_slang(const std::string& path) {
  SlangMap out;
  std::size_t n = 0;
  for (auto& l : detail::read_lines(path, "slang dictionary")) {
    ++n;
    if (l.empty()) continue;
    const auto tab = l.find('\t');
    if (tab == std::string::npos || tab == 0)
      throw InputError("slang dictionary " + path + ": line " + std::to_string(n) + " is not 'slang<TAB>standard'");
    out.emplace(l.substr(0, tab), l.substr(tab + 1));
  }
  return out;
}

struct DictionaryPaths {
  std::string roots;
  std::string stopwords;
  std::string slang;
};

inline PreprocessConfig load_config(const DictionaryPaths& p) {
  PreprocessConfig cfg;
  cfg.roots = load_root_dictionary(p.roots);
  cfg.stopwords = load_stopwords(p.stopwords);
  cfg.slang = load_slang(p.slang);
  return cfg;
}

inline std::string case_fold(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    std::size_t len = 1;
    const char32_t c = detail::decode_utf8(text, i, len);
    if (c == 0xFFFFFFFF) {
      out.push_back(text[i]);
    } else {
      detail::encode_utf8(detail::to_lower(c), out);
    }
    i += len;
  }
  return out;
}

// Removes URL spans, @mentions and #hashtags as whole spans, strips digits and
// non-ASCII characters in place, turns ASCII punctuation into word breaks,
// collapses whitespace and trims.
inline std::string clean(std::string_view text) {
  std::string kept;
  kept.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    const char c = text[i];
    if (const std::size_t n = detail::url_span(text, i); n > 0) {
      i += n;
      kept.push_back(' ');
      continue;
    }
    if (c == '@' || c == '#') {
      std::size_t j = i + 1;
      while (j < text.size() && (detail::is_alpha_ascii(text[j]) || detail::is_digit(text[j]) || text[j] == '_')) ++j;
      if (j > i + 1) {
        i = j;
        kept.push_back(' ');
        continue;
      }
    }
    const auto u = static_cast<unsigned char>(c);
    if (detail::is_alpha_ascii(c)) {
      kept.push_back(c);
    } else if (detail::is_space(c)) {
      kept.push_back(' ');
    } else if (u < 0x80 && !detail::is_digit(c)) {
      kept.push_back(' ');  // punctuation and control characters separate words
    }
    // digits and bytes of non-ASCII characters are dropped in place
    ++i;
  }
  std::string out;
  out.reserve(kept.size());
  for (char c : kept) {
    if (c == ' ' && (out.empty() || out.back() == ' ')) continue;
    out.push_back(c);
  }
  if (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

inline TokenList tokenize(std::string_view text) {
  TokenList out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && detail::is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !detail::is_space(text[j])) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

// Whole-word substitution in one pass; replacements are not re-normalized.
inline std::string normalize_slang(std::string_view text, const SlangMap& dict) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (detail::is_space(text[i])) {
      out.push_back(text[i++]);
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && !detail::is_space(text[j])) ++j;
    const std::string word(text.substr(i, j - i));
    const auto it = dict.find(word);
    out += (it == dict.end()) ? word : it->second;
    i = j;
  }
  return out;
}

inline TokenList remove_stopwords(const TokenList& tokens, const StopwordSet& stoplist) {
  TokenList out;
  out.reserve(tokens.size());
  for (const auto& t : tokens)
    if (!stoplist.contains(t)) out.push_back(t);
  return out;
}

inline TokenList run_pipeline(std::string_view text, const PreprocessConfig& cfg) {
  std::string s(text);
  if (cfg.on(Step::CaseFold)) s = case_fold(s);
  if (cfg.on(Step::Clean)) s = clean(s);
  if (cfg.on(Step::Normalize)) s = normalize_slang(s, cfg.slang);
  TokenList tokens = tokenize(s);
  if (cfg.on(Step::Stopwords)) tokens = remove_stopwords(tokens, cfg.stopwords);
  if (cfg.on(Step::Stem)) {
    TokenList stemmed;
    stemmed.reserve(tokens.size());
    for (const auto& t : tokens) {
      auto st = stem(t, cfg.roots);
      if (!st.empty()) stemmed.push_back(std::move(st));
    }
    tokens = std::move(stemmed);
  }
  return tokens;
}

inline std::string join(const TokenList& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

}  // namespace senti::preprocess
