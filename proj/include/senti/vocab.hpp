#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "senti/error.hpp"
#include "senti/preprocess.hpp"

namespace senti::vocab {

using preprocess::TokenList;

inline constexpr std::int32_t kPad = 0;
inline constexpr std::int32_t kOov = 1;
inline constexpr std::int32_t kFirstReal = 2;
inline constexpr const char* kUnkToken = "⟨unk⟩";  // ⟨unk⟩

// Token <-> index map. Index 0 is PAD, 1 is OOV, real tokens follow with no
// gaps; size() counts the two reserved slots.
class Vocabulary {
 public:
  Vocabulary() = default;

  // Tokens in index order starting at kFirstReal.
  explicit Vocabulary(std::vector<std::string> tokens, std::size_t max_len = 1, std::size_t min_freq = 1)
      : tokens_(std::move(tokens)), max_len_(max_len), min_freq_(min_freq) {
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      auto [it, fresh] = index_.emplace(tokens_[i], static_cast<std::int32_t>(i) + kFirstReal);
      if (!fresh) throw InputError("vocabulary: duplicate token '" + tokens_[i] + "'");
    }
  }

  std::size_t size() const { return tokens_.size() + kFirstReal; }
  std::size_t max_len() const { return max_len_; }
  std::size_t min_freq() const { return min_freq_; }
  void set_max_len(std::size_t n) { max_len_ = n; }

  std::int32_t index_of(const std::string& token) const {
    auto it = index_.find(token);
    return it == index_.end() ? kOov : it->second;
  }
  bool contains(const std::string& token) const { return index_.contains(token); }

  // Real tokens only; throws for reserved or out-of-range indices.
  const std::string& token_at(std::int32_t idx) const {
    if (idx < kFirstReal || static_cast<std::size_t>(idx) >= size())
      throw InputError("vocabulary: no token for index " + std::to_string(idx));
    return tokens_[static_cast<std::size_t>(idx - kFirstReal)];
  }
  const std::vector<std::string>& tokens() const { return tokens_; }

  bool operator==(const Vocabulary& o) const {
    return tokens_ == o.tokens_ && max_len_ == o.max_len_ && min_freq_ == o.min_freq_;
  }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::int32_t> index_;
  std::size_t max_len_ = 1;
  std::size_t min_freq_ = 1;
};

struct EncodedSequence {
  std::vector<std::int32_t> indices;  // exactly max_len entries
  std::size_t true_length = 0;
};

inline constexpr std::size_t kMaxLenCap = 100;

// 95th percentile (nearest rank) of token counts, clamped to [1, 100].
inline std::size_t default_max_len(const std::vector<TokenList>& corpus) {
  if (corpus.empty()) return 1;
  std::vector<std::size_t> lens;
  lens.reserve(corpus.size());
  for (const auto& t : corpus) lens.push_back(t.size());
  std::sort(lens.begin(), lens.end());
  const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(lens.size())));
  const std::size_t p95 = lens[std::max<std::size_t>(rank, 1) - 1];
  return std::clamp<std::size_t>(p95, 1, kMaxLenCap);
}

// Frequency-ranked vocabulary (descending count, ties in byte order). max_len
// of 0 selects default_max_len(corpus).
inline Vocabulary build_vocab(const std::vector<TokenList>& corpus, std::size_t min_freq = 1, std::size_t max_len = 0) {
  if (corpus.empty()) throw InputError("build_vocab: empty corpus");
  if (min_freq < 1) throw InputError("build_vocab: min_freq must be >= 1");
  std::map<std::string, std::size_t> freq;
  for (const auto& doc : corpus)
    for (const auto& t : doc) ++freq[t];
  std::vector<std::pair<std::string, std::size_t>> ranked;
  for (auto& [tok, n] : freq)
    if (n >= min_freq) ranked.emplace_back(tok, n);
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> tokens;
  tokens.reserve(ranked.size());
  for (auto& [tok, n] : ranked) tokens.push_back(tok);
  return Vocabulary(std::move(tokens), max_len == 0 ? default_max_len(corpus) : max_len, min_freq);
}

inline EncodedSequence encode(const TokenList& tokens, const Vocabulary& v, std::size_t max_len) {
  if (max_len < 1) throw InputError("encode: max_len must be >= 1");
  EncodedSequence seq;
  seq.indices.assign(max_len, kPad);
  seq.true_length = std::min(tokens.size(), max_len);
  for (std::size_t i = 0; i < seq.true_length; ++i) seq.indices[i] = v.index_of(tokens[i]);
  return seq;
}

inline EncodedSequence encode(const TokenList& tokens, const Vocabulary& v) { return encode(tokens, v, v.max_len()); }

inline TokenList decode(const EncodedSequence& seq, const Vocabulary& v) {
  TokenList out;
  for (auto idx : seq.indices) {
    if (idx < 0 || static_cast<std::size_t>(idx) >= v.size())
      throw InputError("decode: index " + std::to_string(idx) + " outside vocabulary of size " + std::to_string(v.size()));
    if (idx == kPad) continue;
    out.push_back(idx == kOov ? std::string(kUnkToken) : v.token_at(idx));
  }
  return out;
}

// Text form: line k+1 holds the token for index k+2. Metadata goes to a
// sidecar "<path>.meta" holding "max_len=<n> min_freq=<m>".
inline std::string serialize(const Vocabulary& v) {
  std::string out;
  for (const auto& t : v.tokens()) {
    out += t;
    out.push_back('\n');
  }
  return out;
}

inline std::string serialize_meta(const Vocabulary& v) {
  return "max_len=" + std::to_string(v.max_len()) + " min_freq=" + std::to_string(v.min_freq()) + "\n";
}

inline Vocabulary deserialize(const std::string& body, const std::string& meta) {
  std::vector<std::string> tokens;
  std::istringstream in(body);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    tokens.push_back(line);
  }
  std::size_t max_len = 0, min_freq = 0;
  std::istringstream m(meta);
  std::string kv;
  while (m >> kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw InputError("vocabulary metadata: malformed entry '" + kv + "'");
    const auto key = kv.substr(0, eq);
    const auto text = kv.substr(eq + 1);
    std::size_t val = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), val);
    if (ec != std::errc{} || end != text.data() + text.size())
      throw InputError("vocabulary metadata: bad number in '" + kv + "'");
    if (key == "max_len") max_len = val;
    else if (key == "min_freq") min_freq = val;
  }
  if (max_len < 1 || min_freq < 1) throw InputError("vocabulary metadata: max_len and min_freq are required");
  return Vocabulary(std::move(tokens), max_len, min_freq);
}

inline void save(const std::string& path, const Vocabulary& v) {
  std::ofstream body(path, std::ios::binary), meta(path + ".meta", std::ios::binary);
  if (!body || !meta) throw InputError("cannot write vocabulary: " + path);
  body << serialize(v);
  meta << serialize_meta(v);
}

inline Vocabulary load(const std::string& path) {
  auto slurp = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw InputError("cannot open vocabulary file: " + p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  return deserialize(slurp(path), slurp(path + ".meta"));
}

}  // namespace senti::vocab
