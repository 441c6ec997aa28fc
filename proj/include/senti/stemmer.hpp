#pragma once

// Indonesian stemmer of the Nazief-Adriani family, following the confix
// stripping variant implemented by the Sastrawi library: particle and
// possessive suffixes, derivational suffixes, plain and disambiguated
// prefixes (up to three rounds), precedence adjustment for be-/me-/di-/pe-/ter-
// confixes, and the suffix restoration loop. Every intermediate form is
// checked against a root-word dictionary; a word that never reaches the
// dictionary comes back unchanged.
//
// Rule order and quirks match the reference implementation so its output can
// be used as a golden oracle.

#include <algorithm>
#include <array>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "senti/error.hpp"

namespace senti::preprocess {

// Set of root words. Lookups take string_view.
class RootDictionary {
 public:
  RootDictionary() = default;
  explicit RootDictionary(const std::vector<std::string>& words) {
    for (const auto& w : words) add(w);
  }

  void add(std::string word) {
    if (word.find_first_not_of(" \t\r") == std::string::npos) return;
    words_.insert(std::move(word));
  }
  bool contains(std::string_view w) const { return words_.find(w) != words_.end(); }
  std::size_t size() const { return words_.size(); }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };
  std::unordered_set<std::string, Hash, std::equal_to<>> words_;
};

// One entry per line, LF or CRLF.
inline RootDictionary load_root_dictionary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open root dictionary: " + path);
  RootDictionary d;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    d.add(line);
  }
  return d;
}

namespace stemmer_detail {

enum class AffixType { DerivationalPrefix, DerivationalSuffix, Possessive, Particle };

struct Removal {
  std::string subject;
  std::string result;
  std::string removed_part;
  AffixType type;
};

inline bool is_vowel(char c) { return c == 'a' || c == 'i' || c == 'u' || c == 'e' || c == 'o'; }
inline bool is_alpha(char c) { return c >= 'a' && c <= 'z'; }
// [bcdfghjklmnpqrstvwxyz]
inline bool is_consonant(char c) { return is_alpha(c) && !is_vowel(c); }
inline bool in_set(char c, std::string_view set) { return set.find(c) != std::string_view::npos; }
inline bool starts(std::string_view w, std::string_view p) { return w.substr(0, p.size()) == p; }
inline char at(std::string_view w, std::size_t i) { return i < w.size() ? w[i] : '\0'; }

using Rule = std::optional<std::string> (*)(std::string_view);
using Str = std::optional<std::string>;

inline std::string tail(std::string_view w, std::size_t from) { return std::string(w.substr(from)); }

// Prefix disambiguation rules. Each returns the candidate stem or nullopt.
// Names follow the conventional rule numbering of the confix-stripping
// literature.
inline Str r1a(std::string_view w) { return starts(w, "ber") && is_vowel(at(w, 3)) ? Str(tail(w, 3)) : std::nullopt; }
inline Str r1b(std::string_view w) { return starts(w, "ber") && is_vowel(at(w, 3)) ? Str("r" + tail(w, 3)) : std::nullopt; }
inline Str r2(std::string_view w) {
  if (!(starts(w, "ber") && is_consonant(at(w, 3)) && is_alpha(at(w, 4)))) return std::nullopt;
  if (starts(w.substr(5), "er")) return std::nullopt;
  return tail(w, 3);
}
inline Str r3(std::string_view w) {
  if (!(starts(w, "ber") && is_consonant(at(w, 3)) && is_alpha(at(w, 4)) && starts(w.substr(5), "er") &&
        is_vowel(at(w, 7))))
    return std::nullopt;
  if (w[3] == 'r') return std::nullopt;
  return tail(w, 3);
}
inline Str r4(std::string_view w) { return w == "belajar" ? Str("ajar") : std::nullopt; }
inline Str r5(std::string_view w) {
  if (starts(w, "be") && in_set(at(w, 2), "bcdfghjklmnpqstvwxyz") && starts(w.substr(3), "er") &&
      is_consonant(at(w, 5)))
    return tail(w, 2);
  return std::nullopt;
}
inline Str r6a(std::string_view w) { return starts(w, "ter") && is_vowel(at(w, 3)) ? Str(tail(w, 3)) : std::nullopt; }
inline Str r6b(std::string_view w) { return starts(w, "ter") && is_vowel(at(w, 3)) ? Str("r" + tail(w, 3)) : std::nullopt; }
inline Str r7(std::string_view w) {
  if (!(starts(w, "ter") && is_consonant(at(w, 3)) && starts(w.substr(4), "er") && is_vowel(at(w, 6))))
    return std::nullopt;
  if (w[3] == 'r') return std::nullopt;
  return tail(w, 3);
}
inline Str r8(std::string_view w) {
  if (!(starts(w, "ter") && is_consonant(at(w, 3)))) return std::nullopt;
  if (w[3] == 'r' || starts(w.substr(4), "er")) return std::nullopt;
  return tail(w, 3);
}
inline Str r9(std::string_view w) {
  if (!(starts(w, "te") && is_consonant(at(w, 2)) && starts(w.substr(3), "er") && is_consonant(at(w, 5))))
    return std::nullopt;
  if (w[2] == 'r') return std::nullopt;
  return tail(w, 2);
}
inline Str r10(std::string_view w) {
  return starts(w, "me") && in_set(at(w, 2), "lrwy") && is_vowel(at(w, 3)) ? Str(tail(w, 2)) : std::nullopt;
}
inline Str r11(std::string_view w) { return starts(w, "mem") && in_set(at(w, 3), "bfv") ? Str(tail(w, 3)) : std::nullopt; }
inline Str r12(std::string_view w) { return starts(w, "mempe") ? Str("pe" + tail(w, 5)) : std::nullopt; }
inline Str r13a(std::string_view w) { return starts(w, "mem") && is_vowel(at(w, 3)) ? Str("m" + tail(w, 3)) : std::nullopt; }
inline Str r13b(std::string_view w) { return starts(w, "mem") && is_vowel(at(w, 3)) ? Str("p" + tail(w, 3)) : std::nullopt; }
inline Str r14(std::string_view w) {
  return starts(w, "men") && in_set(at(w, 3), "cdjstz") ? Str(tail(w, 3)) : std::nullopt;
}
inline Str r15a(std::string_view w) { return starts(w, "men") && is_vowel(at(w, 3)) ? Str("n" + tail(w, 3)) : std::nullopt; }
inline Str r15b(std::string_view w) { return starts(w, "men") && is_vowel(at(w, 3)) ? Str("t" + tail(w, 3)) : std::nullopt; }
// The reference pattern is the character class [g|h|q|k], which also admits '|'.
inline Str r16(std::string_view w) { return starts(w, "meng") && in_set(at(w, 4), "g|hqk") ? Str(tail(w, 4)) : std::nullopt; }
inline Str r17a(std::string_view w) { return starts(w, "meng") && is_vowel(at(w, 4)) ? Str(tail(w, 4)) : std::nullopt; }
inline Str r17b(std::string_view w) { return starts(w, "meng") && is_vowel(at(w, 4)) ? Str("k" + tail(w, 4)) : std::nullopt; }
inline Str r17c(std::string_view w) { return starts(w, "menge") ? Str(tail(w, 5)) : std::nullopt; }
inline Str r17d(std::string_view w) { return starts(w, "meng") && is_vowel(at(w, 4)) ? Str("ng" + tail(w, 4)) : std::nullopt; }
inline Str r18a(std::string_view w) { return starts(w, "meny") && is_vowel(at(w, 4)) ? Str("ny" + tail(w, 4)) : std::nullopt; }
inline Str r18b(std::string_view w) { return starts(w, "meny") && is_vowel(at(w, 4)) ? Str("s" + tail(w, 4)) : std::nullopt; }
inline Str r19(std::string_view w) {
  return starts(w, "memp") && in_set(at(w, 4), "abcdfghijklmopqrstuvwxyz") ? Str(tail(w, 3)) : std::nullopt;
}
inline Str r20(std::string_view w) {
  return starts(w, "pe") && in_set(at(w, 2), "wy") && is_vowel(at(w, 3)) ? Str(tail(w, 2)) : std::nullopt;
}
inline Str r21a(std::string_view w) { return starts(w, "per") && is_vowel(at(w, 3)) ? Str(tail(w, 3)) : std::nullopt; }
inline Str r21b(std::string_view w) { return starts(w, "per") && is_vowel(at(w, 3)) ? Str(tail(w, 2)) : std::nullopt; }
inline Str r23(std::string_view w) {
  if (!(starts(w, "per") && is_consonant(at(w, 3)) && is_alpha(at(w, 4)))) return std::nullopt;
  if (starts(w.substr(5), "er")) return std::nullopt;
  return tail(w, 3);
}
inline Str r24(std::string_view w) {
  if (!(starts(w, "per") && is_consonant(at(w, 3)) && is_alpha(at(w, 4)) && starts(w.substr(5), "er") &&
        is_vowel(at(w, 7))))
    return std::nullopt;
  if (w[3] == 'r') return std::nullopt;
  return tail(w, 3);
}
inline Str r25(std::string_view w) { return starts(w, "pem") && in_set(at(w, 3), "bfv") ? Str(tail(w, 3)) : std::nullopt; }
inline Str r26a(std::string_view w) { return starts(w, "pem") && is_vowel(at(w, 3)) ? Str("m" + tail(w, 3)) : std::nullopt; }
inline Str r26b(std::string_view w) { return starts(w, "pem") && is_vowel(at(w, 3)) ? Str("p" + tail(w, 3)) : std::nullopt; }
inline Str r27(std::string_view w) { return starts(w, "pen") && in_set(at(w, 3), "cdjz") ? Str(tail(w, 3)) : std::nullopt; }
inline Str r28a(std::string_view w) { return starts(w, "pen") && is_vowel(at(w, 3)) ? Str("n" + tail(w, 3)) : std::nullopt; }
inline Str r28b(std::string_view w) { return starts(w, "pen") && is_vowel(at(w, 3)) ? Str("t" + tail(w, 3)) : std::nullopt; }
inline Str r29(std::string_view w) { return starts(w, "peng") && is_consonant(at(w, 4)) ? Str(tail(w, 4)) : std::nullopt; }
inline Str r30a(std::string_view w) { return starts(w, "peng") && is_vowel(at(w, 4)) ? Str(tail(w, 4)) : std::nullopt; }
inline Str r30b(std::string_view w) { return starts(w, "peng") && is_vowel(at(w, 4)) ? Str("k" + tail(w, 4)) : std::nullopt; }
inline Str r30c(std::string_view w) { return starts(w, "penge") ? Str(tail(w, 5)) : std::nullopt; }
inline Str r31a(std::string_view w) { return starts(w, "peny") && is_vowel(at(w, 4)) ? Str("ny" + tail(w, 4)) : std::nullopt; }
inline Str r31b(std::string_view w) { return starts(w, "peny") && is_vowel(at(w, 4)) ? Str("s" + tail(w, 4)) : std::nullopt; }
inline Str r32(std::string_view w) {
  if (w == "pelajar") return "ajar";
  return starts(w, "pel") && is_vowel(at(w, 3)) ? Str(tail(w, 2)) : std::nullopt;
}
inline Str r34(std::string_view w) {
  if (!(starts(w, "pe") && is_consonant(at(w, 2)))) return std::nullopt;
  if (starts(w.substr(3), "er")) return std::nullopt;
  return tail(w, 2);
}
inline Str r35(std::string_view w) {
  if (starts(w, "ter") && in_set(at(w, 3), "bcdfghjkpqstvxz") && starts(w.substr(4), "er") && is_consonant(at(w, 6)))
    return tail(w, 3);
  return std::nullopt;
}
inline Str r36(std::string_view w) {
  if (starts(w, "pe") && in_set(at(w, 2), "bcdfghjkpqstvxz") && starts(w.substr(3), "er") && is_consonant(at(w, 5)))
    return tail(w, 2);
  return std::nullopt;
}
// Infix rules: CerV, CelV, CemV, CinV. The "a" variants keep the word as is.
template <char A, char B>
Str infix_keep(std::string_view w) {
  if (is_consonant(at(w, 0)) && at(w, 1) == A && at(w, 2) == B && is_vowel(at(w, 3))) return std::string(w);
  return std::nullopt;
}
template <char A, char B>
Str infix_drop(std::string_view w) {
  if (is_consonant(at(w, 0)) && at(w, 1) == A && at(w, 2) == B && is_vowel(at(w, 3)))
    return std::string(1, w[0]) + tail(w, 3);
  return std::nullopt;
}
inline Str r41(std::string_view w) { return starts(w, "ku") ? Str(tail(w, 2)) : std::nullopt; }
inline Str r42(std::string_view w) { return starts(w, "kau") ? Str(tail(w, 3)) : std::nullopt; }

using RuleGroup = std::vector<Rule>;

inline const std::vector<RuleGroup>& prefix_rule_groups() {
  static const std::vector<RuleGroup> groups = {
      {r1a, r1b}, {r2}, {r3}, {r4}, {r5}, {r6a, r6b}, {r7}, {r8}, {r9}, {r10}, {r11}, {r12}, {r13a, r13b},
      {r14}, {r15a, r15b}, {r16}, {r17a, r17b, r17c, r17d}, {r18a, r18b}, {r19}, {r20}, {r21a, r21b},
      {r23}, {r24}, {r25}, {r26a, r26b}, {r27}, {r28a, r28b}, {r29}, {r30a, r30b, r30c}, {r31a, r31b},
      {r32}, {r34}, {r35}, {r36},
      {infix_keep<'e', 'r'>, infix_drop<'e', 'r'>}, {infix_keep<'e', 'l'>, infix_drop<'e', 'l'>},
      {infix_keep<'e', 'm'>, infix_drop<'e', 'm'>}, {infix_keep<'i', 'n'>, infix_drop<'i', 'n'>},
      {r41}, {r42}};
  return groups;
}

// Strips `-*(alt)$` for the first alternative that ends the word, returning
// the remaining word (unchanged when nothing matches).
inline std::string strip_suffix(std::string_view w, std::initializer_list<std::string_view> alts, bool hyphens) {
  // Leftmost match of an alternation anchored at $ is the longest alternative
  // that is a suffix, plus any hyphens directly in front of it.
  std::size_t best = std::string_view::npos;
  for (auto a : alts)
    if (w.size() >= a.size() && w.substr(w.size() - a.size()) == a) best = std::min(best, w.size() - a.size());
  if (best == std::string_view::npos) return std::string(w);
  if (hyphens)
    while (best > 0 && w[best - 1] == '-') --best;
  return std::string(w.substr(0, best));
}

// Stemming state for one word, mirroring the reference visitor pipeline.
class Context {
 public:
  Context(std::string_view word, const RootDictionary& dict) : original_(word), current_(word), dict_(dict) {}

  std::string run() {
    process();
    return in_dict() ? current_ : original_;
  }

 private:
  bool in_dict() const { return dict_.contains(current_); }

  void add_removal(const std::string& result, AffixType type) {
    std::string removed = current_;
    if (auto pos = removed.find(result); pos != std::string::npos) removed.erase(pos, result.size());
    removals_.push_back({current_, result, std::move(removed), type});
    current_ = result;
  }

  void visit_particle() {
    auto r = strip_suffix(current_, {"lah", "kah", "tah", "pun"}, true);
    if (r != current_) add_removal(r, AffixType::Particle);
  }
  void visit_possessive() {
    auto r = strip_suffix(current_, {"ku", "mu", "nya"}, true);
    if (r != current_) add_removal(r, AffixType::Possessive);
  }
  void visit_derivational_suffix() {
    auto r = strip_suffix(current_, {"is", "isme", "isasi", "i", "kan", "an"}, false);
    if (r != current_) add_removal(r, AffixType::DerivationalSuffix);
  }
  void visit_plain_prefix() {
    if (starts(current_, "di") || starts(current_, "ke") || starts(current_, "se"))
      add_removal(current_.substr(2), AffixType::DerivationalPrefix);
  }
  void visit_rule_group(const RuleGroup& group) {
    Str result;
    for (Rule rule : group) {
      result = rule(current_);
      if (result && dict_.contains(*result)) break;
    }
    if (!result || result->empty()) return;
    add_removal(*result, AffixType::DerivationalPrefix);
  }

  void remove_suffixes() {
    visit_particle();
    if (in_dict() || stopped_) return;
    visit_possessive();
    if (in_dict() || stopped_) return;
    visit_derivational_suffix();
  }

  void prefix_round() {
    const std::size_t before = removals_.size();
    visit_plain_prefix();
    if (in_dict() || stopped_ || removals_.size() > before) return;
    for (const auto& group : prefix_rule_groups()) {
      visit_rule_group(group);
      if (in_dict() || removals_.size() > before) return;
    }
  }

  void remove_prefixes() {
    for (int i = 0; i < 3; ++i) {
      prefix_round();
      if (in_dict()) return;
    }
  }

  static bool precedence_adjusted(std::string_view w) {
    auto confix = [&](std::string_view pre, std::string_view suf) {
      return w.size() >= pre.size() + suf.size() && starts(w, pre) && w.substr(w.size() - suf.size()) == suf;
    };
    return confix("be", "lah") || confix("be", "an") || confix("me", "i") || confix("di", "i") || confix("pe", "i") ||
           confix("ter", "i");
  }

  void process() {
    if (in_dict()) return;
    // Words of three letters or fewer stop each visitor chain after its first
    // step (the reference short-word guard).
    if (current_.size() <= 3) stopped_ = true;
    if (in_dict()) return;

    if (precedence_adjusted(original_)) {
      remove_prefixes();
      if (in_dict()) return;
      remove_suffixes();
      if (in_dict()) return;
      current_ = original_;
      removals_.clear();
    }
    remove_suffixes();
    if (in_dict()) return;
    remove_prefixes();
    if (in_dict()) return;
    restore_suffixes();
  }

  static bool is_suffix(AffixType t) { return t != AffixType::DerivationalPrefix; }

  // Put removed suffixes back one at a time (newest first) and retry prefix
  // removal on each intermediate form.
  void restore_suffixes() {
    if (!removals_.empty()) current_ = removals_.front().subject;
    // Drops prefix removals, skipping the entry after each erase exactly as
    // the reference does when it mutates the list it iterates.
    for (std::size_t i = 0; i < removals_.size(); ++i)
      if (removals_[i].type == AffixType::DerivationalPrefix) removals_.erase(removals_.begin() + static_cast<long>(i));

    const std::string saved = current_;
    for (std::size_t idx = removals_.size(); idx-- > 0;) {
      const Removal r = removals_[idx];
      if (!is_suffix(r.type)) continue;
      if (r.removed_part == "kan") {
        current_ = r.result + "k";
        remove_prefixes();
        if (in_dict()) return;
        current_ = r.result + "kan";
      } else {
        current_ = r.subject;
      }
      remove_prefixes();
      if (in_dict()) return;
      current_ = saved;
    }
  }

  std::string original_;
  std::string current_;
  const RootDictionary& dict_;
  bool stopped_ = false;
  std::vector<Removal> removals_;
};

}  // namespace stemmer_detail

inline std::string stem_singular(std::string_view word, const RootDictionary& roots) {
  return stemmer_detail::Context(word, roots).run();
}

// Reduplicated forms ("anak-anak", "berbalas-balasan") stem both halves and
// collapse when they agree.
inline std::string stem_plural(std::string_view word, const RootDictionary& roots) {
  const auto last = word.rfind('-');
  if (last == std::string_view::npos) return std::string(word);
  std::string first(word.substr(0, last));
  std::string second(word.substr(last + 1));
  static constexpr std::array<std::string_view, 7> kSuffixes{"ku", "mu", "nya", "lah", "kah", "tah", "pun"};
  if (std::find(kSuffixes.begin(), kSuffixes.end(), second) != kSuffixes.end()) {
    if (auto inner = first.rfind('-'); inner != std::string::npos) {
      second = first.substr(inner + 1) + "-" + second;
      first = first.substr(0, inner);
    }
  }
  const std::string root1 = stem_singular(first, roots);
  std::string root2 = stem_singular(second, roots);
  if (!roots.contains(second) && root2 == second) root2 = stem_singular("me" + second, roots);
  return root1 == root2 ? root1 : std::string(word);
}

inline bool is_plural(std::string_view word) {
  const auto last = word.rfind('-');
  if (last == std::string_view::npos) return false;
  static constexpr std::array<std::string_view, 7> kSuffixes{"ku", "mu", "nya", "lah", "kah", "tah", "pun"};
  const auto suffix = word.substr(last + 1);
  if (std::find(kSuffixes.begin(), kSuffixes.end(), suffix) != kSuffixes.end())
    return word.substr(0, last).find('-') != std::string_view::npos;
  return true;
}

inline std::string stem(std::string_view word, const RootDictionary& roots) {
  return is_plural(word) ? stem_plural(word, roots) : stem_singular(word, roots);
}

}  // namespace senti::preprocess
