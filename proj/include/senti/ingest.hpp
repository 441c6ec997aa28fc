#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "senti/csv.hpp"
#include "senti/error.hpp"
#include "senti/label.hpp"
#include "senti/random.hpp"

namespace senti::ingest {

struct LabeledComment {
  std::string id;
  std::string source;
  std::string text;
  Label label = Label::Unlabeled;
};

// Records plus per-label tallies, indexed by Label (Negative, Positive, Unlabeled).
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<LabeledComment> records) : records_(std::move(records)) { recount(); }

  void add(LabeledComment c) {
    ++counts_[static_cast<std::size_t>(c.label)];
    records_.push_back(std::move(c));
  }

  const std::vector<LabeledComment>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const LabeledComment& operator[](std::size_t i) const { return records_[i]; }

  std::size_t count(Label l) const { return counts_[static_cast<std::size_t>(l)]; }
  std::size_t labeled_count() const { return count(Label::Negative) + count(Label::Positive); }

  // Keeps only labeled records, in order.
  Dataset labeled_only() const {
    Dataset out;
    for (const auto& r : records_)
      if (r.label != Label::Unlabeled) out.add(r);
    return out;
  }

 private:
  void recount() {
    counts_.fill(0);
    for (const auto& r : records_) ++counts_[static_cast<std::size_t>(r.label)];
  }

  std::vector<LabeledComment> records_;
  std::array<std::size_t, 3> counts_{};
};

struct CsvSchema {
  std::string id = "id";
  std::string source = "source";  // optional column
  std::string text = "text";
  std::string label = "label";
};

enum class ParseMode { Strict, Lenient };

struct RowIssue {
  std::size_t line;
  std::string reason;
};

namespace detail {

inline bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace detail

// Builds a Dataset from an already parsed table. Row problems throw in strict
// mode; in lenient mode the row is skipped and reported through `skipped`.
inline Dataset from_table(const csv::Table& table, const CsvSchema& schema = {},
                          ParseMode mode = ParseMode::Strict, std::vector<RowIssue>* skipped = nullptr) {
  auto require = [&](const std::string& name) {
    auto c = table.column(name);
    if (!c) throw InputError("csv: missing column '" + name + "'");
    return *c;
  };
  const std::size_t id_col = require(schema.id);
  const std::size_t text_col = require(schema.text);
  const std::size_t label_col = require(schema.label);
  const auto source_col = table.column(schema.source);

  Dataset ds;
  for (const auto& rec : table.rows) {
    std::string reason;
    const auto& f = rec.fields;
    std::optional<Label> label;
    if (f.size() != table.header.size()) {
      reason = "expected " + std::to_string(table.header.size()) + " fields, found " + std::to_string(f.size());
    } else if (!(label = parse_label(f[label_col]))) {
      reason = "invalid label '" + f[label_col] + "'";
    } else if (*label != Label::Unlabeled && detail::blank(f[text_col])) {
      reason = "labeled record with empty text";
    }
    if (!reason.empty()) {
      if (mode == ParseMode::Strict)
        throw InputError("csv: unparseable row at line " + std::to_string(rec.line) + ": " + reason);
      if (skipped) skipped->push_back({rec.line, reason});
      continue;
    }
    ds.add({f[id_col], source_col ? f[*source_col] : std::string{}, f[text_col], *label});
  }
  return ds;
}

inline Dataset load_csv(const std::string& path, const CsvSchema& schema = {}, ParseMode mode = ParseMode::Strict,
                        std::vector<RowIssue>* skipped = nullptr) {
  return from_table(csv::read_table(path), schema, mode, skipped);
}

inline csv::Table to_table(const Dataset& ds) {
  csv::Table t;
  t.header = {"id", "source", "text", "label"};
  for (const auto& r : ds.records()) t.rows.push_back({{r.id, r.source, r.text, std::string(to_string(r.label))}});
  return t;
}

inline void save_csv(const std::string& path, const Dataset& ds) { csv::write_table(path, to_table(ds)); }

struct ClassDistribution {
  double negative = 0.0;
  double positive = 0.0;
};

inline ClassDistribution class_distribution(const Dataset& ds) {
  const std::size_t n = ds.labeled_count();
  if (n == 0) throw InputError("class_distribution: dataset has no labeled records");
  const double neg = static_cast<double>(ds.count(Label::Negative)) / static_cast<double>(n);
  return {neg, static_cast<double>(ds.count(Label::Positive)) / static_cast<double>(n)};
}

struct SplitSpec {
  double train_fraction = 0.70;
  double val_fraction = 0.15;
  double test_fraction = 0.15;
  std::uint64_t seed = 42;

  std::array<double, 3> fractions() const { return {train_fraction, val_fraction, test_fraction}; }
};

struct Split {
  Dataset train;
  Dataset val;
  Dataset test;
};

inline void validate(const SplitSpec& spec) {
  double sum = 0.0;
  for (double f : spec.fractions()) {
    if (!(f >= 0.0 && f <= 1.0)) throw InputError("split fractions must lie in [0, 1]");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw InputError("split fractions must sum to 1");
}

namespace detail {

// floor and fractional part of a quota, snapping values within 1e-9 of an
// integer (e.g. 790 * 0.7 evaluates to 552.99999999999994).
inline std::pair<std::size_t, double> quota_parts(double q) {
  const double r = std::round(q);
  if (std::abs(q - r) <= 1e-9 * std::max(1.0, std::abs(q))) return {static_cast<std::size_t>(r), 0.0};
  const double f = std::floor(q);
  return {static_cast<std::size_t>(f), q - f};
}

}  // namespace detail

// Largest-remainder apportionment of `total` units over `fractions`.
// Returns per-split counts summing to `total`. Equal remainders go to the
// later split first.
inline std::array<std::size_t, 3> apportion(std::size_t total, const std::array<double, 3>& fractions) {
  std::array<std::size_t, 3> out{};
  std::array<double, 3> rem{};
  std::size_t assigned = 0;
  for (std::size_t s = 0; s < 3; ++s) {
    std::tie(out[s], rem[s]) = detail::quota_parts(static_cast<double>(total) * fractions[s]);
    assigned += out[s];
  }
  std::array<std::size_t, 3> order{2, 1, 0};
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rem[a] > rem[b] + 1e-9; });
  for (std::size_t k = 0; assigned < total; ++k, ++assigned) ++out[order[k % 3]];
  return out;
}

// Per-class split sizes. Each class is apportioned by largest remainder;
// when a class has tied remainders, the leftover unit goes to the split whose
// running total is furthest below its own largest-remainder target, then to
// the later split. This keeps both per-class and per-split sizes within one
// unit of their exact quotas.
inline std::array<std::array<std::size_t, 3>, kNumClasses> allocate(const std::array<std::size_t, kNumClasses>& class_sizes,
                                                                     const std::array<double, 3>& fractions) {
  std::size_t total = 0;
  for (auto n : class_sizes) total += n;
  const auto target = apportion(total, fractions);

  std::array<std::array<std::size_t, 3>, kNumClasses> alloc{};
  std::array<std::array<double, 3>, kNumClasses> rem{};
  std::array<std::size_t, 3> column{};
  for (std::size_t k = 0; k < kNumClasses; ++k) {
    for (std::size_t s = 0; s < 3; ++s) {
      std::tie(alloc[k][s], rem[k][s]) = detail::quota_parts(static_cast<double>(class_sizes[k]) * fractions[s]);
      column[s] += alloc[k][s];
    }
  }
  for (std::size_t k = 0; k < kNumClasses; ++k) {
    std::size_t assigned = alloc[k][0] + alloc[k][1] + alloc[k][2];
    while (assigned < class_sizes[k]) {
      std::size_t best = 3;
      for (std::size_t s : {std::size_t{2}, std::size_t{1}, std::size_t{0}}) {
        if (best == 3) {
          best = s;
          continue;
        }
        const double dr = rem[k][s] - rem[k][best];
        const auto deficit = [&](std::size_t x) {
          return static_cast<long long>(target[x]) - static_cast<long long>(column[x]);
        };
        if (dr > 1e-9 || (std::abs(dr) <= 1e-9 && deficit(s) > deficit(best))) best = s;
      }
      ++alloc[k][best];
      ++column[best];
      rem[k][best] = -1.0;  // one unit per split at most
      ++assigned;
    }
  }
  return alloc;
}

// Row indices of the train, validation and test parts, each ascending.
inline std::array<std::vector<std::size_t>, 3> stratified_split_indices(const Dataset& ds, const SplitSpec& spec) {
  validate(spec);
  if (ds.count(Label::Unlabeled) != 0) throw InputError("stratified_split: every record must be labeled");
  const auto fr = spec.fractions();
  const auto nonzero = static_cast<std::size_t>(std::count_if(fr.begin(), fr.end(), [](double f) { return f > 0.0; }));

  std::array<std::vector<std::size_t>, kNumClasses> members;
  for (std::size_t i = 0; i < ds.size(); ++i) members[class_index(ds[i].label)].push_back(i);
  std::array<std::size_t, kNumClasses> sizes{};
  for (std::size_t k = 0; k < kNumClasses; ++k) {
    sizes[k] = members[k].size();
    if (sizes[k] > 0 && sizes[k] < nonzero)
      throw InputError("stratified_split: class '" + std::string(to_string(label_from_index(k))) + "' has " +
                       std::to_string(sizes[k]) + " records, fewer than the " + std::to_string(nonzero) +
                       " nonzero splits");
  }
  const auto alloc = allocate(sizes, fr);

  Rng rng(spec.seed);
  std::array<std::vector<std::size_t>, 3> picked;
  for (std::size_t k = 0; k < kNumClasses; ++k) {
    shuffle(std::span<std::size_t>(members[k]), rng);
    std::size_t pos = 0;
    for (std::size_t s = 0; s < 3; ++s)
      for (std::size_t j = 0; j < alloc[k][s]; ++j) picked[s].push_back(members[k][pos++]);
  }
  for (auto& p : picked) std::sort(p.begin(), p.end());
  return picked;
}

// Per-class shuffled allocation; each part keeps the original record order.
inline Split stratified_split(const Dataset& ds, const SplitSpec& spec) {
  const auto idx = stratified_split_indices(ds, spec);
  std::array<Dataset, 3> out;
  for (std::size_t s = 0; s < 3; ++s)
    for (auto i : idx[s]) out[s].add(ds[i]);
  return {std::move(out[0]), std::move(out[1]), std::move(out[2])};
}

}  // namespace senti::ingest
