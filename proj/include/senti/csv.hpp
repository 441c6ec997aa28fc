#pragma once

// Minimal RFC 4180 reader/writer: quoted fields, doubled quotes, embedded
// separators and line breaks, CRLF or LF record endings.

#include <cstddef>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "senti/error.hpp"

namespace senti::csv {

using Row = std::vector<std::string>;

struct Record {
  Row fields;
  std::size_t line = 0;  // 1-based line where the record starts
};

struct Table {
  Row header;
  std::vector<Record> rows;

  std::optional<std::size_t> column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    return std::nullopt;
  }
};

inline std::vector<Record> parse_records(std::string_view text) {
  std::vector<Record> out;
  std::size_t i = 0;
  std::size_t line = 1;
  // A UTF-8 BOM in front of the header is tolerated.
  if (text.substr(0, 3) == "\xEF\xBB\xBF") i = 3;
  while (i < text.size()) {
    Record rec;
    rec.line = line;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    for (;;) {
      if (i >= text.size()) {
        if (quoted) throw InputError("csv: unterminated quoted field starting on line " + std::to_string(rec.line));
        rec.fields.push_back(std::move(field));
        break;
      }
      char c = text[i];
      if (quoted) {
        if (c == '"') {
          if (i + 1 < text.size() && text[i + 1] == '"') {
            field.push_back('"');
            i += 2;
          } else {
            quoted = false;
            ++i;
          }
        } else {
          if (c == '\n') ++line;
          field.push_back(c);
          ++i;
        }
        continue;
      }
      if (c == '"' && !field_started) {
        quoted = true;
        field_started = true;
        ++i;
      } else if (c == ',') {
        rec.fields.push_back(std::move(field));
        field.clear();
        field_started = false;
        ++i;
      } else if (c == '\r' || c == '\n') {
        rec.fields.push_back(std::move(field));
        if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
        ++i;
        ++line;
        break;
      } else {
        field.push_back(c);
        field_started = true;
        ++i;
      }
    }
    // Skip blank lines entirely.
    if (rec.fields.size() == 1 && rec.fields[0].empty()) continue;
    out.push_back(std::move(rec));
  }
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline Table read_table(const std::string& path) {
  auto records = parse_records(read_file(path));
  Table t;
  if (records.empty()) throw InputError("csv: missing header row in " + path);
  t.header = std::move(records.front().fields);
  t.rows.assign(std::make_move_iterator(records.begin() + 1), std::make_move_iterator(records.end()));
  return t;
}

inline std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline void write_row(std::ostream& os, const Row& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) os << ',';
    os << escape(row[i]);
  }
  os << '\n';
}

inline void write_table(const std::string& path, const Table& t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write file: " + path);
  write_row(out, t.header);
  for (const auto& r : t.rows) write_row(out, r.fields);
}

}  // namespace senti::csv
