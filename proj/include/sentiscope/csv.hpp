#pragma once

// Minimal RFC 4180 reader/writer. Fields may be quoted; quoted fields may
// contain commas, CRLF/LF and doubled quotes.

#include <charconv>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace sentiscope::csv {

struct Row {
  std::vector<std::string> fields;
  bool well_formed = true;  // false on an unterminated quote or stray quote
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  /// Reads the next record; std::nullopt at end of input.
  std::optional<Row> next() {
    if (in_.peek() == std::char_traits<char>::eof()) return std::nullopt;

    Row row;
    std::string field;
    bool in_quotes = false;
    bool field_was_quoted = false;
    char c = 0;
    while (in_.get(c)) {
      if (in_quotes) {
        if (c == '"') {
          if (in_.peek() == '"') {
            in_.get(c);
            field.push_back('"');
          } else {
            in_quotes = false;
          }
        } else {
          field.push_back(c);
        }
        continue;
      }
      if (c == '"') {
        if (field.empty() && !field_was_quoted) {
          in_quotes = true;
          field_was_quoted = true;
        } else {
          row.well_formed = false;
          field.push_back(c);
        }
      } else if (c == ',') {
        row.fields.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
      } else if (c == '\r') {
        if (in_.peek() == '\n') in_.get(c);
        row.fields.push_back(std::move(field));
        return row;
      } else if (c == '\n') {
        row.fields.push_back(std::move(field));
        return row;
      } else {
        if (field_was_quoted) row.well_formed = false;
        field.push_back(c);
      }
    }
    if (in_quotes) row.well_formed = false;
    row.fields.push_back(std::move(field));
    return row;
  }

 private:
  std::istream& in_;
};

/// Shortest round-trip decimal form of `v`; identical bytes on every run.
inline std::string number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline bool needs_quoting(std::string_view field) {
  return field.find_first_of(",\"\r\n") != std::string_view::npos;
}

inline std::string escape(std::string_view field) {
  if (!needs_quoting(field)) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

/// Writes one record terminated by CRLF, as RFC 4180 prescribes.
inline void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << escape(fields[i]);
  }
  out << "\r\n";
}

}  // namespace sentiscope::csv
