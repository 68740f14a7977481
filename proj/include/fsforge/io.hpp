#pragma once

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fsforge/dataset.hpp"
#include "fsforge/error.hpp"

namespace fsforge {

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

inline std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// Splits one ARFF line on commas. Single or double quotes group, backslash escapes
// inside quotes. Returns trimmed, unquoted tokens.
inline std::vector<std::string> split_arff_fields(std::string_view line, std::size_t line_no) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted_token = false;
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quote) {
      if (c == '\\' && i + 1 < line.size()) {
        cur += line[++i];
      } else if (c == quote) {
        quote = 0;
      } else {
        cur += c;
      }
    } else if (c == '\'' || c == '"') {
      quote = c;
      quoted_token = true;
    } else if (c == ',') {
      out.push_back(quoted_token ? cur : std::string(trim(cur)));
      cur.clear();
      quoted_token = false;
    } else if (c == '%') {
      break;
    } else if (!(quoted_token && std::isspace(static_cast<unsigned char>(c)))) {
      cur += c;
    }
  }
  if (quote) throw ParseError(line_no, "unterminated quote");
  out.push_back(quoted_token ? cur : std::string(trim(cur)));
  return out;
}

// Reads one (possibly quoted) word from the front of s, advancing s past it.
inline std::string take_word(std::string_view& s, std::size_t line_no) {
  s = trim(s);
  if (s.empty()) throw ParseError(line_no, "expected a name");
  std::string word;
  if (s.front() == '\'' || s.front() == '"') {
    const char q = s.front();
    std::size_t i = 1;
    for (; i < s.size() && s[i] != q; ++i) {
      if (s[i] == '\\' && i + 1 < s.size()) ++i;
      word += s[i];
    }
    if (i >= s.size()) throw ParseError(line_no, "unterminated quoted name");
    s.remove_prefix(i + 1);
  } else {
    std::size_t i = 0;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) && s[i] != '{') ++i;
    word = std::string(s.substr(0, i));
    s.remove_prefix(i);
  }
  return word;
}

inline std::string quote_if_needed(const std::string& s) {
  const bool plain = !s.empty() && std::none_of(s.begin(), s.end(), [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == '\'' || c == '"' ||
           c == '{' || c == '}' || c == '%' || c == '\\';
  }) && s != "?";
  if (plain) return s;
  std::string out = "'";
  for (char c : s) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  return out + "'";
}

}  // namespace detail

struct ArffOptions {
  // Position of the class attribute among all declared attributes; empty means last.
  std::optional<std::size_t> class_index;
};

/// Parses the dense ARFF subset: @relation, nominal and numeric @attribute
/// declarations, @data rows separated by ',', '?' for missing, '%' comments.
inline Dataset load_arff(std::istream& in, const ArffOptions& options = {}) {
  std::string relation = "unnamed";
  std::vector<AttributeSpec> attrs;
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> row_lines;
  bool in_data = false;
  std::string raw;
  std::size_t line_no = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = detail::trim(raw);
    if (line.empty() || line.front() == '%') continue;
    if (!in_data) {
      if (line.front() != '@') throw ParseError(line_no, "expected a header declaration");
      std::string_view rest = line;
      std::string keyword = detail::lower(detail::take_word(rest, line_no));
      if (keyword == "@relation") {
        relation = detail::take_word(rest, line_no);
      } else if (keyword == "@attribute") {
        std::string name = detail::take_word(rest, line_no);
        rest = detail::trim(rest);
        if (rest.empty()) throw ParseError(line_no, "attribute '" + name + "' has no type");
        if (rest.front() == '{') {
          auto close = rest.rfind('}');
          if (close == std::string_view::npos) {
            throw ParseError(line_no, "unterminated nominal domain for '" + name + "'");
          }
          auto values = detail::split_arff_fields(rest.substr(1, close - 1), line_no);
          if (values.size() == 1 && values[0].empty()) {
            throw ParseError(line_no, "empty nominal domain for '" + name + "'");
          }
          attrs.push_back(AttributeSpec::make_nominal(std::move(name), std::move(values)));
        } else {
          std::string type = detail::lower(detail::take_word(rest, line_no));
          if (type != "numeric" && type != "real" && type != "integer") {
            throw ParseError(line_no, "unsupported attribute type '" + type + "'");
          }
          attrs.push_back(AttributeSpec::make_numeric(std::move(name)));
        }
      } else if (keyword == "@data") {
        if (attrs.size() < 2) throw ParseError(line_no, "need at least one attribute plus a class");
        in_data = true;
      } else {
        throw ParseError(line_no, "unknown declaration '" + keyword + "'");
      }
      continue;
    }
    if (line.front() == '{') throw ParseError(line_no, "sparse ARFF rows are not supported");
    auto fields = detail::split_arff_fields(line, line_no);
    if (fields.size() != attrs.size()) {
      throw ParseError(line_no, "row has " + std::to_string(fields.size()) + " values, expected " +
                                    std::to_string(attrs.size()));
    }
    std::vector<double> cells(attrs.size(), kMissing);
    for (std::size_t j = 0; j < attrs.size(); ++j) {
      const std::string& f = fields[j];
      if (f == "?") continue;
      if (attrs[j].is_nominal()) {
        auto it = std::find(attrs[j].values.begin(), attrs[j].values.end(), f);
        if (it == attrs[j].values.end()) {
          throw ParseError(line_no, "unknown value '" + f + "' for attribute '" + attrs[j].name + "'");
        }
        cells[j] = static_cast<double>(it - attrs[j].values.begin());
      } else {
        auto v = detail::parse_number(f);
        if (!v) throw ParseError(line_no, "'" + f + "' is not numeric");
        cells[j] = *v;
      }
    }
    rows.push_back(std::move(cells));
    row_lines.push_back(line_no);
  }
  if (!in_data) throw ParseError(line_no, "missing @data section");

  const std::size_t ci = options.class_index.value_or(attrs.size() - 1);
  if (ci >= attrs.size()) throw ConfigError("class index out of range");
  if (!attrs[ci].is_nominal()) throw DataError("class attribute '" + attrs[ci].name + "' must be nominal");

  AttributeSpec class_attr = attrs[ci];
  attrs.erase(attrs.begin() + static_cast<std::ptrdiff_t>(ci));
  std::vector<Instance> instances;
  instances.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const double label = rows[r][ci];
    if (is_missing(label)) throw ParseError(row_lines[r], "missing class value");
    rows[r].erase(rows[r].begin() + static_cast<std::ptrdiff_t>(ci));
    instances.push_back({std::move(rows[r]), nominal_index(label), Origin::original});
  }
  return Dataset(relation, std::move(attrs), std::move(class_attr.values), std::move(instances),
                 class_attr.name);
}

inline Dataset load_arff(const std::string& text, const ArffOptions& options = {}) {
  std::istringstream in(text);
  return load_arff(in, options);
}

// Writes the dataset as ARFF with the class attribute last.
inline void write_arff(std::ostream& out, const Dataset& d) {
  out << "@relation " << detail::quote_if_needed(d.relation()) << "\n\n";
  auto write_domain = [&](const std::vector<std::string>& values) {
    out << '{';
    for (std::size_t v = 0; v < values.size(); ++v) {
      if (v) out << ',';
      out << detail::quote_if_needed(values[v]);
    }
    out << '}';
  };
  for (const auto& a : d.schema()) {
    out << "@attribute " << detail::quote_if_needed(a.name) << ' ';
    if (a.is_nominal()) {
      write_domain(a.values);
    } else {
      out << "numeric";
    }
    out << '\n';
  }
  out << "@attribute " << detail::quote_if_needed(d.class_name()) << ' ';
  write_domain(d.class_domain());
  out << "\n\n@data\n";
  for (const auto& inst : d.instances()) {
    for (std::size_t j = 0; j < d.num_attributes(); ++j) {
      const double v = inst.values[j];
      if (is_missing(v)) {
        out << '?';
      } else if (d.attribute(j).is_nominal()) {
        out << detail::quote_if_needed(d.attribute(j).values[nominal_index(v)]);
      } else {
        out << detail::format_number(v);
      }
      out << ',';
    }
    out << detail::quote_if_needed(d.class_domain()[inst.label]) << '\n';
  }
}

inline std::string to_arff(const Dataset& d) {
  std::ostringstream out;
  write_arff(out, d);
  return out.str();
}

struct CsvOptions {
  std::size_t class_column = 0;
  // Per-column kinds; columns without an entry are inferred. The class column is always nominal.
  std::map<std::size_t, AttributeKind> declared_kinds;
  bool header = true;
  // Treat every undeclared column as nominal instead of inferring.
  bool all_nominal = false;
};

namespace detail {

// RFC-4180 records: '"' quotes, '""' escapes, quoted fields may span lines.
inline std::vector<std::vector<std::string>> read_csv_records(std::istream& in,
                                                              std::vector<std::size_t>& lines) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  std::size_t line = 1;
  std::size_t record_line = 1;
  char c;
  auto end_record = [&] {
    record.push_back(field);
    field.clear();
    const bool blank = record.size() == 1 && record[0].empty() && !field_started;
    if (!blank) {
      records.push_back(std::move(record));
      lines.push_back(record_line);
    }
    record.clear();
    field_started = false;
  };
  while (in.get(c)) {
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      record.push_back(field);
      field.clear();
      field_started = true;
    } else if (c == '\r') {
      continue;
    } else if (c == '\n') {
      end_record();
      record_line = ++line;
    } else {
      field += c;
      field_started = true;
    }
  }
  if (quoted) throw ParseError(line, "unterminated quoted field");
  if (field_started || !field.empty() || !record.empty()) end_record();
  return records;
}

// Domain order for a nominal column: numeric order when every symbol is a
// number (so integer-coded categories come out as 0,1,2,...), otherwise first appearance.
inline std::vector<std::string> nominal_domain(const std::vector<std::string>& cells) {
  std::vector<std::string> domain;
  for (const auto& c : cells) {
    if (c == "?" || c.empty()) continue;
    if (std::find(domain.begin(), domain.end(), c) == domain.end()) domain.push_back(c);
  }
  const bool numeric = std::all_of(domain.begin(), domain.end(),
                                   [](const std::string& s) { return parse_number(s).has_value(); });
  if (numeric) {
    std::stable_sort(domain.begin(), domain.end(), [](const std::string& a, const std::string& b) {
      return *parse_number(a) < *parse_number(b);
    });
  }
  return domain;
}

}  // namespace detail

/// Loads a rectangular CSV. Undeclared columns are numeric when every
/// non-missing cell parses as a number, else nominal. '?' and empty cells are
/// missing.
inline Dataset load_csv(std::istream& in, const CsvOptions& options = {}) {
  std::vector<std::size_t> lines;
  auto records = detail::read_csv_records(in, lines);
  if (records.empty()) throw ParseError(1, "empty CSV input");
  const std::size_t width = records.front().size();
  for (std::size_t r = 0; r < records.size(); ++r) {
    if (records[r].size() != width) {
      throw ParseError(lines[r], "row has " + std::to_string(records[r].size()) +
                                     " fields, expected " + std::to_string(width));
    }
  }
  if (options.class_column >= width) throw ConfigError("class column out of range");
  std::vector<std::string> names;
  std::size_t first = 0;
  if (options.header) {
    for (auto& n : records.front()) names.push_back(std::string(detail::trim(n)));
    first = 1;
  } else {
    for (std::size_t j = 0; j < width; ++j) {
      names.push_back(j == options.class_column ? "class" : "a" + std::to_string(j + 1));
    }
  }
  if (records.size() <= first) throw ParseError(lines.back(), "CSV has no data rows");

  std::vector<std::vector<std::string>> columns(width);
  for (std::size_t r = first; r < records.size(); ++r) {
    for (std::size_t j = 0; j < width; ++j) {
      columns[j].push_back(std::string(detail::trim(records[r][j])));
    }
  }
  auto missing = [](const std::string& s) { return s.empty() || s == "?"; };

  std::vector<AttributeSpec> schema(width);
  for (std::size_t j = 0; j < width; ++j) {
    AttributeKind kind;
    if (j == options.class_column) {
      kind = AttributeKind::nominal;
    } else if (auto it = options.declared_kinds.find(j); it != options.declared_kinds.end()) {
      kind = it->second;
    } else if (options.all_nominal) {
      kind = AttributeKind::nominal;
    } else {
      const bool numeric = std::all_of(columns[j].begin(), columns[j].end(), [&](const std::string& s) {
        return missing(s) || detail::parse_number(s).has_value();
      });
      kind = numeric ? AttributeKind::numeric : AttributeKind::nominal;
    }
    if (kind == AttributeKind::numeric) {
      schema[j] = AttributeSpec::make_numeric(names[j]);
    } else {
      std::vector<std::string> domain;
      const bool declared = j == options.class_column || options.all_nominal ||
                            options.declared_kinds.contains(j);
      if (declared) {
        domain = detail::nominal_domain(columns[j]);
      } else {
        for (const auto& c : columns[j]) {
          if (!missing(c) && std::find(domain.begin(), domain.end(), c) == domain.end()) {
            domain.push_back(c);
          }
        }
      }
      if (domain.empty()) throw DataError("column '" + names[j] + "' has no observed values");
      schema[j] = AttributeSpec::make_nominal(names[j], std::move(domain));
    }
  }

  std::vector<Instance> instances;
  for (std::size_t r = 0; r + first < records.size(); ++r) {
    Instance inst;
    for (std::size_t j = 0; j < width; ++j) {
      const std::string& s = columns[j][r];
      double cell = kMissing;
      if (!missing(s)) {
        if (schema[j].is_nominal()) {
          auto& dom = schema[j].values;
          cell = static_cast<double>(std::find(dom.begin(), dom.end(), s) - dom.begin());
        } else {
          auto v = detail::parse_number(s);
          if (!v) throw ParseError(lines[r + first], "'" + s + "' is not numeric");
          cell = *v;
        }
      }
      if (j == options.class_column) {
        if (is_missing(cell)) throw ParseError(lines[r + first], "missing class value");
        inst.label = nominal_index(cell);
      } else {
        inst.values.push_back(cell);
      }
    }
    instances.push_back(std::move(inst));
  }
  AttributeSpec class_attr = schema[options.class_column];
  schema.erase(schema.begin() + static_cast<std::ptrdiff_t>(options.class_column));
  return Dataset("csv", std::move(schema), std::move(class_attr.values), std::move(instances),
                 class_attr.name);
}

inline Dataset load_csv(const std::string& text, const CsvOptions& options = {}) {
  std::istringstream in(text);
  return load_csv(in, options);
}

/// Loader recipe for the raw UCI Lung-Cancer file: headerless CSV, class in
/// column 0, 56 integer-coded predictive attributes. All attributes are
/// nominal unless `numeric` is set.
inline Dataset load_uci_lung_cancer(std::istream& in, bool numeric = false) {
  CsvOptions opts;
  opts.header = false;
  opts.class_column = 0;
  if (numeric) {
    for (std::size_t j = 1; j <= 56; ++j) opts.declared_kinds[j] = AttributeKind::numeric;
  } else {
    opts.all_nominal = true;
  }
  Dataset d = load_csv(in, opts);
  if (d.num_attributes() != 56) {
    throw DataError("expected 56 predictive attributes, found " + std::to_string(d.num_attributes()));
  }
  return d;
}

}  // namespace fsforge
