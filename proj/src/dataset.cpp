#include "hdcx/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <string_view>

#include "hdcx/errors.hpp"

namespace hdcx {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Splits one record. Double-quoted fields may contain the delimiter; a
// doubled quote inside them is a literal quote.
std::vector<std::string> split_record(std::string_view line, char delimiter) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        current.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delimiter) {
      fields.emplace_back(trim(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  fields.emplace_back(trim(current));
  return fields;
}

bool parse_double(std::string_view text, double& out) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(out);
}

}  // namespace

Dataset load_csv(const DatasetSpec& spec) {
  std::ifstream in(spec.path);
  if (!in) throw DataError("cannot open data file '" + spec.path.string() + "'");

  std::string line;
  if (!std::getline(in, line)) throw DataError("data file '" + spec.path.string() + "' is empty");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const auto header = split_record(line, spec.delimiter);

  const auto column_of = [&](const std::string& name) -> std::size_t {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw DataError("column '" + name + "' not found in header");
    return static_cast<std::size_t>(it - header.begin());
  };

  const bool has_label = !spec.label_column.empty();
  const std::size_t label_col = has_label ? column_of(spec.label_column) : header.size();
  std::vector<std::size_t> feature_cols;
  Dataset ds;
  if (spec.feature_columns.empty()) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c == label_col) continue;
      feature_cols.push_back(c);
      ds.feature_names.push_back(header[c]);
    }
  } else {
    for (const auto& name : spec.feature_columns) {
      if (name == spec.label_column) throw DataError("label column '" + name + "' cannot also be a feature");
      feature_cols.push_back(column_of(name));
      ds.feature_names.push_back(name);
    }
  }
  if (feature_cols.empty()) throw DataError("no feature columns");

  std::vector<double> values;
  std::size_t row = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_record(line, spec.delimiter);
    if (fields.size() != header.size()) {
      throw DataError("row " + std::to_string(row + 1) + " (line " + std::to_string(line_no) + ") has " +
                      std::to_string(fields.size()) + " fields, header has " + std::to_string(header.size()));
    }
    if (has_label) {
      if (fields[label_col].empty()) {
        throw DataError("row " + std::to_string(row + 1) + ", column '" + header[label_col] + "': empty label");
      }
      ds.labels.push_back(fields[label_col]);
    }
    for (auto c : feature_cols) {
      double v = 0.0;
      if (!parse_double(fields[c], v)) {
        throw DataError("row " + std::to_string(row + 1) + ", column '" + header[c] + "': cannot parse '" +
                        fields[c] + "' as a finite number");
      }
      values.push_back(v);
    }
    ++row;
  }
  if (row == 0) throw DataError("data file '" + spec.path.string() + "' has no data rows");

  ds.features = Matrix(row, feature_cols.size());
  for (std::size_t r = 0; r < row; ++r) {
    std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(r * feature_cols.size()), feature_cols.size(),
                ds.features.row(r).begin());
  }
  return ds;
}

void require_trainable(const Dataset& data) {
  if (data.labels.size() != data.rows()) throw DataError("dataset has no label column");
  if (data.features.cols() == 0) throw DataError("dataset has no feature columns");
  if (encode_labels(data.labels).names.size() < 2) throw DataError("dataset needs at least 2 distinct labels");
}

LabelEncoding encode_labels(const std::vector<std::string>& labels) {
  LabelEncoding enc;
  std::map<std::string, std::size_t> seen;
  enc.index.reserve(labels.size());
  for (const auto& l : labels) {
    const auto [it, inserted] = seen.emplace(l, enc.names.size());
    if (inserted) enc.names.push_back(l);
    enc.index.push_back(it->second);
  }
  return enc;
}

}  // namespace hdcx
