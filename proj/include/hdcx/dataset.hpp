#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "hdcx/matrix.hpp"

namespace hdcx {

struct DatasetSpec {
  std::filesystem::path path;
  // Empty when the file carries no labels (prediction input).
  std::string label_column;
  // Empty means every column except the label, in file order.
  std::vector<std::string> feature_columns;
  char delimiter = ',';
};

struct Dataset {
  Matrix features;
  std::vector<std::string> feature_names;
  std::vector<std::string> labels;  // raw label strings, one per row; empty if unlabeled

  std::size_t rows() const noexcept { return features.rows(); }
};

// Parses a delimited text file with a mandatory header row. Feature cells
// are read as doubles with '.' as the decimal separator. Throws DataError
// naming the row and column of any bad cell.
Dataset load_csv(const DatasetSpec& spec);

// Throws DataError unless every row is labeled and at least two distinct
// labels occur.
void require_trainable(const Dataset& data);

// Label strings mapped to dense class indices, ordered by first appearance.
struct LabelEncoding {
  std::vector<std::string> names;
  std::vector<std::size_t> index;  // per row
};

LabelEncoding encode_labels(const std::vector<std::string>& labels);

}  // namespace hdcx
