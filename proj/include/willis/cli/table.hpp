#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "willis/fourier.hpp"

namespace willis::cli {

enum class ColumnType { real, complex, text };

struct Column {
  std::string name;
  ColumnType type = ColumnType::real;
};

// monostate is an empty cell: exceptional rows keep their width but carry no numbers.
using Cell = std::variant<std::monostate, double, cplx, std::string>;

class ResultTable {
 public:
  void add_column(std::string name, ColumnType type = ColumnType::real);
  void add_row(std::vector<Cell> row);
  void set_meta(const std::string& key, const std::string& value);

  const std::vector<Column>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  const std::vector<std::pair<std::string, std::string>>& metadata() const { return meta_; }

  // Header names with complex columns split into NAME_re, NAME_im.
  std::vector<std::string> header() const;

  // "# key: value" lines, then the header, then one line per row.
  void write_csv(std::ostream& out) const;

 private:
  std::vector<Column> columns_;
  std::vector<std::vector<Cell>> rows_;
  std::vector<std::pair<std::string, std::string>> meta_;
};

std::string format_real(double v);

}  // namespace willis::cli
