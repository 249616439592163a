#include "willis/cli/table.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace willis::cli {

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.16e", v == 0.0 ? 0.0 : v);  // no "-0"
  return buf;
}

void ResultTable::add_column(std::string name, ColumnType type) {
  if (!rows_.empty()) throw std::logic_error("columns are fixed once rows exist");
  columns_.push_back({std::move(name), type});
}

void ResultTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) throw std::logic_error("row width does not match the schema");
  for (std::size_t i = 0; i < row.size(); ++i) {
    const auto& c = row[i];
    if (std::holds_alternative<std::monostate>(c)) continue;
    const bool ok = (columns_[i].type == ColumnType::real && std::holds_alternative<double>(c)) ||
                    (columns_[i].type == ColumnType::complex && std::holds_alternative<cplx>(c)) ||
                    (columns_[i].type == ColumnType::text && std::holds_alternative<std::string>(c));
    if (!ok) throw std::logic_error("cell type does not match column '" + columns_[i].name + "'");
  }
  rows_.push_back(std::move(row));
}

void ResultTable::set_meta(const std::string& key, const std::string& value) {
  for (auto& [k, v] : meta_)
    if (k == key) {
      v = value;
      return;
    }
  meta_.emplace_back(key, value);
}

std::vector<std::string> ResultTable::header() const {
  std::vector<std::string> out;
  for (const auto& c : columns_) {
    if (c.type == ColumnType::complex) {
      out.push_back(c.name + "_re");
      out.push_back(c.name + "_im");
    } else {
      out.push_back(c.name);
    }
  }
  return out;
}

void ResultTable::write_csv(std::ostream& out) const {
  for (const auto& [k, v] : meta_) out << "# " << k << ": " << v << '\n';
  const auto names = header();
  for (std::size_t i = 0; i < names.size(); ++i) out << (i ? "," : "") << names[i];
  out << '\n';
  for (const auto& row : rows_) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) line += ',';
      const auto& c = row[i];
      if (columns_[i].type == ColumnType::complex) {
        if (const auto* z = std::get_if<cplx>(&c)) line += format_real(z->real()) + "," + format_real(z->imag());
        else line += ',';
      } else if (const auto* x = std::get_if<double>(&c)) {
        line += format_real(*x);
      } else if (const auto* s = std::get_if<std::string>(&c)) {
        line += *s;
      }
    }
    out << line << '\n';
  }
}

}  // namespace willis::cli
