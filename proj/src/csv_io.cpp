#include "intdim/csv_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <vector>

#include "intdim/errors.hpp"

namespace intdim {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::optional<std::vector<double>> parse_row(std::string_view line) {
  std::vector<double> row;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    const std::string_view field =
        trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                : comma - start));
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
      return std::nullopt;
    }
    row.push_back(value);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return row;
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

PointCloud read_point_cloud_csv(std::istream& in) {
  std::vector<double> coords;
  std::size_t dim = 0;
  std::size_t line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = trim(line);
    if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (view.empty()) continue;
    auto row = parse_row(view);
    if (!row) {
      if (line_no == 1) continue;  // header
      throw InputError("line " + std::to_string(line_no) + ": not a numeric row");
    }
    if (dim == 0) dim = row->size();
    if (row->size() != dim) {
      throw InputError("line " + std::to_string(line_no) + ": expected " + std::to_string(dim) +
                       " columns, found " + std::to_string(row->size()));
    }
    coords.insert(coords.end(), row->begin(), row->end());
  }
  if (coords.empty()) throw InputError("no points in input");
  return PointCloud(std::move(coords), dim);
}

PointCloud load_point_cloud_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("no such input: " + path);
  return read_point_cloud_csv(in);
}

void write_point_cloud_csv(std::ostream& out, const PointCloud& cloud, bool header) {
  if (header) {
    for (std::size_t j = 0; j < cloud.dim(); ++j) out << (j ? ",x" : "x") << j;
    out << '\n';
  }
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto p = cloud.point(i);
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (j) out << ',';
      out << format_double(p[j]);
    }
    out << '\n';
  }
}

void save_point_cloud_csv(const std::string& path, const PointCloud& cloud, bool header) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  write_point_cloud_csv(out, cloud, header);
}

}  // namespace intdim
