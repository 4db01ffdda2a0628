#pragma once

#include <iosfwd>
#include <string>

#include "intdim/point_cloud.hpp"

namespace intdim {

/// Reads one point per row, comma separated, '.' decimal separator. A first row
/// that does not parse as numbers is treated as a header.
PointCloud read_point_cloud_csv(std::istream& in);
PointCloud load_point_cloud_csv(const std::string& path);

/// Writes coordinates with 17 significant digits so reading back is lossless.
void write_point_cloud_csv(std::ostream& out, const PointCloud& cloud, bool header = false);
void save_point_cloud_csv(const std::string& path, const PointCloud& cloud, bool header = false);

/// Shortest round-trippable decimal form of a double.
std::string format_double(double value);

}  // namespace intdim
