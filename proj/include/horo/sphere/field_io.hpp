#pragma once

#include "horo/sphere/field.hpp"

#include <string>

namespace horo::sphere {

// Header: JSON {version, n, chart, sizes, r_max, excluded_balls}. Samples live
// next to it with the extension replaced by ".csv", one grid ring per row.
inline constexpr int kFieldFormatVersion = 1;

FieldGrid read_field(const std::string& header_path);
void write_field(const FieldGrid& field, const std::string& header_path);

std::string data_path_for(const std::string& header_path);

}  // namespace horo::sphere
