#pragma once

#include <string>

#include "nesta/linear_map.hpp"

namespace nesta {

/// Binary vector format: an 8-byte little-endian element count followed by
/// the entries as little-endian IEEE-754 doubles. Bit-exact across runs.
void write_vector_binary(const std::string& path, const Vec& v);
Vec read_vector_binary(const std::string& path);

/// ASCII portable graymap (P2, max value 255), row-major, entries scaled
/// linearly from [min, max] of the data.
void write_pgm(const std::string& path, const Vec& image, Index rows,
               Index cols);

}  // namespace nesta
