#include "nesta/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace nesta {

static_assert(std::endian::native == std::endian::little,
              "binary vector I/O assumes a little-endian host");

void write_vector_binary(const std::string& path, const Vec& v) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  const std::uint64_t count = static_cast<std::uint64_t>(v.size());
  out.write(reinterpret_cast<const char*>(&count), sizeof count);
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(sizeof(double) * count));
  if (!out) throw std::runtime_error("write failed: " + path);
}

Vec read_vector_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::uint64_t count = 0;
  in.read(reinterpret_cast<char*>(&count), sizeof count);
  if (!in) throw std::runtime_error("truncated vector file: " + path);
  Vec v(static_cast<Index>(count));
  in.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(sizeof(double) * count));
  if (!in) throw std::runtime_error("truncated vector file: " + path);
  return v;
}

void write_pgm(const std::string& path, const Vec& image, Index rows,
               Index cols) {
  if (image.size() != rows * cols)
    throw DimensionError("write_pgm", rows * cols, image.size());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  const double lo = image.minCoeff();
  const double hi = image.maxCoeff();
  const double scale = hi > lo ? 255.0 / (hi - lo) : 0.0;
  out << "P2\n" << cols << " " << rows << "\n255\n";
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      const int g = static_cast<int>(std::lround((image[i * cols + j] - lo) * scale));
      out << g << (j + 1 == cols ? '\n' : ' ');
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace nesta
