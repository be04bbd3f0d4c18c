#include "lki/sobol.hpp"

#include <bit>
#include <fstream>
#include <sstream>
#include <string>

#include "lki/errors.hpp"

namespace lki {

SobolSequence SobolSequence::from_file(const std::filesystem::path& path, std::size_t dimension) {
  if (dimension == 0) throw ConfigError("Sobol dimension must be positive");
  std::vector<std::uint32_t> dirs(dimension * kBits);
  for (int b = 0; b < kBits; ++b) dirs[b] = std::uint32_t{1} << (kBits - 1 - b);
  if (dimension == 1) return SobolSequence(std::move(dirs));

  std::ifstream in(path);
  if (!in) throw Error("cannot open Sobol direction file '" + path.string() + "'");
  std::string line;
  std::size_t lineno = 0;
  std::size_t next = 2;
  while (next <= dimension && std::getline(in, line)) {
    ++lineno;
    std::istringstream row(line);
    std::size_t d = 0;
    unsigned degree = 0;
    std::uint32_t poly = 0;
    if (!(row >> d)) {
      if (lineno == 1) continue;  // header
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw ParseError("malformed direction-number row", lineno);
    }
    if (!(row >> degree >> poly) || degree == 0 || degree >= kBits) {
      throw ParseError("malformed direction-number row", lineno);
    }
    if (d != next) throw ParseError("expected dimension " + std::to_string(next), lineno);
    std::uint32_t* v = &dirs[(d - 1) * kBits];
    for (unsigned i = 0; i < degree; ++i) {
      std::uint32_t m = 0;
      if (!(row >> m)) throw ParseError("missing initial direction number", lineno);
      v[i] = m << (kBits - 1 - i);
    }
    for (unsigned i = degree; i < static_cast<unsigned>(kBits); ++i) {
      std::uint32_t x = v[i - degree] ^ (v[i - degree] >> degree);
      for (unsigned k = 1; k < degree; ++k) {
        if ((poly >> (degree - 1 - k)) & 1U) x ^= v[i - k];
      }
      v[i] = x;
    }
    ++next;
  }
  if (next <= dimension) {
    throw ConfigError("Sobol direction file '" + path.string() + "' supports at most dimension " +
                      std::to_string(next - 1) + ", " + std::to_string(dimension) + " requested");
  }
  return SobolSequence(std::move(dirs));
}

std::vector<double> SobolSequence::points(std::size_t count, std::size_t skip) const {
  const std::size_t dim = dimension();
  if (skip + count > (std::size_t{1} << kBits)) throw ConfigError("too many Sobol points requested");
  std::vector<std::uint32_t> x(dim, 0);
  std::vector<double> out(count * dim);
  constexpr double scale = 1.0 / 4294967296.0;
  // x_i = x_{i-1} ^ v[c], c = number of trailing ones of i - 1.
  for (std::size_t i = 1; i < skip + count + 1; ++i) {
    const std::size_t index = i - 1;
    if (index >= skip) {
      for (std::size_t j = 0; j < dim; ++j) out[(index - skip) * dim + j] = x[j] * scale;
    }
    const int c = std::countr_one(index);
    for (std::size_t j = 0; j < dim; ++j) x[j] ^= directions_[j * kBits + c];
  }
  return out;
}

}  // namespace lki
