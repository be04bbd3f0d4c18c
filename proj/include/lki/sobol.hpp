#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace lki {

/// Unscrambled Sobol' points in Gray-code order, 32-bit resolution.
///
/// Direction numbers come from a text table in the common published layout:
/// an optional header, then one row per dimension d >= 2 holding
/// "d s a m_1 ... m_s". Dimension 1 is the van der Corput sequence.
class SobolSequence {
 public:
  static constexpr int kBits = 32;

  static SobolSequence from_file(const std::filesystem::path& path, std::size_t dimension);

  std::size_t dimension() const noexcept { return directions_.size() / kBits; }

  /// count points starting at index skip (index 0 is the origin), row-major count x dimension.
  std::vector<double> points(std::size_t count, std::size_t skip = 0) const;

 private:
  explicit SobolSequence(std::vector<std::uint32_t> directions)
      : directions_(std::move(directions)) {}
  std::vector<std::uint32_t> directions_;  // dimension x kBits
};

}  // namespace lki
