#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace extremal {

// A finite 0/1 series stored sparsely as the sorted positions of its 1s.
// Every cluster statistic downstream depends only on those positions, so a
// series of length 10^8 with a few hundred exceedances stays tiny.
struct BinarySeries {
  std::uint64_t length = 0;
  std::vector<std::uint64_t> ones;  // strictly increasing, each < length

  static BinarySeries from_string(std::string_view bits);
  static BinarySeries from_positions(std::uint64_t length,
                                     std::vector<std::uint64_t> positions);

  std::uint64_t count_ones() const { return ones.size(); }
  std::string to_string() const;  // dense render, intended for small series
};

// 1 where value > threshold.
BinarySeries binarize(const std::vector<double>& values, double threshold);

}  // namespace extremal
