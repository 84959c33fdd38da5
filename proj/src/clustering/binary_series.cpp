#include "clustering/binary_series.hpp"

#include "core/errors.hpp"

namespace extremal {

BinarySeries BinarySeries::from_string(std::string_view bits) {
  BinarySeries b;
  b.length = bits.size();
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      b.ones.push_back(i);
    } else if (bits[i] != '0') {
      throw ConfigError("BinarySeries::from_string: expected only 0/1");
    }
  }
  return b;
}

BinarySeries BinarySeries::from_positions(std::uint64_t length,
                                          std::vector<std::uint64_t> positions) {
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (positions[i] >= length)
      throw ConfigError("BinarySeries: position beyond series length");
    if (i > 0 && positions[i] <= positions[i - 1])
      throw ConfigError("BinarySeries: positions must be strictly increasing");
  }
  BinarySeries b;
  b.length = length;
  b.ones = std::move(positions);
  return b;
}

std::string BinarySeries::to_string() const {
  std::string s(length, '0');
  for (auto p : ones) s[p] = '1';
  return s;
}

BinarySeries binarize(const std::vector<double>& values, double threshold) {
  BinarySeries b;
  b.length = values.size();
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] > threshold) b.ones.push_back(i);
  return b;
}

}  // namespace extremal
