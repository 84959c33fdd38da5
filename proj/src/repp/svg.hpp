#pragma once

#include <string>

#include "repp/point_process.hpp"

namespace extremal {

struct SvgOptions {
  int width = 800;
  int height = 600;
  std::string title;
  std::string caption;  // embedded as an SVG comment, free-form metadata
  double tau = 0.0;     // > 0 draws a dashed level line at y = tau
  bool log_y = false;   // log scale on the height axis (marks below 1e-6 clip)
};

// Scatter of the two-scale cloud: one dot per mark, colored by source, with
// the optional level line. When `projected` is given, its atoms are drawn as
// crosses on the time axis and atoms of multiplicity > 1 are annotated with
// their count. Throws IoError if the file cannot be written.
void write_cloud_svg(const std::string& path, const MarkedPointSet2D& cloud,
                     const SvgOptions& opt,
                     const PointProcess1D* projected = nullptr);

// Stem plot of a one-dimensional counting process: one stem per atom, stem
// height equal to its multiplicity.
void write_process_svg(const std::string& path, const PointProcess1D& proc,
                       const SvgOptions& opt);

}  // namespace extremal
