#include "repp/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "core/errors.hpp"

namespace extremal {

namespace {

constexpr int kMarginLeft = 60;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 34;
constexpr int kMarginBottom = 44;

struct Frame {
  int width, height;
  double t_max, y_lo, y_hi;
  bool log_y;

  double px(double t) const {
    const double w = double(width - kMarginLeft - kMarginRight);
    return kMarginLeft + w * (t / t_max);
  }
  double py(double y) const {
    double frac;
    if (log_y) {
      const double lo = std::log(y_lo), hi = std::log(y_hi);
      frac = (std::log(std::max(y, y_lo)) - lo) / (hi - lo);
    } else {
      frac = (y - y_lo) / (y_hi - y_lo);
    }
    return double(height - kMarginBottom) -
           (double(height - kMarginTop - kMarginBottom)) * frac;
  }
};

// Escapes markup characters and breaks "--" runs, which are illegal inside
// XML comments.
std::string xml_safe(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '<') {
      out += "&lt;";
    } else if (c == '>') {
      out += "&gt;";
    } else if (c == '&') {
      out += "&amp;";
    } else if (c == '-' && !out.empty() && out.back() == '-') {
      out += "_";
    } else {
      out += c;
    }
  }
  return out;
}

void open_svg(std::ostringstream& s, const Frame& f, const std::string& title) {
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.width
    << "\" height=\"" << f.height << "\" viewBox=\"0 0 " << f.width << " "
    << f.height << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\""
    << f.width - kMarginLeft - kMarginRight << "\" height=\""
    << f.height - kMarginTop - kMarginBottom
    << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";
  if (!title.empty())
    s << "<text x=\"" << f.width / 2 << "\" y=\"20\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"14\">" << title
      << "</text>\n";
}

void axis_labels(std::ostringstream& s, const Frame& f,
                 const std::string& y_name) {
  for (int i = 0; i <= 4; ++i) {
    const double t = f.t_max * double(i) / 4.0;
    s << "<text x=\"" << f.px(t) << "\" y=\"" << f.height - kMarginBottom + 16
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"11\">" << t << "</text>\n";
    const double y = f.log_y ? f.y_lo * std::pow(f.y_hi / f.y_lo, i / 4.0)
                             : f.y_lo + (f.y_hi - f.y_lo) * i / 4.0;
    std::ostringstream lab;
    lab.precision(3);
    lab << y;
    s << "<text x=\"" << kMarginLeft - 6 << "\" y=\"" << f.py(y) + 4
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
      << "font-size=\"11\">" << lab.str() << "</text>\n";
  }
  s << "<text x=\"" << (kMarginLeft + f.width - kMarginRight) / 2 << "\" y=\""
    << f.height - 8 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
    << "font-size=\"12\">t</text>\n"
    << "<text x=\"14\" y=\"" << (kMarginTop + f.height - kMarginBottom) / 2
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
    << "transform=\"rotate(-90 14 "
    << (kMarginTop + f.height - kMarginBottom) / 2 << ")\">" << y_name
    << "</text>\n";
}

void save(const std::string& path, const std::ostringstream& s) {
  std::ofstream out(path);
  if (!out) throw IoError("svg: cannot open " + path);
  out << s.str() << "</svg>\n";
  if (!out) throw IoError("svg: write failed for " + path);
}

}  // namespace

void write_cloud_svg(const std::string& path, const MarkedPointSet2D& cloud,
                     const SvgOptions& opt, const PointProcess1D* projected) {
  Frame f{opt.width, opt.height, std::max(cloud.t_max, 1e-12),
          opt.log_y ? 1e-6 : 0.0, std::max(cloud.y_max, 1e-12), opt.log_y};
  std::ostringstream s;
  if (!opt.caption.empty())
    s << "<!-- caption: " << xml_safe(opt.caption) << " -->\n";
  s << "<!-- points: " << cloud.points.size() << "; t_max: " << cloud.t_max
    << "; y_max: " << cloud.y_max;
  if (opt.tau > 0.0) s << "; tau: " << opt.tau;
  if (projected) s << "; projected_atoms: " << projected->points.size();
  s << " -->\n";
  open_svg(s, f, opt.title);
  axis_labels(s, f, "height");
  if (opt.tau > 0.0) {
    s << "<line x1=\"" << f.px(0) << "\" y1=\"" << f.py(opt.tau) << "\" x2=\""
      << f.px(f.t_max) << "\" y2=\"" << f.py(opt.tau)
      << "\" stroke=\"#b00\" stroke-width=\"1\" stroke-dasharray=\"6 3\"/>\n";
  }
  for (const auto& m : cloud.points) {
    const char* color = m.source == 0 ? "#1f77b4" : "#2ca02c";
    s << "<circle cx=\"" << f.px(m.t) << "\" cy=\"" << f.py(m.y)
      << "\" r=\"2\" fill=\"" << color << "\" fill-opacity=\"0.75\"/>\n";
  }
  if (projected) {
    // Crosses on the time axis mark the projected atoms; counts above 1 are
    // written out next to the cross.
    const double base = double(f.height - kMarginBottom);
    for (const auto& p : projected->points) {
      const double x = f.px(p.t);
      s << "<path d=\"M" << x - 3 << " " << base - 3 << " L" << x + 3 << " "
        << base + 3 << " M" << x - 3 << " " << base + 3 << " L" << x + 3
        << " " << base - 3
        << "\" stroke=\"#d62728\" stroke-width=\"1.2\" fill=\"none\"/>\n";
      if (p.multiplicity > 1)
        s << "<text x=\"" << x << "\" y=\"" << base - 6
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          << "font-size=\"9\" fill=\"#d62728\">" << p.multiplicity
          << "</text>\n";
    }
  }
  save(path, s);
}

void write_process_svg(const std::string& path, const PointProcess1D& proc,
                       const SvgOptions& opt) {
  std::uint64_t top = 1;
  for (const auto& p : proc.points) top = std::max(top, p.multiplicity);
  Frame f{opt.width, opt.height, std::max(proc.t_max, 1e-12), 0.0,
          double(top) + 0.5, false};
  std::ostringstream s;
  open_svg(s, f, opt.title);
  axis_labels(s, f, "multiplicity");
  for (const auto& p : proc.points) {
    s << "<line x1=\"" << f.px(p.t) << "\" y1=\"" << f.py(0.0) << "\" x2=\""
      << f.px(p.t) << "\" y2=\"" << f.py(double(p.multiplicity))
      << "\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>\n"
      << "<circle cx=\"" << f.px(p.t) << "\" cy=\""
      << f.py(double(p.multiplicity))
      << "\" r=\"2.5\" fill=\"#1f77b4\"/>\n";
  }
  save(path, s);
}

}  // namespace extremal
