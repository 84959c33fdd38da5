#include "report/scan.hpp"

#include <cmath>

#include "core/errors.hpp"
#include "dynamics/maps.hpp"
#include "dynamics/mma.hpp"

namespace extremal {

namespace {

ScanResult scan_mma(const ScanWindows& w, std::uint64_t n, std::uint64_t length,
                    Rng& rng) {
  ScanResult out;
  out.length = length;
  MmaStream stream(rng);
  const double dn = double(n);
  for (std::uint64_t i = 0; i < length; ++i) {
    const double x = stream.next();
    if (x > w.u) out.hits.push_back({i, dn * (1.0 - x * x), 0});
  }
  return out;
}

ScanResult scan_doubling13(const ScanWindows& w, std::uint64_t n,
                           std::uint64_t length, Rng& rng) {
  ScanResult out;
  out.length = length;
  const std::uint64_t frac0 = rng.next_u64();  // exact invariant start
  DoublingState st(frac0, rng);
  const double zeta = 1.0 / 3.0;
  const double two_n = 2.0 * double(n);
  for (std::uint64_t i = 0; i < length; ++i) {
    const double d = std::fabs(st.value() - zeta);
    if (d < w.r1) out.hits.push_back({i, two_n * d, 0});
    st.step();
  }
  return out;
}

ScanResult scan_doubling_mix(const ScanWindows& w, std::uint64_t n,
                             std::uint64_t length, Rng& rng) {
  ScanResult out;
  out.length = length;
  const std::uint64_t frac0 = rng.next_u64();
  DoublingState st(frac0, rng);
  const double z1 = 1.0 / 3.0, z2 = 5.0 / 7.0;
  const double four_n = 4.0 * double(n);
  for (std::uint64_t i = 0; i < length; ++i) {
    const double x = st.value();
    if (x <= 0.5) {
      const double d = std::fabs(x - z1);
      if (d < w.r1) out.hits.push_back({i, four_n * d, 0});
    } else {
      const double d = std::fabs(x - z2);
      if (d < w.r2) out.hits.push_back({i, four_n * d, 1});
    }
    st.step();
  }
  return out;
}

ScanResult scan_lsv(const ExampleContext& ctx, const ScanWindows& w,
                    std::uint64_t n, std::uint64_t length, Rng& rng) {
  ScanResult out;
  out.length = length;
  const LsvMap map(ctx.cfg.example.alpha);
  const ObservableSpec obs = ctx.observable();
  const double two_n = 2.0 * double(n);
  const double ball_scale = 4.0 * double(n) * ctx.h2;
  LsvOrbit orbit(map, rng, ctx.cfg.burn_in);
  for (std::uint64_t i = 0; i < length; ++i) {
    const double x = orbit.value();
    if (x < w.y_cut) {
      out.hits.push_back({i, two_n * obs.neutral_mass(x), 0});
    } else {
      const double d = std::fabs(x - ctx.zeta2);
      if (d < w.r2) out.hits.push_back({i, ball_scale * d, 1});
    }
    orbit.step();
  }
  return out;
}

}  // namespace

ScanResult scan_example(const ExampleContext& ctx, std::uint64_t n,
                        double y_level, std::uint64_t length, Rng& rng) {
  if (length == 0) throw ConfigError("scan_example: empty series");
  const ScanWindows w = scan_windows(ctx, n, y_level);
  switch (ctx.cfg.example.id) {
    case ExampleId::MMA:
      return scan_mma(w, n, length, rng);
    case ExampleId::Doubling13:
      return scan_doubling13(w, n, length, rng);
    case ExampleId::DoublingMix:
      return scan_doubling_mix(w, n, length, rng);
    case ExampleId::SmithLSV:
    case ExampleId::PeriodicLSV:
      return scan_lsv(ctx, w, n, length, rng);
  }
  throw ConfigError("scan_example: unknown example");
}

BinarySeries hits_to_series(const ScanResult& scan, double tau) {
  std::vector<std::uint64_t> positions;
  for (const auto& h : scan.hits)
    if (h.height < tau) positions.push_back(h.pos);
  return BinarySeries::from_positions(scan.length, std::move(positions));
}

std::vector<double> generate_values(const ExampleContext& ctx,
                                    std::uint64_t length, Rng& rng) {
  if (length == 0) throw ConfigError("generate_values: empty series");
  std::vector<double> out;
  out.reserve(length);
  switch (ctx.cfg.example.id) {
    case ExampleId::MMA:
      return mma_generate(length, rng);
    case ExampleId::Doubling13:
    case ExampleId::DoublingMix: {
      const std::uint64_t frac0 = rng.next_u64();
      DoublingState st(frac0, rng);
      for (std::uint64_t i = 0; i < length; ++i) {
        out.push_back(st.value());
        st.step();
      }
      return out;
    }
    case ExampleId::SmithLSV:
    case ExampleId::PeriodicLSV: {
      const LsvMap map(ctx.cfg.example.alpha);
      LsvOrbit orbit(map, rng, ctx.cfg.burn_in);
      for (std::uint64_t i = 0; i < length; ++i) {
        out.push_back(orbit.value());
        orbit.step();
      }
      return out;
    }
  }
  throw ConfigError("generate_values: unknown example");
}

}  // namespace extremal
