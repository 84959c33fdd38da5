#include "report/examples.hpp"

#include <cmath>

#include "core/errors.hpp"
#include "dynamics/density.hpp"
#include "dynamics/maps.hpp"
#include "dynamics/mma.hpp"

namespace extremal {

const ThresholdSchedule& ExampleContext::threshold_at(std::uint64_t n) const {
  auto it = thresholds.find(n);
  if (it == thresholds.end())
    throw ConfigError("context: no threshold resolved for n=" +
                      std::to_string(n));
  return it->second;
}

ObservableSpec ExampleContext::observable() const {
  ObservableSpec obs;
  switch (cfg.example.id) {
    case ExampleId::MMA:
      obs.kind = ObservableSpec::Kind::Identity;
      break;
    case ExampleId::Doubling13:
      obs.kind = ObservableSpec::Kind::LogDistSingle;
      obs.zeta = 1.0 / 3.0;
      break;
    case ExampleId::DoublingMix:
      obs.kind = ObservableSpec::Kind::LogDistPair;
      break;
    case ExampleId::SmithLSV:
    case ExampleId::PeriodicLSV:
      obs.kind = ObservableSpec::Kind::MixIndifferent;
      obs.alpha = cfg.example.alpha;
      obs.c1 = c1;
      obs.b1 = b1;
      obs.h2 = h2;
      obs.zeta2 = zeta2;
      break;
  }
  return obs;
}

namespace {

// Empirical quantile calibration: one value stream per (example, scale).
ThresholdSchedule empirical_threshold(const ExampleContext& ctx,
                                      std::uint64_t n) {
  const auto& cfg = ctx.cfg;
  const double want = 200.0 * double(n) / cfg.tau;
  if (want > 4e9)
    throw ConfigError("context: empirical calibration stream too long");
  const auto calib_len = std::uint64_t(std::llround(want));
  Rng rng = Rng::derive(cfg.seed, kStreamThreshold + n);
  switch (cfg.example.id) {
    case ExampleId::MMA: {
      MmaStream stream(rng);
      return threshold_empirical([&stream] { return stream.next(); },
                                 calib_len, cfg.tau, n);
    }
    case ExampleId::Doubling13:
    case ExampleId::DoublingMix: {
      const ObservableSpec obs = ctx.observable();
      const std::uint64_t frac = rng.next_u64();  // before the reservoir copy
      DoublingState st(frac, rng);
      return threshold_empirical(
          [&st, &obs] {
            const double v = obs.eval(st.value());
            st.step();
            return v;
          },
          calib_len, cfg.tau, n);
    }
    case ExampleId::SmithLSV:
    case ExampleId::PeriodicLSV: {
      const ObservableSpec obs = ctx.observable();
      const LsvMap map(cfg.example.alpha);
      LsvOrbit orbit(map, rng, cfg.burn_in);
      return threshold_empirical(
          [&orbit, &obs] {
            const double v = obs.eval(orbit.value());
            orbit.step();
            return v;
          },
          calib_len, cfg.tau, n);
    }
  }
  throw ConfigError("context: unknown example");
}

}  // namespace

ExampleContext build_example_context(const ExperimentConfig& cfg) {
  cfg.validate();
  ExampleContext ctx;
  ctx.cfg = cfg;
  ctx.summary = analytic_summary(cfg.example, 32);
  ctx.is_lsv = cfg.example.id == ExampleId::SmithLSV ||
               cfg.example.id == ExampleId::PeriodicLSV;

  if (ctx.is_lsv) {
    ctx.zeta2 = cfg.example.id == ExampleId::SmithLSV
                    ? smith_zeta2(cfg.example.alpha)
                    : lsv_periodic_orbit(cfg.example.alpha, cfg.example.p)
                          .zeta2;
    const auto model = calibrate_lsv_density(
        cfg.example.alpha, {ctx.zeta2}, cfg.calib_samples, cfg.burn_in,
        Rng::derive(cfg.seed, kStreamCalibration));
    ctx.c1 = model.c1;
    ctx.b1 = model.b1;
    ctx.h2 = model.density(ctx.zeta2);
    ctx.density_exponent = model.fitted_exponent;
    if (!(ctx.c1 > 0.0) || !(ctx.h2 > 0.0))
      throw NumericError("context: density calibration degenerate");
  }

  for (std::uint64_t n : cfg.grid()) {
    ctx.thresholds.emplace(
        n, cfg.threshold == ThresholdKind::Analytic
               ? threshold_analytic(cfg.example, cfg.tau, n)
               : empirical_threshold(ctx, n));
  }
  return ctx;
}

namespace {

void require_window(bool ok, const char* what) {
  if (!ok)
    throw ConfigError(std::string("scan windows: ") + what +
                      " (n too small for this level)");
}

}  // namespace

ScanWindows scan_windows(const ExampleContext& ctx, std::uint64_t n,
                         double y_level) {
  if (!(y_level > 0.0) || n == 0)
    throw ConfigError("scan_windows: need y_level > 0 and n > 0");
  const auto& cfg = ctx.cfg;
  const ObservableSpec obs = ctx.observable();
  ScanWindows w;

  if (cfg.threshold == ThresholdKind::Analytic) {
    switch (cfg.example.id) {
      case ExampleId::MMA:
        require_window(y_level < double(n), "tail mass above 1");
        w.u = std::sqrt(1.0 - y_level / double(n));
        return w;
      case ExampleId::Doubling13:
        w.r1 = y_level / (2.0 * double(n));
        require_window(w.r1 < 1.0 / 12.0, "ball leaves its frame");
        return w;
      case ExampleId::DoublingMix:
        w.r1 = w.r2 = y_level / (4.0 * double(n));
        require_window(w.r1 < 1.0 / 24.0, "balls leave their frames");
        return w;
      case ExampleId::SmithLSV:
      case ExampleId::PeriodicLSV:
        w.y_cut = obs.neutral_mass_inverse(y_level / (2.0 * double(n)));
        w.r2 = y_level / (4.0 * double(n) * ctx.h2);
        break;
    }
  } else {
    // Empirical mode: the level-tau cut comes from the calibrated quantile;
    // other levels rescale the mass linearly and invert the local tail
    // model (a plain radius in the ball cases, the calibrated two-term
    // measure on the neutral side).
    const double u_tau = ctx.threshold_at(n).u;
    const double scale = y_level / cfg.tau;
    switch (cfg.example.id) {
      case ExampleId::MMA: {
        const double mass = scale * (1.0 - u_tau * u_tau);
        require_window(mass < 1.0, "tail mass above 1");
        w.u = std::sqrt(1.0 - mass);
        return w;
      }
      case ExampleId::Doubling13:
        w.r1 = std::exp(-u_tau) * scale;
        require_window(w.r1 < 1.0 / 12.0, "ball leaves its frame");
        return w;
      case ExampleId::DoublingMix:
        w.r1 = w.r2 = std::exp(-u_tau) * scale;
        require_window(w.r1 < 1.0 / 24.0, "balls leave their frames");
        return w;
      case ExampleId::SmithLSV:
      case ExampleId::PeriodicLSV: {
        const double s = std::exp(-u_tau);  // g^{-1}(u) at level tau
        w.y_cut = obs.neutral_mass_inverse(s * scale);
        w.r2 = s / (2.0 * ctx.h2) * scale;
        break;
      }
    }
  }

  // Intermittent examples: both windows must stay inside the neighbourhoods
  // the mixed observable is defined on, and the ball inside the right branch.
  require_window(w.y_cut < obs.delta, "neutral window leaves its frame");
  require_window(w.r2 < obs.delta && ctx.zeta2 - w.r2 > 0.5 &&
                     ctx.zeta2 + w.r2 < 1.0,
                 "second-center ball leaves its frame");
  return w;
}

}  // namespace extremal
