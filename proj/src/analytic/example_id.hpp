#pragma once

#include <string>

namespace extremal {

// The five worked processes the toolkit knows closed forms for.
//   MMA          moving maximum of iid uniforms, X_i = max(Y_{i-2}, Y_i)
//   Doubling13   doubling map, peak at 1/3 (period 2)
//   DoublingMix  doubling map, peaks at 1/3 (period 2) and 5/7 (period 3)
//   SmithLSV     intermittent map, peaks at the neutral point 0 and at a
//                non-periodic (preperiodic) point in (1/2, 1)
//   PeriodicLSV  intermittent map, peaks at 0 and at a periodic point
enum class ExampleId { MMA, Doubling13, DoublingMix, SmithLSV, PeriodicLSV };

struct ExampleSpec {
  ExampleId id = ExampleId::Doubling13;
  double alpha = 0.2;  // intermittent-map examples
  int p = 2;           // period of the repelling orbit (PeriodicLSV)
};

std::string example_name(ExampleId id);
bool example_parse(const std::string& name, ExampleId& out);

}  // namespace extremal
