#pragma once

#include <cstddef>
#include <string>

#include "marchuk/errors.hpp"

namespace marchuk {

/// Composite Simpson rule on `intervals` uniform subintervals of [a, b].
/// `intervals` must be even and positive.
template <typename F>
double composite_simpson(F&& f, double a, double b, int intervals) {
  if (intervals <= 0 || intervals % 2 != 0) {
    throw ConfigError("simpson: subinterval count must be positive and even (got " +
                      std::to_string(intervals) + ")");
  }
  const double h = (b - a) / intervals;
  double odd = 0.0;
  double even = 0.0;
  for (int i = 1; i < intervals; ++i) {
    const double x = a + i * h;
    if (i % 2 == 1) {
      odd += f(x);
    } else {
      even += f(x);
    }
  }
  return h / 3.0 * (f(a) + 4.0 * odd + 2.0 * even + f(b));
}

}  // namespace marchuk
