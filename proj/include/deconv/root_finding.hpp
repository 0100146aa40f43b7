// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <string>

#include "deconv/error.hpp"

namespace deconv {

/// Bisection on [lo, hi] for a function that changes sign exactly once.
/// Stops when the bracket is narrower than abs_tol and returns its midpoint.
/// The iteration count depends only on the bracket and tolerance, so for a
/// monotone family f - c the returned root is monotone in c.
template <class F>
double bisect(F&& f, double lo, double hi, double abs_tol, const std::string& operation,
              int max_iter = 400) {
  const double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0))
    throw ComputationError(operation, "bisection bracket does not contain a sign change");
  const bool rising = flo < 0.0;
  for (int it = 0; it < max_iter && hi - lo > abs_tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == rising)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace deconv
