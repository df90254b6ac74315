#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>

#include <boost/math/distributions/students_t.hpp>

namespace aud {

/// Replication-level summary of one estimated quantity.
struct Summary {
  double mean = std::numeric_limits<double>::quiet_NaN();
  double std_error = std::numeric_limits<double>::quiet_NaN();
  double ci95_low = std::numeric_limits<double>::quiet_NaN();
  double ci95_high = std::numeric_limits<double>::quiet_NaN();
  std::size_t replications = 0;

  bool contains(double x) const { return ci95_low <= x && x <= ci95_high; }
  double half_width() const { return 0.5 * (ci95_high - ci95_low); }
};

/// Two-sided 95% Student-t quantile for the given degrees of freedom.
inline double student_t_975(double dof) {
  boost::math::students_t dist(dof);
  return boost::math::quantile(dist, 0.975);
}

/// Summarize per-replication values around `center`. The center is normally
/// the pooled estimate over all replications; the standard error comes from
/// the spread of the replication values. Fewer than two replications leave
/// the error fields NaN.
inline Summary summarize(std::span<const double> values, double center) {
  Summary s;
  s.mean = center;
  s.replications = values.size();
  if (values.size() < 2) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  const double avg = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - avg) * (v - avg);
  const double n = static_cast<double>(values.size());
  s.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  const double h = student_t_975(n - 1.0) * s.std_error;
  s.ci95_low = center - h;
  s.ci95_high = center + h;
  return s;
}

}  // namespace aud
