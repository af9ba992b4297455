#pragma once

#include <vector>

namespace gtopt {

/// Boys function F_m(x) = int_0^1 t^(2m) exp(-x t^2) dt, x >= 0, m >= 0.
/// Series + downward recursion below the switch point, asymptotic branch plus
/// upward recursion above. Absolute error < 1e-13 over the supported range.
double boys(int m, double x);

/// Fills out[0..m_max] with F_0(x) .. F_m_max(x).
void boys_array(int m_max, double x, double* out);

/// Thin cache holding a reusable buffer for F_0..F_m_max evaluations.
class BoysTable {
 public:
  explicit BoysTable(int m_max);
  /// Evaluates F_0..F_m_max(x); the returned pointer is valid until the next
  /// call on this table.
  const double* eval(double x);
  int m_max() const { return m_max_; }

 private:
  int m_max_;
  std::vector<double> buf_;
};

}  // namespace gtopt
