#include "gtopt/boys.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gtopt {

namespace {

constexpr double kSwitchX = 33.0;

// F_m(x) by the convergent series e^{-x} sum_k (2x)^k (2m-1)!! / (2m+2k+1)!!,
// accurate for x below the switch point.
double boys_series(int m, double x) {
  double term = 1.0 / (2.0 * m + 1.0);
  double sum = term;
  for (int k = 1; k < 400; ++k) {
    term *= 2.0 * x / (2.0 * m + 2.0 * k + 1.0);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return std::exp(-x) * sum;
}

}  // namespace

void boys_array(int m_max, double x, double* out) {
  if (m_max < 0 || x < 0.0 || !std::isfinite(x))
    throw std::domain_error("boys: negative order or argument");
  if (x < 1e-14) {
    for (int m = 0; m <= m_max; ++m) out[m] = 1.0 / (2.0 * m + 1.0);
    return;
  }
  if (x < kSwitchX) {
    // top order by series, then stable downward recursion
    out[m_max] = boys_series(m_max, x);
    const double ex = std::exp(-x);
    for (int m = m_max; m > 0; --m) out[m - 1] = (2.0 * x * out[m] + ex) / (2.0 * m - 1.0);
  } else {
    // erf(sqrt(x)) = 1 to machine precision here; upward recursion is stable
    // for x well above the orders used.
    out[0] = 0.5 * std::sqrt(std::numbers::pi / x);
    const double ex = std::exp(-x);
    for (int m = 0; m < m_max; ++m) out[m + 1] = ((2.0 * m + 1.0) * out[m] - ex) / (2.0 * x);
  }
}

double boys(int m, double x) {
  if (m < 0) throw std::domain_error("boys: negative order");
  std::vector<double> buf(m + 1);
  boys_array(m, x, buf.data());
  return buf[m];
}

BoysTable::BoysTable(int m_max) : m_max_(m_max), buf_(m_max + 1) {
  if (m_max < 0) throw std::domain_error("BoysTable: negative order");
}

const double* BoysTable::eval(double x) {
  boys_array(m_max_, x, buf_.data());
  return buf_.data();
}

}  // namespace gtopt
