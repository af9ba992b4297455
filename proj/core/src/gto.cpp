#include "gtopt/gto.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gtopt {

namespace {

double double_factorial(int n) {
  // (-1)!! = 1 by convention
  double v = 1.0;
  for (int k = n; k > 1; k -= 2) v *= k;
  return v;
}

}  // namespace

double PrimitiveGto::value(const Eigen::Vector3d& r) const {
  Eigen::Vector3d d = r - center;
  double mono = 1.0;
  for (int axis = 0; axis < 3; ++axis)
    for (int k = 0; k < ang[axis]; ++k) mono *= d[axis];
  return norm * mono * std::exp(-alpha * d.squaredNorm());
}

double concentric_overlap(double a, double b, const std::array<int, 3>& ang) {
  const double p = a + b;
  double v = std::pow(std::numbers::pi / p, 1.5);
  for (int axis = 0; axis < 3; ++axis)
    v *= double_factorial(2 * ang[axis] - 1) / std::pow(2.0 * p, ang[axis]);
  return v;
}

double gto_norm(double alpha, const std::array<int, 3>& ang) {
  if (!(alpha > 0.0)) throw std::domain_error("gto_norm: non-positive exponent");
  return 1.0 / std::sqrt(concentric_overlap(alpha, alpha, ang));
}

PrimitiveGto ContractedGto::prim(int n) const {
  return PrimitiveGto{alphas.at(n), ang, center, gto_norm(alphas.at(n), ang)};
}

double ContractedGto::value(const Eigen::Vector3d& r) const {
  double v = 0.0;
  for (int n = 0; n < nprim(); ++n) v += coeffs[n] * prim(n).value(r);
  return v;
}

double ContractedGto::self_overlap() const {
  double s = 0.0;
  for (int m = 0; m < nprim(); ++m)
    for (int n = 0; n < nprim(); ++n)
      s += coeffs[m] * coeffs[n] * gto_norm(alphas[m], ang) * gto_norm(alphas[n], ang) *
           concentric_overlap(alphas[m], alphas[n], ang);
  return s;
}

ContractedGto make_cgto(const Eigen::Vector3d& center, const std::array<int, 3>& ang,
                        std::vector<double> alphas, std::vector<double> coeffs) {
  if (alphas.size() != coeffs.size())
    throw std::invalid_argument("make_cgto: alphas/coeffs length mismatch");
  if (alphas.empty()) throw std::invalid_argument("make_cgto: no primitives");
  for (double a : alphas)
    if (!(a > 0.0)) throw std::domain_error("make_cgto: non-positive exponent");

  ContractedGto g;
  g.center = center;
  g.ang = ang;
  g.alphas = std::move(alphas);
  g.coeffs = std::move(coeffs);
  g.alpha_slots.assign(g.alphas.size(), -1);
  g.coeff_slots.assign(g.coeffs.size(), -1);

  double s = g.self_overlap();
  if (!(s > 1e-12))
    throw std::domain_error("make_cgto: zero-norm contraction (self-overlap " +
                            std::to_string(s) + ")");
  g.contraction_scale = 1.0 / std::sqrt(s);
  for (double& c : g.coeffs) c *= g.contraction_scale;
  return g;
}

int Mcgto::nprim_total() const {
  int n = 0;
  for (const auto& t : terms) n += t.nprim();
  return n;
}

double Mcgto::value(const Eigen::Vector3d& r) const {
  double v = 0.0;
  for (int t = 0; t < nterms(); ++t) v += weights[t] * terms[t].value(r);
  return v;
}

void Mcgto::scale(double s) {
  for (double& w : weights) w *= s;
}

Mcgto make_mcgto(std::vector<ContractedGto> terms, std::vector<double> weights) {
  if (terms.empty()) throw std::invalid_argument("make_mcgto: empty terms");
  if (terms.size() != weights.size())
    throw std::invalid_argument("make_mcgto: terms/weights length mismatch");
  for (double w : weights)
    if (!std::isfinite(w)) throw std::invalid_argument("make_mcgto: non-finite weight");
  return Mcgto{std::move(terms), std::move(weights)};
}

double NuclearField::repulsion_energy() const {
  double e = 0.0;
  for (std::size_t i = 0; i < nuclei.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      e += nuclei[i].charge * nuclei[j].charge /
           (nuclei[i].position - nuclei[j].position).norm();
  return e;
}

double NuclearField::total_charge() const {
  double q = 0.0;
  for (const auto& n : nuclei) q += n.charge;
  return q;
}

}  // namespace gtopt
