#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "gtopt/param_graph.hpp"

namespace gtopt {

/// Cartesian Gaussian primitive: norm * (x-X)^i (y-Y)^j (z-Z)^k exp(-alpha r^2).
/// `norm` is an explicit multiplier; for ordinary basis functions it equals
/// gto_norm(alpha, ang), while derivative functions carry custom values.
struct PrimitiveGto {
  double alpha = 1.0;
  std::array<int, 3> ang{0, 0, 0};
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  double norm = 1.0;

  int l_total() const { return ang[0] + ang[1] + ang[2]; }
  double value(const Eigen::Vector3d& r) const;
};

/// Normalization constant N with unit self-overlap of N * monomial * gaussian.
double gto_norm(double alpha, const std::array<int, 3>& ang);

/// Self-overlap of two concentric, equal-angular-momentum unnormalized
/// monomial gaussians with exponents a and b (used for contraction norms).
double concentric_overlap(double a, double b, const std::array<int, 3>& ang);

/// Contraction of concentric primitives with equal angular momentum.
/// `coeffs` weight the *individually normalized* primitives. The *_slots
/// members back-reference ParamGraph slots (-1 when a value is not driven by
/// the graph).
struct ContractedGto {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  std::array<int, 3> ang{0, 0, 0};
  std::vector<double> alphas;
  std::vector<double> coeffs;
  /// factor applied to the raw contraction coefficients by make_cgto
  double contraction_scale = 1.0;

  std::array<int, 3> center_slots{-1, -1, -1};
  std::vector<int> alpha_slots;
  std::vector<int> coeff_slots;

  int nprim() const { return static_cast<int>(alphas.size()); }
  PrimitiveGto prim(int n) const;
  double value(const Eigen::Vector3d& r) const;
  /// <this|this> evaluated with the concentric closed form.
  double self_overlap() const;
};

/// Builds a contracted GTO: primitives individually normalized, then the
/// contraction rescaled to unit self-overlap.
ContractedGto make_cgto(const Eigen::Vector3d& center, const std::array<int, 3>& ang,
                        std::vector<double> alphas, std::vector<double> coeffs);

/// Mixed-contracted GTO: weighted sum of contracted GTOs whose centers and
/// angular momenta may differ. Closed under differentiation with respect to
/// any exponent, contraction coefficient, or center coordinate.
struct Mcgto {
  std::vector<ContractedGto> terms;
  std::vector<double> weights;

  int nterms() const { return static_cast<int>(terms.size()); }
  int nprim_total() const;
  bool empty() const { return terms.empty(); }
  double value(const Eigen::Vector3d& r) const;
  void scale(double s);
};

/// Wraps CGTOs into an MCGTO. Does not renormalize; see
/// IntegralEngine::normalized_mcgto for the normalizing constructor (general
/// multi-center self-overlaps need the integral engine).
Mcgto make_mcgto(std::vector<ContractedGto> terms, std::vector<double> weights);

struct Nucleus {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  double charge = 0.0;
};

struct NuclearField {
  std::vector<Nucleus> nuclei;

  double repulsion_energy() const;
  double total_charge() const;
};

/// A basis set of W MCGTO functions plus the parameter graph that drives
/// their slots. Immutable after construction; `rebuild` in basis.hpp produces
/// a fresh instance for new theta.
struct BasisSet {
  std::vector<Mcgto> functions;
  ParamGraph graph;

  int W() const { return static_cast<int>(functions.size()); }
};

}  // namespace gtopt
