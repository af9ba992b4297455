#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "gtopt/basis_io.hpp"
#include "gtopt/gto.hpp"
#include "gtopt/integrals.hpp"

namespace gtopt {

/// Which parameter roles participate in optimization. Everything else is
/// wired into the graph as frozen nodes.
struct FreeRoles {
  bool alpha = false;
  bool coeff = false;
  bool center = false;
};

/// Sharing of AO shell parameters between atoms.
enum class AoCorrelation {
  None,       ///< every atom owns its own shell parameters
  ByElement,  ///< atoms of the same element share shell parameters
};

/// Correlation imposed on basis-function centers.
enum class CenterCorrelation {
  Free,             ///< three nodes per atom
  Mirror,           ///< two atoms, second center = -first (3 shared nodes)
  SharedTransverse, ///< collinear atoms: shared x, shared y, z per atom
};

struct AoBasisOptions {
  FreeRoles free;
  AoCorrelation ao_corr = AoCorrelation::ByElement;
  CenterCorrelation center_corr = CenterCorrelation::Free;
};

/// Atom-centered basis from parsed shells; functions enumerate the Cartesian
/// components of every shell on every atom.
BasisSet build_ao_basis(const Geometry& geo, const ElementShells& shells,
                        const AoBasisOptions& opt, const IntegralEngine& engine);

/// Floating s-type CGTOs on the (nx+1)x(ny+1)x(nz+1) points of a grid box;
/// all points share one exponent/coefficient set and one spacing node.
struct GridBoxSpec {
  int nx = 0, ny = 0, nz = 0;
  double spacing = 1.0;
  Eigen::Vector3d origin = Eigen::Vector3d::Zero();
  std::vector<double> alphas, coeffs;
  FreeRoles free;
};
BasisSet build_grid_basis(const GridBoxSpec& spec, const IntegralEngine& engine);

/// Orientation of the three mutually perpendicular pair axes.
enum class Cdo3Orientation {
  SymmetricTop,  ///< equal angle to z, azimuths 0/120/240 degrees
  Axes,          ///< the Cartesian axes
};

/// Completely delocalized three-orbital basis: three pairs of identical
/// floating s-type CGTOs mirrored through a common intersection point along
/// mutually perpendicular axes. All six CGTOs share the same n_gto exponents
/// and contraction coefficients; the only geometric node is the common
/// center-to-intersection distance.
struct Cdo3Spec {
  int n_gto = 0;
  std::vector<double> alphas, coeffs;
  double distance = 0.7;
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  Cdo3Orientation orientation = Cdo3Orientation::SymmetricTop;
  FreeRoles free;
};
BasisSet cdo3_basis(const Cdo3Spec& spec, const IntegralEngine& engine);

/// Fully specified basis (no free parameters): used to reload optimized
/// bases and for one-off calculations.
struct ExplicitTerm {
  std::array<int, 3> ang{0, 0, 0};
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  std::vector<double> alphas, coeffs;
};
struct ExplicitFunction {
  std::vector<ExplicitTerm> terms;
  std::vector<double> weights;
};
BasisSet build_explicit_basis(const std::vector<ExplicitFunction>& functions,
                              const IntegralEngine& engine);

/// Re-evaluates the graph at new theta and reconstructs every function
/// (primitive normalization, contraction renormalization, MCGTO
/// renormalization). Requires every parameter slot to be graph-driven.
BasisSet rebuild_basis(const BasisSet& basis, const Eigen::VectorXd& theta,
                       const IntegralEngine& engine);

}  // namespace gtopt
