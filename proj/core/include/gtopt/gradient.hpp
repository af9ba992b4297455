#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "gtopt/gto.hpp"
#include "gtopt/integrals.hpp"
#include "gtopt/scf.hpp"

namespace gtopt {

/// The derivative basis set: the original basis functions plus, for every
/// free parameter, the MCGTOs representing their partial derivatives.
/// Derivative members are never renormalized. Zero derivatives are elided.
struct DerivativeBasis {
  int W = 0;
  std::vector<Mcgto> members;  ///< [0, W) the basis; then the psi functions

  struct PsiRef {
    int function;  ///< index n of the differentiated basis function
    int member;    ///< index into members
  };
  std::vector<std::vector<PsiRef>> per_theta;  ///< empty for frozen/untouched theta

  int n_theta() const { return static_cast<int>(per_theta.size()); }
  /// member index of psi_n^theta, -1 when it is the zero function
  int psi_member(int function, int theta) const;
};

/// Symbolic derivative of a basis function with respect to one graph slot it
/// references (an exponent, a contraction coefficient, or one center
/// coordinate). Contraction and MCGTO renormalization constants are treated
/// as frozen: their variation is parallel to phi and cannot change the
/// converged energy. Throws when phi does not reference the slot.
Mcgto d_phi_d_slot(const Mcgto& phi, int slot);

/// D = {phi_n} union {psi_n^theta_i} chain-ruled through the parameter graph.
DerivativeBasis build_derivative_basis(const BasisSet& basis);

/// (dS)_mn = <psi_m|phi_n> + <phi_m|psi_n> over the raw basis.
Eigen::MatrixXd d_overlap(const DerivativeBasis& db, int theta,
                          const IntegralEngine& engine, PrimCache* cache = nullptr);

/// Derivative of X = S^(-1/2) from the retained eigenpairs of S:
/// dX_mn = -sum_pq V_mp (V^T dS V)_pq / [sqrt(l_p l_q) (sqrt(l_p)+sqrt(l_q))] V_nq
Eigen::MatrixXd d_orthogonalizer(const Orthogonalizer& orth, const Eigen::MatrixXd& dS);

/// Gradients of the RHF energy with respect to the orthonormal-basis tensors
/// at the converged density: dE/dA = 2D, dE/dB_mnpq = 2 D_mn D_pq - D_mq D_np
/// (returned 8-fold symmetrized). Throws on unconverged input.
struct TensorEnergyGradients {
  Eigen::MatrixXd gradA;
  std::vector<double> gradB;  ///< dense W^4, symmetrized
};
TensorEnergyGradients grad_wrt_tensors(const ScfResult& scf);

struct GradientOptions {
  int threads = 1;
  bool dedup_cache = true;
  bool keep_parts = false;  ///< retain per-theta dA/dB diagnostics
};

struct GradientReport {
  Eigen::VectorXd dE_dtheta;  ///< full length n_theta; frozen entries are 0

  struct Parts {
    Eigen::MatrixXd gradA;
    std::vector<Eigen::MatrixXd> dA;          // per free theta
    std::vector<std::vector<double>> dB;      // per free theta, dense W^4
    std::vector<int> theta_index;
  };
  std::optional<Parts> parts;
};

/// Shared state for per-theta derivative tensor assembly.
class GradientContext {
 public:
  GradientContext(const BasisSet& basis, const NuclearField& field,
                  const ScfResult& scf, const IntegralTensors& raw,
                  const GradientOptions& opt = {});

  struct TensorDerivs {
    Eigen::MatrixXd dA;      ///< orthonormal-basis one-electron derivative
    std::vector<double> dB;  ///< orthonormal-basis two-electron derivative, W^4
  };
  /// Eqs. for d(A)/d(theta) and d(B)/d(theta) including the dX transport.
  TensorDerivs d_tensors(int theta, PrimCache* cache = nullptr) const;

  const DerivativeBasis& derivative_basis() const { return db_; }
  const IntegralEngine& engine() const { return engine_; }

 private:
  const BasisSet& basis_;
  const NuclearField& field_;
  const ScfResult& scf_;
  const IntegralTensors& raw_;
  GradientOptions opt_;
  IntegralEngine engine_;
  DerivativeBasis db_;
  std::vector<double> b_ortho_full_;
};

/// dE/dtheta_i = sum(gradA o dA_i) + sum(gradB o dB_i) for every free theta.
/// Requires a converged SCF at the basis that produced `raw`.
GradientReport energy_gradient(const BasisSet& basis, const NuclearField& field,
                               const ScfResult& scf, const IntegralTensors& raw,
                               const GradientOptions& opt = {});

}  // namespace gtopt
