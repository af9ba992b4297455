#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

#include "gtopt/gto.hpp"
#include "gtopt/integrals.hpp"

namespace gtopt {

/// Symmetric (Loewdin) orthogonalizer X = V diag(lambda^-1/2) V^T with the
/// eigenpairs of S retained for derivative work.
struct Orthogonalizer {
  Eigen::MatrixXd X;
  Eigen::MatrixXd V;
  Eigen::VectorXd lambda;
};

/// Throws when the smallest eigenvalue of S falls below lindep_tol.
Orthogonalizer sym_orthogonalizer(const Eigen::MatrixXd& S, double lindep_tol = 1e-10);

struct ScfOptions {
  double conv = 1e-9;          ///< |dE| threshold (Hartree)
  int max_iter = 200;
  int diis_size = 8;
  double damping = 0.5;        ///< Roothaan damping when DIIS is unusable
  double commutator_tol = -1;  ///< ||[F,D]||_inf threshold; default sqrt(conv)
  std::ostream* log = nullptr; ///< per-iteration lines when set
};

struct ScfResult {
  double e_elec = 0.0;
  double e_nuc = 0.0;
  bool converged = false;
  int iterations = 0;
  int n_occ = 0;

  Eigen::MatrixXd D;        ///< raw-basis per-spin density (D S D = D, tr(D S) = N_up)
  Eigen::MatrixXd C;        ///< raw-basis MO coefficients
  Eigen::MatrixXd D_ortho;  ///< density in the orthonormalized basis
  Eigen::MatrixXd C_ortho;
  Eigen::VectorXd orbital_energies;
  Orthogonalizer orth;

  Eigen::MatrixXd A_ortho;  ///< one-electron tensor over the orthonormal basis
  Eri4 B_ortho;             ///< two-electron tensor over the orthonormal basis

  std::vector<double> history;  ///< electronic energy per iteration

  double total() const { return e_elec + e_nuc; }
};

/// Restricted closed-shell Hartree-Fock over prebuilt tensors. Iterates in
/// the orthonormalized basis with DIIS acceleration and a core-Hamiltonian
/// initial guess. Non-convergence is reported in the result, not thrown.
ScfResult rhf(const IntegralTensors& tensors, const NuclearField& field, int n_elec,
              const ScfOptions& opt = {});

/// Closed-shell energy 2 sum(D o A) + sum D D [2(mn|ls) - (ml|sn)] for a
/// density and tensors expressed in the same (orthonormal) basis.
double rhf_energy(const Eigen::MatrixXd& D, const Eigen::MatrixXd& A, const Eri4& B);

/// Fock matrix in the orthonormal basis for per-spin density D.
Eigen::MatrixXd fock_matrix(const Eigen::MatrixXd& D, const Eigen::MatrixXd& A,
                            const Eri4& B);

/// Applies X to all four indices of B (raw -> orthonormal basis).
Eri4 transform_eri(const Eri4& B, const Eigen::MatrixXd& X);

/// Same transform on a dense row-major W^4 tensor without symmetry.
std::vector<double> transform_eri_full(std::vector<double> T, int W,
                                       const Eigen::MatrixXd& X);

}  // namespace gtopt
