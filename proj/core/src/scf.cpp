#include "gtopt/scf.hpp"

#include <cmath>
#include <cstdio>
#include <deque>
#include <ostream>
#include <stdexcept>

namespace gtopt {

Orthogonalizer sym_orthogonalizer(const Eigen::MatrixXd& S, double lindep_tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("sym_orthogonalizer: eigendecomposition failed");
  Orthogonalizer o;
  o.V = es.eigenvectors();
  o.lambda = es.eigenvalues();
  if (o.lambda.minCoeff() < lindep_tol)
    throw std::runtime_error(
        "sym_orthogonalizer: linearly dependent overlap (smallest eigenvalue " +
        std::to_string(o.lambda.minCoeff()) + ")");
  o.X = o.V * o.lambda.cwiseInverse().cwiseSqrt().asDiagonal() * o.V.transpose();
  return o;
}

std::vector<double> transform_eri_full(std::vector<double> t, int W,
                                       const Eigen::MatrixXd& X) {
  using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  std::vector<double> u(t.size());
  // four quarter transforms; after each, axes rotate so the contracted index
  // is always the last one
  for (int pass = 0; pass < 4; ++pass) {
    Eigen::Map<const RowMat> tin(t.data(), W * W * W, W);
    Eigen::Map<RowMat> tout(u.data(), W * W * W, W);
    tout = tin * X;  // (mnp,q') = sum_q (mnp,q) X(q,q')
    // rotate axes: (m,n,p,q') -> (q',m,n,p)
    for (int m = 0; m < W; ++m)
      for (int n = 0; n < W; ++n)
        for (int p = 0; p < W; ++p)
          for (int q = 0; q < W; ++q)
            t[((q * W + m) * W + n) * W + p] = u[((m * W + n) * W + p) * W + q];
  }
  return t;
}

Eri4 transform_eri(const Eri4& B, const Eigen::MatrixXd& X) {
  const int W = B.W();
  std::vector<double> t = transform_eri_full(B.full(), W, X);
  Eri4 out(W);
  for (int i = 0; i < W; ++i)
    for (int j = 0; j <= i; ++j)
      for (int k = 0; k <= i; ++k)
        for (int l = 0; l <= k; ++l) {
          if (Eri4::pair_index(i, j) < Eri4::pair_index(k, l)) continue;
          out.set_canonical(i, j, k, l, t[((i * W + j) * W + k) * W + l]);
        }
  return out;
}

Eigen::MatrixXd fock_matrix(const Eigen::MatrixXd& D, const Eigen::MatrixXd& A,
                            const Eri4& B) {
  const int W = static_cast<int>(A.rows());
  Eigen::MatrixXd F = A;
  for (int m = 0; m < W; ++m)
    for (int n = 0; n <= m; ++n) {
      double g = 0.0;
      for (int l = 0; l < W; ++l)
        for (int s = 0; s < W; ++s)
          g += D(l, s) * (2.0 * B(m, n, l, s) - B(m, l, s, n));
      F(m, n) += g;
      if (m != n) F(n, m) += g;
    }
  return F;
}

double rhf_energy(const Eigen::MatrixXd& D, const Eigen::MatrixXd& A, const Eri4& B) {
  if (D.rows() != A.rows() || D.cols() != A.cols() || A.rows() != B.W())
    throw std::invalid_argument("rhf_energy: dimension mismatch");
  const int W = static_cast<int>(A.rows());
  double e = 2.0 * D.cwiseProduct(A).sum();
  for (int m = 0; m < W; ++m)
    for (int n = 0; n < W; ++n)
      for (int l = 0; l < W; ++l)
        for (int s = 0; s < W; ++s)
          e += D(m, n) * D(l, s) * (2.0 * B(m, n, l, s) - B(m, l, s, n));
  return e;
}

namespace {

Eigen::MatrixXd density_from_fock(const Eigen::MatrixXd& F, int nocc,
                                  Eigen::MatrixXd& C, Eigen::VectorXd& eps) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(F);
  C = es.eigenvectors();
  eps = es.eigenvalues();
  const auto occ = C.leftCols(nocc);
  return occ * occ.transpose();
}

}  // namespace

ScfResult rhf(const IntegralTensors& tensors, const NuclearField& field, int n_elec,
              const ScfOptions& opt) {
  if (n_elec <= 0 || n_elec % 2 != 0)
    throw std::invalid_argument("rhf: electron count must be positive and even");
  const int W = static_cast<int>(tensors.S.rows());
  const int nocc = n_elec / 2;
  if (nocc > W)
    throw std::invalid_argument("rhf: " + std::to_string(nocc) +
                                " doubly occupied orbitals exceed basis size " +
                                std::to_string(W));

  ScfResult res;
  res.n_occ = nocc;
  res.e_nuc = field.repulsion_energy();
  res.orth = sym_orthogonalizer(tensors.S);
  res.A_ortho = res.orth.X.transpose() * tensors.A * res.orth.X;
  res.B_ortho = transform_eri(tensors.B, res.orth.X);

  const double comm_tol = opt.commutator_tol > 0 ? opt.commutator_tol : std::sqrt(opt.conv);

  // core-Hamiltonian guess
  Eigen::MatrixXd C, D;
  Eigen::VectorXd eps;
  D = density_from_fock(res.A_ortho, nocc, C, eps);

  std::deque<Eigen::MatrixXd> diis_err, diis_fock;
  Eigen::MatrixXd F_prev;
  double e_old = 0.0;
  char line[160];

  for (int it = 1; it <= opt.max_iter; ++it) {
    Eigen::MatrixXd F = fock_matrix(D, res.A_ortho, res.B_ortho);
    const double e = D.cwiseProduct(res.A_ortho + F).sum();
    if (!std::isfinite(e)) throw std::runtime_error("rhf: non-finite energy");
    const Eigen::MatrixXd err = F * D - D * F;
    const double err_norm = err.cwiseAbs().maxCoeff();
    const double de = e - e_old;
    res.history.push_back(e);
    res.iterations = it;
    if (opt.log) {
      std::snprintf(line, sizeof(line), "scf %4d  E_elec % .12f  dE % .3e  diis %.3e\n",
                    it, e, de, err_norm);
      *opt.log << line;
    }
    if (it > 1 && std::abs(de) < opt.conv && err_norm < comm_tol) {
      res.converged = true;
      res.e_elec = e;
      break;
    }
    res.e_elec = e;
    e_old = e;

    diis_err.push_back(err);
    diis_fock.push_back(F);
    if (static_cast<int>(diis_err.size()) > opt.diis_size) {
      diis_err.pop_front();
      diis_fock.pop_front();
    }

    Eigen::MatrixXd F_next = F;
    const int nd = static_cast<int>(diis_err.size());
    bool used_diis = false;
    if (nd > 1) {
      Eigen::MatrixXd M = Eigen::MatrixXd::Zero(nd + 1, nd + 1);
      for (int i = 0; i < nd; ++i)
        for (int j = 0; j < nd; ++j)
          M(i, j) = diis_err[i].cwiseProduct(diis_err[j]).sum();
      M.row(nd).setConstant(-1.0);
      M.col(nd).setConstant(-1.0);
      M(nd, nd) = 0.0;
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nd + 1);
      rhs[nd] = -1.0;
      Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
      if (lu.isInvertible()) {
        Eigen::VectorXd c = lu.solve(rhs);
        if (c.head(nd).allFinite() && c.head(nd).cwiseAbs().maxCoeff() < 1e6) {
          F_next.setZero();
          for (int i = 0; i < nd; ++i) F_next += c[i] * diis_fock[i];
          used_diis = true;
        }
      }
    }

    // Fock damping keeps D idempotent when DIIS extrapolation is unusable
    if (!used_diis && it > 1) F_next = opt.damping * F_prev + (1.0 - opt.damping) * F;
    F_prev = F;
    D = density_from_fock(F_next, nocc, C, eps);
  }

  res.D_ortho = D;
  res.C_ortho = C;
  res.orbital_energies = eps;
  res.C = res.orth.X * C;
  res.D = res.orth.X * D * res.orth.X.transpose();
  return res;
}

}  // namespace gtopt
