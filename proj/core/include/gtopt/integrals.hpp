#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "gtopt/gto.hpp"

namespace gtopt {

/// Two-electron tensor in chemist notation with the 8-fold permutational
/// symmetry of real orbitals: unique elements are stored once and mirrored
/// on read through the canonical composite index.
class Eri4 {
 public:
  Eri4() = default;
  explicit Eri4(int W);

  int W() const { return W_; }
  std::size_t unique_size() const { return data_.size(); }

  double operator()(int i, int j, int k, int l) const {
    return data_[composite(i, j, k, l)];
  }
  /// Writes a canonical element (i>=j, k>=l, pair(ij) >= pair(kl)).
  void set_canonical(int i, int j, int k, int l, double v) {
    data_[composite(i, j, k, l)] = v;
  }

  /// Dense row-major W^4 expansion.
  std::vector<double> full() const;
  const std::vector<double>& unique_data() const { return data_; }

  static std::size_t pair_index(int i, int j) {  // unordered
    return (i >= j) ? static_cast<std::size_t>(i) * (i + 1) / 2 + j
                    : static_cast<std::size_t>(j) * (j + 1) / 2 + i;
  }

 private:
  std::size_t composite(int i, int j, int k, int l) const {
    std::size_t p = pair_index(i, j), q = pair_index(k, l);
    return (p >= q) ? p * (p + 1) / 2 + q : q * (q + 1) / 2 + p;
  }

  int W_ = 0;
  std::vector<double> data_;
};

struct IntegralTensors {
  Eigen::MatrixXd S;  ///< overlap
  Eigen::MatrixXd A;  ///< kinetic + nuclear attraction
  Eri4 B;             ///< (mn|pq)
};

struct IntegralOptions {
  int threads = 1;
  bool dedup_cache = true;        ///< reuse bit-identical primitive integrals
  double screen_eps = 1e-14;      ///< Gaussian-product prefactor screening
  double lindep_tol = 1e-10;      ///< smallest allowed eigenvalue of S
  bool check_linear_dependence = true;
};

// Primitive integrals (explicit norm multipliers included).
double overlap_prim(const PrimitiveGto& a, const PrimitiveGto& b);
double kinetic_prim(const PrimitiveGto& a, const PrimitiveGto& b);
double nuclear_prim(const PrimitiveGto& a, const PrimitiveGto& b,
                    const NuclearField& field);
double eri_prim(const PrimitiveGto& a, const PrimitiveGto& b,
                const PrimitiveGto& c, const PrimitiveGto& d);

/// Memoization of raw primitive integrals keyed by the exact primitive
/// parameters (canonically ordered); values exclude norm factors so that
/// rescaled copies of a primitive still hit. One instance per worker.
class PrimCache {
 public:
  bool lookup(const std::string& key, double& value) const;
  void store(const std::string& key, double value);
  std::size_t size() const { return map_.size(); }

 private:
  std::unordered_map<std::string, double> map_;
};

/// Gaussian integral engine: McMurchie-Davidson Hermite expansion with a
/// Boys-function Coulomb kernel; operates on MCGTOs by bilinear expansion
/// into primitive pairs/quartets.
class IntegralEngine {
 public:
  explicit IntegralEngine(IntegralOptions opt = {}) : opt_(opt) {}

  double overlap(const Mcgto& f, const Mcgto& g, PrimCache* cache = nullptr) const;
  double kinetic(const Mcgto& f, const Mcgto& g, PrimCache* cache = nullptr) const;
  double nuclear(const Mcgto& f, const Mcgto& g, const NuclearField& field,
                 PrimCache* cache = nullptr) const;
  double eri(const Mcgto& f, const Mcgto& g, const Mcgto& h, const Mcgto& k,
             PrimCache* cache = nullptr) const;

  /// make_mcgto + rescale to unit self-overlap. Throws on zero self-overlap.
  Mcgto normalized_mcgto(std::vector<ContractedGto> terms,
                         std::vector<double> weights) const;

  /// Assembles S, A, B over the basis with symmetric slots filled once.
  IntegralTensors build_tensors(const BasisSet& basis, const NuclearField& field) const;

  const IntegralOptions& options() const { return opt_; }

 private:
  IntegralOptions opt_;
};

/// Flat text dumps, one line per unique element: `indices value` with 15
/// significant digits. Deterministic ordering.
void dump_matrix(std::ostream& os, const Eigen::MatrixXd& M);
void dump_eri(std::ostream& os, const Eri4& B);

}  // namespace gtopt
