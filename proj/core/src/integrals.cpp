#include "gtopt/integrals.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "gtopt/boys.hpp"
#include "gtopt/parallel.hpp"

namespace gtopt {

namespace {

constexpr int kMaxAng = 8;  // per Cartesian index, after derivative raising

// ---------------------------------------------------------------------------
// Hermite expansion coefficients E_t^{ij} along one axis, Gaussian prefactor
// exp(-mu*Xab^2) folded into E_0^{00}.
struct ETable {
  double v[(kMaxAng + 1) * (kMaxAng + 1) * (2 * kMaxAng + 1)];
  int jdim = 0, tdim = 0;

  double at(int i, int j, int t) const { return v[(i * jdim + j) * tdim + t]; }
  double& at(int i, int j, int t) { return v[(i * jdim + j) * tdim + t]; }
};

void fill_etable(double a, double b, double A, double B, int imax, int jmax,
                 ETable& E) {
  if (imax > kMaxAng || jmax > kMaxAng)
    throw std::domain_error("integrals: angular momentum exceeds engine limit");
  const double p = a + b;
  const double mu = a * b / p;
  const double Xab = A - B;
  const double Xpa = -(b / p) * Xab;
  const double Xpb = (a / p) * Xab;
  const double inv2p = 0.5 / p;

  E.jdim = jmax + 1;
  E.tdim = imax + jmax + 1;
  std::memset(E.v, 0, sizeof(double) * (imax + 1) * E.jdim * E.tdim);

  E.at(0, 0, 0) = std::exp(-mu * Xab * Xab);
  for (int i = 0; i < imax; ++i)
    for (int t = 0; t <= i + 1; ++t) {
      double val = Xpa * E.at(i, 0, t);
      if (t > 0) val += inv2p * E.at(i, 0, t - 1);
      if (t + 1 <= i) val += (t + 1) * E.at(i, 0, t + 1);
      E.at(i + 1, 0, t) = val;
    }
  for (int i = 0; i <= imax; ++i)
    for (int j = 0; j < jmax; ++j)
      for (int t = 0; t <= i + j + 1; ++t) {
        double val = Xpb * E.at(i, j, t);
        if (t > 0) val += inv2p * E.at(i, j, t - 1);
        if (t + 1 <= i + j) val += (t + 1) * E.at(i, j, t + 1);
        E.at(i, j + 1, t) = val;
      }
}

// ---------------------------------------------------------------------------
// Hermite-Coulomb auxiliary integrals R^0_{tuv}; layered downward recursion
// seeded by (-2w)^n F_n(w |PQ|^2).
struct RTable {
  std::vector<double> buf;
  int ud = 0, vd = 0;
  double at(int t, int u, int v) const { return buf[(t * ud + u) * vd + v]; }
};

void fill_rtable(double w, const Eigen::Vector3d& PQ, int tmax, int umax, int vmax,
                 RTable& R) {
  const int ntot = tmax + umax + vmax;
  const int layer = (tmax + 1) * (umax + 1) * (vmax + 1);
  thread_local std::vector<double> scratch;
  thread_local std::vector<double> fm;
  scratch.assign(static_cast<std::size_t>(ntot + 1) * layer, 0.0);
  fm.resize(ntot + 1);

  boys_array(ntot, w * PQ.squaredNorm(), fm.data());
  auto idx = [&](int n, int t, int u, int v) {
    return static_cast<std::size_t>(n) * layer +
           (static_cast<std::size_t>(t) * (umax + 1) + u) * (vmax + 1) + v;
  };
  double pw = 1.0;
  for (int n = 0; n <= ntot; ++n) {
    scratch[idx(n, 0, 0, 0)] = pw * fm[n];
    pw *= -2.0 * w;
  }
  for (int n = ntot - 1; n >= 0; --n)
    for (int t = 0; t <= std::min(tmax, ntot - n); ++t)
      for (int u = 0; u <= std::min(umax, ntot - n - t); ++u)
        for (int v = 0; v <= std::min(vmax, ntot - n - t - u); ++v) {
          if (t == 0 && u == 0 && v == 0) continue;
          double val;
          if (t > 0) {
            val = PQ[0] * scratch[idx(n + 1, t - 1, u, v)];
            if (t > 1) val += (t - 1) * scratch[idx(n + 1, t - 2, u, v)];
          } else if (u > 0) {
            val = PQ[1] * scratch[idx(n + 1, t, u - 1, v)];
            if (u > 1) val += (u - 1) * scratch[idx(n + 1, t, u - 2, v)];
          } else {
            val = PQ[2] * scratch[idx(n + 1, t, u, v - 1)];
            if (v > 1) val += (v - 1) * scratch[idx(n + 1, t, u, v - 2)];
          }
          scratch[idx(n, t, u, v)] = val;
        }

  R.ud = umax + 1;
  R.vd = vmax + 1;
  R.buf.assign(scratch.begin(), scratch.begin() + layer);
}

// ---------------------------------------------------------------------------
// Raw primitive integrals: unit norm multipliers (applied by callers).

double overlap_raw(double a, const std::array<int, 3>& la, const Eigen::Vector3d& A,
                   double b, const std::array<int, 3>& lb, const Eigen::Vector3d& B) {
  const double p = a + b;
  double val = std::pow(std::numbers::pi / p, 1.5);
  ETable E;
  for (int ax = 0; ax < 3; ++ax) {
    fill_etable(a, b, A[ax], B[ax], la[ax], lb[ax], E);
    val *= E.at(la[ax], lb[ax], 0);
  }
  return val;
}

double kinetic_raw(double a, const std::array<int, 3>& la, const Eigen::Vector3d& A,
                   double b, const std::array<int, 3>& lb, const Eigen::Vector3d& B) {
  const double p = a + b;
  const double pref = std::pow(std::numbers::pi / p, 1.5);
  double s[3], t[3];
  ETable E;
  for (int ax = 0; ax < 3; ++ax) {
    const int j = lb[ax];
    fill_etable(a, b, A[ax], B[ax], la[ax], j + 2, E);
    s[ax] = E.at(la[ax], j, 0);
    double tv = -2.0 * b * (2.0 * j + 1.0) * E.at(la[ax], j, 0) +
                4.0 * b * b * E.at(la[ax], j + 2, 0);
    if (j >= 2) tv += j * (j - 1.0) * E.at(la[ax], j - 2, 0);
    t[ax] = -0.5 * tv;
  }
  return pref * (t[0] * s[1] * s[2] + s[0] * t[1] * s[2] + s[0] * s[1] * t[2]);
}

double nuclear_raw(double a, const std::array<int, 3>& la, const Eigen::Vector3d& A,
                   double b, const std::array<int, 3>& lb, const Eigen::Vector3d& B,
                   const NuclearField& field) {
  const double p = a + b;
  const Eigen::Vector3d P = (a * A + b * B) / p;
  ETable Ex, Ey, Ez;
  fill_etable(a, b, A[0], B[0], la[0], lb[0], Ex);
  fill_etable(a, b, A[1], B[1], la[1], lb[1], Ey);
  fill_etable(a, b, A[2], B[2], la[2], lb[2], Ez);
  const int tmax = la[0] + lb[0], umax = la[1] + lb[1], vmax = la[2] + lb[2];

  double total = 0.0;
  RTable R;
  for (const auto& nuc : field.nuclei) {
    fill_rtable(p, P - nuc.position, tmax, umax, vmax, R);
    double acc = 0.0;
    for (int t = 0; t <= tmax; ++t)
      for (int u = 0; u <= umax; ++u)
        for (int v = 0; v <= vmax; ++v)
          acc += Ex.at(la[0], lb[0], t) * Ey.at(la[1], lb[1], u) *
                 Ez.at(la[2], lb[2], v) * R.at(t, u, v);
    total += -nuc.charge * acc;
  }
  return total * 2.0 * std::numbers::pi / p;
}

double eri_raw(double a, const std::array<int, 3>& la, const Eigen::Vector3d& A,
               double b, const std::array<int, 3>& lb, const Eigen::Vector3d& B,
               double c, const std::array<int, 3>& lc, const Eigen::Vector3d& C,
               double d, const std::array<int, 3>& ld, const Eigen::Vector3d& D) {
  const double p = a + b, q = c + d;
  const Eigen::Vector3d P = (a * A + b * B) / p;
  const Eigen::Vector3d Q = (c * C + d * D) / q;
  const double w = p * q / (p + q);

  ETable E1x, E1y, E1z, E2x, E2y, E2z;
  fill_etable(a, b, A[0], B[0], la[0], lb[0], E1x);
  fill_etable(a, b, A[1], B[1], la[1], lb[1], E1y);
  fill_etable(a, b, A[2], B[2], la[2], lb[2], E1z);
  fill_etable(c, d, C[0], D[0], lc[0], ld[0], E2x);
  fill_etable(c, d, C[1], D[1], lc[1], ld[1], E2y);
  fill_etable(c, d, C[2], D[2], lc[2], ld[2], E2z);

  const int t1 = la[0] + lb[0], u1 = la[1] + lb[1], v1 = la[2] + lb[2];
  const int t2 = lc[0] + ld[0], u2 = lc[1] + ld[1], v2 = lc[2] + ld[2];
  RTable R;
  fill_rtable(w, P - Q, t1 + t2, u1 + u2, v1 + v2, R);

  double acc = 0.0;
  for (int tau = 0; tau <= t2; ++tau)
    for (int nu = 0; nu <= u2; ++nu)
      for (int ph = 0; ph <= v2; ++ph) {
        const double e2 = E2x.at(lc[0], ld[0], tau) * E2y.at(lc[1], ld[1], nu) *
                          E2z.at(lc[2], ld[2], ph);
        if (e2 == 0.0) continue;
        const double sign = ((tau + nu + ph) % 2) ? -1.0 : 1.0;
        double inner = 0.0;
        for (int t = 0; t <= t1; ++t)
          for (int u = 0; u <= u1; ++u)
            for (int v = 0; v <= v1; ++v)
              inner += E1x.at(la[0], lb[0], t) * E1y.at(la[1], lb[1], u) *
                       E1z.at(la[2], lb[2], v) * R.at(t + tau, u + nu, v + ph);
        acc += sign * e2 * inner;
      }
  return acc * 2.0 * std::pow(std::numbers::pi, 2.5) / (p * q * std::sqrt(p + q));
}

// ---------------------------------------------------------------------------
// Flattened primitive view of an MCGTO (contraction weights, MCGTO weights
// and norm multipliers combined).
struct FlatFn {
  std::vector<double> alpha;
  std::vector<std::array<int, 3>> ang;
  std::vector<Eigen::Vector3d> center;
  std::vector<double> w;
  int n() const { return static_cast<int>(alpha.size()); }
};

FlatFn flatten(const Mcgto& f) {
  FlatFn out;
  for (int t = 0; t < f.nterms(); ++t) {
    const auto& g = f.terms[t];
    for (int n = 0; n < g.nprim(); ++n) {
      out.alpha.push_back(g.alphas[n]);
      out.ang.push_back(g.ang);
      out.center.push_back(g.center);
      out.w.push_back(f.weights[t] * g.coeffs[n] * gto_norm(g.alphas[n], g.ang));
    }
  }
  return out;
}

// Cache keys: exact bytes of (alpha, ang, center) per primitive plus a kind
// tag, primitives in canonical order (real-orbital permutation symmetry).
void append_prim_key(std::string& key, double alpha, const std::array<int, 3>& ang,
                     const Eigen::Vector3d& R) {
  char buf[8 + 3 * 4 + 3 * 8];
  std::memcpy(buf, &alpha, 8);
  for (int k = 0; k < 3; ++k) {
    std::int32_t a = ang[k];
    std::memcpy(buf + 8 + 4 * k, &a, 4);
  }
  for (int k = 0; k < 3; ++k) {
    double x = R[k];
    std::memcpy(buf + 20 + 8 * k, &x, 8);
  }
  key.append(buf, sizeof(buf));
}

std::string prim_key(double alpha, const std::array<int, 3>& ang,
                     const Eigen::Vector3d& R) {
  std::string k;
  k.reserve(44);
  append_prim_key(k, alpha, ang, R);
  return k;
}

bool PrimCacheLookup(PrimCache* cache, const std::string& key, double& v) {
  return cache && cache->lookup(key, v);
}

double pair_prefactor(double a, const Eigen::Vector3d& A, double b,
                      const Eigen::Vector3d& B) {
  return std::exp(-a * b / (a + b) * (A - B).squaredNorm());
}

}  // namespace

bool PrimCache::lookup(const std::string& key, double& value) const {
  auto it = map_.find(key);
  if (it == map_.end()) return false;
  value = it->second;
  return true;
}

void PrimCache::store(const std::string& key, double value) { map_.emplace(key, value); }

// ---------------------------------------------------------------------------

Eri4::Eri4(int W) : W_(W) {
  const std::size_t np = static_cast<std::size_t>(W) * (W + 1) / 2;
  data_.assign(np * (np + 1) / 2, 0.0);
}

std::vector<double> Eri4::full() const {
  std::vector<double> out(static_cast<std::size_t>(W_) * W_ * W_ * W_);
  std::size_t idx = 0;
  for (int m = 0; m < W_; ++m)
    for (int n = 0; n < W_; ++n)
      for (int p = 0; p < W_; ++p)
        for (int q = 0; q < W_; ++q) out[idx++] = (*this)(m, n, p, q);
  return out;
}

double overlap_prim(const PrimitiveGto& a, const PrimitiveGto& b) {
  return a.norm * b.norm * overlap_raw(a.alpha, a.ang, a.center, b.alpha, b.ang, b.center);
}

double kinetic_prim(const PrimitiveGto& a, const PrimitiveGto& b) {
  return a.norm * b.norm * kinetic_raw(a.alpha, a.ang, a.center, b.alpha, b.ang, b.center);
}

double nuclear_prim(const PrimitiveGto& a, const PrimitiveGto& b,
                    const NuclearField& field) {
  return a.norm * b.norm *
         nuclear_raw(a.alpha, a.ang, a.center, b.alpha, b.ang, b.center, field);
}

double eri_prim(const PrimitiveGto& a, const PrimitiveGto& b, const PrimitiveGto& c,
                const PrimitiveGto& d) {
  return a.norm * b.norm * c.norm * d.norm *
         eri_raw(a.alpha, a.ang, a.center, b.alpha, b.ang, b.center, c.alpha, c.ang,
                 c.center, d.alpha, d.ang, d.center);
}

// ---------------------------------------------------------------------------

namespace {

enum class OneElecKind { Overlap, Kinetic, Nuclear };

double one_elec_pair(OneElecKind kind, const FlatFn& f, int i, const FlatFn& g, int j,
                     const NuclearField* field, double screen_eps, PrimCache* cache) {
  if (pair_prefactor(f.alpha[i], f.center[i], g.alpha[j], g.center[j]) < screen_eps)
    return 0.0;
  std::string key;
  if (cache) {
    const char tag = kind == OneElecKind::Overlap ? 'S'
                     : kind == OneElecKind::Kinetic ? 'T'
                                                    : 'V';
    // overlap is symmetric; kinetic acts on the ket, keep order as given
    std::string ka = prim_key(f.alpha[i], f.ang[i], f.center[i]);
    std::string kb = prim_key(g.alpha[j], g.ang[j], g.center[j]);
    key.push_back(tag);
    if (kind != OneElecKind::Kinetic && kb < ka) std::swap(ka, kb);
    key += ka;
    key += kb;
    double v;
    if (PrimCacheLookup(cache, key, v)) return v;
  }
  double v = 0.0;
  switch (kind) {
    case OneElecKind::Overlap:
      v = overlap_raw(f.alpha[i], f.ang[i], f.center[i], g.alpha[j], g.ang[j], g.center[j]);
      break;
    case OneElecKind::Kinetic:
      v = kinetic_raw(f.alpha[i], f.ang[i], f.center[i], g.alpha[j], g.ang[j], g.center[j]);
      break;
    case OneElecKind::Nuclear:
      v = nuclear_raw(f.alpha[i], f.ang[i], f.center[i], g.alpha[j], g.ang[j], g.center[j],
                      *field);
      break;
  }
  if (cache) cache->store(key, v);
  return v;
}

double contract_one_elec(OneElecKind kind, const FlatFn& f, const FlatFn& g,
                         const NuclearField* field, double screen_eps,
                         PrimCache* cache) {
  double total = 0.0;
  for (int i = 0; i < f.n(); ++i)
    for (int j = 0; j < g.n(); ++j)
      total += f.w[i] * g.w[j] *
               one_elec_pair(kind, f, i, g, j, field, screen_eps, cache);
  return total;
}

double contract_eri(const FlatFn& f, const FlatFn& g, const FlatFn& h, const FlatFn& k,
                    double screen_eps, PrimCache* cache) {
  double total = 0.0;
  for (int i = 0; i < f.n(); ++i)
    for (int j = 0; j < g.n(); ++j) {
      if (pair_prefactor(f.alpha[i], f.center[i], g.alpha[j], g.center[j]) < screen_eps)
        continue;
      const double wij = f.w[i] * g.w[j];
      for (int m = 0; m < h.n(); ++m)
        for (int n = 0; n < k.n(); ++n) {
          if (pair_prefactor(h.alpha[m], h.center[m], k.alpha[n], k.center[n]) <
              screen_eps)
            continue;
          double v;
          if (cache) {
            std::string ka = prim_key(f.alpha[i], f.ang[i], f.center[i]);
            std::string kb = prim_key(g.alpha[j], g.ang[j], g.center[j]);
            std::string kc = prim_key(h.alpha[m], h.ang[m], h.center[m]);
            std::string kd = prim_key(k.alpha[n], k.ang[n], k.center[n]);
            if (kb < ka) std::swap(ka, kb);
            if (kd < kc) std::swap(kc, kd);
            if (kc < ka || (kc == ka && kd < kb)) {
              std::swap(ka, kc);
              std::swap(kb, kd);
            }
            std::string key;
            key.reserve(1 + 4 * 44);
            key.push_back('E');
            key += ka;
            key += kb;
            key += kc;
            key += kd;
            if (!PrimCacheLookup(cache, key, v)) {
              v = eri_raw(f.alpha[i], f.ang[i], f.center[i], g.alpha[j], g.ang[j],
                          g.center[j], h.alpha[m], h.ang[m], h.center[m], k.alpha[n],
                          k.ang[n], k.center[n]);
              cache->store(key, v);
            }
          } else {
            v = eri_raw(f.alpha[i], f.ang[i], f.center[i], g.alpha[j], g.ang[j],
                        g.center[j], h.alpha[m], h.ang[m], h.center[m], k.alpha[n],
                        k.ang[n], k.center[n]);
          }
          total += wij * h.w[m] * k.w[n] * v;
        }
    }
  return total;
}

}  // namespace

double IntegralEngine::overlap(const Mcgto& f, const Mcgto& g, PrimCache* cache) const {
  if (f.empty() || g.empty()) return 0.0;
  FlatFn ff = flatten(f), fg = flatten(g);
  return contract_one_elec(OneElecKind::Overlap, ff, fg, nullptr, opt_.screen_eps, cache);
}

double IntegralEngine::kinetic(const Mcgto& f, const Mcgto& g, PrimCache* cache) const {
  if (f.empty() || g.empty()) return 0.0;
  FlatFn ff = flatten(f), fg = flatten(g);
  return contract_one_elec(OneElecKind::Kinetic, ff, fg, nullptr, opt_.screen_eps, cache);
}

double IntegralEngine::nuclear(const Mcgto& f, const Mcgto& g, const NuclearField& field,
                               PrimCache* cache) const {
  if (f.empty() || g.empty()) return 0.0;
  FlatFn ff = flatten(f), fg = flatten(g);
  return contract_one_elec(OneElecKind::Nuclear, ff, fg, &field, opt_.screen_eps, cache);
}

double IntegralEngine::eri(const Mcgto& f, const Mcgto& g, const Mcgto& h, const Mcgto& k,
                           PrimCache* cache) const {
  if (f.empty() || g.empty() || h.empty() || k.empty()) return 0.0;
  FlatFn ff = flatten(f), fg = flatten(g), fh = flatten(h), fk = flatten(k);
  return contract_eri(ff, fg, fh, fk, opt_.screen_eps, cache);
}

Mcgto IntegralEngine::normalized_mcgto(std::vector<ContractedGto> terms,
                                       std::vector<double> weights) const {
  Mcgto f = make_mcgto(std::move(terms), std::move(weights));
  double s = overlap(f, f);
  if (!(s > 1e-12))
    throw std::domain_error("normalized_mcgto: zero self-overlap (" +
                            std::to_string(s) + ")");
  f.scale(1.0 / std::sqrt(s));
  return f;
}

IntegralTensors IntegralEngine::build_tensors(const BasisSet& basis,
                                              const NuclearField& field) const {
  const int W = basis.W();
  if (W == 0) throw std::invalid_argument("build_tensors: empty basis");

  std::vector<FlatFn> flat(W);
  for (int i = 0; i < W; ++i) flat[i] = flatten(basis.functions[i]);

  IntegralTensors out;
  out.S.resize(W, W);
  out.A.resize(W, W);
  out.B = Eri4(W);

  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < W; ++i)
    for (int j = 0; j <= i; ++j) pairs.emplace_back(i, j);

  const int nworkers = std::max(1, opt_.threads);
  std::vector<PrimCache> caches(opt_.dedup_cache ? nworkers : 0);
  auto cache_of = [&](int worker) -> PrimCache* {
    return opt_.dedup_cache ? &caches[worker] : nullptr;
  };

  parallel_for(pairs.size(), opt_.threads, [&](std::size_t idx, int worker) {
    auto [i, j] = pairs[idx];
    PrimCache* cache = cache_of(worker);
    double s = contract_one_elec(OneElecKind::Overlap, flat[i], flat[j], nullptr,
                                 opt_.screen_eps, cache);
    double t = contract_one_elec(OneElecKind::Kinetic, flat[i], flat[j], nullptr,
                                 opt_.screen_eps, cache);
    double v = contract_one_elec(OneElecKind::Nuclear, flat[i], flat[j], &field,
                                 opt_.screen_eps, cache);
    out.S(i, j) = out.S(j, i) = s;
    out.A(i, j) = out.A(j, i) = t + v;
  });

  if (opt_.check_linear_dependence) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out.S);
    const double lmin = es.eigenvalues().minCoeff();
    if (lmin < opt_.lindep_tol)
      throw std::runtime_error(
          "build_tensors: linearly dependent basis (smallest overlap eigenvalue " +
          std::to_string(lmin) + ")");
  }

  std::vector<std::array<int, 4>> quartets;
  for (std::size_t pq = 0; pq < pairs.size(); ++pq)
    for (std::size_t rs = 0; rs <= pq; ++rs)
      quartets.push_back({pairs[pq].first, pairs[pq].second, pairs[rs].first,
                          pairs[rs].second});

  parallel_for(quartets.size(), opt_.threads, [&](std::size_t idx, int worker) {
    auto [i, j, k, l] = quartets[idx];
    double v = contract_eri(flat[i], flat[j], flat[k], flat[l], opt_.screen_eps,
                            cache_of(worker));
    out.B.set_canonical(i, j, k, l, v);
  });

  return out;
}

void dump_matrix(std::ostream& os, const Eigen::MatrixXd& M) {
  char line[128];
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j <= i && j < M.cols(); ++j) {
      std::snprintf(line, sizeof(line), "%d %d %.15g\n", i, j, M(i, j));
      os << line;
    }
}

void dump_eri(std::ostream& os, const Eri4& B) {
  const int W = B.W();
  char line[160];
  for (int i = 0; i < W; ++i)
    for (int j = 0; j <= i; ++j)
      for (int k = 0; k <= i; ++k)
        for (int l = 0; l <= k; ++l) {
          if (Eri4::pair_index(i, j) < Eri4::pair_index(k, l)) continue;
          std::snprintf(line, sizeof(line), "%d %d %d %d %.15g\n", i, j, k, l,
                        B(i, j, k, l));
          os << line;
        }
}

}  // namespace gtopt
