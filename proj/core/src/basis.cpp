#include "gtopt/basis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gtopt {

namespace {

// Structural prototype of one CGTO term: fixed angular momentum plus the
// graph slots every parameter is read from.
struct TermProto {
  std::array<int, 3> ang{0, 0, 0};
  std::array<int, 3> center_slots{-1, -1, -1};
  std::vector<int> alpha_slots, coeff_slots;
};

struct FunctionProto {
  std::vector<TermProto> terms;
  std::vector<double> weights;
};

ContractedGto realize_term(const TermProto& t, const Eigen::VectorXd& p) {
  std::vector<double> alphas(t.alpha_slots.size()), coeffs(t.coeff_slots.size());
  for (std::size_t n = 0; n < alphas.size(); ++n) alphas[n] = p[t.alpha_slots[n]];
  for (std::size_t n = 0; n < coeffs.size(); ++n) coeffs[n] = p[t.coeff_slots[n]];
  Eigen::Vector3d center;
  for (int ax = 0; ax < 3; ++ax) center[ax] = p[t.center_slots[ax]];
  ContractedGto g = make_cgto(center, t.ang, std::move(alphas), std::move(coeffs));
  g.center_slots = t.center_slots;
  g.alpha_slots = t.alpha_slots;
  g.coeff_slots = t.coeff_slots;
  return g;
}

BasisSet assemble(ParamGraph graph, const std::vector<FunctionProto>& protos,
                  const IntegralEngine& engine) {
  BasisSet basis;
  basis.graph = std::move(graph);
  const Eigen::VectorXd p = basis.graph.eval();
  for (const auto& fp : protos) {
    std::vector<ContractedGto> terms;
    terms.reserve(fp.terms.size());
    for (const auto& tp : fp.terms) terms.push_back(realize_term(tp, p));
    basis.functions.push_back(engine.normalized_mcgto(std::move(terms), fp.weights));
  }
  return basis;
}

// identity slots for a list of theta nodes
std::vector<int> identity_slots(ParamGraph& g, SlotRole role,
                                const std::vector<int>& thetas,
                                const std::string& label) {
  std::vector<int> slots;
  slots.reserve(thetas.size());
  for (std::size_t k = 0; k < thetas.size(); ++k)
    slots.push_back(g.add_slot(role, MapExpr::ref(thetas[k]),
                               label + "." + std::to_string(k)));
  return slots;
}

}  // namespace

BasisSet build_ao_basis(const Geometry& geo, const ElementShells& shells,
                        const AoBasisOptions& opt, const IntegralEngine& engine) {
  const int natoms = static_cast<int>(geo.elements.size());
  if (natoms == 0) throw std::invalid_argument("build_ao_basis: no atoms");

  ParamGraph graph;

  // center nodes per atom, honoring the requested correlation
  std::vector<std::array<MapExpr, 3>> center_maps(natoms);
  switch (opt.center_corr) {
    case CenterCorrelation::Free: {
      for (int a = 0; a < natoms; ++a)
        for (int ax = 0; ax < 3; ++ax) {
          int t = graph.add_theta(std::string(1, "xyz"[ax]),
                                  geo.field.nuclei[a].position[ax], !opt.free.center);
          center_maps[a][ax] = MapExpr::ref(t);
        }
      break;
    }
    case CenterCorrelation::Mirror: {
      if (natoms != 2)
        throw std::invalid_argument("mirror center correlation needs exactly two atoms");
      if ((geo.field.nuclei[0].position + geo.field.nuclei[1].position).norm() > 1e-9)
        throw std::invalid_argument(
            "mirror center correlation needs a geometry symmetric about the origin");
      for (int ax = 0; ax < 3; ++ax) {
        int t = graph.add_theta(std::string(1, "xyz"[ax]),
                                geo.field.nuclei[0].position[ax], !opt.free.center);
        center_maps[0][ax] = MapExpr::ref(t);
        center_maps[1][ax] = MapExpr::negate(MapExpr::ref(t));
      }
      break;
    }
    case CenterCorrelation::SharedTransverse: {
      for (int ax = 0; ax < 2; ++ax) {
        const double v0 = geo.field.nuclei[0].position[ax];
        for (int a = 1; a < natoms; ++a)
          if (std::abs(geo.field.nuclei[a].position[ax] - v0) > 1e-9)
            throw std::invalid_argument(
                "shared-transverse center correlation needs atoms collinear along z");
        int t = graph.add_theta(std::string(1, "xy"[ax]), v0, !opt.free.center);
        for (int a = 0; a < natoms; ++a) center_maps[a][ax] = MapExpr::ref(t);
      }
      for (int a = 0; a < natoms; ++a) {
        int t = graph.add_theta("z", geo.field.nuclei[a].position[2], !opt.free.center);
        center_maps[a][2] = MapExpr::ref(t);
      }
      break;
    }
  }

  // shell parameter nodes; ByElement lets later atoms reuse the owner's nodes
  struct ShellNodes {
    std::vector<int> alpha, coeff;
  };
  std::map<std::string, std::vector<ShellNodes>> element_nodes;

  BasisSet basis;
  std::vector<FunctionProto> protos;
  for (int a = 0; a < natoms; ++a) {
    const std::string& el = geo.elements[a];
    auto it = shells.find(el);
    if (it == shells.end())
      throw std::invalid_argument("basis file defines no shells for element " + el);
    const auto& el_shells = it->second;

    const bool share = opt.ao_corr == AoCorrelation::ByElement;
    const std::string key = share ? el : el + "#" + std::to_string(a);
    if (!element_nodes.count(key)) {
      auto& fresh = element_nodes[key];
      for (std::size_t s = 0; s < el_shells.size(); ++s) {
        ShellNodes sn;
        for (std::size_t n = 0; n < el_shells[s].exponents.size(); ++n) {
          sn.alpha.push_back(graph.add_theta("a" + el, el_shells[s].exponents[n],
                                             !opt.free.alpha));
          sn.coeff.push_back(graph.add_theta("d" + el, el_shells[s].coefficients[n],
                                             !opt.free.coeff));
        }
        fresh.push_back(std::move(sn));
      }
    }
    const std::vector<ShellNodes>* nodes = &element_nodes[key];

    for (std::size_t s = 0; s < el_shells.size(); ++s) {
      for (const auto& ang : el_shells[s].cartesian_angs()) {
        TermProto tp;
        tp.ang = ang;
        const std::string label = el + std::to_string(a) + ":" + el_shells[s].type +
                                  std::to_string(s);
        for (int ax = 0; ax < 3; ++ax)
          tp.center_slots[ax] = graph.add_slot(SlotRole::Center, center_maps[a][ax],
                                               label + "." + "xyz"[ax]);
        for (int n : (*nodes)[s].alpha)
          tp.alpha_slots.push_back(
              graph.add_slot(SlotRole::Exponent, MapExpr::ref(n), label + ".a"));
        for (int n : (*nodes)[s].coeff)
          tp.coeff_slots.push_back(
              graph.add_slot(SlotRole::Coefficient, MapExpr::ref(n), label + ".d"));
        protos.push_back(FunctionProto{{tp}, {1.0}});
      }
    }
  }
  return assemble(std::move(graph), protos, engine);
}

BasisSet build_grid_basis(const GridBoxSpec& spec, const IntegralEngine& engine) {
  if (spec.alphas.empty() || spec.alphas.size() != spec.coeffs.size())
    throw std::invalid_argument("grid-box: bad exponent/coefficient lists");
  if (!(spec.spacing > 0.0)) throw std::domain_error("grid-box: non-positive spacing");

  ParamGraph graph;
  int spacing_theta = graph.add_theta("L", spec.spacing, !spec.free.center);
  std::vector<int> alpha_nodes, coeff_nodes;
  for (std::size_t n = 0; n < spec.alphas.size(); ++n) {
    alpha_nodes.push_back(graph.add_theta("a", spec.alphas[n], !spec.free.alpha));
    coeff_nodes.push_back(graph.add_theta("d", spec.coeffs[n], !spec.free.coeff));
  }

  std::vector<int> center_slots =
      grid_box(graph, spec.nx, spec.ny, spec.nz, spacing_theta, spec.origin);
  const int npoints = static_cast<int>(center_slots.size()) / 3;

  std::vector<FunctionProto> protos;
  for (int pt = 0; pt < npoints; ++pt) {
    TermProto tp;
    tp.ang = {0, 0, 0};
    for (int ax = 0; ax < 3; ++ax) tp.center_slots[ax] = center_slots[3 * pt + ax];
    const std::string label = "g" + std::to_string(pt);
    tp.alpha_slots = identity_slots(graph, SlotRole::Exponent, alpha_nodes, label + ".a");
    tp.coeff_slots =
        identity_slots(graph, SlotRole::Coefficient, coeff_nodes, label + ".d");
    protos.push_back(FunctionProto{{tp}, {1.0}});
  }
  return assemble(std::move(graph), protos, engine);
}

BasisSet cdo3_basis(const Cdo3Spec& spec, const IntegralEngine& engine) {
  if (spec.n_gto < 1) throw std::invalid_argument("cdo3: n_gto must be >= 1");
  if (static_cast<int>(spec.alphas.size()) != spec.n_gto ||
      static_cast<int>(spec.coeffs.size()) != spec.n_gto)
    throw std::invalid_argument("cdo3: exponent/coefficient lists must have n_gto entries");
  if (!(spec.distance > 0.0)) throw std::domain_error("cdo3: non-positive distance");

  ParamGraph graph;
  std::vector<int> alpha_nodes, coeff_nodes;
  for (int n = 0; n < spec.n_gto; ++n) {
    alpha_nodes.push_back(graph.add_theta("a", spec.alphas[n], !spec.free.alpha));
    coeff_nodes.push_back(graph.add_theta("d", spec.coeffs[n], !spec.free.coeff));
  }
  int r_theta = graph.add_theta("r", spec.distance, !spec.free.center);

  // three mutually perpendicular unit vectors
  std::vector<Eigen::Vector3d> dirs;
  if (spec.orientation == Cdo3Orientation::Axes) {
    dirs = {Eigen::Vector3d::UnitX(), Eigen::Vector3d::UnitY(), Eigen::Vector3d::UnitZ()};
  } else {
    const double s = std::sqrt(2.0 / 3.0), c = 1.0 / std::sqrt(3.0);
    for (int k = 0; k < 3; ++k) {
      const double phi = 2.0 * std::numbers::pi * k / 3.0;
      dirs.emplace_back(s * std::cos(phi), s * std::sin(phi), c);
    }
  }

  std::vector<FunctionProto> protos;
  for (int k = 0; k < 3; ++k) {
    FunctionProto fp;
    for (double sign : {+1.0, -1.0}) {
      TermProto tp;
      tp.ang = {0, 0, 0};
      const std::string label = "cdo" + std::to_string(k) + (sign > 0 ? "+" : "-");
      for (int ax = 0; ax < 3; ++ax)
        tp.center_slots[ax] =
            graph.add_slot(SlotRole::Center,
                           MapExpr::affine(sign * dirs[k][ax], spec.center[ax],
                                           MapExpr::ref(r_theta)),
                           label + "." + "xyz"[ax]);
      tp.alpha_slots = identity_slots(graph, SlotRole::Exponent, alpha_nodes, label + ".a");
      tp.coeff_slots =
          identity_slots(graph, SlotRole::Coefficient, coeff_nodes, label + ".d");
      fp.terms.push_back(std::move(tp));
      fp.weights.push_back(1.0);
    }
    protos.push_back(std::move(fp));
  }
  return assemble(std::move(graph), protos, engine);
}

BasisSet build_explicit_basis(const std::vector<ExplicitFunction>& functions,
                              const IntegralEngine& engine) {
  if (functions.empty()) throw std::invalid_argument("explicit basis: no functions");
  ParamGraph graph;
  std::vector<FunctionProto> protos;
  for (std::size_t f = 0; f < functions.size(); ++f) {
    FunctionProto fp;
    fp.weights = functions[f].weights;
    for (const auto& term : functions[f].terms) {
      TermProto tp;
      tp.ang = term.ang;
      if (term.alphas.size() != term.coeffs.size() || term.alphas.empty())
        throw std::invalid_argument("explicit basis: bad exponent/coefficient lists");
      for (int ax = 0; ax < 3; ++ax) {
        int t = graph.add_theta(std::string(1, "xyz"[ax]), term.center[ax], true);
        tp.center_slots[ax] = graph.add_slot(SlotRole::Center, MapExpr::ref(t));
      }
      for (std::size_t n = 0; n < term.alphas.size(); ++n) {
        int ta = graph.add_theta("a", term.alphas[n], true);
        tp.alpha_slots.push_back(graph.add_slot(SlotRole::Exponent, MapExpr::ref(ta)));
        int td = graph.add_theta("d", term.coeffs[n], true);
        tp.coeff_slots.push_back(graph.add_slot(SlotRole::Coefficient, MapExpr::ref(td)));
      }
      fp.terms.push_back(std::move(tp));
    }
    protos.push_back(std::move(fp));
  }
  return assemble(std::move(graph), protos, engine);
}

BasisSet rebuild_basis(const BasisSet& basis, const Eigen::VectorXd& theta,
                       const IntegralEngine& engine) {
  std::vector<FunctionProto> protos;
  protos.reserve(basis.functions.size());
  for (const auto& f : basis.functions) {
    FunctionProto fp;
    fp.weights = f.weights;
    for (const auto& term : f.terms) {
      TermProto tp;
      tp.ang = term.ang;
      tp.center_slots = term.center_slots;
      tp.alpha_slots = term.alpha_slots;
      tp.coeff_slots = term.coeff_slots;
      for (int ax = 0; ax < 3; ++ax)
        if (tp.center_slots[ax] < 0)
          throw std::logic_error("rebuild_basis: function not fully graph-driven");
      for (int s : tp.alpha_slots)
        if (s < 0) throw std::logic_error("rebuild_basis: function not fully graph-driven");
      for (int s : tp.coeff_slots)
        if (s < 0) throw std::logic_error("rebuild_basis: function not fully graph-driven");
      fp.terms.push_back(std::move(tp));
    }
    protos.push_back(std::move(fp));
  }
  ParamGraph graph = basis.graph;
  graph.set_theta_values(theta);
  return assemble(std::move(graph), protos, engine);
}

}  // namespace gtopt
