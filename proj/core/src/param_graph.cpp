#include "gtopt/param_graph.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <utility>

namespace gtopt {

const char* slot_role_name(SlotRole role) {
  switch (role) {
    case SlotRole::Exponent: return "exponent";
    case SlotRole::Coefficient: return "coefficient";
    case SlotRole::Center: return "center";
  }
  return "?";
}

MapExpr MapExpr::ref(int theta_index) {
  MapExpr e;
  e.kind_ = Kind::Ref;
  e.theta_ = theta_index;
  return e;
}

MapExpr MapExpr::affine(double scale, double offset, MapExpr inner) {
  MapExpr e;
  e.kind_ = Kind::Affine;
  e.a_ = scale;
  e.b_ = offset;
  e.args_.push_back(std::move(inner));
  return e;
}

MapExpr MapExpr::negate(MapExpr inner) {
  MapExpr e;
  e.kind_ = Kind::Negate;
  e.args_.push_back(std::move(inner));
  return e;
}

MapExpr MapExpr::exp(MapExpr inner) {
  MapExpr e;
  e.kind_ = Kind::Exp;
  e.args_.push_back(std::move(inner));
  return e;
}

MapExpr MapExpr::sum(std::vector<MapExpr> args) {
  if (args.empty()) throw std::invalid_argument("MapExpr::sum: no inputs");
  MapExpr e;
  e.kind_ = Kind::Sum;
  e.args_ = std::move(args);
  return e;
}

MapExpr MapExpr::product(std::vector<MapExpr> args) {
  if (args.empty()) throw std::invalid_argument("MapExpr::product: no inputs");
  MapExpr e;
  e.kind_ = Kind::Product;
  e.args_ = std::move(args);
  return e;
}

double MapExpr::eval(const Eigen::VectorXd& theta) const {
  switch (kind_) {
    case Kind::Ref:
      if (theta_ < 0 || theta_ >= theta.size())
        throw std::out_of_range("MapExpr: unknown node id " + std::to_string(theta_));
      return theta[theta_];
    case Kind::Affine: return a_ * args_[0].eval(theta) + b_;
    case Kind::Negate: return -args_[0].eval(theta);
    case Kind::Exp: return std::exp(args_[0].eval(theta));
    case Kind::Sum: {
      double v = 0.0;
      for (const auto& a : args_) v += a.eval(theta);
      return v;
    }
    case Kind::Product: {
      double v = 1.0;
      for (const auto& a : args_) v *= a.eval(theta);
      return v;
    }
  }
  return 0.0;
}

void MapExpr::accumulate_grad(const Eigen::VectorXd& theta, double seed,
                              Eigen::VectorXd& grad) const {
  switch (kind_) {
    case Kind::Ref:
      if (theta_ < 0 || theta_ >= grad.size())
        throw std::out_of_range("MapExpr: unknown node id " + std::to_string(theta_));
      grad[theta_] += seed;
      return;
    case Kind::Affine:
      args_[0].accumulate_grad(theta, seed * a_, grad);
      return;
    case Kind::Negate:
      args_[0].accumulate_grad(theta, -seed, grad);
      return;
    case Kind::Exp:
      args_[0].accumulate_grad(theta, seed * std::exp(args_[0].eval(theta)), grad);
      return;
    case Kind::Sum:
      for (const auto& a : args_) a.accumulate_grad(theta, seed, grad);
      return;
    case Kind::Product: {
      for (std::size_t i = 0; i < args_.size(); ++i) {
        double rest = 1.0;
        for (std::size_t j = 0; j < args_.size(); ++j)
          if (j != i) rest *= args_[j].eval(theta);
        args_[i].accumulate_grad(theta, seed * rest, grad);
      }
      return;
    }
  }
}

int MapExpr::max_theta() const {
  int m = theta_;
  for (const auto& a : args_) m = std::max(m, a.max_theta());
  return m;
}

int ParamGraph::add_theta(const std::string& symbol, double value, bool frozen) {
  int index = 0;
  for (const auto& n : thetas_)
    if (n.symbol == symbol) ++index;
  thetas_.push_back(ParamNode{symbol, index, value, frozen});
  return static_cast<int>(thetas_.size()) - 1;
}

void ParamGraph::check_map(const MapExpr& map) const {
  if (map.max_theta() >= n_theta())
    throw std::out_of_range("ParamGraph: slot references unknown node " +
                            std::to_string(map.max_theta()));
}

int ParamGraph::add_slot(SlotRole role, MapExpr map, std::string name) {
  check_map(map);
  slots_.push_back(DerivedSlot{role, std::move(map), std::move(name)});
  return static_cast<int>(slots_.size()) - 1;
}

Eigen::VectorXd ParamGraph::theta_values() const {
  Eigen::VectorXd v(n_theta());
  for (int i = 0; i < n_theta(); ++i) v[i] = thetas_[i].value;
  return v;
}

void ParamGraph::set_theta_values(const Eigen::VectorXd& theta) {
  if (theta.size() != n_theta())
    throw std::invalid_argument("ParamGraph: theta dimension mismatch");
  for (int i = 0; i < n_theta(); ++i) thetas_[i].value = theta[i];
}

Eigen::VectorXd ParamGraph::eval(const Eigen::VectorXd& theta) const {
  if (theta.size() != n_theta())
    throw std::invalid_argument("ParamGraph: theta dimension mismatch");
  Eigen::VectorXd p(n_slots());
  for (int j = 0; j < n_slots(); ++j) {
    p[j] = slots_[j].map.eval(theta);
    if (slots_[j].role == SlotRole::Exponent && !(p[j] > 0.0))
      throw std::domain_error("ParamGraph: exponent slot " +
                              (slots_[j].name.empty() ? std::to_string(j) : slots_[j].name) +
                              " evaluated to non-positive value " + std::to_string(p[j]));
  }
  return p;
}

Eigen::VectorXd ParamGraph::pullback(const Eigen::VectorXd& theta,
                                     const Eigen::VectorXd& dE_dp) const {
  if (dE_dp.size() != n_slots())
    throw std::invalid_argument("ParamGraph: dE_dp dimension mismatch");
  if (theta.size() != n_theta())
    throw std::invalid_argument("ParamGraph: theta dimension mismatch");
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(n_theta());
  for (int j = 0; j < n_slots(); ++j)
    slots_[j].map.accumulate_grad(theta, dE_dp[j], grad);
  for (int i = 0; i < n_theta(); ++i)
    if (thetas_[i].frozen) grad[i] = 0.0;
  return grad;
}

Eigen::MatrixXd ParamGraph::jacobian(const Eigen::VectorXd& theta) const {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n_slots(), n_theta());
  Eigen::VectorXd row(n_theta());
  for (int j = 0; j < n_slots(); ++j) {
    row.setZero();
    slots_[j].map.accumulate_grad(theta, 1.0, row);
    J.row(j) = row;
  }
  return J;
}

std::vector<int> ParamGraph::free_indices() const {
  std::vector<int> idx;
  for (int i = 0; i < n_theta(); ++i)
    if (!thetas_[i].frozen) idx.push_back(i);
  return idx;
}

Eigen::VectorXd ParamGraph::expand_free(const Eigen::VectorXd& free_values) const {
  auto idx = free_indices();
  if (free_values.size() != static_cast<Eigen::Index>(idx.size()))
    throw std::invalid_argument("ParamGraph: free vector dimension mismatch");
  Eigen::VectorXd theta = theta_values();
  for (std::size_t k = 0; k < idx.size(); ++k) theta[idx[k]] = free_values[k];
  return theta;
}

Eigen::VectorXd ParamGraph::restrict_free(const Eigen::VectorXd& theta) const {
  auto idx = free_indices();
  Eigen::VectorXd v(idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) v[k] = theta[idx[k]];
  return v;
}

int ParamGraph::find_theta(const std::string& symbol, int index) const {
  for (int i = 0; i < n_theta(); ++i)
    if (thetas_[i].symbol == symbol && thetas_[i].index == index) return i;
  return -1;
}

std::vector<int> grid_box(ParamGraph& graph, int nx, int ny, int nz,
                          int spacing_theta, const Eigen::Vector3d& origin) {
  if (nx < 0 || ny < 0 || nz < 0)
    throw std::invalid_argument("grid_box: negative extent");
  if (spacing_theta < 0 || spacing_theta >= graph.n_theta())
    throw std::out_of_range("grid_box: unknown spacing node");
  if (!(graph.theta(spacing_theta).value > 0.0))
    throw std::domain_error("grid_box: non-positive spacing");

  std::vector<int> slots;
  const int n[3] = {nx, ny, nz};
  for (int i = 0; i <= nx; ++i)
    for (int j = 0; j <= ny; ++j)
      for (int k = 0; k <= nz; ++k) {
        const int ijk[3] = {i, j, k};
        for (int axis = 0; axis < 3; ++axis) {
          double a = ijk[axis] - 0.5 * n[axis];
          slots.push_back(graph.add_slot(
              SlotRole::Center,
              MapExpr::affine(a, origin[axis], MapExpr::ref(spacing_theta)),
              "grid[" + std::to_string(i) + "," + std::to_string(j) + "," +
                  std::to_string(k) + "]." + "xyz"[axis]));
        }
      }
  return slots;
}

}  // namespace gtopt
