#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace gtopt {

/// Role of a derived parameter slot. Exponent slots must evaluate to a
/// strictly positive value; violations raise instead of being clamped,
/// since clamping would corrupt gradients.
enum class SlotRole { Exponent, Coefficient, Center };

const char* slot_role_name(SlotRole role);

/// A primitive optimization variable. Nodes are identified by symbol+index
/// and must be unique within a graph. Frozen nodes keep their value during
/// evaluation but report zero gradient and are excluded from the free
/// parameter vector.
struct ParamNode {
  std::string symbol;
  int index = 0;
  double value = 0.0;
  bool frozen = false;

  std::string id() const { return symbol + "[" + std::to_string(index) + "]"; }
};

/// Closed-form differentiable mapping from theta nodes to one slot value.
/// The vocabulary is {ref/identity, affine, negate, exp, sum, product};
/// arbitrary composition is expressed by nesting.
class MapExpr {
 public:
  enum class Kind { Ref, Affine, Negate, Exp, Sum, Product };

  MapExpr() = default;

  static MapExpr ref(int theta_index);
  static MapExpr affine(double scale, double offset, MapExpr inner);
  static MapExpr negate(MapExpr inner);
  static MapExpr exp(MapExpr inner);
  static MapExpr sum(std::vector<MapExpr> args);
  static MapExpr product(std::vector<MapExpr> args);

  double eval(const Eigen::VectorXd& theta) const;

  /// Chain rule: adds seed * d(value)/d(theta_i) into grad for every theta
  /// this expression references.
  void accumulate_grad(const Eigen::VectorXd& theta, double seed,
                       Eigen::VectorXd& grad) const;

  Kind kind() const { return kind_; }
  int theta_index() const { return theta_; }
  double scale() const { return a_; }
  double offset() const { return b_; }
  const std::vector<MapExpr>& args() const { return args_; }

  /// Largest theta index referenced, -1 if none.
  int max_theta() const;

 private:
  Kind kind_ = Kind::Ref;
  int theta_ = -1;
  double a_ = 1.0;
  double b_ = 0.0;
  std::vector<MapExpr> args_;
};

struct DerivedSlot {
  SlotRole role = SlotRole::Coefficient;
  MapExpr map;
  std::string name;  // diagnostic label, e.g. "alpha f0 t0 p1"
};

/// The parameter-correlation graph: an ordered list of primitive variables
/// (theta) and an ordered list of derived slots, each computed from theta by
/// one MapExpr. Immutable once wired into a basis set; eval and pullback are
/// pure and safe to call concurrently.
class ParamGraph {
 public:
  /// Adds a node; index is assigned per symbol (a, a, b -> a[0], a[1], b[0]).
  int add_theta(const std::string& symbol, double value, bool frozen = false);
  int add_slot(SlotRole role, MapExpr map, std::string name = {});

  int n_theta() const { return static_cast<int>(thetas_.size()); }
  int n_slots() const { return static_cast<int>(slots_.size()); }
  const ParamNode& theta(int i) const { return thetas_.at(i); }
  ParamNode& theta(int i) { return thetas_.at(i); }
  const DerivedSlot& slot(int j) const { return slots_.at(j); }

  /// Current node values as a vector.
  Eigen::VectorXd theta_values() const;
  void set_theta_values(const Eigen::VectorXd& theta);

  /// Evaluates every slot in order. Throws on unknown node references and on
  /// non-positive exponent slots.
  Eigen::VectorXd eval(const Eigen::VectorXd& theta) const;
  Eigen::VectorXd eval() const { return eval(theta_values()); }

  /// dE/dtheta_i = sum_j dE/dp_j * dp_j/dtheta_i; frozen nodes get 0.
  Eigen::VectorXd pullback(const Eigen::VectorXd& theta,
                           const Eigen::VectorXd& dE_dp) const;
  Eigen::VectorXd pullback(const Eigen::VectorXd& dE_dp) const {
    return pullback(theta_values(), dE_dp);
  }

  /// Jacobian dp/dtheta (n_slots x n_theta); frozen columns are not masked.
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& theta) const;

  std::vector<int> free_indices() const;
  /// Embeds a free-subvector into a full theta vector (frozen entries keep
  /// their stored values).
  Eigen::VectorXd expand_free(const Eigen::VectorXd& free_values) const;
  Eigen::VectorXd restrict_free(const Eigen::VectorXd& theta) const;

  int find_theta(const std::string& symbol, int index) const;  // -1 if absent

 private:
  void check_map(const MapExpr& map) const;

  std::vector<ParamNode> thetas_;
  std::vector<DerivedSlot> slots_;
};

/// Grid-box helper: appends center slots for the (nx+1)*(ny+1)*(nz+1) points
/// of an nx x ny x nz box centered on `origin`, every coordinate an affine
/// map of the single spacing node. Returns the slot indices in point-major,
/// axis-minor order.
std::vector<int> grid_box(ParamGraph& graph, int nx, int ny, int nz,
                          int spacing_theta, const Eigen::Vector3d& origin);

}  // namespace gtopt
