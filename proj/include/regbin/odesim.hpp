#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "regbin/binarizer.hpp"
#include "regbin/boolean_network.hpp"
#include "regbin/expression.hpp"

namespace regbin {

// Steep enough for the saturated rows of the reference fixtures; see README.
inline constexpr double kDefaultHillExponent = 20.0;

struct GeneKinetics {
  double kappa_rate = 1.0;  // synthesis rate
  double gamma = 1.0;       // degradation rate
  double theta = 1.0;       // Hill threshold, also the ground-truth cut
  std::optional<double> hill_n;
  std::optional<double> x0;

  friend bool operator==(GeneKinetics const&, GeneKinetics const&) = default;
};

struct HillParams {
  std::map<GeneId, GeneKinetics> genes;
  double hill_n = kDefaultHillExponent;  // used where a gene has no override

  double exponent_for(GeneId const& gene) const;
  GeneKinetics const& at(GeneId const& gene) const;

  // Throws ConfigError on non-positive rates, thresholds, or n < 1.
  void validate() const;
  // Genes whose threshold sits at or above the reachable level kappa/gamma.
  std::vector<std::string> warnings() const;
};

double hill_plus(double x, double theta, double n);
double hill_minus(double x, double theta, double n);

/// Var -> hill_plus, Not -> 1 - v, And -> product, Or -> a + b - ab.
double continuous_extension(BoolExpr const& expr, std::map<GeneId, double> const& state, HillParams const& params);

/// dx_g/dt = kappa_g * extension(rule_g, x) - gamma_g * x_g; rule-less genes
/// only decay. State vectors are indexed like genes().
class HillOdeSystem {
 public:
  HillOdeSystem(BooleanNetwork network, HillParams params);

  std::vector<GeneId> const& genes() const noexcept { return network_.genes(); }
  std::size_t dimension() const noexcept { return genes().size(); }
  BooleanNetwork const& network() const noexcept { return network_; }
  HillParams const& params() const noexcept { return params_; }

  void rhs(std::span<double const> x, std::span<double> dx) const;
  std::vector<double> rhs(std::span<double const> x) const;

  // x0 from the parameters, 0 where unset.
  std::vector<double> initial_state() const;

 private:
  struct Node {
    BoolExpr::Kind kind;
    std::size_t gene = 0;
    std::size_t first = 0;  // children occupy nodes_[first, first + count)
    std::size_t count = 0;
  };

  std::size_t compile(BoolExpr const& expr);
  double eval(std::size_t node, std::span<double const> x) const;

  BooleanNetwork network_;
  HillParams params_;
  std::vector<Node> nodes_;
  std::vector<std::optional<std::size_t>> roots_;
  std::vector<double> kappa_, gamma_, theta_, hill_n_;
};

/// Throws Error when a gene has no parameters.
HillOdeSystem build_ode(BooleanNetwork const& net, HillParams const& params);

/// Row-major samples of the state at increasing times.
struct Trajectory {
  std::vector<GeneId> genes;
  std::vector<double> times;
  std::vector<double> data;
  double dt = 0.0;
  std::string integrator;

  std::size_t samples() const noexcept { return times.size(); }
  std::span<double const> state(std::size_t i) const { return {data.data() + i * genes.size(), genes.size()}; }
  std::span<double const> final_state() const { return state(samples() - 1); }
};

/// Classical fixed-step RK4 from t = 0. The last step is shortened to land
/// on t_end; negative components are clamped to 0 after each step.
/// Throws IntegrationError on a non-finite state.
Trajectory integrate_rk4(HillOdeSystem const& sys, std::span<double const> x0, double t_end, double dt);

/// Earliest time at which the finite-difference derivative has stayed below
/// `tol` (max-norm) for a full `window`, if that happens before the end.
std::optional<double> detect_steady_state(Trajectory const& traj, double tol, double window);

struct Snapshot {
  double time = 0.0;
  std::map<GeneId, double> values;
};

struct AtTimes {
  std::vector<double> times;
};

// k snapshots spaced by `spacing`, the last one at the end of the trajectory.
struct LateK {
  std::size_t k = 3;
  double spacing = 5.0;
};

using SnapshotPolicy = std::variant<AtTimes, LateK>;

/// Nearest-sample lookup. Throws Error for a time outside the trajectory.
std::vector<Snapshot> extract_snapshots(Trajectory const& traj, SnapshotPolicy const& policy);

/// value >= theta -> One, else Zero.
BinaryProfile threshold_binarize(Snapshot const& snapshot, HillParams const& params);

}  // namespace regbin
