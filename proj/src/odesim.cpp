#include "regbin/odesim.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "regbin/error.hpp"

namespace regbin {

double HillParams::exponent_for(GeneId const& gene) const { return at(gene).hill_n.value_or(hill_n); }

GeneKinetics const& HillParams::at(GeneId const& gene) const {
  auto const it = genes.find(gene);
  if (it == genes.end()) throw Error(fmt::format("no kinetic parameters for gene '{}'", gene.str()));
  return it->second;
}

void HillParams::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!(std::isfinite(hill_n) && hill_n >= 1.0)) throw ConfigError(fmt::format("hill_n must be >= 1, got {}", hill_n));
  for (auto const& [gene, k] : genes) {
    if (!positive(k.kappa_rate) || !positive(k.gamma) || !positive(k.theta))
      throw ConfigError(fmt::format("gene '{}': kappa_rate, gamma and theta must be > 0", gene.str()));
    if (k.hill_n && !(std::isfinite(*k.hill_n) && *k.hill_n >= 1.0))
      throw ConfigError(fmt::format("gene '{}': hill_n must be >= 1", gene.str()));
    if (k.x0 && !(std::isfinite(*k.x0) && *k.x0 >= 0.0))
      throw ConfigError(fmt::format("gene '{}': x0 must be finite and >= 0", gene.str()));
  }
}

std::vector<std::string> HillParams::warnings() const {
  std::vector<std::string> out;
  for (auto const& [gene, k] : genes) {
    if (k.theta >= k.kappa_rate / k.gamma)
      out.push_back(fmt::format("gene '{}': theta {} is not below the reachable level {}", gene.str(), k.theta,
                                k.kappa_rate / k.gamma));
  }
  return out;
}

// Written in terms of the ratio so that large exponents saturate instead of
// overflowing; the two branches sum to 1 up to rounding.
double hill_plus(double x, double theta, double n) {
  if (!(x > 0.0)) return 0.0;
  return 1.0 / (1.0 + std::pow(theta / x, n));
}

double hill_minus(double x, double theta, double n) {
  if (!(x > 0.0)) return 1.0;
  return 1.0 / (1.0 + std::pow(x / theta, n));
}

double continuous_extension(BoolExpr const& expr, std::map<GeneId, double> const& state, HillParams const& params) {
  switch (expr.kind()) {
    case BoolExpr::Kind::Var: {
      auto const it = state.find(expr.gene());
      if (it == state.end()) throw Error(fmt::format("no state value for gene '{}'", expr.gene().str()));
      return hill_plus(it->second, params.at(expr.gene()).theta, params.exponent_for(expr.gene()));
    }
    case BoolExpr::Kind::Not:
      return 1.0 - continuous_extension(expr.operands()[0], state, params);
    case BoolExpr::Kind::And: {
      double v = 1.0;
      for (auto const& op : expr.operands()) v *= continuous_extension(op, state, params);
      return v;
    }
    case BoolExpr::Kind::Or: {
      double v = 0.0;
      for (auto const& op : expr.operands()) {
        double const w = continuous_extension(op, state, params);
        v = v + w - v * w;
      }
      return v;
    }
  }
  return 0.0;
}

HillOdeSystem::HillOdeSystem(BooleanNetwork network, HillParams params)
    : network_(std::move(network)), params_(std::move(params)) {
  params_.validate();
  auto const& gs = network_.genes();
  for (auto const& g : gs) {
    auto const& k = params_.at(g);
    kappa_.push_back(k.kappa_rate);
    gamma_.push_back(k.gamma);
    theta_.push_back(k.theta);
    hill_n_.push_back(params_.exponent_for(g));
  }
  roots_.resize(gs.size());
  for (std::size_t i = 0; i < gs.size(); ++i)
    if (auto const* rule = network_.rule_for(gs[i])) roots_[i] = compile(*rule);
}

std::size_t HillOdeSystem::compile(BoolExpr const& expr) {
  auto const self = nodes_.size();
  nodes_.push_back({expr.kind()});
  if (expr.kind() == BoolExpr::Kind::Var) {
    auto const& gs = genes();
    nodes_[self].gene = static_cast<std::size_t>(std::lower_bound(gs.begin(), gs.end(), expr.gene()) - gs.begin());
    return self;
  }
  // Reserve a contiguous block for the children, then fill it.
  auto const ops = expr.operands();
  auto const first = nodes_.size();
  nodes_.resize(first + ops.size());
  nodes_[self].first = first;
  nodes_[self].count = ops.size();
  for (std::size_t i = 0; i < ops.size(); ++i) {
    auto const child = compile(ops[i]);
    nodes_[first + i] = nodes_[child];
    // compile() appended the child at the end; the copy above keeps its links valid.
  }
  return self;
}

double HillOdeSystem::eval(std::size_t node, std::span<double const> x) const {
  auto const& n = nodes_[node];
  switch (n.kind) {
    case BoolExpr::Kind::Var:
      return hill_plus(x[n.gene], theta_[n.gene], hill_n_[n.gene]);
    case BoolExpr::Kind::Not:
      return 1.0 - eval(n.first, x);
    case BoolExpr::Kind::And: {
      double v = 1.0;
      for (std::size_t i = 0; i < n.count; ++i) v *= eval(n.first + i, x);
      return v;
    }
    case BoolExpr::Kind::Or: {
      double v = 0.0;
      for (std::size_t i = 0; i < n.count; ++i) {
        double const w = eval(n.first + i, x);
        v = v + w - v * w;
      }
      return v;
    }
  }
  return 0.0;
}

void HillOdeSystem::rhs(std::span<double const> x, std::span<double> dx) const {
  for (std::size_t i = 0; i < dimension(); ++i) {
    double const production = roots_[i] ? kappa_[i] * eval(*roots_[i], x) : 0.0;
    dx[i] = production - gamma_[i] * x[i];
  }
}

std::vector<double> HillOdeSystem::rhs(std::span<double const> x) const {
  std::vector<double> dx(dimension());
  rhs(x, dx);
  return dx;
}

std::vector<double> HillOdeSystem::initial_state() const {
  std::vector<double> x0;
  for (auto const& g : genes()) x0.push_back(params_.at(g).x0.value_or(0.0));
  return x0;
}

HillOdeSystem build_ode(BooleanNetwork const& net, HillParams const& params) { return HillOdeSystem(net, params); }

Trajectory integrate_rk4(HillOdeSystem const& sys, std::span<double const> x0, double t_end, double dt) {
  if (!(dt > 0.0) || !(t_end > 0.0) || dt > t_end)
    throw Error(fmt::format("need 0 < dt <= t_end, got dt={} t_end={}", dt, t_end));
  auto const dim = sys.dimension();
  if (x0.size() != dim) throw Error(fmt::format("initial state has {} entries, system has {}", x0.size(), dim));
  if (!std::all_of(x0.begin(), x0.end(), [](double v) { return std::isfinite(v); }))
    throw IntegrationError("initial state is not finite", 0.0);

  auto const steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  Trajectory traj{sys.genes(), {}, {}, dt, "rk4"};
  traj.times.reserve(steps + 1);
  traj.data.reserve((steps + 1) * dim);
  traj.times.push_back(0.0);
  traj.data.insert(traj.data.end(), x0.begin(), x0.end());

  std::vector<double> x(x0.begin(), x0.end()), k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
  double t = 0.0;
  for (std::size_t s = 1; s <= steps; ++s) {
    double const t_next = s == steps ? t_end : static_cast<double>(s) * dt;
    double const h = t_next - t;
    sys.rhs(x, k1);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
    sys.rhs(tmp, k2);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
    sys.rhs(tmp, k3);
    for (std::size_t i = 0; i < dim; ++i) tmp[i] = x[i] + h * k3[i];
    sys.rhs(tmp, k4);
    for (std::size_t i = 0; i < dim; ++i) {
      double const v = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      if (!std::isfinite(v))
        throw IntegrationError(fmt::format("non-finite state for '{}' after t={}", sys.genes()[i].str(), t), t);
      x[i] = std::max(v, 0.0);
    }
    t = t_next;
    traj.times.push_back(t);
    traj.data.insert(traj.data.end(), x.begin(), x.end());
  }
  return traj;
}

std::optional<double> detect_steady_state(Trajectory const& traj, double tol, double window) {
  if (traj.samples() < 2) throw Error("trajectory has fewer than two samples");
  double const t0 = traj.times.front();
  double const t_end = traj.times.back();
  if (!(t_end - t0 > window)) throw Error(fmt::format("trajectory span {} is not longer than window {}", t_end - t0, window));

  // Start of the final run of intervals whose derivative stays below tol.
  double quiet_from = t0;
  for (std::size_t k = traj.samples() - 1; k-- > 0;) {
    auto const a = traj.state(k);
    auto const b = traj.state(k + 1);
    double const h = traj.times[k + 1] - traj.times[k];
    double rate = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) rate = std::max(rate, std::abs(b[i] - a[i]) / h);
    if (rate >= tol) {
      quiet_from = traj.times[k + 1];
      break;
    }
  }
  double const detected = quiet_from + window;
  if (detected > t_end) return std::nullopt;
  return detected;
}

std::vector<Snapshot> extract_snapshots(Trajectory const& traj, SnapshotPolicy const& policy) {
  if (traj.samples() == 0) throw Error("empty trajectory");
  std::vector<double> times;
  if (auto const* at = std::get_if<AtTimes>(&policy)) {
    times = at->times;
  } else {
    auto const& late = std::get<LateK>(policy);
    for (std::size_t i = 0; i < late.k; ++i)
      times.push_back(traj.times.back() - static_cast<double>(late.k - 1 - i) * late.spacing);
  }

  double const slack = 0.5 * traj.dt;
  std::vector<Snapshot> out;
  for (double const t : times) {
    if (!(t >= traj.times.front() - slack && t <= traj.times.back() + slack))
      throw Error(fmt::format("snapshot time {} outside trajectory span [{}, {}]", t, traj.times.front(), traj.times.back()));
    auto it = std::lower_bound(traj.times.begin(), traj.times.end(), t);
    if (it == traj.times.end()) --it;
    if (it != traj.times.begin() && std::abs(*std::prev(it) - t) <= std::abs(*it - t)) --it;
    auto const idx = static_cast<std::size_t>(it - traj.times.begin());
    Snapshot snap{traj.times[idx], {}};
    auto const row = traj.state(idx);
    for (std::size_t g = 0; g < traj.genes.size(); ++g) snap.values.emplace(traj.genes[g], row[g]);
    out.push_back(std::move(snap));
  }
  return out;
}

BinaryProfile threshold_binarize(Snapshot const& snapshot, HillParams const& params) {
  std::vector<GeneId> genes;
  for (auto const& [g, v] : snapshot.values) genes.push_back(g);
  BinaryProfile profile(genes);
  for (auto const& [g, v] : snapshot.values)
    profile.set(g, v >= params.at(g).theta ? TriState::One : TriState::Zero, Provenance::Threshold);
  return profile;
}

}  // namespace regbin
