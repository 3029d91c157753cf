#include "regbin/binarizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "regbin/error.hpp"

namespace regbin {

TriState operator!(TriState s) {
  switch (s) {
    case TriState::Zero: return TriState::One;
    case TriState::One: return TriState::Zero;
    default: return TriState::NA;
  }
}

std::string_view to_string(TriState s) noexcept {
  switch (s) {
    case TriState::Zero: return "0";
    case TriState::One: return "1";
    default: return "NA";
  }
}

std::string_view to_string(Provenance p) noexcept {
  switch (p) {
    case Provenance::Unassigned: return "unassigned";
    case Provenance::Extreme: return "extreme";
    case Provenance::Biomarker: return "biomarker";
    case Provenance::Forward: return "forward";
    case Provenance::Backward: return "backward";
    case Provenance::Harmonized: return "harmonized";
    case Provenance::Reinitialized: return "reinitialized";
    case Provenance::Frozen: return "frozen";
    case Provenance::Threshold: return "threshold";
  }
  return "unknown";
}

std::string_view to_string(EventKind k) noexcept {
  switch (k) {
    case EventKind::Initialized: return "initialized";
    case EventKind::Assigned: return "assigned";
    case EventKind::Conflict: return "conflict";
    case EventKind::Reinitialized: return "reinitialized";
    case EventKind::Frozen: return "frozen";
    case EventKind::Unresolved: return "unresolved";
  }
  return "unknown";
}

void BinarizerConfig::validate() const {
  if (!(epsilon >= 0.0 && epsilon <= kMaxEpsilon))
    throw ConfigError(fmt::format("epsilon must lie in [0, {}], got {}", kMaxEpsilon, epsilon));
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ConfigError(fmt::format("delta must be > 0, got {}", delta));
}

std::size_t BinarizerConfig::sweep_limit(std::size_t gene_count) const {
  return max_sweeps > 0 ? max_sweeps : std::max<std::size_t>(1, 10 * gene_count);
}

BinaryProfile::BinaryProfile(std::vector<GeneId> genes) : genes_(std::move(genes)) {
  std::sort(genes_.begin(), genes_.end());
  genes_.erase(std::unique(genes_.begin(), genes_.end()), genes_.end());
  states_.assign(genes_.size(), TriState::NA);
  provenance_.assign(genes_.size(), Provenance::Unassigned);
}

std::size_t BinaryProfile::index(GeneId const& gene) const {
  auto const it = std::lower_bound(genes_.begin(), genes_.end(), gene);
  if (it == genes_.end() || *it != gene) throw Error(fmt::format("gene '{}' is not in the profile", gene.str()));
  return static_cast<std::size_t>(it - genes_.begin());
}

void BinaryProfile::set(GeneId const& gene, TriState state, Provenance provenance) {
  set_at(index(gene), state, provenance);
}

void BinaryProfile::set_at(std::size_t i, TriState state, Provenance provenance) {
  states_[i] = state;
  provenance_[i] = provenance;
}

bool consistent(TriState target, InteractionSign sign, TriState regulator) {
  if (!is_defined(target) || !is_defined(regulator))
    throw std::invalid_argument("consistency is only defined for assigned values");
  // An activator explains an equal target value, an inhibitor the opposite one.
  return sign == InteractionSign::Activator ? target == regulator : target != regulator;
}

double tau_score(TriState target, InteractionSign sign, double kappa) {
  double const b = target == TriState::One ? 1.0 : 0.0;
  if (sign == InteractionSign::Activator) return b * (1.0 - kappa) + kappa * (1.0 - b);
  return b * kappa + (1.0 - kappa) * (1.0 - b);
}

namespace {

// Value a regulator must take to be consistent with `target`.
TriState consistent_value(TriState target, InteractionSign sign) {
  return sign == InteractionSign::Activator ? target : !target;
}

bool is_frozen(BinaryProfile const& p, std::size_t i) { return p.provenance_at(i) == Provenance::Frozen; }

double kappa_of(ExpressionVector const& expr, GeneId const& gene) {
  return expr.value(gene).value_or(kNeutralExpression);
}

// Merges proposals: agreeing duplicates collapse to the first, disagreeing
// ones cancel. Output is ordered by gene.
StepResult resolve(std::vector<Assignment> proposals) {
  std::stable_sort(proposals.begin(), proposals.end(),
                   [](Assignment const& a, Assignment const& b) { return a.gene < b.gene; });
  StepResult out;
  for (std::size_t i = 0; i < proposals.size();) {
    std::size_t j = i + 1;
    bool agree = true;
    while (j < proposals.size() && proposals[j].gene == proposals[i].gene) {
      agree = agree && proposals[j].state == proposals[i].state;
      ++j;
    }
    if (agree) {
      out.assignments.push_back(std::move(proposals[i]));
    } else {
      out.conflicts.push_back(proposals[i].gene);
    }
    i = j;
  }
  return out;
}

}  // namespace

BinaryProfile initialize(RegulatoryGraph const& graph, ExpressionVector const& expr, BinarizerConfig const& cfg,
                         Biomarkers const& markers) {
  cfg.validate();
  BinaryProfile profile(graph.genes());
  for (std::size_t i = 0; i < graph.size(); ++i) {
    auto const& gene = graph.genes()[i];
    if (expr.filled.contains(gene)) continue;
    auto const v = expr.value(gene);
    if (!v) continue;
    if (*v <= cfg.epsilon) {
      profile.set_at(i, TriState::Zero, Provenance::Extreme);
    } else if (*v >= 1.0 - cfg.epsilon) {
      profile.set_at(i, TriState::One, Provenance::Extreme);
    }
  }
  for (auto const& [gene, state] : markers) {
    auto const idx = graph.index_of(gene);
    if (!idx) throw Error(fmt::format("biomarker '{}' is not in the regulatory graph", gene.str()));
    if (!is_defined(state)) throw Error(fmt::format("biomarker '{}' must be 0 or 1", gene.str()));
    profile.set_at(*idx, state, Provenance::Biomarker);
  }
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (is_defined(profile.state_at(i)))
      profile.sweep_log.push_back(
          {0, EventKind::Initialized, profile.genes()[i], profile.state_at(i), profile.provenance_at(i), {}});
  }
  return profile;
}

StepResult forward_step(RegulatoryGraph const& graph, BinaryProfile const& profile) {
  std::vector<Assignment> proposals;
  for (std::size_t t = 0; t < graph.size(); ++t) {
    if (is_defined(profile.state_at(t)) || is_frozen(profile, t)) continue;
    auto const& regs = graph.regulator_slots(t);
    if (regs.empty()) continue;
    if (!std::all_of(regs.begin(), regs.end(), [&](RegulatorSlot const& r) { return is_defined(profile.state_at(r.gene)); }))
      continue;

    // Empty sign classes satisfy their half of the rule vacuously.
    auto all_at = [&](TriState activators, TriState inhibitors) {
      return std::all_of(regs.begin(), regs.end(), [&](RegulatorSlot const& r) {
        return profile.state_at(r.gene) == (r.sign == InteractionSign::Activator ? activators : inhibitors);
      });
    };
    if (all_at(TriState::One, TriState::Zero)) {
      proposals.push_back({graph.genes()[t], TriState::One, Provenance::Forward, graph.genes()[t]});
    } else if (all_at(TriState::Zero, TriState::One)) {
      proposals.push_back({graph.genes()[t], TriState::Zero, Provenance::Forward, graph.genes()[t]});
    }
  }
  return resolve(std::move(proposals));
}

StepResult backward_step(RegulatoryGraph const& graph, BinaryProfile const& profile, ExpressionVector const& expr,
                         BinarizerConfig const& cfg) {
  std::vector<Assignment> proposals;
  for (std::size_t t = 0; t < graph.size(); ++t) {
    auto const target = profile.state_at(t);
    if (!is_defined(target)) continue;
    auto const& regs = graph.regulator_slots(t);
    if (regs.empty()) continue;

    bool const any_unassigned =
        std::any_of(regs.begin(), regs.end(), [&](RegulatorSlot const& r) { return !is_defined(profile.state_at(r.gene)); });
    bool triggered = false;
    if (cfg.trigger == BackwardTrigger::AllRegulatorsUnassigned) {
      triggered = std::none_of(regs.begin(), regs.end(),
                               [&](RegulatorSlot const& r) { return is_defined(profile.state_at(r.gene)); });
    } else {
      triggered = any_unassigned && std::none_of(regs.begin(), regs.end(), [&](RegulatorSlot const& r) {
                    auto const s = profile.state_at(r.gene);
                    return is_defined(s) && consistent(target, r.sign, s);
                  });
    }
    if (!triggered) continue;

    // Slots are ordered activators first, then by name, so the first strict
    // minimum implements the tie-break.
    RegulatorSlot const* best = nullptr;
    double best_tau = 0.0;
    for (auto const& r : regs) {
      if (is_defined(profile.state_at(r.gene)) || is_frozen(profile, r.gene)) continue;
      double const tau = tau_score(target, r.sign, kappa_of(expr, graph.genes()[r.gene]));
      if (best == nullptr || tau < best_tau) {
        best = &r;
        best_tau = tau;
      }
    }
    if (best == nullptr) continue;
    proposals.push_back({graph.genes()[best->gene], consistent_value(target, best->sign), Provenance::Backward,
                         graph.genes()[t], best_tau});
  }
  return resolve(std::move(proposals));
}

StepResult harmonize(RegulatoryGraph const& graph, BinaryProfile const& profile, ExpressionVector const& expr,
                     double delta, std::vector<Assignment> const& backward) {
  std::vector<Assignment> proposals;
  for (auto const& anchor : backward) {
    auto const t = graph.require_index(anchor.cause);
    auto const target = profile.state_at(t);
    if (!is_defined(target)) continue;
    auto const& regs = graph.regulator_slots(t);
    auto const anchor_idx = graph.require_index(anchor.gene);
    auto const anchor_slot = std::find_if(regs.begin(), regs.end(), [&](RegulatorSlot const& r) { return r.gene == anchor_idx; });
    if (anchor_slot == regs.end()) continue;

    for (auto const& r : regs) {
      if (r.gene == anchor_idx || is_defined(profile.state_at(r.gene)) || is_frozen(profile, r.gene)) continue;
      double const tau = tau_score(target, r.sign, kappa_of(expr, graph.genes()[r.gene]));
      if (!(std::abs(anchor.tau - tau) < delta)) continue;
      bool const cooperative = r.sign == anchor_slot->sign;
      proposals.push_back({graph.genes()[r.gene], cooperative ? anchor.state : !anchor.state, Provenance::Harmonized,
                           anchor.cause, tau});
    }
  }
  return resolve(std::move(proposals));
}

ResetPlan inconsistency_test(RegulatoryGraph const& graph, BinaryProfile const& profile, ConfusionHistory& history,
                             BinarizerConfig const& cfg) {
  ResetPlan plan;
  std::set<std::size_t> reset;
  std::set<std::size_t> frozen;

  auto mutable_gene = [&](std::size_t i) {
    return cfg.biomarkers_resettable || profile.provenance_at(i) != Provenance::Biomarker;
  };

  for (std::size_t t = 0; t < graph.size(); ++t) {
    auto const target = profile.state_at(t);
    if (!is_defined(target)) continue;
    auto const& regs = graph.regulator_slots(t);
    if (regs.empty()) continue;
    if (!std::all_of(regs.begin(), regs.end(), [&](RegulatorSlot const& r) { return is_defined(profile.state_at(r.gene)); }))
      continue;
    if (std::any_of(regs.begin(), regs.end(),
                    [&](RegulatorSlot const& r) { return consistent(target, r.sign, profile.state_at(r.gene)); }))
      continue;

    ConfusionEvent event{graph.genes()[t], {{graph.genes()[t], target}}, false};
    std::vector<TriState> key{target};
    std::vector<std::size_t> involved{t};
    for (auto const& r : regs) {
      event.assignment.emplace_back(graph.genes()[r.gene], profile.state_at(r.gene));
      key.push_back(profile.state_at(r.gene));
      involved.push_back(r.gene);
    }
    event.repeated = !history.seen.emplace(graph.genes()[t], std::move(key)).second;

    bool touched = false;
    for (auto const i : involved) {
      if (!mutable_gene(i)) continue;
      touched = true;
      (event.repeated ? frozen : reset).insert(i);
    }
    if (!touched) plan.unresolved.push_back(graph.genes()[t]);
    plan.confusions.push_back(std::move(event));
  }

  for (auto const i : frozen) plan.frozen.push_back(graph.genes()[i]);
  for (auto const i : reset)
    if (!frozen.contains(i)) plan.reset.push_back(graph.genes()[i]);
  return plan;
}

std::size_t apply(BinaryProfile& profile, StepResult const& step, std::size_t sweep) {
  std::size_t changed = 0;
  for (auto const& a : step.assignments) {
    if (is_defined(profile.state(a.gene)) || profile.provenance(a.gene) == Provenance::Frozen) continue;
    profile.set(a.gene, a.state, a.provenance);
    profile.sweep_log.push_back({sweep, EventKind::Assigned, a.gene, a.state, a.provenance, a.cause});
    ++changed;
  }
  for (auto const& gene : step.conflicts)
    profile.sweep_log.push_back({sweep, EventKind::Conflict, gene, TriState::NA, profile.provenance(gene), {}});
  return changed;
}

std::size_t apply(BinaryProfile& profile, ResetPlan const& plan, std::size_t sweep) {
  std::size_t changed = 0;
  auto cause_of = [&](GeneId const& gene) {
    for (auto const& c : plan.confusions)
      for (auto const& [g, s] : c.assignment)
        if (g == gene) return c.target;
    return GeneId{};
  };
  for (auto const& gene : plan.frozen) {
    profile.set(gene, TriState::NA, Provenance::Frozen);
    profile.sweep_log.push_back({sweep, EventKind::Frozen, gene, TriState::NA, Provenance::Frozen, cause_of(gene)});
    ++changed;
  }
  for (auto const& gene : plan.reset) {
    profile.set(gene, TriState::NA, Provenance::Reinitialized);
    profile.sweep_log.push_back(
        {sweep, EventKind::Reinitialized, gene, TriState::NA, Provenance::Reinitialized, cause_of(gene)});
    ++changed;
  }
  for (auto const& gene : plan.unresolved)
    profile.sweep_log.push_back({sweep, EventKind::Unresolved, gene, profile.state(gene), profile.provenance(gene), gene});
  return changed;
}

BinaryProfile binarize(RegulatoryGraph const& graph, ExpressionVector const& normalized, BinarizerConfig const& cfg,
                       Biomarkers const& markers) {
  cfg.validate();
  auto const expr = neutral_fill(normalized, graph);
  auto profile = initialize(graph, expr, cfg, markers);
  ConfusionHistory history;

  std::size_t const limit = cfg.sweep_limit(graph.size());
  profile.truncated = true;
  for (std::size_t sweep = 1; sweep <= limit; ++sweep) {
    std::size_t changed = apply(profile, forward_step(graph, profile), sweep);

    auto const backward = backward_step(graph, profile, expr, cfg);
    changed += apply(profile, backward, sweep);

    if (!backward.assignments.empty())
      changed += apply(profile, harmonize(graph, profile, expr, cfg.delta, backward.assignments), sweep);

    changed += apply(profile, inconsistency_test(graph, profile, history, cfg), sweep);

    profile.sweeps = sweep;
    if (changed == 0) {
      profile.truncated = false;
      break;
    }
  }
  return profile;
}

BinaryProfile binarize(RegulatoryGraph const& graph, RawExpression const& raw, BinarizerConfig const& cfg,
                       Biomarkers const& markers) {
  cfg.validate();
  RawExpression scoped;
  for (auto const& [gene, v] : raw)
    if (graph.contains(gene)) scoped.emplace(gene, v);
  return binarize(graph, min_max_normalize(scoped, cfg.normalization), cfg, markers);
}

}  // namespace regbin
