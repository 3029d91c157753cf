#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string_view>
#include <utility>
#include <vector>

#include "regbin/expression.hpp"
#include "regbin/graph.hpp"

namespace regbin {

enum class TriState { Zero, One, NA };

TriState operator!(TriState s);
std::string_view to_string(TriState s) noexcept;
inline bool is_defined(TriState s) noexcept { return s != TriState::NA; }
inline TriState tri_state(bool b) noexcept { return b ? TriState::One : TriState::Zero; }

enum class Provenance {
  Unassigned,
  Extreme,
  Biomarker,
  Forward,
  Backward,
  Harmonized,
  Reinitialized,
  Frozen,
  Threshold,  // ground truth from pre-set thresholds
};

std::string_view to_string(Provenance p) noexcept;

// Which defined targets may push a value back to their regulators.
enum class BackwardTrigger {
  AllRegulatorsUnassigned,  // every regulator is NA (default)
  NoConsistentRegulator,    // some regulator NA and no defined one is consistent
};

struct BinarizerConfig {
  static constexpr double kMaxEpsilon = 0.05;

  double epsilon = 0.05;  // initialization margin around 0 and 1
  double delta = 0.05;    // harmonization tolerance on tau
  std::size_t max_sweeps = 0;  // 0 means 10 * |genes|
  BackwardTrigger trigger = BackwardTrigger::AllRegulatorsUnassigned;
  bool biomarkers_resettable = false;
  NormalizationMode normalization = NormalizationMode::Global;

  // Throws ConfigError.
  void validate() const;
  std::size_t sweep_limit(std::size_t gene_count) const;
};

// Prior knowledge: Zero or One per gene.
using Biomarkers = std::map<GeneId, TriState>;

enum class EventKind { Initialized, Assigned, Conflict, Reinitialized, Frozen, Unresolved };

std::string_view to_string(EventKind k) noexcept;

struct SweepEvent {
  std::size_t sweep;  // 0 = initialization
  EventKind kind;
  GeneId gene;
  TriState state;
  Provenance provenance;
  GeneId cause;  // target that drove the event; empty for initialization

  friend bool operator==(SweepEvent const&, SweepEvent const&) = default;
};

/// Tri-state assignment of every graph gene plus the ordered event log.
class BinaryProfile {
 public:
  BinaryProfile() = default;
  explicit BinaryProfile(std::vector<GeneId> genes);

  std::vector<GeneId> const& genes() const noexcept { return genes_; }
  std::size_t size() const noexcept { return genes_.size(); }

  TriState state(GeneId const& gene) const { return states_[index(gene)]; }
  Provenance provenance(GeneId const& gene) const { return provenance_[index(gene)]; }
  TriState state_at(std::size_t i) const { return states_[i]; }
  Provenance provenance_at(std::size_t i) const { return provenance_[i]; }
  std::vector<TriState> const& states() const noexcept { return states_; }

  void set(GeneId const& gene, TriState state, Provenance provenance);
  void set_at(std::size_t i, TriState state, Provenance provenance);

  std::vector<SweepEvent> sweep_log;
  std::size_t sweeps = 0;
  bool truncated = false;  // sweep limit reached while still changing

  friend bool operator==(BinaryProfile const&, BinaryProfile const&) = default;

 private:
  std::size_t index(GeneId const& gene) const;

  std::vector<GeneId> genes_;
  std::vector<TriState> states_;
  std::vector<Provenance> provenance_;
};

struct Assignment {
  GeneId gene;
  TriState state;
  Provenance provenance;
  GeneId cause;
  double tau = 0.0;  // backward and harmonized assignments only

  friend bool operator==(Assignment const&, Assignment const&) = default;
};

// Result of one propagation phase. Proposals that disagree on a gene are
// dropped and listed in `conflicts`.
struct StepResult {
  std::vector<Assignment> assignments;
  std::vector<GeneId> conflicts;
};

struct ConfusionEvent {
  GeneId target;
  std::vector<std::pair<GeneId, TriState>> assignment;  // target first, then regulators
  bool repeated = false;
};

struct ResetPlan {
  std::vector<ConfusionEvent> confusions;
  std::vector<GeneId> reset;   // back to NA, provenance Reinitialized
  std::vector<GeneId> frozen;  // pinned at NA, provenance Frozen
  std::vector<GeneId> unresolved;  // confused targets whose genes are all immutable
};

// Confusion events already seen in this run, keyed by target and assignment.
struct ConfusionHistory {
  std::set<std::pair<GeneId, std::vector<TriState>>> seen;
};

/// Extremes (v <= eps -> Zero, v >= 1 - eps -> One) overridden by biomarkers.
/// Neutral-filled genes stay NA. Throws Error for a biomarker outside the graph.
BinaryProfile initialize(RegulatoryGraph const& graph, ExpressionVector const& expr, BinarizerConfig const& cfg,
                         Biomarkers const& markers = {});

/// Whether a regulator value alone explains the target value. Throws
/// std::invalid_argument on NA.
bool consistent(TriState target, InteractionSign sign, TriState regulator);

/// Activator: B(1 - k) + k(1 - B); inhibitor: Bk + (1 - k)(1 - B).
double tau_score(TriState target, InteractionSign sign, double kappa);

StepResult forward_step(RegulatoryGraph const& graph, BinaryProfile const& profile);

StepResult backward_step(RegulatoryGraph const& graph, BinaryProfile const& profile, ExpressionVector const& expr,
                         BinarizerConfig const& cfg);

/// `backward` holds the assignments made by backward_step in this sweep; the
/// profile must already include them.
StepResult harmonize(RegulatoryGraph const& graph, BinaryProfile const& profile, ExpressionVector const& expr,
                     double delta, std::vector<Assignment> const& backward);

/// Finds targets inconsistent with every (defined) regulator. A first
/// occurrence resets target and regulators; a repeat freezes them. Records
/// new events in `history`.
ResetPlan inconsistency_test(RegulatoryGraph const& graph, BinaryProfile const& profile, ConfusionHistory& history,
                             BinarizerConfig const& cfg = {});

/// Returns the number of genes changed.
std::size_t apply(BinaryProfile& profile, StepResult const& step, std::size_t sweep);
std::size_t apply(BinaryProfile& profile, ResetPlan const& plan, std::size_t sweep);

/// Runs initialization then forward / backward / harmonize / inconsistency
/// sweeps until nothing changes or the sweep limit is reached.
BinaryProfile binarize(RegulatoryGraph const& graph, ExpressionVector const& normalized, BinarizerConfig const& cfg,
                       Biomarkers const& markers = {});

/// Restricts `raw` to graph genes, normalizes, neutral-fills, then binarizes.
BinaryProfile binarize(RegulatoryGraph const& graph, RawExpression const& raw, BinarizerConfig const& cfg,
                       Biomarkers const& markers = {});

}  // namespace regbin
