#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace regbin {

// Gene symbol. Case-sensitive, non-empty, no whitespace; ordered lexicographically.
class GeneId {
 public:
  GeneId() = default;
  explicit GeneId(std::string name);

  std::string const& str() const noexcept { return name_; }

  friend auto operator<=>(GeneId const&, GeneId const&) = default;
  friend bool operator==(GeneId const&, GeneId const&) = default;

 private:
  std::string name_;
};

bool is_valid_gene_name(std::string_view name) noexcept;

enum class InteractionSign { Activator, Inhibitor };

char sign_symbol(InteractionSign sign) noexcept;

struct Edge {
  GeneId source;
  GeneId target;
  InteractionSign sign;

  friend bool operator==(Edge const&, Edge const&) = default;
};

struct Regulator {
  GeneId gene;
  InteractionSign sign;

  friend bool operator==(Regulator const&, Regulator const&) = default;
};

// Index-based view of one incoming edge, used by the propagation kernels.
struct RegulatorSlot {
  std::size_t gene;
  InteractionSign sign;
};

/// Signed directed graph of regulatory interactions.
///
/// Genes are stored in lexicographic order and addressed either by GeneId or
/// by their position in genes(). Immutable once constructed.
class RegulatoryGraph {
 public:
  RegulatoryGraph() = default;

  /// Throws Error on a duplicate (source, target) pair or an endpoint that
  /// is not listed in `genes`.
  RegulatoryGraph(std::vector<GeneId> genes, std::vector<Edge> edges);

  std::vector<GeneId> const& genes() const noexcept { return genes_; }
  // Sorted by (target, source).
  std::vector<Edge> const& edges() const noexcept { return edges_; }
  std::size_t size() const noexcept { return genes_.size(); }

  bool contains(GeneId const& gene) const;
  std::optional<std::size_t> index_of(GeneId const& gene) const;
  std::size_t require_index(GeneId const& gene) const;

  /// Activators first, then inhibitors; each class ordered by name.
  std::vector<Regulator> regulators_of(GeneId const& target) const;
  std::vector<RegulatorSlot> const& regulator_slots(std::size_t target) const {
    return regulators_[target];
  }

  friend bool operator==(RegulatoryGraph const& a, RegulatoryGraph const& b) {
    return a.genes_ == b.genes_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<GeneId> genes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<RegulatorSlot>> regulators_;
};

/// Edge-list document: `SOURCE + TARGET` / `SOURCE - TARGET` per line, a lone
/// `GENE` token declares an isolated gene, `#` starts a comment.
RegulatoryGraph parse_graph(std::string_view text);

std::string serialize_graph(RegulatoryGraph const& graph);

}  // namespace regbin
