#include "regbin/graph.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

#include <fmt/format.h>

#include "regbin/error.hpp"
#include "text_util.hpp"

namespace regbin {

ParseError::ParseError(std::string const& message, std::size_t line)
    : Error(line == 0 ? message : fmt::format("line {}: {}", line, message)), line_(line) {}

bool is_valid_gene_name(std::string_view name) noexcept {
  if (name.empty()) return false;
  return std::none_of(name.begin(), name.end(), [](char c) {
    return detail::is_space(c) || c == '#' || c == '=' || c == '!' || c == '&' || c == '|' ||
           c == '(' || c == ')' || c == ',';
  });
}

GeneId::GeneId(std::string name) : name_(std::move(name)) {
  if (!is_valid_gene_name(name_)) throw Error(fmt::format("invalid gene name '{}'", name_));
}

char sign_symbol(InteractionSign sign) noexcept { return sign == InteractionSign::Activator ? '+' : '-'; }

RegulatoryGraph::RegulatoryGraph(std::vector<GeneId> genes, std::vector<Edge> edges)
    : genes_(std::move(genes)), edges_(std::move(edges)) {
  std::sort(genes_.begin(), genes_.end());
  genes_.erase(std::unique(genes_.begin(), genes_.end()), genes_.end());

  std::sort(edges_.begin(), edges_.end(), [](Edge const& a, Edge const& b) {
    return std::tie(a.target, a.source) < std::tie(b.target, b.source);
  });
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i].source == edges_[i - 1].source && edges_[i].target == edges_[i - 1].target)
      throw Error(fmt::format("duplicate edge {} -> {}", edges_[i].source.str(), edges_[i].target.str()));
  }

  regulators_.resize(genes_.size());
  for (auto const& e : edges_) {
    auto const src = index_of(e.source);
    auto const dst = index_of(e.target);
    if (!src || !dst)
      throw Error(fmt::format("edge {} -> {} has an endpoint outside the gene set", e.source.str(),
                              e.target.str()));
    regulators_[*dst].push_back({*src, e.sign});
  }
  // Gene indices follow name order, so (sign, index) is (sign, name).
  for (auto& regs : regulators_) {
    std::sort(regs.begin(), regs.end(), [](RegulatorSlot const& a, RegulatorSlot const& b) {
      return std::pair(a.sign, a.gene) < std::pair(b.sign, b.gene);
    });
  }
}

bool RegulatoryGraph::contains(GeneId const& gene) const { return index_of(gene).has_value(); }

std::optional<std::size_t> RegulatoryGraph::index_of(GeneId const& gene) const {
  auto const it = std::lower_bound(genes_.begin(), genes_.end(), gene);
  if (it == genes_.end() || *it != gene) return std::nullopt;
  return static_cast<std::size_t>(it - genes_.begin());
}

std::size_t RegulatoryGraph::require_index(GeneId const& gene) const {
  auto const idx = index_of(gene);
  if (!idx) throw Error(fmt::format("unknown gene '{}'", gene.str()));
  return *idx;
}

std::vector<Regulator> RegulatoryGraph::regulators_of(GeneId const& target) const {
  std::vector<Regulator> out;
  for (auto const& slot : regulators_[require_index(target)]) out.push_back({genes_[slot.gene], slot.sign});
  return out;
}

RegulatoryGraph parse_graph(std::string_view text) {
  std::set<GeneId> genes;
  std::vector<Edge> edges;
  std::map<std::pair<GeneId, GeneId>, std::size_t> seen;

  auto gene_at = [](std::string_view token, std::size_t line) {
    if (!is_valid_gene_name(token)) throw ParseError(fmt::format("invalid gene name '{}'", token), line);
    return GeneId(std::string(token));
  };

  for (auto const& [number, content] : detail::content_lines(text)) {
    auto const tokens = detail::split_ws(content);
    if (tokens.size() == 1) {
      genes.insert(gene_at(tokens[0], number));
      continue;
    }
    if (tokens.size() == 2)
      throw ParseError(fmt::format("dangling edge '{}': expected SOURCE <sign> TARGET", content), number);
    if (tokens.size() != 3)
      throw ParseError(fmt::format("expected SOURCE <sign> TARGET, got '{}'", content), number);

    InteractionSign sign;
    if (tokens[1] == "+") {
      sign = InteractionSign::Activator;
    } else if (tokens[1] == "-") {
      sign = InteractionSign::Inhibitor;
    } else {
      throw ParseError(fmt::format("unknown sign token '{}'", tokens[1]), number);
    }
    auto source = gene_at(tokens[0], number);
    auto target = gene_at(tokens[2], number);
    auto [it, inserted] = seen.emplace(std::pair(source, target), number);
    if (!inserted)
      throw ParseError(fmt::format("duplicate edge {} -> {} (first defined on line {})", source.str(),
                                   target.str(), it->second),
                       number);
    genes.insert(source);
    genes.insert(target);
    edges.push_back({std::move(source), std::move(target), sign});
  }
  return RegulatoryGraph({genes.begin(), genes.end()}, std::move(edges));
}

std::string serialize_graph(RegulatoryGraph const& graph) {
  std::string out;
  std::set<std::size_t> touched;
  for (auto const& e : graph.edges()) {
    out += fmt::format("{} {} {}\n", e.source.str(), sign_symbol(e.sign), e.target.str());
    touched.insert(graph.require_index(e.source));
    touched.insert(graph.require_index(e.target));
  }
  for (std::size_t i = 0; i < graph.size(); ++i)
    if (!touched.contains(i)) out += graph.genes()[i].str() + "\n";
  return out;
}

}  // namespace regbin
