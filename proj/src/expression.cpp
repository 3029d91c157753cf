#include "regbin/expression.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "regbin/error.hpp"

namespace regbin {

std::optional<double> ExpressionVector::value(GeneId const& gene) const {
  auto const it = values.find(gene);
  if (it == values.end()) return std::nullopt;
  return it->second;
}

namespace {

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  std::size_t count = 0;

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    ++count;
  }

  void require_spread(std::string const& scope) const {
    if (count < 2 || !(hi > lo))
      throw DegenerateScaleError(fmt::format("min-max scale is degenerate over {}: need two distinct finite values", scope));
  }

  double scale(double v) const {
    if (v == lo) return 0.0;
    if (v == hi) return 1.0;
    return (v - lo) / (hi - lo);
  }
};

}  // namespace

std::vector<ExpressionVector> min_max_normalize(std::vector<RawExpression> const& rows, NormalizationMode mode) {
  std::vector<ExpressionVector> out(rows.size());

  auto emit = [&](std::size_t row, GeneId const& gene, double v, Range const& range) {
    if (std::isfinite(v)) out[row].values[gene] = range.scale(v);
  };

  switch (mode) {
    case NormalizationMode::Global: {
      Range range;
      for (auto const& row : rows)
        for (auto const& [gene, v] : row) range.add(v);
      range.require_spread("the whole matrix");
      for (std::size_t r = 0; r < rows.size(); ++r)
        for (auto const& [gene, v] : rows[r]) emit(r, gene, v, range);
      break;
    }
    case NormalizationMode::PerSample: {
      for (std::size_t r = 0; r < rows.size(); ++r) {
        Range range;
        for (auto const& [gene, v] : rows[r]) range.add(v);
        range.require_spread(fmt::format("sample {}", r));
        for (auto const& [gene, v] : rows[r]) emit(r, gene, v, range);
      }
      break;
    }
    case NormalizationMode::PerGene: {
      std::map<GeneId, Range> ranges;
      for (auto const& row : rows)
        for (auto const& [gene, v] : row) ranges[gene].add(v);
      for (auto const& [gene, range] : ranges)
        if (range.count > 0) range.require_spread(fmt::format("gene '{}'", gene.str()));
      for (std::size_t r = 0; r < rows.size(); ++r)
        for (auto const& [gene, v] : rows[r]) emit(r, gene, v, ranges[gene]);
      break;
    }
  }
  return out;
}

ExpressionVector min_max_normalize(RawExpression const& raw, NormalizationMode mode) {
  return std::move(min_max_normalize(std::vector<RawExpression>{raw}, mode).front());
}

ExpressionVector neutral_fill(ExpressionVector expr, RegulatoryGraph const& graph) {
  for (auto const& gene : graph.genes()) {
    if (!expr.values.contains(gene)) {
      expr.values.emplace(gene, kNeutralExpression);
      expr.filled.insert(gene);
    }
  }
  return expr;
}

}  // namespace regbin
