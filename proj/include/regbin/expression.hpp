#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "regbin/graph.hpp"

namespace regbin {

// Raw measurements; NaN marks a missing value.
using RawExpression = std::map<GeneId, double>;

inline constexpr double kNeutralExpression = 0.5;

enum class NormalizationMode { Global, PerGene, PerSample };

// Normalized expression levels in [0, 1].
struct ExpressionVector {
  std::map<GeneId, double> values;
  std::set<GeneId> filled;  // genes carrying the neutral placeholder

  std::optional<double> value(GeneId const& gene) const;
};

/// Min-max scaling of a single sample. Global and PerSample coincide here;
/// PerGene has a one-value scope and always raises DegenerateScaleError.
ExpressionVector min_max_normalize(RawExpression const& raw, NormalizationMode mode = NormalizationMode::Global);

/// Min-max scaling of a sample matrix (one map per experiment). Global scales
/// over every finite entry, PerSample over each row, PerGene over each column.
std::vector<ExpressionVector> min_max_normalize(std::vector<RawExpression> const& rows, NormalizationMode mode);

/// Adds the neutral value for every graph gene with no measurement.
ExpressionVector neutral_fill(ExpressionVector expr, RegulatoryGraph const& graph);

}  // namespace regbin
