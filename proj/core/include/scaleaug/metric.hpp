#ifndef SCALEAUG_METRIC_HPP
#define SCALEAUG_METRIC_HPP

#include <string>
#include <vector>

#include "scaleaug/geometry.hpp"

namespace scaleaug {

// ---------------------------------------------------------------------------
// Scale-balance metric
//
// The search minimizes  f = sigma({L_i}) * Phi  where sigma is the population
// standard deviation of the three per-scale losses and Phi multiplies the
// before/after AP ratios of every scale whose accuracy dropped:
//
//     Phi = prod_{i in dropped} ap_before[i] / max(ap_after[i], eps)
//
// Lower is better: balanced losses and no per-scale regressions give 0.
// ---------------------------------------------------------------------------

/// One value per scale category.
struct ScaleTriple {
    double small = 0.0;
    double middle = 0.0;
    double large = 0.0;

    [[nodiscard]] double for_category(ScaleCategory c) const {
        switch (c) {
            case ScaleCategory::small: return small;
            case ScaleCategory::middle: return middle;
            case ScaleCategory::large: return large;
        }
        return middle;
    }

    friend bool operator==(const ScaleTriple&, const ScaleTriple&) = default;
};

/// Per-scale fine-tuning statistics reported by an evaluator.  AP values may
/// be fractions in [0,1] or percentages in [0,100]; ap_before and ap_after
/// must use the same unit (inferred: any value > 1 means percentages).
struct ScaleStats {
    ScaleTriple losses;
    ScaleTriple ap_before;
    ScaleTriple ap_after;
    double overall_ap_after = 0.0;  ///< recorded for reporting; not used by the metric

    friend bool operator==(const ScaleStats&, const ScaleStats&) = default;
};

/// Default denominator guard, expressed in AP *fraction* units.  In
/// percentage documents it is scaled by 100 so the metric is unit-invariant.
inline constexpr double kDefaultMetricEps = 1e-4;

/// Population (divisor 3) standard deviation of the three losses.  Throws
/// ValidationError on negative losses.
[[nodiscard]] double loss_std(const ScaleTriple& losses);

/// Penalization factor and the set of dropped scales.
struct PenaltyResult {
    double phi = 1.0;
    std::vector<ScaleCategory> dropped;
};

/// Phi over the scales where ap_after < ap_before.  eps is in fraction
/// units.  Throws ValidationError on negative or unit-inconsistent APs.
[[nodiscard]] PenaltyResult penalty(const ScaleTriple& ap_before, const ScaleTriple& ap_after,
                                    double eps = kDefaultMetricEps);

/// The combined metric with its components.
struct MetricValue {
    double value = 0.0;
    double std_component = 0.0;
    double penalty_component = 1.0;
    std::vector<ScaleCategory> dropped_scales;
};

/// value = loss_std(losses) * penalty(ap_before, ap_after).  Lower is better.
[[nodiscard]] MetricValue pareto_scale_balance(const ScaleStats& stats,
                                               double eps = kDefaultMetricEps);

/// Pearson product-moment correlation.  Throws ValidationError on length
/// mismatch, fewer than two points, or zero variance in either input.
[[nodiscard]] double pearson(const std::vector<double>& xs, const std::vector<double>& ys);

// --------------------------------------------------------------------------
// Stats documents
// --------------------------------------------------------------------------

/// Parses `{losses: {small, middle, large}, ap_before: {...}, ap_after:
/// {...}, overall_ap_after}`.  Missing or unknown fields raise ParseError
/// naming the field path.
[[nodiscard]] ScaleStats parse_stats(const std::string& text);

/// Renders the stats document (inverse of parse_stats).
[[nodiscard]] std::string serialize_stats(const ScaleStats& stats);

}  // namespace scaleaug

#endif  // SCALEAUG_METRIC_HPP
