#include "scaleaug/metric.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <json.hpp>

#include "scaleaug/error.hpp"

namespace scaleaug {

namespace {

using nlohmann::ordered_json;

constexpr ScaleCategory kCategories[3] = {ScaleCategory::small, ScaleCategory::middle,
                                          ScaleCategory::large};

void check_non_negative(const ScaleTriple& t, const std::string& what) {
    for (ScaleCategory c : kCategories) {
        if (t.for_category(c) < 0.0) {
            throw ValidationError(what + "." + scale_category_name(c) +
                                  ": negative value not allowed");
        }
    }
}

[[nodiscard]] double triple_max(const ScaleTriple& t) {
    return std::max({t.small, t.middle, t.large});
}

/// AP unit inference: documents reporting any value above 1 use percentages.
struct ApUnit {
    bool percent = false;
    [[nodiscard]] double upper() const { return percent ? 100.0 : 1.0; }
};

[[nodiscard]] ApUnit infer_unit(const ScaleTriple& before, const ScaleTriple& after) {
    ApUnit unit;
    unit.percent = triple_max(before) > 1.0 || triple_max(after) > 1.0;
    const double hi = unit.upper();
    for (ScaleCategory c : kCategories) {
        if (before.for_category(c) > hi || after.for_category(c) > hi) {
            throw ValidationError(std::string("AP value for scale '") +
                                  scale_category_name(c) + "' exceeds the unit range [0, " +
                                  std::to_string(hi) + "]");
        }
    }
    return unit;
}

[[nodiscard]] ScaleTriple parse_triple(const ordered_json& obj, const std::string& path,
                                       bool require_non_negative) {
    if (!obj.is_object()) {
        throw ParseError(path, "expected an object");
    }
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (key != "small" && key != "middle" && key != "large") {
            throw ParseError(path + "." + key, "unknown field");
        }
    }
    ScaleTriple t;
    const auto read = [&](const char* key) {
        if (!obj.contains(key)) {
            throw ParseError(path + "." + key, "missing required field");
        }
        if (!obj.at(key).is_number()) {
            throw ParseError(path + "." + key, "expected a number");
        }
        const double v = obj.at(key).get<double>();
        if (require_non_negative && v < 0.0) {
            throw ParseError(path + "." + key, "must be non-negative");
        }
        return v;
    };
    t.small = read("small");
    t.middle = read("middle");
    t.large = read("large");
    return t;
}

[[nodiscard]] ordered_json triple_to_json(const ScaleTriple& t) {
    return ordered_json{{"small", t.small}, {"middle", t.middle}, {"large", t.large}};
}

}  // namespace

double loss_std(const ScaleTriple& losses) {
    check_non_negative(losses, "losses");
    const double mean = (losses.small + losses.middle + losses.large) / 3.0;
    const double ds = losses.small - mean;
    const double dm = losses.middle - mean;
    const double dl = losses.large - mean;
    // Population standard deviation over the three scales (divisor 3).
    return std::sqrt((ds * ds + dm * dm + dl * dl) / 3.0);
}

PenaltyResult penalty(const ScaleTriple& ap_before, const ScaleTriple& ap_after, double eps) {
    if (eps <= 0.0) {
        throw ValidationError("penalty: eps must be positive");
    }
    check_non_negative(ap_before, "ap_before");
    check_non_negative(ap_after, "ap_after");
    const ApUnit unit = infer_unit(ap_before, ap_after);
    // eps is specified in fraction units; scale it so that fraction and
    // percentage documents yield identical (unit-free) ratios.
    const double eps_scaled = unit.percent ? eps * 100.0 : eps;

    PenaltyResult result;
    for (ScaleCategory c : kCategories) {
        const double before = ap_before.for_category(c);
        const double after = ap_after.for_category(c);
        if (after < before) {
            result.dropped.push_back(c);
            result.phi *= before / std::max(after, eps_scaled);
        }
    }
    return result;
}

MetricValue pareto_scale_balance(const ScaleStats& stats, double eps) {
    MetricValue m;
    m.std_component = loss_std(stats.losses);
    PenaltyResult p = penalty(stats.ap_before, stats.ap_after, eps);
    m.penalty_component = p.phi;
    m.dropped_scales = std::move(p.dropped);
    m.value = m.std_component * m.penalty_component;
    return m;
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) {
        throw ValidationError("pearson: input lengths differ");
    }
    if (xs.size() < 2) {
        throw ValidationError("pearson: need at least two points");
    }
    const double n = static_cast<double>(xs.size());
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mean_x += xs[i];
        mean_y += ys[i];
    }
    mean_x /= n;
    mean_y /= n;

    double cov = 0.0, var_x = 0.0, var_y = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mean_x;
        const double dy = ys[i] - mean_y;
        cov += dx * dy;
        var_x += dx * dx;
        var_y += dy * dy;
    }
    if (var_x == 0.0 || var_y == 0.0) {
        throw ValidationError("pearson: zero variance makes the correlation undefined");
    }
    return cov / std::sqrt(var_x * var_y);
}

// ---------------------------------------------------------------------------
// Stats documents
// ---------------------------------------------------------------------------

ScaleStats parse_stats(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("stats document", e.what());
    }
    if (!doc.is_object()) {
        throw ParseError("stats", "expected an object");
    }
    for (const auto& [key, value] : doc.items()) {
        (void)value;
        if (key != "losses" && key != "ap_before" && key != "ap_after" &&
            key != "overall_ap_after") {
            throw ParseError("stats." + key, "unknown field");
        }
    }
    const auto require = [&](const char* key) -> const ordered_json& {
        if (!doc.contains(key)) {
            throw ParseError(std::string("stats.") + key, "missing required field");
        }
        return doc.at(key);
    };

    ScaleStats stats;
    stats.losses = parse_triple(require("losses"), "losses", /*require_non_negative=*/true);
    stats.ap_before =
        parse_triple(require("ap_before"), "ap_before", /*require_non_negative=*/true);
    stats.ap_after =
        parse_triple(require("ap_after"), "ap_after", /*require_non_negative=*/true);
    const auto& overall = require("overall_ap_after");
    if (!overall.is_number()) {
        throw ParseError("stats.overall_ap_after", "expected a number");
    }
    stats.overall_ap_after = overall.get<double>();
    return stats;
}

std::string serialize_stats(const ScaleStats& stats) {
    ordered_json doc;
    doc["losses"] = triple_to_json(stats.losses);
    doc["ap_before"] = triple_to_json(stats.ap_before);
    doc["ap_after"] = triple_to_json(stats.ap_after);
    doc["overall_ap_after"] = stats.overall_ap_after;
    return doc.dump(2) + "\n";
}

}  // namespace scaleaug
