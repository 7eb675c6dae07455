#include "scaleaug/policy.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "scaleaug/error.hpp"

namespace scaleaug {

namespace {

using nlohmann::ordered_json;

constexpr const char* kColorOpNames[kColorOpCount] = {
    "Brightness", "Color", "Contrast", "Cutout",
    "Equalize",   "Sharpness", "Solarize", "SolarizeAdd",
};

constexpr const char* kGeometricOpNames[kGeometricOpCount] = {
    "Hflip", "Rotate", "ShearX", "ShearY", "TranslateX", "TranslateY",
};

// Gene layout offsets inside one sub-policy block.
enum SubPolicyGene {
    kColorOpGene = 0,
    kColorProbGene = 1,
    kColorMagGene = 2,
    kGeoOpGene = 3,
    kGeoProbGene = 4,
    kGeoMagGene = 5,
};

constexpr int kSubPolicyBase = 4;
constexpr int kGenesPerSubPolicy = 6;
constexpr int kAreaBase = kSubPolicyBase + kSubPolicyCount * kGenesPerSubPolicy;  // 34

/// Column-style classification of one gene slot.
enum class GeneKind {
    zoom_probability,        // tenths, 0..5
    magnitude_index,         // 0..5 -> {0,2,..,10}
    color_op,                // 0..7
    box_probability_tenths,  // 0..10 stored; search draws even tenths
    geometric_op,            // 0..5
    area_ratio_index,        // 0..9
};

[[nodiscard]] GeneKind gene_kind(int gene_index) {
    if (gene_index < 0 || gene_index >= kGenomeLength) {
        throw ValidationError("gene index " + std::to_string(gene_index) +
                              " outside genome of length " + std::to_string(kGenomeLength));
    }
    if (gene_index < kSubPolicyBase) {
        return (gene_index % 2 == 0) ? GeneKind::zoom_probability : GeneKind::magnitude_index;
    }
    if (gene_index >= kAreaBase) {
        return GeneKind::area_ratio_index;
    }
    switch ((gene_index - kSubPolicyBase) % kGenesPerSubPolicy) {
        case kColorOpGene: return GeneKind::color_op;
        case kColorProbGene: return GeneKind::box_probability_tenths;
        case kColorMagGene: return GeneKind::magnitude_index;
        case kGeoOpGene: return GeneKind::geometric_op;
        case kGeoProbGene: return GeneKind::box_probability_tenths;
        default: return GeneKind::magnitude_index;
    }
}

[[nodiscard]] std::vector<int> iota_values(int count) {
    std::vector<int> v(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) v[static_cast<std::size_t>(i)] = i;
    return v;
}

/// Validation helpers -------------------------------------------------------

void check_tenths(int tenths, int max_tenths, const std::string& what) {
    if (tenths < 0 || tenths > max_tenths) {
        throw ValidationError(what + ": probability " + std::to_string(tenths) +
                              "/10 outside [0, " + std::to_string(max_tenths) + "/10]");
    }
}

void check_magnitude(int magnitude, const std::string& what) {
    if (magnitude < 0 || magnitude > 10 || magnitude % 2 != 0) {
        throw ValidationError(what + ": magnitude " + std::to_string(magnitude) +
                              " not on the grid {0,2,4,6,8,10}");
    }
}

[[nodiscard]] int area_ratio_index(double value, const std::string& what) {
    for (std::size_t i = 0; i < kAreaRatioGrid.size(); ++i) {
        if (value == kAreaRatioGrid[i]) {
            return static_cast<int>(i);
        }
    }
    throw ValidationError(what + ": area ratio " + std::to_string(value) +
                          " not on the 10-value grid");
}

/// JSON helpers --------------------------------------------------------------

void require_keys(const ordered_json& obj, const std::vector<std::string>& keys,
                  const std::string& path) {
    if (!obj.is_object()) {
        throw ParseError(path, "expected an object");
    }
    for (const auto& key : keys) {
        if (!obj.contains(key)) {
            throw ParseError(path + "." + key, "missing required field");
        }
    }
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            throw ParseError(path + "." + key, "unknown field");
        }
    }
}

[[nodiscard]] double number_at(const ordered_json& obj, const std::string& key,
                               const std::string& path) {
    const auto& v = obj.at(key);
    if (!v.is_number()) {
        throw ParseError(path + "." + key, "expected a number");
    }
    return v.get<double>();
}

/// Probability field -> tenths (0..max_tenths); rejects off-grid values.
[[nodiscard]] int parse_probability(const ordered_json& obj, const std::string& key,
                                    const std::string& path, int max_tenths) {
    const double p = number_at(obj, key, path);
    const double scaled = p * 10.0;
    const int tenths = static_cast<int>(std::lround(scaled));
    if (std::abs(scaled - tenths) > 1e-9 || tenths < 0 || tenths > max_tenths) {
        throw ParseError(path + "." + key,
                         "probability " + std::to_string(p) + " not a multiple of 0.1 in [0, " +
                             std::to_string(max_tenths / 10.0) + "]");
    }
    return tenths;
}

[[nodiscard]] int parse_magnitude(const ordered_json& obj, const std::string& key,
                                  const std::string& path) {
    const double m = number_at(obj, key, path);
    const int magnitude = static_cast<int>(std::lround(m));
    if (std::abs(m - magnitude) > 1e-9 || magnitude < 0 || magnitude > 10 ||
        magnitude % 2 != 0) {
        throw ParseError(path + "." + key, "magnitude " + std::to_string(m) +
                                               " not on the grid {0,2,4,6,8,10}");
    }
    return magnitude;
}

[[nodiscard]] ZoomParams parse_zoom(const ordered_json& obj, const std::string& path) {
    require_keys(obj, {"probability", "magnitude"}, path);
    ZoomParams z;
    z.probability_tenths = parse_probability(obj, "probability", path, 5);
    z.magnitude = parse_magnitude(obj, "magnitude", path);
    return z;
}

[[nodiscard]] ordered_json zoom_to_json(const ZoomParams& z) {
    return ordered_json{{"probability", z.probability_tenths / 10.0},
                        {"magnitude", z.magnitude}};
}

}  // namespace

// ---------------------------------------------------------------------------
// Operation catalogs
// ---------------------------------------------------------------------------

const char* color_op_name(ColorOp op) {
    return kColorOpNames[static_cast<int>(op)];
}

const char* geometric_op_name(GeometricOp op) {
    return kGeometricOpNames[static_cast<int>(op)];
}

ColorOp color_op_from_name(const std::string& name, const std::string& field_path) {
    for (int i = 0; i < kColorOpCount; ++i) {
        if (name == kColorOpNames[i]) {
            return static_cast<ColorOp>(i);
        }
    }
    throw ParseError(field_path, "unknown color op '" + name + "'");
}

GeometricOp geometric_op_from_name(const std::string& name, const std::string& field_path) {
    for (int i = 0; i < kGeometricOpCount; ++i) {
        if (name == kGeometricOpNames[i]) {
            return static_cast<GeometricOp>(i);
        }
    }
    throw ParseError(field_path, "unknown geometric op '" + name + "'");
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

void validate_policy(const Policy& p) {
    check_tenths(p.zoom_in.probability_tenths, 5, "zoom_in");
    check_magnitude(p.zoom_in.magnitude, "zoom_in");
    check_tenths(p.zoom_out.probability_tenths, 5, "zoom_out");
    check_magnitude(p.zoom_out.magnitude, "zoom_out");

    for (std::size_t i = 0; i < p.sub_policies.size(); ++i) {
        const std::string what = "sub_policies[" + std::to_string(i) + "]";
        const SubPolicy& sp = p.sub_policies[i];
        const int color_index = static_cast<int>(sp.color.op);
        if (color_index < 0 || color_index >= kColorOpCount) {
            throw ValidationError(what + ".color: op out of range");
        }
        check_tenths(sp.color.probability_tenths, 10, what + ".color");
        check_magnitude(sp.color.magnitude, what + ".color");
        const int geo_index = static_cast<int>(sp.geometric.op);
        if (geo_index < 0 || geo_index >= kGeometricOpCount) {
            throw ValidationError(what + ".geometric: op out of range");
        }
        check_tenths(sp.geometric.probability_tenths, 10, what + ".geometric");
        check_magnitude(sp.geometric.magnitude, what + ".geometric");
    }

    area_ratio_index(p.area_ratios.small, "area_ratios.small");
    area_ratio_index(p.area_ratios.middle, "area_ratios.middle");
    area_ratio_index(p.area_ratios.large, "area_ratios.large");
}

// ---------------------------------------------------------------------------
// Genome encoding
// ---------------------------------------------------------------------------

int gene_storage_max(int gene_index) {
    switch (gene_kind(gene_index)) {
        case GeneKind::zoom_probability: return 5;
        case GeneKind::magnitude_index: return 5;
        case GeneKind::color_op: return kColorOpCount - 1;
        case GeneKind::box_probability_tenths: return 10;
        case GeneKind::geometric_op: return kGeometricOpCount - 1;
        case GeneKind::area_ratio_index: return static_cast<int>(kAreaRatioGrid.size()) - 1;
    }
    return 0;
}

const std::vector<int>& gene_search_values(int gene_index) {
    static const std::vector<int> kZoomProb = iota_values(6);
    static const std::vector<int> kMagnitudeIndex = iota_values(6);
    static const std::vector<int> kColorOps = iota_values(kColorOpCount);
    static const std::vector<int> kEvenTenths = {0, 2, 4, 6, 8, 10};
    static const std::vector<int> kGeometricOps = iota_values(kGeometricOpCount);
    static const std::vector<int> kAreaIndices =
        iota_values(static_cast<int>(kAreaRatioGrid.size()));

    switch (gene_kind(gene_index)) {
        case GeneKind::zoom_probability: return kZoomProb;
        case GeneKind::magnitude_index: return kMagnitudeIndex;
        case GeneKind::color_op: return kColorOps;
        case GeneKind::box_probability_tenths: return kEvenTenths;
        case GeneKind::geometric_op: return kGeometricOps;
        case GeneKind::area_ratio_index: return kAreaIndices;
    }
    return kMagnitudeIndex;  // unreachable
}

void validate_genome(const Genome& g) {
    for (int i = 0; i < kGenomeLength; ++i) {
        const int max = gene_storage_max(i);
        if (g[static_cast<std::size_t>(i)] < 0 || g[static_cast<std::size_t>(i)] > max) {
            throw ValidationError("gene " + std::to_string(i) + " value " +
                                  std::to_string(g[static_cast<std::size_t>(i)]) +
                                  " outside [0, " + std::to_string(max) + "]");
        }
    }
}

Genome encode_policy(const Policy& p) {
    validate_policy(p);
    Genome g{};
    g[0] = p.zoom_in.probability_tenths;
    g[1] = p.zoom_in.magnitude / 2;
    g[2] = p.zoom_out.probability_tenths;
    g[3] = p.zoom_out.magnitude / 2;
    for (int i = 0; i < kSubPolicyCount; ++i) {
        const SubPolicy& sp = p.sub_policies[static_cast<std::size_t>(i)];
        const int base = kSubPolicyBase + i * kGenesPerSubPolicy;
        g[static_cast<std::size_t>(base + kColorOpGene)] = static_cast<int>(sp.color.op);
        g[static_cast<std::size_t>(base + kColorProbGene)] = sp.color.probability_tenths;
        g[static_cast<std::size_t>(base + kColorMagGene)] = sp.color.magnitude / 2;
        g[static_cast<std::size_t>(base + kGeoOpGene)] = static_cast<int>(sp.geometric.op);
        g[static_cast<std::size_t>(base + kGeoProbGene)] = sp.geometric.probability_tenths;
        g[static_cast<std::size_t>(base + kGeoMagGene)] = sp.geometric.magnitude / 2;
    }
    g[kAreaBase + 0] = area_ratio_index(p.area_ratios.small, "area_ratios.small");
    g[kAreaBase + 1] = area_ratio_index(p.area_ratios.middle, "area_ratios.middle");
    g[kAreaBase + 2] = area_ratio_index(p.area_ratios.large, "area_ratios.large");
    return g;
}

Policy decode_genome(const Genome& g) {
    validate_genome(g);
    Policy p;
    p.zoom_in.probability_tenths = g[0];
    p.zoom_in.magnitude = g[1] * 2;
    p.zoom_out.probability_tenths = g[2];
    p.zoom_out.magnitude = g[3] * 2;
    for (int i = 0; i < kSubPolicyCount; ++i) {
        SubPolicy& sp = p.sub_policies[static_cast<std::size_t>(i)];
        const int base = kSubPolicyBase + i * kGenesPerSubPolicy;
        sp.color.op = static_cast<ColorOp>(g[static_cast<std::size_t>(base + kColorOpGene)]);
        sp.color.probability_tenths = g[static_cast<std::size_t>(base + kColorProbGene)];
        sp.color.magnitude = g[static_cast<std::size_t>(base + kColorMagGene)] * 2;
        sp.geometric.op =
            static_cast<GeometricOp>(g[static_cast<std::size_t>(base + kGeoOpGene)]);
        sp.geometric.probability_tenths = g[static_cast<std::size_t>(base + kGeoProbGene)];
        sp.geometric.magnitude = g[static_cast<std::size_t>(base + kGeoMagGene)] * 2;
    }
    p.area_ratios.small = kAreaRatioGrid[static_cast<std::size_t>(g[kAreaBase + 0])];
    p.area_ratios.middle = kAreaRatioGrid[static_cast<std::size_t>(g[kAreaBase + 1])];
    p.area_ratios.large = kAreaRatioGrid[static_cast<std::size_t>(g[kAreaBase + 2])];
    return p;
}

Genome random_genome(Rng& rng) {
    Genome g{};
    for (int i = 0; i < kGenomeLength; ++i) {
        const std::vector<int>& values = gene_search_values(i);
        g[static_cast<std::size_t>(i)] =
            values[static_cast<std::size_t>(rng.uniform_index(values.size()))];
    }
    return g;
}

int hamming_distance(const Genome& a, const Genome& b) {
    int d = 0;
    for (int i = 0; i < kGenomeLength; ++i) {
        d += (a[static_cast<std::size_t>(i)] != b[static_cast<std::size_t>(i)]) ? 1 : 0;
    }
    return d;
}

// ---------------------------------------------------------------------------
// Cardinality
// ---------------------------------------------------------------------------

unsigned __int128 search_space_cardinality() {
    unsigned __int128 product = 1;
    for (int i = 0; i < kGenomeLength; ++i) {
        product *= static_cast<unsigned __int128>(gene_search_values(i).size());
    }
    return product;
}

std::string search_space_cardinality_decimal() {
    unsigned __int128 v = search_space_cardinality();
    if (v == 0) {
        return "0";
    }
    std::string digits;
    while (v > 0) {
        digits.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    std::reverse(digits.begin(), digits.end());
    return digits;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

std::string serialize_policy(const Policy& p) {
    validate_policy(p);
    ordered_json doc;
    doc["zoom_in"] = zoom_to_json(p.zoom_in);
    doc["zoom_out"] = zoom_to_json(p.zoom_out);
    doc["sub_policies"] = ordered_json::array();
    for (const SubPolicy& sp : p.sub_policies) {
        ordered_json entry;
        entry["color"] = ordered_json{{"op", color_op_name(sp.color.op)},
                                      {"probability", sp.color.probability_tenths / 10.0},
                                      {"magnitude", sp.color.magnitude}};
        entry["geometric"] =
            ordered_json{{"op", geometric_op_name(sp.geometric.op)},
                         {"probability", sp.geometric.probability_tenths / 10.0},
                         {"magnitude", sp.geometric.magnitude}};
        doc["sub_policies"].push_back(std::move(entry));
    }
    doc["area_ratios"] = ordered_json{{"small", p.area_ratios.small},
                                      {"middle", p.area_ratios.middle},
                                      {"large", p.area_ratios.large}};
    return doc.dump(2) + "\n";
}

Policy parse_policy(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("policy document", e.what());
    }
    require_keys(doc, {"zoom_in", "zoom_out", "sub_policies", "area_ratios"}, "policy");

    Policy p;
    p.zoom_in = parse_zoom(doc.at("zoom_in"), "zoom_in");
    p.zoom_out = parse_zoom(doc.at("zoom_out"), "zoom_out");

    const auto& subs = doc.at("sub_policies");
    if (!subs.is_array() || subs.size() != kSubPolicyCount) {
        throw ParseError("sub_policies", "expected an array of exactly " +
                                             std::to_string(kSubPolicyCount) + " entries");
    }
    for (std::size_t i = 0; i < subs.size(); ++i) {
        const std::string path = "sub_policies[" + std::to_string(i) + "]";
        const auto& entry = subs[i];
        require_keys(entry, {"color", "geometric"}, path);

        const auto& color = entry.at("color");
        require_keys(color, {"op", "probability", "magnitude"}, path + ".color");
        if (!color.at("op").is_string()) {
            throw ParseError(path + ".color.op", "expected a string");
        }
        SubPolicy& sp = p.sub_policies[i];
        sp.color.op =
            color_op_from_name(color.at("op").get<std::string>(), path + ".color.op");
        sp.color.probability_tenths =
            parse_probability(color, "probability", path + ".color", 10);
        sp.color.magnitude = parse_magnitude(color, "magnitude", path + ".color");

        const auto& geo = entry.at("geometric");
        require_keys(geo, {"op", "probability", "magnitude"}, path + ".geometric");
        if (!geo.at("op").is_string()) {
            throw ParseError(path + ".geometric.op", "expected a string");
        }
        sp.geometric.op =
            geometric_op_from_name(geo.at("op").get<std::string>(), path + ".geometric.op");
        sp.geometric.probability_tenths =
            parse_probability(geo, "probability", path + ".geometric", 10);
        sp.geometric.magnitude = parse_magnitude(geo, "magnitude", path + ".geometric");
    }

    const auto& areas = doc.at("area_ratios");
    require_keys(areas, {"small", "middle", "large"}, "area_ratios");
    const auto parse_area = [&](const char* key) {
        const double value = number_at(areas, key, "area_ratios");
        for (double grid_value : kAreaRatioGrid) {
            if (std::abs(value - grid_value) <= 1e-9) {
                return grid_value;
            }
        }
        throw ParseError(std::string("area_ratios.") + key,
                         "value " + std::to_string(value) + " not on the 10-value grid");
    };
    p.area_ratios.small = parse_area("small");
    p.area_ratios.middle = parse_area("middle");
    p.area_ratios.large = parse_area("large");
    return p;
}

Policy reference_policy() {
    Policy p;
    p.zoom_in = ZoomParams{2, 4};   // probability 0.2, magnitude 4
    p.zoom_out = ZoomParams{4, 10};  // probability 0.4, magnitude 10
    p.sub_policies[0] = SubPolicy{ColorOpSpec{ColorOp::color, 4, 2},
                                  GeometricOpSpec{GeometricOp::translate_x, 4, 4}};
    p.sub_policies[1] = SubPolicy{ColorOpSpec{ColorOp::brightness, 2, 4},
                                  GeometricOpSpec{GeometricOp::rotate, 4, 2}};
    p.sub_policies[2] = SubPolicy{ColorOpSpec{ColorOp::sharpness, 4, 2},
                                  GeometricOpSpec{GeometricOp::shear_x, 2, 6}};
    p.sub_policies[3] = SubPolicy{ColorOpSpec{ColorOp::solarize_add, 2, 2},
                                  GeometricOpSpec{GeometricOp::hflip, 3, 0}};
    // The fifth slot's color half is "keep the original": probability-0
    // Brightness, a structural no-op.
    p.sub_policies[4] = SubPolicy{ColorOpSpec{ColorOp::brightness, 0, 0},
                                  GeometricOpSpec{GeometricOp::translate_y, 2, 8}};
    p.area_ratios = AreaRatios{6.0, 2.0, 0.4};
    return p;
}

}  // namespace scaleaug
