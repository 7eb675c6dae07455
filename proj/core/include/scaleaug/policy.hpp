#ifndef SCALEAUG_POLICY_HPP
#define SCALEAUG_POLICY_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "scaleaug/geometry.hpp"
#include "scaleaug/random.hpp"

namespace scaleaug {

// ---------------------------------------------------------------------------
// Policy domain model
//
// A policy has three parts:
//   * image level: zoom-in and zoom-out, each with a probability on the
//     {0.0 .. 0.5} tenths grid and a magnitude on the even grid {0,2,..,10};
//   * box level: five sub-policies, each pairing one color operation with one
//     geometric operation (probability in tenths of [0,1], magnitude on the
//     even grid);
//   * three per-scale area ratios drawn from a fixed 10-value grid.
//
// The evolutionary search works on a flat 37-gene integer genome.  The
// search itself only ever generates probabilities on the 0.2-interval grid
// (even tenths), but probability storage is in tenths so that externally
// authored policies using any multiple of 0.1 — the bundled reference policy
// contains a 0.3 — encode and decode losslessly.  This keeps the searched
// space at exactly 6 values per probability gene.
// ---------------------------------------------------------------------------

// --------------------------------------------------------------------------
// Operation catalogs
// --------------------------------------------------------------------------

enum class ColorOp {
    brightness,
    color,
    contrast,
    cutout,
    equalize,
    sharpness,
    solarize,
    solarize_add,
};

enum class GeometricOp {
    hflip,
    rotate,
    shear_x,
    shear_y,
    translate_x,
    translate_y,
};

inline constexpr int kColorOpCount = 8;
inline constexpr int kGeometricOpCount = 6;

/// Canonical operation names as used in policy documents.
[[nodiscard]] const char* color_op_name(ColorOp op);
[[nodiscard]] const char* geometric_op_name(GeometricOp op);

/// Inverse lookups; throw ParseError on unknown names.
[[nodiscard]] ColorOp color_op_from_name(const std::string& name,
                                          const std::string& field_path);
[[nodiscard]] GeometricOp geometric_op_from_name(const std::string& name,
                                                 const std::string& field_path);

// --------------------------------------------------------------------------
// Policy types
// --------------------------------------------------------------------------

/// Image-level zoom parameters.  probability_tenths in 0..5 (i.e. 0.0..0.5);
/// magnitude an even integer in 0..10.
struct ZoomParams {
    int probability_tenths = 0;
    int magnitude = 0;

    [[nodiscard]] double probability() const { return probability_tenths / 10.0; }

    friend bool operator==(const ZoomParams&, const ZoomParams&) = default;
};

/// One color operation slot of a sub-policy.  probability_tenths in 0..10;
/// magnitude an even integer in 0..10 (stored but ignored by Equalize).
struct ColorOpSpec {
    ColorOp op = ColorOp::brightness;
    int probability_tenths = 0;
    int magnitude = 0;

    [[nodiscard]] double probability() const { return probability_tenths / 10.0; }

    friend bool operator==(const ColorOpSpec&, const ColorOpSpec&) = default;
};

/// One geometric operation slot of a sub-policy (magnitude ignored by Hflip).
struct GeometricOpSpec {
    GeometricOp op = GeometricOp::hflip;
    int probability_tenths = 0;
    int magnitude = 0;

    [[nodiscard]] double probability() const { return probability_tenths / 10.0; }

    friend bool operator==(const GeometricOpSpec&, const GeometricOpSpec&) = default;
};

/// A color/geometric operation pair.
struct SubPolicy {
    ColorOpSpec color;
    GeometricOpSpec geometric;

    friend bool operator==(const SubPolicy&, const SubPolicy&) = default;
};

inline constexpr int kSubPolicyCount = 5;

/// The searchable grid for per-scale area ratios.
inline constexpr std::array<double, 10> kAreaRatioGrid = {
    0.2, 0.4, 0.6, 0.8, 1.0, 2.0, 4.0, 6.0, 8.0, 10.0,
};

/// Per-scale Gaussian area ratios; every value must sit on kAreaRatioGrid.
struct AreaRatios {
    double small = 1.0;
    double middle = 1.0;
    double large = 1.0;

    [[nodiscard]] double for_category(ScaleCategory c) const {
        switch (c) {
            case ScaleCategory::small: return small;
            case ScaleCategory::middle: return middle;
            case ScaleCategory::large: return large;
        }
        return middle;
    }

    friend bool operator==(const AreaRatios&, const AreaRatios&) = default;
};

/// A complete augmentation policy.
struct Policy {
    ZoomParams zoom_in;
    ZoomParams zoom_out;
    std::array<SubPolicy, kSubPolicyCount> sub_policies;
    AreaRatios area_ratios;

    friend bool operator==(const Policy&, const Policy&) = default;
};

/// Throws ValidationError if any field is off its grid or out of range.
void validate_policy(const Policy& p);

// --------------------------------------------------------------------------
// Genome encoding
//
// Layout (37 genes):
//   [0]  zoom-in  probability (tenths, 0..5)
//   [1]  zoom-in  magnitude index (0..5 -> {0,2,4,6,8,10})
//   [2]  zoom-out probability (tenths, 0..5)
//   [3]  zoom-out magnitude index
//   [4 + 6i .. 9 + 6i] for sub-policy i in 0..4:
//        color op (0..7), color probability (tenths, 0..10),
//        color magnitude index (0..5),
//        geometric op (0..5), geometric probability (tenths, 0..10),
//        geometric magnitude index (0..5)
//   [34..36] area-ratio grid indices (0..9) for small / middle / large
// --------------------------------------------------------------------------

inline constexpr int kGenomeLength = 37;

using Genome = std::array<int, kGenomeLength>;

/// Values a gene may hold in a *valid* genome (storage range).
[[nodiscard]] int gene_storage_max(int gene_index);

/// Values the search draws from (a subset of the storage range for
/// probability genes: even tenths only).
[[nodiscard]] const std::vector<int>& gene_search_values(int gene_index);

/// Throws ValidationError if any gene is outside its storage range.
void validate_genome(const Genome& g);

/// Policy -> genome.  Throws ValidationError for off-grid policies.
[[nodiscard]] Genome encode_policy(const Policy& p);

/// Genome -> policy (inverse of encode_policy).  Throws ValidationError for
/// out-of-range genes.
[[nodiscard]] Policy decode_genome(const Genome& g);

/// Uniform sample over the searched space (search grids, not storage).
[[nodiscard]] Genome random_genome(Rng& rng);

/// Number of Hamming-distance disagreeing genes.
[[nodiscard]] int hamming_distance(const Genome& a, const Genome& b);

// --------------------------------------------------------------------------
// Search-space cardinality
// --------------------------------------------------------------------------

/// Exact number of distinct searchable policies: 6^4 * ((6*6^2)*(8*6^2))^5 * 10^3.
[[nodiscard]] unsigned __int128 search_space_cardinality();

/// The same value as a decimal string.
[[nodiscard]] std::string search_space_cardinality_decimal();

// --------------------------------------------------------------------------
// Serialization
// --------------------------------------------------------------------------

/// Renders a policy as a JSON document (stable field order, 2-space indent).
[[nodiscard]] std::string serialize_policy(const Policy& p);

/// Parses a policy document.  Unknown fields, unknown op names, off-grid
/// values, or structural errors raise ParseError naming the field path.
[[nodiscard]] Policy parse_policy(const std::string& text);

/// The bundled reference policy: a known-good searched policy used by the
/// test-suite and shipped as policies/reference.json.
[[nodiscard]] Policy reference_policy();

}  // namespace scaleaug

#endif  // SCALEAUG_POLICY_HPP
