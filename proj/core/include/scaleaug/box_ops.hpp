#ifndef SCALEAUG_BOX_OPS_HPP
#define SCALEAUG_BOX_OPS_HPP

#include "scaleaug/gaussian.hpp"
#include "scaleaug/geometry.hpp"
#include "scaleaug/policy.hpp"
#include "scaleaug/random.hpp"
#include "scaleaug/raster.hpp"

namespace scaleaug {

// ---------------------------------------------------------------------------
// Box-level operations
//
// Fourteen operations in two categories.  Color operations are pure pixel
// transforms of a whole raster; geometric operations are affine warps about
// the box center with bilinear resampling.  Spatial restriction to the
// neighborhood of the box is the Gaussian blend's job, not the operations'.
// ---------------------------------------------------------------------------

// --------------------------------------------------------------------------
// Magnitude mapping
// --------------------------------------------------------------------------

/// Physical parameter range of one operation.
struct PhysicalRange {
    double lo = 0.0;
    double hi = 0.0;
    bool is_signed = false;      ///< sign drawn uniformly at application time
    bool has_magnitude = true;   ///< false: operation ignores magnitude
};

[[nodiscard]] PhysicalRange physical_range(ColorOp op);
[[nodiscard]] PhysicalRange physical_range(GeometricOp op);

/// Linear magnitude mapping for any integer m in 0..10:
///   unsigned ranges: lo + (m/10) * (hi - lo)
///   signed ranges:   (m/10) * hi, sign drawn separately at application
/// Throws ValidationError for m outside 0..10.
[[nodiscard]] double map_magnitude(const PhysicalRange& range, int m);
[[nodiscard]] double map_magnitude(ColorOp op, int m);
[[nodiscard]] double map_magnitude(GeometricOp op, int m);

// --------------------------------------------------------------------------
// Color operations
// --------------------------------------------------------------------------

/// Integer luminance used by Color/Contrast degenerates: round of
/// (299 R + 587 G + 114 B) / 1000.
[[nodiscard]] int luminance(Rgb c);

/// Applies one color operation at a physical value to the whole raster.
/// `box` and `rng` are consulted only by Cutout (square placement).
/// Enhancement ops (Brightness/Color/Contrast/Sharpness) interpolate between
/// a degenerate image and the input; value 1.0 is an exact identity.
[[nodiscard]] Image apply_color_op(const Image& img, ColorOp op, double physical_value,
                                   const BoxGeometry& box, Rng& rng);

// --------------------------------------------------------------------------
// Geometric operations
// --------------------------------------------------------------------------

/// Row-major 2x3 forward affine transform: (x, y) -> (x', y').
struct AffineTransform {
    double m00 = 1.0, m01 = 0.0, m02 = 0.0;  // x' = m00*x + m01*y + m02
    double m10 = 0.0, m11 = 1.0, m12 = 0.0;  // y' = m10*x + m11*y + m12
};

/// Forward transform of one geometric op about the box center.  The physical
/// value carries its sign already (drawn by the caller for signed ranges).
[[nodiscard]] AffineTransform geometric_transform(GeometricOp op, double signed_value,
                                                  const BoxGeometry& box);

/// Inverse-maps every output pixel center through the transform and samples
/// the input bilinearly; samples outside the frame read `fill`.
[[nodiscard]] Image warp_affine(const Image& img, const AffineTransform& forward, Rgb fill);

/// Applies one geometric operation; out-of-frame content is filled with the
/// per-image mean color.
[[nodiscard]] Image apply_geometric_op(const Image& img, GeometricOp op,
                                       double signed_value, const BoxGeometry& box);

// --------------------------------------------------------------------------
// Per-box augmentation
// --------------------------------------------------------------------------

/// One audit row per processed box (for tests and debugging).
struct BoxAuditEntry {
    std::size_t box_index = 0;
    ScaleCategory category = ScaleCategory::middle;
    double area_ratio = 0.0;
    int sub_policy_index = 0;
    bool color_applied = false;
    bool geometric_applied = false;
    double color_value = 0.0;      ///< physical value if applied
    double geometric_value = 0.0;  ///< signed physical value if applied
};

/// Applies one uniformly chosen sub-policy to every annotated box: color op
/// (with its probability), then geometric op (with its probability), then a
/// single Gaussian blend whose area ratio matches the box's scale category.
/// Box coordinates are never modified; zero-area boxes are skipped.
/// Deterministic for a fixed rng state.
[[nodiscard]] AnnotatedImage augment_boxes(
    const AnnotatedImage& img, const Policy& policy, Rng& rng,
    BlendDirection direction = BlendDirection::transform_at_center,
    std::vector<BoxAuditEntry>* audit = nullptr);

}  // namespace scaleaug

#endif  // SCALEAUG_BOX_OPS_HPP
