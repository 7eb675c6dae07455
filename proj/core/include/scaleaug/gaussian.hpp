#ifndef SCALEAUG_GAUSSIAN_HPP
#define SCALEAUG_GAUSSIAN_HPP

#include "scaleaug/geometry.hpp"
#include "scaleaug/raster.hpp"

namespace scaleaug {

// ---------------------------------------------------------------------------
// Gaussian spatial blending
//
// Each augmented box gets a Gaussian weight field ("alpha map") centered on
// the box.  The two standard deviations are derived from the box and image
// shape and from an area ratio r, chosen such that the integral of the map
// over the plane equals r * h * w:
//
//     sigma_vertical   = h * sqrt((W/H) * r / (2*pi))   (pairs with rows)
//     sigma_horizontal = w * sqrt((H/W) * r / (2*pi))   (pairs with columns)
//
// which gives 2*pi * sigma_v * sigma_h = r*h*w and the aspect relation
// sigma_v / sigma_h = (h/H) / (w/W).  The map extends over the whole image —
// ratios up to 10 deliberately reach beyond the box.
// ---------------------------------------------------------------------------

/// Standard deviations of the blending Gaussian, by image axis.
struct SigmaPair {
    double vertical = 0.0;    ///< attenuation along y (rows); derived from h
    double horizontal = 0.0;  ///< attenuation along x (columns); derived from w
};

/// Derives both sigmas from box geometry and area ratio.  Throws
/// ValidationError on non-positive dimensions or ratio.
[[nodiscard]] SigmaPair derive_sigmas(const BoxGeometry& geometry, double area_ratio);

/// Box geometry with its derived Gaussian parameters.
struct GaussianMapParams {
    BoxGeometry geometry;
    double area_ratio = 1.0;
    SigmaPair sigmas;
};

/// Convenience constructor running derive_sigmas.
[[nodiscard]] GaussianMapParams make_gaussian_params(const BoxGeometry& geometry,
                                                     double area_ratio);

/// The continuous Gaussian weight at point (x, y):
/// exp(-((x-cx)^2 / (2*sigma_h^2) + (y-cy)^2 / (2*sigma_v^2))).
[[nodiscard]] double gaussian_value(const GaussianMapParams& params, double x, double y);

/// Samples the Gaussian at every pixel center (x+0.5, y+0.5) of the image.
/// Computed separably (row factor x column factor).  Throws ValidationError
/// for a zero-sized raster.
[[nodiscard]] AlphaMap gaussian_map(const GaussianMapParams& params);

/// Midpoint-rule integral of the map over the image (pixel area = 1).
[[nodiscard]] double numeric_area(const AlphaMap& map);

/// Which raster the Gaussian peak favors when blending.
enum class BlendDirection {
    original_at_center,   ///< weight alpha on the original raster
    transform_at_center,  ///< weight alpha on the transformed raster (pipeline default)
};

/// Per-pixel, per-channel convex blend of two rasters under the map, computed
/// in floating point and rounded back to 8 bits.  Throws ValidationError on
/// dimension mismatch.
[[nodiscard]] Image blend(const Image& original, const Image& transformed,
                          const AlphaMap& map, BlendDirection direction);

}  // namespace scaleaug

#endif  // SCALEAUG_GAUSSIAN_HPP
