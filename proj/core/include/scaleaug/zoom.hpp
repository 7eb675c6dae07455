#ifndef SCALEAUG_ZOOM_HPP
#define SCALEAUG_ZOOM_HPP

#include "scaleaug/geometry.hpp"
#include "scaleaug/policy.hpp"
#include "scaleaug/random.hpp"

namespace scaleaug {

// ---------------------------------------------------------------------------
// Image-level augmentation
//
// Per image, one of three branches is drawn:
//   zoom-in  (probability P_in):  crop a rho-sized window at a random offset
//                                 and resize back up to the original shape;
//   zoom-out (probability P_out): downscale by 1/rho and paste at a random
//                                 offset into a mean-color canvas;
//   original (probability 1 - P_in - P_out): unchanged.
//
// Both zooms preserve the raster shape, update box coordinates, and are the
// identity at rho = 1.
// ---------------------------------------------------------------------------

enum class ZoomBranch { zoom_in, zoom_out, original };

[[nodiscard]] constexpr const char* zoom_branch_name(ZoomBranch b) noexcept {
    switch (b) {
        case ZoomBranch::zoom_in: return "zoom_in";
        case ZoomBranch::zoom_out: return "zoom_out";
        case ZoomBranch::original: return "original";
    }
    return "?";
}

/// The branch drawn for one image, with its zoom ratio.
struct ZoomDecision {
    ZoomBranch branch = ZoomBranch::original;
    double ratio = 1.0;
};

/// Deterministic magnitude-to-ratio mapping:
///   zoom-in:  rho = 1 - 0.05*m   (m=10 -> 0.5, strongest crop)
///   zoom-out: rho = 1 + 0.05*m   (m=10 -> 1.5)
///   original: rho = 1
/// Throws ValidationError for m outside 0..10.
[[nodiscard]] double zoom_ratio_from_magnitude(ZoomBranch branch, int m);

/// Crop-and-upscale zoom-in.  A window of shape (round(rho*H), round(rho*W))
/// at a uniform integer offset is cropped and bilinearly resized back to
/// (H, W).  Boxes are mapped through the crop-then-scale transform; boxes
/// retaining less than 25% of their original area inside the window are
/// dropped, the rest clipped.  rho must lie in [0.5, 1].
[[nodiscard]] AnnotatedImage zoom_in(const AnnotatedImage& img, double rho, Rng& rng);

/// Downscale-and-paste zoom-out.  The image is bilinearly downscaled by
/// 1/rho and pasted at a uniform integer offset into an (H, W) canvas filled
/// with the per-image mean color; boxes are scaled and offset along.  rho
/// must lie in [1, 1.5].
[[nodiscard]] AnnotatedImage zoom_out(const AnnotatedImage& img, double rho, Rng& rng);

/// Draws the branch from the policy's zoom probabilities and dispatches.
/// If `decision` is non-null, the drawn branch and ratio are reported.
[[nodiscard]] AnnotatedImage apply_image_level(const AnnotatedImage& img,
                                               const Policy& policy, Rng& rng,
                                               ZoomDecision* decision = nullptr);

}  // namespace scaleaug

#endif  // SCALEAUG_ZOOM_HPP
