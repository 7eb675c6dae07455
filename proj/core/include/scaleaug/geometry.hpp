#ifndef SCALEAUG_GEOMETRY_HPP
#define SCALEAUG_GEOMETRY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "scaleaug/raster.hpp"

namespace scaleaug {

// ---------------------------------------------------------------------------
// Box geometry and annotated images
//
// Boxes live in continuous image coordinates: x is the horizontal (column)
// axis, y the vertical (row) axis, and (center_x, center_y) is the box
// center.  h is the vertical extent, w the horizontal extent.
// ---------------------------------------------------------------------------

/// One box placed inside an image of known size.
struct BoxGeometry {
    double center_x = 0.0;  ///< horizontal center (columns)
    double center_y = 0.0;  ///< vertical center (rows)
    double h = 0.0;         ///< box height in pixels
    double w = 0.0;         ///< box width in pixels
    int image_h = 0;        ///< enclosing image height
    int image_w = 0;        ///< enclosing image width
};

/// COCO-convention object scale buckets by box area.
enum class ScaleCategory { small, middle, large };

/// Area thresholds: small below 32^2, large at or above 96^2.
[[nodiscard]] constexpr ScaleCategory scale_category_of(double box_area) noexcept {
    if (box_area < 32.0 * 32.0) return ScaleCategory::small;
    if (box_area < 96.0 * 96.0) return ScaleCategory::middle;
    return ScaleCategory::large;
}

[[nodiscard]] constexpr const char* scale_category_name(ScaleCategory c) noexcept {
    switch (c) {
        case ScaleCategory::small: return "small";
        case ScaleCategory::middle: return "middle";
        case ScaleCategory::large: return "large";
    }
    return "?";
}

/// Center-form annotated box.
struct AnnotatedBox {
    double center_x = 0.0;
    double center_y = 0.0;
    double h = 0.0;
    double w = 0.0;
    int category_id = 0;

    [[nodiscard]] double area() const { return h * w; }

    /// View as BoxGeometry inside an image of the given size.
    [[nodiscard]] BoxGeometry geometry(int image_h, int image_w) const {
        return BoxGeometry{center_x, center_y, h, w, image_h, image_w};
    }
};

/// A raster plus its object annotations.
struct AnnotatedImage {
    Image pixels;
    std::vector<AnnotatedBox> boxes;
    std::int64_t image_id = 0;
};

}  // namespace scaleaug

#endif  // SCALEAUG_GEOMETRY_HPP
