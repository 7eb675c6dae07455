#include "scaleaug/zoom.hpp"

#include <algorithm>
#include <cmath>

#include "scaleaug/error.hpp"

namespace scaleaug {

namespace {

struct CornerBox {
    double x0, y0, x1, y1;
};

[[nodiscard]] CornerBox to_corners(const AnnotatedBox& b) {
    return CornerBox{b.center_x - b.w / 2.0, b.center_y - b.h / 2.0,
                     b.center_x + b.w / 2.0, b.center_y + b.h / 2.0};
}

[[nodiscard]] AnnotatedBox from_corners(const CornerBox& c, int category_id) {
    AnnotatedBox b;
    b.center_x = (c.x0 + c.x1) / 2.0;
    b.center_y = (c.y0 + c.y1) / 2.0;
    b.w = c.x1 - c.x0;
    b.h = c.y1 - c.y0;
    b.category_id = category_id;
    return b;
}

}  // namespace

double zoom_ratio_from_magnitude(ZoomBranch branch, int m) {
    if (m < 0 || m > 10) {
        throw ValidationError("zoom_ratio_from_magnitude: magnitude " + std::to_string(m) +
                              " outside [0, 10]");
    }
    switch (branch) {
        case ZoomBranch::zoom_in: return 1.0 - 0.05 * m;
        case ZoomBranch::zoom_out: return 1.0 + 0.05 * m;
        case ZoomBranch::original: return 1.0;
    }
    return 1.0;
}

AnnotatedImage zoom_in(const AnnotatedImage& img, double rho, Rng& rng) {
    if (!(rho >= 0.5 && rho <= 1.0)) {
        throw ValidationError("zoom_in: ratio " + std::to_string(rho) +
                              " outside [0.5, 1.0]");
    }
    const int height = img.pixels.height;
    const int width = img.pixels.width;
    if (height <= 0 || width <= 0) {
        throw ValidationError("zoom_in: empty raster");
    }

    const int crop_h = std::clamp(static_cast<int>(std::lround(rho * height)), 1, height);
    const int crop_w = std::clamp(static_cast<int>(std::lround(rho * width)), 1, width);
    // Integer window offset, drawn row first then column; rho = 1 leaves a
    // single choice, forcing (0, 0).
    const int off_y =
        static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(height - crop_h + 1)));
    const int off_x =
        static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(width - crop_w + 1)));

    AnnotatedImage out;
    out.image_id = img.image_id;

    if (crop_h == height && crop_w == width) {
        out.pixels = img.pixels;  // exact identity
    } else {
        Image window(crop_h, crop_w);
        for (int y = 0; y < crop_h; ++y) {
            for (int x = 0; x < crop_w; ++x) {
                window.set_pixel(y, x, img.pixels.pixel(off_y + y, off_x + x));
            }
        }
        out.pixels = resize_bilinear(window, height, width);
    }

    const double scale_x = static_cast<double>(width) / crop_w;
    const double scale_y = static_cast<double>(height) / crop_h;
    for (const AnnotatedBox& box : img.boxes) {
        const CornerBox c = to_corners(box);
        const CornerBox visible{
            std::max(c.x0, static_cast<double>(off_x)),
            std::max(c.y0, static_cast<double>(off_y)),
            std::min(c.x1, static_cast<double>(off_x + crop_w)),
            std::min(c.y1, static_cast<double>(off_y + crop_h)),
        };
        const double vis_w = std::max(0.0, visible.x1 - visible.x0);
        const double vis_h = std::max(0.0, visible.y1 - visible.y0);
        // Boxes keeping less than a quarter of their original area inside
        // the window are dropped; the rest are clipped and rescaled.
        if (vis_w * vis_h < 0.25 * box.area()) {
            continue;
        }
        const CornerBox mapped{
            (visible.x0 - off_x) * scale_x,
            (visible.y0 - off_y) * scale_y,
            (visible.x1 - off_x) * scale_x,
            (visible.y1 - off_y) * scale_y,
        };
        out.boxes.push_back(from_corners(mapped, box.category_id));
    }
    return out;
}

AnnotatedImage zoom_out(const AnnotatedImage& img, double rho, Rng& rng) {
    if (!(rho >= 1.0 && rho <= 1.5)) {
        throw ValidationError("zoom_out: ratio " + std::to_string(rho) +
                              " outside [1.0, 1.5]");
    }
    const int height = img.pixels.height;
    const int width = img.pixels.width;
    if (height <= 0 || width <= 0) {
        throw ValidationError("zoom_out: empty raster");
    }

    const int paste_h = std::clamp(static_cast<int>(std::lround(height / rho)), 1, height);
    const int paste_w = std::clamp(static_cast<int>(std::lround(width / rho)), 1, width);
    // Integer paste offset, drawn row first then column.
    const int off_y =
        static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(height - paste_h + 1)));
    const int off_x =
        static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(width - paste_w + 1)));

    AnnotatedImage out;
    out.image_id = img.image_id;

    if (paste_h == height && paste_w == width) {
        out.pixels = img.pixels;  // exact identity
    } else {
        const Image small_img = resize_bilinear(img.pixels, paste_h, paste_w);
        out.pixels = Image::filled(height, width, mean_color(img.pixels));
        for (int y = 0; y < paste_h; ++y) {
            for (int x = 0; x < paste_w; ++x) {
                out.pixels.set_pixel(off_y + y, off_x + x, small_img.pixel(y, x));
            }
        }
    }

    const double scale_x = static_cast<double>(paste_w) / width;
    const double scale_y = static_cast<double>(paste_h) / height;
    for (const AnnotatedBox& box : img.boxes) {
        const CornerBox c = to_corners(box);
        const CornerBox mapped{
            std::clamp(c.x0 * scale_x + off_x, 0.0, static_cast<double>(width)),
            std::clamp(c.y0 * scale_y + off_y, 0.0, static_cast<double>(height)),
            std::clamp(c.x1 * scale_x + off_x, 0.0, static_cast<double>(width)),
            std::clamp(c.y1 * scale_y + off_y, 0.0, static_cast<double>(height)),
        };
        if (mapped.x1 - mapped.x0 <= 0.0 || mapped.y1 - mapped.y0 <= 0.0) {
            continue;  // cannot occur for in-bounds inputs; defensive
        }
        out.boxes.push_back(from_corners(mapped, box.category_id));
    }
    return out;
}

AnnotatedImage apply_image_level(const AnnotatedImage& img, const Policy& policy, Rng& rng,
                                 ZoomDecision* decision) {
    validate_policy(policy);

    const double p_in = policy.zoom_in.probability();
    const double p_out = policy.zoom_out.probability();
    const double u = rng.uniform_unit();

    ZoomDecision local;
    if (u < p_in) {
        local.branch = ZoomBranch::zoom_in;
        local.ratio = zoom_ratio_from_magnitude(ZoomBranch::zoom_in, policy.zoom_in.magnitude);
    } else if (u < p_in + p_out) {
        local.branch = ZoomBranch::zoom_out;
        local.ratio =
            zoom_ratio_from_magnitude(ZoomBranch::zoom_out, policy.zoom_out.magnitude);
    } else {
        local.branch = ZoomBranch::original;
        local.ratio = 1.0;
    }
    if (decision != nullptr) {
        *decision = local;
    }

    switch (local.branch) {
        case ZoomBranch::zoom_in: return zoom_in(img, local.ratio, rng);
        case ZoomBranch::zoom_out: return zoom_out(img, local.ratio, rng);
        case ZoomBranch::original: return img;
    }
    return img;
}

}  // namespace scaleaug
