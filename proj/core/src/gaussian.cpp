#include "scaleaug/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "scaleaug/error.hpp"

namespace scaleaug {

SigmaPair derive_sigmas(const BoxGeometry& geometry, double area_ratio) {
    if (geometry.h <= 0.0 || geometry.w <= 0.0) {
        throw ValidationError("derive_sigmas: box dimensions must be positive");
    }
    if (geometry.image_h <= 0 || geometry.image_w <= 0) {
        throw ValidationError("derive_sigmas: image dimensions must be positive");
    }
    if (area_ratio <= 0.0) {
        throw ValidationError("derive_sigmas: area ratio must be positive");
    }
    const double aspect =
        static_cast<double>(geometry.image_w) / static_cast<double>(geometry.image_h);
    const double two_pi = 2.0 * std::numbers::pi;
    // Chosen so that 2*pi * sigma_v * sigma_h = r * h * w, with the spread
    // split by the box-to-image aspect: sigma_v/sigma_h = (h/H)/(w/W).
    SigmaPair s;
    s.vertical = geometry.h * std::sqrt(aspect * area_ratio / two_pi);
    s.horizontal = geometry.w * std::sqrt(area_ratio / (aspect * two_pi));
    return s;
}

GaussianMapParams make_gaussian_params(const BoxGeometry& geometry, double area_ratio) {
    GaussianMapParams params;
    params.geometry = geometry;
    params.area_ratio = area_ratio;
    params.sigmas = derive_sigmas(geometry, area_ratio);
    return params;
}

double gaussian_value(const GaussianMapParams& params, double x, double y) {
    const double dx = x - params.geometry.center_x;
    const double dy = y - params.geometry.center_y;
    const double sh = params.sigmas.horizontal;
    const double sv = params.sigmas.vertical;
    return std::exp(-(dx * dx / (2.0 * sh * sh) + dy * dy / (2.0 * sv * sv)));
}

AlphaMap gaussian_map(const GaussianMapParams& params) {
    const int height = params.geometry.image_h;
    const int width = params.geometry.image_w;
    if (height <= 0 || width <= 0) {
        throw ValidationError("gaussian_map: zero-sized raster");
    }

    // The map is separable: alpha(x, y) = col_factor(x) * row_factor(y).
    std::vector<double> col_factor(static_cast<std::size_t>(width));
    std::vector<double> row_factor(static_cast<std::size_t>(height));
    const double sh = params.sigmas.horizontal;
    const double sv = params.sigmas.vertical;
    for (int x = 0; x < width; ++x) {
        const double dx = (x + 0.5) - params.geometry.center_x;
        col_factor[static_cast<std::size_t>(x)] = std::exp(-dx * dx / (2.0 * sh * sh));
    }
    for (int y = 0; y < height; ++y) {
        const double dy = (y + 0.5) - params.geometry.center_y;
        row_factor[static_cast<std::size_t>(y)] = std::exp(-dy * dy / (2.0 * sv * sv));
    }

    AlphaMap map(height, width);
    for (int y = 0; y < height; ++y) {
        const double ry = row_factor[static_cast<std::size_t>(y)];
        double* row = &map.values[static_cast<std::size_t>(y) * width];
        for (int x = 0; x < width; ++x) {
            row[x] = ry * col_factor[static_cast<std::size_t>(x)];
        }
    }
    return map;
}

double numeric_area(const AlphaMap& map) {
    // Midpoint rule with unit pixel area: plain sum.  Row-wise partial sums
    // keep the accumulation error negligible at raster sizes.
    double total = 0.0;
    for (int y = 0; y < map.height; ++y) {
        double row_sum = 0.0;
        const double* row = &map.values[static_cast<std::size_t>(y) * map.width];
        for (int x = 0; x < map.width; ++x) {
            row_sum += row[x];
        }
        total += row_sum;
    }
    return total;
}

Image blend(const Image& original, const Image& transformed, const AlphaMap& map,
            BlendDirection direction) {
    if (original.height != transformed.height || original.width != transformed.width ||
        original.height != map.height || original.width != map.width) {
        throw ValidationError("blend: raster/map dimension mismatch");
    }

    Image out(original.height, original.width);
    const bool transform_peaks = (direction == BlendDirection::transform_at_center);
    for (int y = 0; y < original.height; ++y) {
        for (int x = 0; x < original.width; ++x) {
            const double alpha = map.at(y, x);
            const std::size_t o = original.offset(y, x);
            for (int c = 0; c < 3; ++c) {
                const double a = original.data[o + static_cast<std::size_t>(c)];
                const double b = transformed.data[o + static_cast<std::size_t>(c)];
                const double v = transform_peaks ? alpha * b + (1.0 - alpha) * a
                                                 : alpha * a + (1.0 - alpha) * b;
                out.data[o + static_cast<std::size_t>(c)] =
                    static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
            }
        }
    }
    return out;
}

}  // namespace scaleaug
