#include "scaleaug/raster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "scaleaug/error.hpp"

namespace scaleaug {

namespace {

[[nodiscard]] std::uint8_t clamp_round(double v) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
}

}  // namespace

Rgb mean_color(const Image& img) {
    if (img.pixel_count() == 0) {
        return Rgb{};
    }
    double sum[3] = {0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < img.data.size(); i += 3) {
        sum[0] += img.data[i];
        sum[1] += img.data[i + 1];
        sum[2] += img.data[i + 2];
    }
    const double n = static_cast<double>(img.pixel_count());
    return Rgb{clamp_round(sum[0] / n), clamp_round(sum[1] / n), clamp_round(sum[2] / n)};
}

Image resize_bilinear(const Image& img, int out_height, int out_width) {
    if (img.height <= 0 || img.width <= 0) {
        throw ValidationError("resize_bilinear: empty input raster");
    }
    if (out_height <= 0 || out_width <= 0) {
        throw ValidationError("resize_bilinear: non-positive output shape");
    }
    if (out_height == img.height && out_width == img.width) {
        return img;  // exact identity
    }

    Image out(out_height, out_width);
    const double scale_y = static_cast<double>(img.height) / out_height;
    const double scale_x = static_cast<double>(img.width) / out_width;

    for (int y = 0; y < out_height; ++y) {
        // Pixel-center convention: output center (y + 0.5) maps to input
        // coordinate (y + 0.5) * scale; subtracting 0.5 yields index space.
        const double fy = (y + 0.5) * scale_y - 0.5;
        int iy = static_cast<int>(std::floor(fy));
        double wy = fy - iy;
        // Clamp taps to the frame (border replication).
        int iy0 = std::clamp(iy, 0, img.height - 1);
        int iy1 = std::clamp(iy + 1, 0, img.height - 1);

        for (int x = 0; x < out_width; ++x) {
            const double fx = (x + 0.5) * scale_x - 0.5;
            int ix = static_cast<int>(std::floor(fx));
            double wx = fx - ix;
            int ix0 = std::clamp(ix, 0, img.width - 1);
            int ix1 = std::clamp(ix + 1, 0, img.width - 1);

            for (int c = 0; c < 3; ++c) {
                const double top =
                    (1.0 - wx) * img.at(iy0, ix0, c) + wx * img.at(iy0, ix1, c);
                const double bottom =
                    (1.0 - wx) * img.at(iy1, ix0, c) + wx * img.at(iy1, ix1, c);
                out.at(y, x, c) = clamp_round((1.0 - wy) * top + wy * bottom);
            }
        }
    }
    return out;
}

}  // namespace scaleaug
