#include <algorithm>
#include <cmath>
#include <numbers>

#include "scaleaug/box_ops.hpp"
#include "scaleaug/error.hpp"

namespace scaleaug {

namespace {

[[nodiscard]] std::uint8_t clamp_round(double v) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
}

/// Inverts a 2x3 affine transform.
[[nodiscard]] AffineTransform invert(const AffineTransform& t) {
    const double det = t.m00 * t.m11 - t.m01 * t.m10;
    if (det == 0.0) {
        throw ValidationError("warp_affine: singular transform");
    }
    AffineTransform inv;
    inv.m00 = t.m11 / det;
    inv.m01 = -t.m01 / det;
    inv.m10 = -t.m10 / det;
    inv.m11 = t.m00 / det;
    inv.m02 = -(inv.m00 * t.m02 + inv.m01 * t.m12);
    inv.m12 = -(inv.m10 * t.m02 + inv.m11 * t.m12);
    return inv;
}

}  // namespace

// ---------------------------------------------------------------------------
// Magnitude mapping
// ---------------------------------------------------------------------------

PhysicalRange physical_range(ColorOp op) {
    switch (op) {
        case ColorOp::brightness:
        case ColorOp::color:
        case ColorOp::contrast:
        case ColorOp::sharpness:
            return PhysicalRange{0.1, 1.9, false, true};
        case ColorOp::cutout:
            return PhysicalRange{0.0, 60.0, false, true};  // square side, px
        case ColorOp::equalize:
            return PhysicalRange{0.0, 0.0, false, false};
        case ColorOp::solarize:
            return PhysicalRange{0.0, 256.0, false, true};  // inversion threshold
        case ColorOp::solarize_add:
            return PhysicalRange{0.0, 110.0, false, true};  // additive amount
    }
    throw ValidationError("physical_range: unknown color op");
}

PhysicalRange physical_range(GeometricOp op) {
    switch (op) {
        case GeometricOp::hflip:
            return PhysicalRange{0.0, 0.0, false, false};
        case GeometricOp::rotate:
            return PhysicalRange{-30.0, 30.0, true, true};  // degrees
        case GeometricOp::shear_x:
        case GeometricOp::shear_y:
            return PhysicalRange{-0.3, 0.3, true, true};
        case GeometricOp::translate_x:
        case GeometricOp::translate_y:
            return PhysicalRange{-150.0, 150.0, true, true};  // px
    }
    throw ValidationError("physical_range: unknown geometric op");
}

double map_magnitude(const PhysicalRange& range, int m) {
    if (m < 0 || m > 10) {
        throw ValidationError("map_magnitude: magnitude " + std::to_string(m) +
                              " outside [0, 10]");
    }
    if (!range.has_magnitude) {
        return 0.0;
    }
    if (range.is_signed) {
        // Symmetric range: |value| scales to the maximum; sign drawn by the
        // caller at application time.
        return (m / 10.0) * range.hi;
    }
    return range.lo + (m / 10.0) * (range.hi - range.lo);
}

double map_magnitude(ColorOp op, int m) { return map_magnitude(physical_range(op), m); }

double map_magnitude(GeometricOp op, int m) { return map_magnitude(physical_range(op), m); }

// ---------------------------------------------------------------------------
// Geometric transforms
// ---------------------------------------------------------------------------

AffineTransform geometric_transform(GeometricOp op, double signed_value,
                                    const BoxGeometry& box) {
    const double cx = box.center_x;
    const double cy = box.center_y;
    AffineTransform t;
    switch (op) {
        case GeometricOp::hflip:
            // Mirror across the vertical line through the box center.
            t.m00 = -1.0;
            t.m02 = 2.0 * cx;
            break;
        case GeometricOp::rotate: {
            const double rad = signed_value * std::numbers::pi / 180.0;
            const double c = std::cos(rad);
            const double s = std::sin(rad);
            t.m00 = c;
            t.m01 = -s;
            t.m02 = cx - c * cx + s * cy;
            t.m10 = s;
            t.m11 = c;
            t.m12 = cy - s * cx - c * cy;
            break;
        }
        case GeometricOp::shear_x:
            t.m01 = signed_value;
            t.m02 = -signed_value * cy;
            break;
        case GeometricOp::shear_y:
            t.m10 = signed_value;
            t.m12 = -signed_value * cx;
            break;
        case GeometricOp::translate_x:
            t.m02 = signed_value;
            break;
        case GeometricOp::translate_y:
            t.m12 = signed_value;
            break;
    }
    return t;
}

Image warp_affine(const Image& img, const AffineTransform& forward, Rgb fill) {
    if (img.height <= 0 || img.width <= 0) {
        throw ValidationError("warp_affine: empty raster");
    }
    const AffineTransform inv = invert(forward);
    Image out(img.height, img.width);

    const double fill_ch[3] = {static_cast<double>(fill.r), static_cast<double>(fill.g),
                               static_cast<double>(fill.b)};

    for (int y = 0; y < img.height; ++y) {
        const double oy = y + 0.5;
        for (int x = 0; x < img.width; ++x) {
            const double ox = x + 0.5;
            // Source position of this output pixel center.
            const double sx = inv.m00 * ox + inv.m01 * oy + inv.m02;
            const double sy = inv.m10 * ox + inv.m11 * oy + inv.m12;

            // Bilinear taps in index space.
            const double gx = sx - 0.5;
            const double gy = sy - 0.5;
            const int ix = static_cast<int>(std::floor(gx));
            const int iy = static_cast<int>(std::floor(gy));
            const double wx = gx - ix;
            const double wy = gy - iy;

            // Zero-weight taps are skipped entirely so that exact-integer
            // source positions (identity, flips, whole-pixel translations)
            // reproduce pixels exactly, including at the frame border.
            const int xs[2] = {ix, ix + 1};
            const int ys[2] = {iy, iy + 1};
            const double wxs[2] = {1.0 - wx, wx};
            const double wys[2] = {1.0 - wy, wy};

            double acc[3] = {0.0, 0.0, 0.0};
            for (int ty = 0; ty < 2; ++ty) {
                if (wys[ty] == 0.0) continue;
                for (int tx = 0; tx < 2; ++tx) {
                    if (wxs[tx] == 0.0) continue;
                    const double weight = wys[ty] * wxs[tx];
                    const int px = xs[tx];
                    const int py = ys[ty];
                    if (px >= 0 && px < img.width && py >= 0 && py < img.height) {
                        const std::size_t o = img.offset(py, px);
                        acc[0] += weight * img.data[o];
                        acc[1] += weight * img.data[o + 1];
                        acc[2] += weight * img.data[o + 2];
                    } else {
                        acc[0] += weight * fill_ch[0];
                        acc[1] += weight * fill_ch[1];
                        acc[2] += weight * fill_ch[2];
                    }
                }
            }
            const std::size_t o = out.offset(y, x);
            out.data[o] = clamp_round(acc[0]);
            out.data[o + 1] = clamp_round(acc[1]);
            out.data[o + 2] = clamp_round(acc[2]);
        }
    }
    return out;
}

Image apply_geometric_op(const Image& img, GeometricOp op, double signed_value,
                         const BoxGeometry& box) {
    return warp_affine(img, geometric_transform(op, signed_value, box), mean_color(img));
}

}  // namespace scaleaug
