#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

#include "scaleaug/box_ops.hpp"
#include "scaleaug/error.hpp"

namespace scaleaug {

namespace {

[[nodiscard]] std::uint8_t clamp_round(double v) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
}

/// out = degenerate + factor * (img - degenerate), per channel.  factor 1.0
/// reproduces the input exactly (8-bit integers are exact in double).
[[nodiscard]] Image enhance(const Image& img, const Image& degenerate, double factor) {
    Image out(img.height, img.width);
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        const double d = degenerate.data[i];
        out.data[i] = clamp_round(d + factor * (img.data[i] - d));
    }
    return out;
}

[[nodiscard]] Image brightness_degenerate(const Image& img) {
    return Image(img.height, img.width);  // black
}

[[nodiscard]] Image color_degenerate(const Image& img) {
    Image out(img.height, img.width);
    for (std::size_t i = 0; i < img.data.size(); i += 3) {
        const int l = luminance(Rgb{img.data[i], img.data[i + 1], img.data[i + 2]});
        out.data[i] = static_cast<std::uint8_t>(l);
        out.data[i + 1] = static_cast<std::uint8_t>(l);
        out.data[i + 2] = static_cast<std::uint8_t>(l);
    }
    return out;
}

[[nodiscard]] Image contrast_degenerate(const Image& img) {
    double sum = 0.0;
    for (std::size_t i = 0; i < img.data.size(); i += 3) {
        sum += luminance(Rgb{img.data[i], img.data[i + 1], img.data[i + 2]});
    }
    const double n = static_cast<double>(img.pixel_count());
    const std::uint8_t mean = clamp_round(n > 0 ? sum / n : 0.0);
    return Image::filled(img.height, img.width, Rgb{mean, mean, mean});
}

/// 3x3 smoothing kernel (center 5, neighbors 1, divisor 13); the one-pixel
/// border is copied from the source unfiltered.
[[nodiscard]] Image smooth_degenerate(const Image& img) {
    Image out = img;
    for (int y = 1; y + 1 < img.height; ++y) {
        for (int x = 1; x + 1 < img.width; ++x) {
            for (int c = 0; c < 3; ++c) {
                int acc = 5 * img.at(y, x, c);
                acc += img.at(y - 1, x - 1, c) + img.at(y - 1, x, c) + img.at(y - 1, x + 1, c);
                acc += img.at(y, x - 1, c) + img.at(y, x + 1, c);
                acc += img.at(y + 1, x - 1, c) + img.at(y + 1, x, c) + img.at(y + 1, x + 1, c);
                out.at(y, x, c) = clamp_round(static_cast<double>(acc) / 13.0);
            }
        }
    }
    return out;
}

/// Histogram-equalization LUT per channel: cumulative counts with a step//2
/// offset; near-empty histograms pass through.
[[nodiscard]] Image equalize_channels(const Image& img) {
    Image out(img.height, img.width);
    for (int c = 0; c < 3; ++c) {
        std::array<long, 256> hist{};
        for (std::size_t i = static_cast<std::size_t>(c); i < img.data.size(); i += 3) {
            ++hist[img.data[i]];
        }
        long total = 0;
        int last_nonzero = -1;
        int nonzero_count = 0;
        for (int v = 0; v < 256; ++v) {
            total += hist[static_cast<std::size_t>(v)];
            if (hist[static_cast<std::size_t>(v)] > 0) {
                last_nonzero = v;
                ++nonzero_count;
            }
        }
        std::array<std::uint8_t, 256> lut{};
        const long step =
            nonzero_count > 1 ? (total - hist[static_cast<std::size_t>(last_nonzero)]) / 255
                              : 0;
        if (step <= 0) {
            for (int v = 0; v < 256; ++v) {
                lut[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(v);
            }
        } else {
            long n = step / 2;
            for (int v = 0; v < 256; ++v) {
                lut[static_cast<std::size_t>(v)] =
                    static_cast<std::uint8_t>(std::min<long>(255, n / step));
                n += hist[static_cast<std::size_t>(v)];
            }
        }
        for (std::size_t i = static_cast<std::size_t>(c); i < img.data.size(); i += 3) {
            out.data[i] = lut[img.data[i]];
        }
    }
    return out;
}

[[nodiscard]] Image solarize(const Image& img, double threshold) {
    Image out(img.height, img.width);
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        const int v = img.data[i];
        out.data[i] = (v >= threshold) ? static_cast<std::uint8_t>(255 - v)
                                       : static_cast<std::uint8_t>(v);
    }
    return out;
}

[[nodiscard]] Image solarize_add(const Image& img, double amount) {
    const long add = std::lround(amount);
    Image out(img.height, img.width);
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        const long v = img.data[i];
        out.data[i] = (v < 128) ? static_cast<std::uint8_t>(std::clamp<long>(v + add, 0, 255))
                                : static_cast<std::uint8_t>(v);
    }
    return out;
}

/// Gray square of the given side, centered at a uniform integer pixel inside
/// the box rectangle (clipped to the frame).  Draw order: row, then column.
[[nodiscard]] Image cutout(const Image& img, double side_px, const BoxGeometry& box,
                           Rng& rng) {
    const int side = static_cast<int>(std::lround(side_px));
    if (side <= 0) {
        return img;
    }
    const int y_lo = std::clamp(static_cast<int>(std::floor(box.center_y - box.h / 2.0)), 0,
                                img.height - 1);
    const int y_hi = std::clamp(static_cast<int>(std::ceil(box.center_y + box.h / 2.0)) - 1,
                                y_lo, img.height - 1);
    const int x_lo = std::clamp(static_cast<int>(std::floor(box.center_x - box.w / 2.0)), 0,
                                img.width - 1);
    const int x_hi = std::clamp(static_cast<int>(std::ceil(box.center_x + box.w / 2.0)) - 1,
                                x_lo, img.width - 1);
    const int cy = y_lo + static_cast<int>(rng.uniform_index(
                              static_cast<std::uint64_t>(y_hi - y_lo + 1)));
    const int cx = x_lo + static_cast<int>(rng.uniform_index(
                              static_cast<std::uint64_t>(x_hi - x_lo + 1)));

    constexpr Rgb kFill{128, 128, 128};
    Image out = img;
    const int y0 = std::max(0, cy - side / 2);
    const int x0 = std::max(0, cx - side / 2);
    const int y1 = std::min(img.height, y0 + side);
    const int x1 = std::min(img.width, x0 + side);
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            out.set_pixel(y, x, kFill);
        }
    }
    return out;
}

}  // namespace

int luminance(Rgb c) {
    return static_cast<int>(std::lround((299.0 * c.r + 587.0 * c.g + 114.0 * c.b) / 1000.0));
}

Image apply_color_op(const Image& img, ColorOp op, double physical_value,
                     const BoxGeometry& box, Rng& rng) {
    switch (op) {
        case ColorOp::brightness:
            return enhance(img, brightness_degenerate(img), physical_value);
        case ColorOp::color:
            return enhance(img, color_degenerate(img), physical_value);
        case ColorOp::contrast:
            return enhance(img, contrast_degenerate(img), physical_value);
        case ColorOp::cutout:
            return cutout(img, physical_value, box, rng);
        case ColorOp::equalize:
            return equalize_channels(img);
        case ColorOp::sharpness:
            return enhance(img, smooth_degenerate(img), physical_value);
        case ColorOp::solarize:
            return solarize(img, physical_value);
        case ColorOp::solarize_add:
            return solarize_add(img, physical_value);
    }
    throw ValidationError("apply_color_op: unknown op");
}

}  // namespace scaleaug
