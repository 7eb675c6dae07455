#ifndef SCALEAUG_RASTER_HPP
#define SCALEAUG_RASTER_HPP

#include <cassert>
#include <cstdint>
#include <vector>

namespace scaleaug {

// ---------------------------------------------------------------------------
// Pixel rasters
//
// Image is a dense H x W x 3 interleaved 8-bit RGB buffer; AlphaMap is a
// dense H x W double-precision weight field in [0, 1].  Both index as
// (y, x) = (row, column) with x growing rightwards and y downwards.
// ---------------------------------------------------------------------------

/// One 8-bit RGB color.
struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Dense 8-bit RGB raster.
struct Image {
    int height = 0;
    int width = 0;
    std::vector<std::uint8_t> data;  ///< height*width*3, row-major, RGB order

    Image() = default;
    Image(int h, int w) : height(h), width(w), data(static_cast<std::size_t>(h) * w * 3, 0) {
        assert(h >= 0 && w >= 0);
    }

    /// Uniformly filled image.
    [[nodiscard]] static Image filled(int h, int w, Rgb color) {
        Image img(h, w);
        for (std::size_t i = 0; i < img.data.size(); i += 3) {
            img.data[i] = color.r;
            img.data[i + 1] = color.g;
            img.data[i + 2] = color.b;
        }
        return img;
    }

    [[nodiscard]] std::size_t offset(int y, int x) const {
        assert(y >= 0 && y < height && x >= 0 && x < width);
        return (static_cast<std::size_t>(y) * width + x) * 3;
    }

    [[nodiscard]] std::uint8_t at(int y, int x, int channel) const {
        assert(channel >= 0 && channel < 3);
        return data[offset(y, x) + channel];
    }

    std::uint8_t& at(int y, int x, int channel) {
        assert(channel >= 0 && channel < 3);
        return data[offset(y, x) + channel];
    }

    [[nodiscard]] Rgb pixel(int y, int x) const {
        const std::size_t o = offset(y, x);
        return Rgb{data[o], data[o + 1], data[o + 2]};
    }

    void set_pixel(int y, int x, Rgb color) {
        const std::size_t o = offset(y, x);
        data[o] = color.r;
        data[o + 1] = color.g;
        data[o + 2] = color.b;
    }

    [[nodiscard]] std::size_t pixel_count() const {
        return static_cast<std::size_t>(height) * width;
    }

    friend bool operator==(const Image&, const Image&) = default;
};

/// Dense spatial weight field, one double per pixel.
struct AlphaMap {
    int height = 0;
    int width = 0;
    std::vector<double> values;  ///< height*width, row-major

    AlphaMap() = default;
    AlphaMap(int h, int w) : height(h), width(w), values(static_cast<std::size_t>(h) * w, 0.0) {}

    [[nodiscard]] double at(int y, int x) const {
        assert(y >= 0 && y < height && x >= 0 && x < width);
        return values[static_cast<std::size_t>(y) * width + x];
    }

    double& at(int y, int x) {
        assert(y >= 0 && y < height && x >= 0 && x < width);
        return values[static_cast<std::size_t>(y) * width + x];
    }
};

/// Per-channel arithmetic mean color of an image, rounded to nearest.
[[nodiscard]] Rgb mean_color(const Image& img);

/// Bilinear resize with the pixel-center convention: output center (d + 0.5)
/// samples input coordinate (d + 0.5) * in/out.  Resizing to the identical
/// size reproduces the input exactly.
[[nodiscard]] Image resize_bilinear(const Image& img, int out_height, int out_width);

}  // namespace scaleaug

#endif  // SCALEAUG_RASTER_HPP
