#include "scaleaug/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>
#include <vector>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "scaleaug/error.hpp"

namespace scaleaug {

namespace {

std::string lower_extension(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

}  // namespace

Image load_image(const std::filesystem::path& path) {
    const cv::Mat bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
    if (bgr.empty()) {
        throw IoError("cannot decode image: " + path.string());
    }
    Image img(bgr.rows, bgr.cols);
    for (int y = 0; y < bgr.rows; ++y) {
        const cv::Vec3b* row = bgr.ptr<cv::Vec3b>(y);
        for (int x = 0; x < bgr.cols; ++x) {
            img.set_pixel(y, x, Rgb{row[x][2], row[x][1], row[x][0]});
        }
    }
    return img;
}

void save_image(const std::filesystem::path& path, const Image& img, int jpeg_quality) {
    if (img.height <= 0 || img.width <= 0) {
        throw IoError("cannot encode an empty image: " + path.string());
    }
    const std::string ext = lower_extension(path);
    std::vector<int> params;
    if (ext == ".jpg" || ext == ".jpeg") {
        params = {cv::IMWRITE_JPEG_QUALITY, jpeg_quality};
    } else if (ext != ".png") {
        throw IoError("unsupported image format '" + ext + "': " + path.string());
    }

    cv::Mat bgr(img.height, img.width, CV_8UC3);
    for (int y = 0; y < img.height; ++y) {
        cv::Vec3b* row = bgr.ptr<cv::Vec3b>(y);
        for (int x = 0; x < img.width; ++x) {
            const Rgb p = img.pixel(y, x);
            row[x] = cv::Vec3b(p.b, p.g, p.r);
        }
    }
    bool ok = false;
    try {
        ok = cv::imwrite(path.string(), bgr, params);
    } catch (const cv::Exception& e) {
        throw IoError("cannot encode image " + path.string() + ": " + e.what());
    }
    if (!ok) {
        throw IoError("cannot write image: " + path.string());
    }
}

void save_alpha_png(const std::filesystem::path& path, const AlphaMap& map) {
    if (map.height <= 0 || map.width <= 0) {
        throw IoError("cannot encode an empty map: " + path.string());
    }
    cv::Mat gray(map.height, map.width, CV_8UC1);
    for (int y = 0; y < map.height; ++y) {
        std::uint8_t* row = gray.ptr<std::uint8_t>(y);
        for (int x = 0; x < map.width; ++x) {
            const double v = std::clamp(map.at(y, x), 0.0, 1.0);
            row[x] = static_cast<std::uint8_t>(std::lround(v * 255.0));
        }
    }
    bool ok = false;
    try {
        ok = cv::imwrite(path.string(), gray);
    } catch (const cv::Exception& e) {
        throw IoError("cannot encode map " + path.string() + ": " + e.what());
    }
    if (!ok) {
        throw IoError("cannot write map: " + path.string());
    }
}

}  // namespace scaleaug
