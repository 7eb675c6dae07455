#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "scaleaug/error.hpp"
#include "scaleaug/policy.hpp"
#include "scaleaug/random.hpp"
#include "scaleaug/raster.hpp"
#include "scaleaug/zoom.hpp"
#include "test_support.hpp"

using namespace scaleaug;
using scaleaug::test::make_gradient;
using scaleaug::test::make_noise;

namespace {

AnnotatedImage annotated(Image pixels, std::vector<AnnotatedBox> boxes,
                         std::int64_t id = 0) {
    AnnotatedImage img;
    img.pixels = std::move(pixels);
    img.boxes = std::move(boxes);
    img.image_id = id;
    return img;
}

/// Black canvas with a solid red rectangle over rows [y0, y1), cols [x0, x1).
Image red_patch_image(int h, int w, int y0, int y1, int x0, int x1) {
    Image img(h, w);
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            img.set_pixel(y, x, Rgb{255, 0, 0});
        }
    }
    return img;
}

struct Extent {
    int min_x = 1 << 30, max_x = -1, min_y = 1 << 30, max_y = -1;
};

/// Bounding rectangle of strongly red pixels.
Extent red_extent(const Image& img) {
    Extent e;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const Rgb p = img.pixel(y, x);
            if (p.r >= 128 && p.g < 128) {
                e.min_x = std::min(e.min_x, x);
                e.max_x = std::max(e.max_x, x);
                e.min_y = std::min(e.min_y, y);
                e.max_y = std::max(e.max_y, y);
            }
        }
    }
    return e;
}

}  // namespace

// ---------------------------------------------------------------------------
// Ratio mapping
// ---------------------------------------------------------------------------

TEST_CASE("zoom ratio mapping is linear in the magnitude") {
    CHECK(zoom_ratio_from_magnitude(ZoomBranch::zoom_in, 0) == 1.0);
    CHECK(zoom_ratio_from_magnitude(ZoomBranch::zoom_in, 4) == doctest::Approx(0.8));
    CHECK(zoom_ratio_from_magnitude(ZoomBranch::zoom_in, 10) == doctest::Approx(0.5));
    CHECK(zoom_ratio_from_magnitude(ZoomBranch::zoom_out, 0) == 1.0);
    CHECK(zoom_ratio_from_magnitude(ZoomBranch::zoom_out, 10) == doctest::Approx(1.5));
    CHECK(zoom_ratio_from_magnitude(ZoomBranch::original, 7) == 1.0);
    CHECK_THROWS_AS((void)zoom_ratio_from_magnitude(ZoomBranch::zoom_in, 11),
                    ValidationError);
    CHECK_THROWS_AS((void)zoom_ratio_from_magnitude(ZoomBranch::zoom_out, -1),
                    ValidationError);
}

TEST_CASE("zoom operations reject ratios outside their domains") {
    const AnnotatedImage img = annotated(make_noise(10, 10, 1), {});
    Rng rng(0);
    CHECK_THROWS_AS((void)zoom_in(img, 0.49, rng), ValidationError);
    CHECK_THROWS_AS((void)zoom_in(img, 1.01, rng), ValidationError);
    CHECK_THROWS_AS((void)zoom_out(img, 0.99, rng), ValidationError);
    CHECK_THROWS_AS((void)zoom_out(img, 1.51, rng), ValidationError);
}

// ---------------------------------------------------------------------------
// Identity at ratio 1
// ---------------------------------------------------------------------------

TEST_CASE("ratio 1 is an exact identity for both zooms") {
    const AnnotatedImage img = annotated(
        make_noise(40, 60, 3),
        {AnnotatedBox{20, 20, 10, 14, 2}, AnnotatedBox{45, 10, 8, 12, 5}}, 17);

    for (int variant = 0; variant < 2; ++variant) {
        Rng rng(4);
        const AnnotatedImage out =
            variant == 0 ? zoom_in(img, 1.0, rng) : zoom_out(img, 1.0, rng);
        CHECK(out.pixels == img.pixels);
        CHECK(out.image_id == 17);
        REQUIRE(out.boxes.size() == img.boxes.size());
        for (std::size_t i = 0; i < img.boxes.size(); ++i) {
            CHECK(out.boxes[i].center_x == img.boxes[i].center_x);
            CHECK(out.boxes[i].center_y == img.boxes[i].center_y);
            CHECK(out.boxes[i].h == img.boxes[i].h);
            CHECK(out.boxes[i].w == img.boxes[i].w);
            CHECK(out.boxes[i].category_id == img.boxes[i].category_id);
        }
    }
}

TEST_CASE("identity zooms still draw their two offsets") {
    const AnnotatedImage img = annotated(make_noise(8, 8, 2), {});
    Rng used(31);
    (void)zoom_in(img, 1.0, used);
    Rng fresh(31);
    (void)fresh.next_u64();  // row offset draw
    (void)fresh.next_u64();  // column offset draw
    CHECK(used.next_u64() == fresh.next_u64());
}

// ---------------------------------------------------------------------------
// Zoom-in geometry
// ---------------------------------------------------------------------------

TEST_CASE("full-frame box at ratio 0.5 sits exactly on the 25% keep boundary") {
    const AnnotatedImage img =
        annotated(make_noise(100, 100, 7), {AnnotatedBox{50, 50, 100, 100, 1}});
    Rng rng(12);
    const AnnotatedImage out = zoom_in(img, 0.5, rng);
    // A quarter of the box remains visible; the boundary keeps it.
    REQUIRE(out.boxes.size() == 1);
    CHECK(out.boxes[0].center_x == doctest::Approx(50.0));
    CHECK(out.boxes[0].center_y == doctest::Approx(50.0));
    CHECK(out.boxes[0].h == doctest::Approx(100.0));
    CHECK(out.boxes[0].w == doctest::Approx(100.0));
    CHECK(out.boxes[0].category_id == 1);
}

TEST_CASE("a box matching the crop window maps to the full frame") {
    // Replay the offset draws to place the box exactly on the window.
    Rng probe(55);
    const int oy = static_cast<int>(probe.uniform_index(51));  // 100 - 50 + 1
    const int ox = static_cast<int>(probe.uniform_index(51));

    const AnnotatedImage img = annotated(
        make_noise(100, 100, 8),
        {AnnotatedBox{ox + 25.0, oy + 25.0, 50, 50, 9}});
    Rng rng(55);
    const AnnotatedImage out = zoom_in(img, 0.5, rng);
    REQUIRE(out.boxes.size() == 1);
    CHECK(out.boxes[0].center_x == doctest::Approx(50.0).epsilon(1e-12));
    CHECK(out.boxes[0].center_y == doctest::Approx(50.0).epsilon(1e-12));
    CHECK(out.boxes[0].h == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(out.boxes[0].w == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(out.boxes[0].category_id == 9);
}

TEST_CASE("boxes mostly outside the crop window are dropped") {
    // Box: full-width strip over rows [0, 10).  With a 50-row window starting
    // at offset oy, the visible fraction is (10 - oy)/10 of its area; the box
    // survives iff 50 * max(0, 10 - oy) >= 0.25 * 1000, i.e. oy <= 5.
    std::uint64_t drop_seed = 0;
    std::uint64_t keep_seed = 0;
    int keep_oy = -1;
    bool have_drop = false;
    bool have_keep = false;
    for (std::uint64_t seed = 1; seed < 2000 && !(have_drop && have_keep); ++seed) {
        Rng probe(seed);
        const int oy = static_cast<int>(probe.uniform_index(51));
        if (oy > 5 && !have_drop) {
            drop_seed = seed;
            have_drop = true;
        }
        if (oy <= 5 && !have_keep) {
            keep_seed = seed;
            keep_oy = oy;
            have_keep = true;
        }
    }
    REQUIRE(have_drop);
    REQUIRE(have_keep);

    const AnnotatedImage img =
        annotated(make_noise(100, 100, 9), {AnnotatedBox{50, 5, 10, 100, 4}});

    Rng drop_rng(drop_seed);
    CHECK(zoom_in(img, 0.5, drop_rng).boxes.empty());

    Rng keep_rng(keep_seed);
    const AnnotatedImage kept = zoom_in(img, 0.5, keep_rng);
    REQUIRE(kept.boxes.size() == 1);
    // Rows clipped to [keep_oy, 10), columns to the full window, then x2.
    CHECK(kept.boxes[0].w == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(kept.boxes[0].h == doctest::Approx(2.0 * (10.0 - keep_oy)).epsilon(1e-12));
    CHECK(kept.boxes[0].center_x == doctest::Approx(50.0).epsilon(1e-12));
    CHECK(kept.boxes[0].center_y == doctest::Approx(10.0 - keep_oy).epsilon(1e-12));
}

// ---------------------------------------------------------------------------
// Zoom-out geometry
// ---------------------------------------------------------------------------

TEST_CASE("zoom-out pastes a downscaled copy onto a mean-color canvas") {
    const Image src = make_gradient(100, 100);
    const AnnotatedImage img = annotated(src, {AnnotatedBox{50, 50, 40, 40, 6}});

    // Replay offsets: paste is 67x67 (round(100/1.5)), so offsets are in [0, 33].
    Rng probe(21);
    const int oy = static_cast<int>(probe.uniform_index(34));
    const int ox = static_cast<int>(probe.uniform_index(34));

    Rng rng(21);
    const AnnotatedImage out = zoom_out(img, 1.5, rng);
    CHECK(out.pixels.height == 100);
    CHECK(out.pixels.width == 100);

    // Any pixel outside the paste rectangle reads the mean color.
    const Rgb mean = mean_color(src);
    const int outside_y = oy == 0 ? 99 : 0;
    const int outside_x = ox == 0 ? 99 : 0;
    CHECK(out.pixels.pixel(outside_y, outside_x) == mean);
    CHECK(out.pixels.pixel(outside_y, 50) == mean);

    // Boxes scale by paste/original and shift by the offset.
    REQUIRE(out.boxes.size() == 1);
    CHECK(out.boxes[0].w == doctest::Approx(40.0 * 0.67).epsilon(1e-12));
    CHECK(out.boxes[0].h == doctest::Approx(40.0 * 0.67).epsilon(1e-12));
    CHECK(out.boxes[0].center_x == doctest::Approx(50.0 * 0.67 + ox).epsilon(1e-12));
    CHECK(out.boxes[0].center_y == doctest::Approx(50.0 * 0.67 + oy).epsilon(1e-12));
    CHECK(out.boxes[0].category_id == 6);
}

// ---------------------------------------------------------------------------
// Pixel/box consistency
// ---------------------------------------------------------------------------

TEST_CASE("zoom-in moves pixels and boxes together") {
    const AnnotatedImage img = annotated(red_patch_image(100, 100, 40, 60, 30, 70),
                                         {AnnotatedBox{50, 50, 20, 40, 1}});
    Rng rng(101);
    const AnnotatedImage out = zoom_in(img, 0.7, rng);  // 70x70 window: rect always inside
    REQUIRE(out.boxes.size() == 1);
    const AnnotatedBox& b = out.boxes[0];
    const Extent e = red_extent(out.pixels);
    REQUIRE(e.max_x >= 0);
    CHECK(std::abs(e.min_x - (b.center_x - b.w / 2)) <= 2.0);
    CHECK(std::abs((e.max_x + 1) - (b.center_x + b.w / 2)) <= 2.0);
    CHECK(std::abs(e.min_y - (b.center_y - b.h / 2)) <= 2.0);
    CHECK(std::abs((e.max_y + 1) - (b.center_y + b.h / 2)) <= 2.0);
}

TEST_CASE("zoom-out moves pixels and boxes together") {
    const AnnotatedImage img = annotated(red_patch_image(100, 100, 40, 60, 30, 70),
                                         {AnnotatedBox{50, 50, 20, 40, 1}});
    Rng rng(102);
    const AnnotatedImage out = zoom_out(img, 1.5, rng);
    REQUIRE(out.boxes.size() == 1);
    const AnnotatedBox& b = out.boxes[0];
    const Extent e = red_extent(out.pixels);
    REQUIRE(e.max_x >= 0);
    CHECK(std::abs(e.min_x - (b.center_x - b.w / 2)) <= 2.0);
    CHECK(std::abs((e.max_x + 1) - (b.center_x + b.w / 2)) <= 2.0);
    CHECK(std::abs(e.min_y - (b.center_y - b.h / 2)) <= 2.0);
    CHECK(std::abs((e.max_y + 1) - (b.center_y + b.h / 2)) <= 2.0);
}

TEST_CASE("zoomed boxes always stay inside the frame") {
    Rng rng(2024);
    for (int trial = 0; trial < 500; ++trial) {
        const int H = 48;
        const int W = 64;
        std::vector<AnnotatedBox> boxes;
        for (int b = 0; b < 4; ++b) {
            const double w = 2.0 + rng.uniform_unit() * (W - 2);
            const double h = 2.0 + rng.uniform_unit() * (H - 2);
            const double cx = w / 2 + rng.uniform_unit() * (W - w);
            const double cy = h / 2 + rng.uniform_unit() * (H - h);
            boxes.push_back(AnnotatedBox{cx, cy, h, w, b});
        }
        const AnnotatedImage img = annotated(Image(H, W), boxes);

        const double rho_in = 0.5 + 0.5 * rng.uniform_unit();
        const AnnotatedImage zi = zoom_in(img, rho_in, rng);
        for (const AnnotatedBox& b : zi.boxes) {
            CHECK(b.center_x - b.w / 2 >= -1e-9);
            CHECK(b.center_x + b.w / 2 <= W + 1e-9);
            CHECK(b.center_y - b.h / 2 >= -1e-9);
            CHECK(b.center_y + b.h / 2 <= H + 1e-9);
            CHECK(b.area() > 0.0);
        }

        const double rho_out = 1.0 + 0.5 * rng.uniform_unit();
        const AnnotatedImage zo = zoom_out(img, rho_out, rng);
        CHECK(zo.boxes.size() == boxes.size());
        for (const AnnotatedBox& b : zo.boxes) {
            CHECK(b.center_x - b.w / 2 >= -1e-9);
            CHECK(b.center_x + b.w / 2 <= W + 1e-9);
            CHECK(b.center_y - b.h / 2 >= -1e-9);
            CHECK(b.center_y + b.h / 2 <= H + 1e-9);
        }
    }
}

// ---------------------------------------------------------------------------
// Branch dispatch
// ---------------------------------------------------------------------------

TEST_CASE("zero zoom probabilities always pass the image through") {
    const AnnotatedImage img =
        annotated(make_noise(16, 16, 4), {AnnotatedBox{8, 8, 6, 6, 1}});
    Policy p;  // both zoom probabilities zero
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Rng rng(seed);
        ZoomDecision decision;
        const AnnotatedImage out = apply_image_level(img, p, rng, &decision);
        CHECK(decision.branch == ZoomBranch::original);
        CHECK(decision.ratio == 1.0);
        CHECK(out.pixels == img.pixels);
    }
}

TEST_CASE("probabilities 0.5/0.5 never choose the original branch") {
    const AnnotatedImage img = annotated(make_noise(8, 8, 5), {});
    Policy p;
    p.zoom_in.probability_tenths = 5;
    p.zoom_in.magnitude = 10;
    p.zoom_out.probability_tenths = 5;
    p.zoom_out.magnitude = 10;

    Rng rng(909);
    for (int i = 0; i < 1000; ++i) {
        ZoomDecision decision;
        (void)apply_image_level(img, p, rng, &decision);
        CHECK(decision.branch != ZoomBranch::original);
    }
}

TEST_CASE("branch frequencies follow the configured probabilities") {
    const AnnotatedImage img = annotated(make_noise(4, 4, 6), {});
    Policy p;
    p.zoom_in.probability_tenths = 2;
    p.zoom_in.magnitude = 10;
    p.zoom_out.probability_tenths = 4;
    p.zoom_out.magnitude = 10;

    int counts[3] = {0, 0, 0};
    Rng rng(5150);
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        ZoomDecision decision;
        const AnnotatedImage out = apply_image_level(img, p, rng, &decision);
        ++counts[static_cast<int>(decision.branch)];
        if (decision.branch == ZoomBranch::zoom_in) {
            CHECK(decision.ratio == doctest::Approx(0.5));
        } else if (decision.branch == ZoomBranch::zoom_out) {
            CHECK(decision.ratio == doctest::Approx(1.5));
        }
        CHECK(out.pixels.height == 4);
        CHECK(out.pixels.width == 4);
    }
    CHECK(std::abs(counts[static_cast<int>(ZoomBranch::zoom_in)] / double(n) - 0.2) < 0.02);
    CHECK(std::abs(counts[static_cast<int>(ZoomBranch::zoom_out)] / double(n) - 0.4) < 0.02);
    CHECK(std::abs(counts[static_cast<int>(ZoomBranch::original)] / double(n) - 0.4) < 0.02);
}

TEST_CASE("apply_image_level validates its policy") {
    const AnnotatedImage img = annotated(Image(4, 4), {});
    Policy bad;
    bad.zoom_in.probability_tenths = 6;  // beyond the 0.5 image-level cap
    Rng rng(0);
    CHECK_THROWS_AS((void)apply_image_level(img, bad, rng), ValidationError);
}
