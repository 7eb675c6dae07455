// Micro-benchmarks for the hot paths: blending-map construction, affine
// warps, zooms, the per-box pipeline, and genome conversions.
#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <vector>

#include "scaleaug/box_ops.hpp"
#include "scaleaug/gaussian.hpp"
#include "scaleaug/geometry.hpp"
#include "scaleaug/metric.hpp"
#include "scaleaug/policy.hpp"
#include "scaleaug/random.hpp"
#include "scaleaug/raster.hpp"
#include "scaleaug/zoom.hpp"

namespace {

using namespace scaleaug;

Image noise_image(int h, int w, std::uint32_t seed) {
    Image img(h, w);
    std::mt19937 gen(seed);
    std::uniform_int_distribution<int> dist(0, 255);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            img.set_pixel(y, x, Rgb{static_cast<std::uint8_t>(dist(gen)),
                                    static_cast<std::uint8_t>(dist(gen)),
                                    static_cast<std::uint8_t>(dist(gen))});
        }
    }
    return img;
}

AnnotatedImage annotated_scene(int side, int boxes, std::uint32_t seed) {
    AnnotatedImage scene;
    scene.pixels = noise_image(side, side, seed);
    scene.image_id = 1;
    for (int i = 0; i < boxes; ++i) {
        const double cx = 30.0 + 50.0 * i;
        scene.boxes.push_back(AnnotatedBox{cx, 40.0 + 10.0 * i, 24.0, 32.0, i + 1});
    }
    return scene;
}

void bm_gaussian_map(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    const GaussianMapParams params = make_gaussian_params(
        BoxGeometry{side / 2.0, side / 2.0, side / 4.0, side / 4.0, side, side}, 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(gaussian_map(params));
    }
    state.SetItemsProcessed(state.iterations() * side * side);
}
BENCHMARK(bm_gaussian_map)->Arg(128)->Arg(256)->Arg(512);

void bm_blend(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    const Image original = noise_image(side, side, 11);
    const Image transformed = noise_image(side, side, 12);
    const GaussianMapParams params = make_gaussian_params(
        BoxGeometry{side / 2.0, side / 2.0, side / 4.0, side / 4.0, side, side}, 1.0);
    const AlphaMap map = gaussian_map(params);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            blend(original, transformed, map, BlendDirection::transform_at_center));
    }
    state.SetItemsProcessed(state.iterations() * side * side);
}
BENCHMARK(bm_blend)->Arg(128)->Arg(256)->Arg(512);

void bm_warp_rotate(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    const Image img = noise_image(side, side, 21);
    const BoxGeometry geom{side / 2.0, side / 2.0, side / 4.0, side / 4.0, side, side};
    for (auto _ : state) {
        benchmark::DoNotOptimize(apply_geometric_op(img, GeometricOp::rotate, 15.0, geom));
    }
    state.SetItemsProcessed(state.iterations() * side * side);
}
BENCHMARK(bm_warp_rotate)->Arg(128)->Arg(256)->Arg(512);

void bm_zoom_in(benchmark::State& state) {
    const AnnotatedImage scene = annotated_scene(512, 3, 31);
    Rng rng(1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(zoom_in(scene, 0.75, rng));
    }
}
BENCHMARK(bm_zoom_in);

void bm_zoom_out(benchmark::State& state) {
    const AnnotatedImage scene = annotated_scene(512, 3, 32);
    Rng rng(2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(zoom_out(scene, 1.25, rng));
    }
}
BENCHMARK(bm_zoom_out);

void bm_augment_boxes(benchmark::State& state) {
    const AnnotatedImage scene = annotated_scene(256, 4, 41);
    Policy policy = reference_policy();
    for (SubPolicy& sp : policy.sub_policies) {
        sp.color.probability_tenths = 10;
        sp.geometric.probability_tenths = 10;
    }
    Rng rng(3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(augment_boxes(scene, policy, rng));
    }
}
BENCHMARK(bm_augment_boxes);

void bm_genome_round_trip(benchmark::State& state) {
    const Policy policy = reference_policy();
    for (auto _ : state) {
        benchmark::DoNotOptimize(decode_genome(encode_policy(policy)));
    }
}
BENCHMARK(bm_genome_round_trip);

void bm_metric(benchmark::State& state) {
    ScaleStats stats;
    stats.losses = ScaleTriple{1.2, 1.0, 0.8};
    stats.ap_before = ScaleTriple{21.0, 38.0, 47.0};
    stats.ap_after = ScaleTriple{20.0, 39.0, 48.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(pareto_scale_balance(stats));
    }
}
BENCHMARK(bm_metric);

}  // namespace

BENCHMARK_MAIN();
