#include <vector>

#include "scaleaug/box_ops.hpp"
#include "scaleaug/error.hpp"
#include "scaleaug/gaussian.hpp"

namespace scaleaug {

AnnotatedImage augment_boxes(const AnnotatedImage& img, const Policy& policy, Rng& rng,
                             BlendDirection direction, std::vector<BoxAuditEntry>* audit) {
    validate_policy(policy);

    AnnotatedImage out;
    out.pixels = img.pixels;
    out.boxes = img.boxes;  // box-level ops never move annotations
    out.image_id = img.image_id;

    for (std::size_t box_index = 0; box_index < img.boxes.size(); ++box_index) {
        const AnnotatedBox& box = img.boxes[box_index];
        if (box.area() <= 0.0) {
            continue;  // degenerate boxes are skipped, consuming no randomness
        }

        // Per-box draw order: sub-policy index, color gate, (Cutout position),
        // geometric gate, (sign for symmetric ranges).
        const int sp_index = static_cast<int>(rng.uniform_index(kSubPolicyCount));
        const SubPolicy& sp = policy.sub_policies[static_cast<std::size_t>(sp_index)];
        const BoxGeometry geometry = box.geometry(out.pixels.height, out.pixels.width);

        BoxAuditEntry entry;
        entry.box_index = box_index;
        entry.category = scale_category_of(box.area());
        entry.area_ratio = policy.area_ratios.for_category(entry.category);
        entry.sub_policy_index = sp_index;

        const bool apply_color = rng.bernoulli_tenths(sp.color.probability_tenths);
        Image transformed = out.pixels;
        if (apply_color) {
            entry.color_applied = true;
            entry.color_value = map_magnitude(sp.color.op, sp.color.magnitude);
            transformed =
                apply_color_op(transformed, sp.color.op, entry.color_value, geometry, rng);
        }

        const bool apply_geo = rng.bernoulli_tenths(sp.geometric.probability_tenths);
        if (apply_geo) {
            entry.geometric_applied = true;
            double value = map_magnitude(sp.geometric.op, sp.geometric.magnitude);
            if (physical_range(sp.geometric.op).is_signed) {
                value *= rng.sign();
            }
            entry.geometric_value = value;
            transformed = apply_geometric_op(transformed, sp.geometric.op, value, geometry);
        }

        if (apply_color || apply_geo) {
            const AlphaMap map =
                gaussian_map(make_gaussian_params(geometry, entry.area_ratio));
            out.pixels = blend(out.pixels, transformed, map, direction);
        }

        if (audit != nullptr) {
            audit->push_back(entry);
        }
    }
    return out;
}

}  // namespace scaleaug
