#ifndef SCALEAUG_DATASET_HPP
#define SCALEAUG_DATASET_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "scaleaug/gaussian.hpp"
#include "scaleaug/policy.hpp"

namespace scaleaug {

// ---------------------------------------------------------------------------
// Dataset ingestion and the batch pipeline
//
// Annotations use the COCO-style corner convention (x_min, y_min, w, h) on
// disk and are converted losslessly to center form internally.  The pipeline
// order is image-level zoom first, then box-level augmentation — scale
// categories and area ratios are computed from post-zoom box areas.
// ---------------------------------------------------------------------------

struct DatasetImageInfo {
    std::int64_t id = 0;
    std::string file_name;
    int height = 0;
    int width = 0;
};

struct DatasetAnnotation {
    std::int64_t id = 0;
    std::int64_t image_id = 0;
    double x_min = 0.0;
    double y_min = 0.0;
    double w = 0.0;
    double h = 0.0;
    int category_id = 0;
};

struct DatasetCategory {
    int id = 0;
    std::string name;
};

/// Parsed annotation set.
struct DatasetIndex {
    std::vector<DatasetImageInfo> images;
    std::vector<DatasetAnnotation> annotations;
    std::vector<DatasetCategory> categories;
};

/// Parses a COCO-style annotation document (subset: images, annotations,
/// categories; unrecognized keys are ignored).  Annotations referencing an
/// unknown image id, or boxes with non-positive width/height, raise
/// DatasetError listing the offending ids.
[[nodiscard]] DatasetIndex parse_dataset(const std::string& text);

/// Reads and parses an annotation file.  When `image_root` is given it must
/// be an existing directory; the image files themselves are validated
/// lazily, at augmentation time.
[[nodiscard]] DatasetIndex load_dataset(const std::filesystem::path& annotation_path,
                                        const std::filesystem::path& image_root = {});

/// Renders an index back to the annotation schema.
[[nodiscard]] std::string serialize_dataset(const DatasetIndex& index);

/// Outcome summary of one augmentation run.
struct AugmentReport {
    long images_processed = 0;
    long images_skipped = 0;
    std::vector<std::string> skipped_files;  ///< unreadable inputs, with reasons
    long boxes_kept = 0;
    long boxes_dropped = 0;  ///< removed by zoom-in cropping
    long branch_zoom_in = 0;
    long branch_zoom_out = 0;
    long branch_original = 0;
};

/// JSON rendering of the report (printed by the CLI).
[[nodiscard]] std::string serialize_report(const AugmentReport& report);

/// Fixed quality for lossy re-encodes, so determinism checks can compare
/// decoded pixels.
inline constexpr int kJpegQuality = 95;

/// Augments every image of the index: per image, a seed derived from
/// (seed, image id) drives apply_image_level followed by augment_boxes; the
/// augmented raster is written under out_dir with its original file name and
/// format, and a transformed annotation document is written to
/// out_dir/annotations.json.  Unreadable images are skipped and listed in
/// the report; nothing is dropped silently.
[[nodiscard]] AugmentReport augment_dataset(const DatasetIndex& index,
                                            const std::filesystem::path& image_root,
                                            const Policy& policy, std::uint64_t seed,
                                            const std::filesystem::path& out_dir);

}  // namespace scaleaug

#endif  // SCALEAUG_DATASET_HPP
