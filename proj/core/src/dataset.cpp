#include "scaleaug/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "scaleaug/box_ops.hpp"
#include "scaleaug/error.hpp"
#include "scaleaug/image_io.hpp"
#include "scaleaug/random.hpp"
#include "scaleaug/zoom.hpp"

namespace scaleaug {

namespace {

using nlohmann::ordered_json;

/// Fetches a required key from a dataset object.  Unlike policy/stats/config
/// documents, dataset documents tolerate extra keys: real annotation files
/// routinely carry fields outside the subset modeled here.
const ordered_json& require(const ordered_json& obj, const char* key,
                            const std::string& where) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        throw ParseError(where, std::string("missing field '") + key + "'");
    }
    return *it;
}

std::int64_t require_int(const ordered_json& obj, const char* key,
                         const std::string& where) {
    const ordered_json& v = require(obj, key, where);
    if (!v.is_number_integer()) {
        throw ParseError(where + "." + key, "expected an integer");
    }
    return v.get<std::int64_t>();
}

double require_number(const ordered_json& v, const std::string& where) {
    if (!v.is_number()) {
        throw ParseError(where, "expected a number");
    }
    return v.get<double>();
}

std::string id_list(const std::vector<std::int64_t>& ids) {
    std::ostringstream out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        out << (i ? ", " : "") << ids[i];
    }
    return out.str();
}

}  // namespace

DatasetIndex parse_dataset(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("dataset", e.what());
    }
    if (!doc.is_object()) {
        throw ParseError("dataset", "expected an object");
    }

    DatasetIndex index;

    const auto images_it = doc.find("images");
    if (images_it == doc.end() || !images_it->is_array()) {
        throw ParseError("dataset.images", "expected an array");
    }
    for (std::size_t i = 0; i < images_it->size(); ++i) {
        const ordered_json& obj = (*images_it)[i];
        const std::string where = "dataset.images[" + std::to_string(i) + "]";
        if (!obj.is_object()) {
            throw ParseError(where, "expected an object");
        }
        DatasetImageInfo info;
        info.id = require_int(obj, "id", where);
        const ordered_json& name = require(obj, "file_name", where);
        if (!name.is_string()) {
            throw ParseError(where + ".file_name", "expected a string");
        }
        info.file_name = name.get<std::string>();
        info.height = static_cast<int>(require_int(obj, "height", where));
        info.width = static_cast<int>(require_int(obj, "width", where));
        if (info.height <= 0 || info.width <= 0) {
            throw ParseError(where, "height and width must be positive");
        }
        index.images.push_back(std::move(info));
    }

    std::unordered_set<std::int64_t> image_ids;
    for (const DatasetImageInfo& info : index.images) {
        if (!image_ids.insert(info.id).second) {
            throw DatasetError("duplicate image id " + std::to_string(info.id));
        }
    }

    const auto anns_it = doc.find("annotations");
    if (anns_it == doc.end() || !anns_it->is_array()) {
        throw ParseError("dataset.annotations", "expected an array");
    }
    std::vector<std::int64_t> dangling;
    std::vector<std::int64_t> degenerate;
    for (std::size_t i = 0; i < anns_it->size(); ++i) {
        const ordered_json& obj = (*anns_it)[i];
        const std::string where = "dataset.annotations[" + std::to_string(i) + "]";
        if (!obj.is_object()) {
            throw ParseError(where, "expected an object");
        }
        DatasetAnnotation ann;
        // Annotation ids are optional on input; output documents always
        // carry fresh sequential ids.
        if (const auto id_it = obj.find("id");
            id_it != obj.end() && id_it->is_number_integer()) {
            ann.id = id_it->get<std::int64_t>();
        } else {
            ann.id = static_cast<std::int64_t>(i) + 1;
        }
        ann.image_id = require_int(obj, "image_id", where);
        ann.category_id = static_cast<int>(require_int(obj, "category_id", where));
        const ordered_json& bbox = require(obj, "bbox", where);
        if (!bbox.is_array() || bbox.size() != 4) {
            throw ParseError(where + ".bbox", "expected [x_min, y_min, w, h]");
        }
        ann.x_min = require_number(bbox[0], where + ".bbox[0]");
        ann.y_min = require_number(bbox[1], where + ".bbox[1]");
        ann.w = require_number(bbox[2], where + ".bbox[2]");
        ann.h = require_number(bbox[3], where + ".bbox[3]");
        if (!image_ids.count(ann.image_id)) {
            dangling.push_back(ann.image_id);
        }
        if (!(ann.w > 0.0) || !(ann.h > 0.0)) {
            degenerate.push_back(ann.id);
        }
        index.annotations.push_back(ann);
    }
    if (!dangling.empty()) {
        throw DatasetError("annotations reference unknown image ids: " + id_list(dangling));
    }
    if (!degenerate.empty()) {
        throw DatasetError("annotations with non-positive box size, ids: " +
                           id_list(degenerate));
    }

    if (const auto cats_it = doc.find("categories"); cats_it != doc.end()) {
        if (!cats_it->is_array()) {
            throw ParseError("dataset.categories", "expected an array");
        }
        for (std::size_t i = 0; i < cats_it->size(); ++i) {
            const ordered_json& obj = (*cats_it)[i];
            const std::string where = "dataset.categories[" + std::to_string(i) + "]";
            if (!obj.is_object()) {
                throw ParseError(where, "expected an object");
            }
            DatasetCategory cat;
            cat.id = static_cast<int>(require_int(obj, "id", where));
            const ordered_json& name = require(obj, "name", where);
            if (!name.is_string()) {
                throw ParseError(where + ".name", "expected a string");
            }
            cat.name = name.get<std::string>();
            index.categories.push_back(std::move(cat));
        }
    }

    return index;
}

DatasetIndex load_dataset(const std::filesystem::path& annotation_path,
                          const std::filesystem::path& image_root) {
    if (!image_root.empty() && !std::filesystem::is_directory(image_root)) {
        throw DatasetError("image root is not a directory: " + image_root.string());
    }
    std::ifstream in(annotation_path);
    if (!in) {
        throw IoError("cannot open annotation file: " + annotation_path.string());
    }
    const std::string text((std::istreambuf_iterator<char>(in)),
                           std::istreambuf_iterator<char>());
    return parse_dataset(text);
}

std::string serialize_dataset(const DatasetIndex& index) {
    ordered_json doc;
    doc["images"] = ordered_json::array();
    for (const DatasetImageInfo& info : index.images) {
        doc["images"].push_back({{"id", info.id},
                                 {"file_name", info.file_name},
                                 {"height", info.height},
                                 {"width", info.width}});
    }
    doc["annotations"] = ordered_json::array();
    for (const DatasetAnnotation& ann : index.annotations) {
        doc["annotations"].push_back(
            {{"id", ann.id},
             {"image_id", ann.image_id},
             {"bbox", {ann.x_min, ann.y_min, ann.w, ann.h}},
             {"category_id", ann.category_id}});
    }
    doc["categories"] = ordered_json::array();
    for (const DatasetCategory& cat : index.categories) {
        doc["categories"].push_back({{"id", cat.id}, {"name", cat.name}});
    }
    return doc.dump(2) + "\n";
}

std::string serialize_report(const AugmentReport& report) {
    ordered_json doc;
    doc["images_processed"] = report.images_processed;
    doc["images_skipped"] = report.images_skipped;
    doc["skipped_files"] = report.skipped_files;
    doc["boxes_kept"] = report.boxes_kept;
    doc["boxes_dropped"] = report.boxes_dropped;
    doc["branch_frequencies"] = {{"zoom_in", report.branch_zoom_in},
                                 {"zoom_out", report.branch_zoom_out},
                                 {"original", report.branch_original}};
    return doc.dump(2) + "\n";
}

AugmentReport augment_dataset(const DatasetIndex& index,
                              const std::filesystem::path& image_root,
                              const Policy& policy, std::uint64_t seed,
                              const std::filesystem::path& out_dir) {
    validate_policy(policy);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (!std::filesystem::is_directory(out_dir)) {
        throw IoError("cannot create output directory: " + out_dir.string());
    }

    // Boxes grouped per image, preserving annotation order.
    std::unordered_map<std::int64_t, std::vector<const DatasetAnnotation*>> by_image;
    for (const DatasetAnnotation& ann : index.annotations) {
        by_image[ann.image_id].push_back(&ann);
    }

    AugmentReport report;
    DatasetIndex out_index;
    out_index.categories = index.categories;
    std::int64_t next_annotation_id = 1;

    for (const DatasetImageInfo& info : index.images) {
        const std::filesystem::path in_path = image_root / info.file_name;
        AnnotatedImage annotated;
        try {
            annotated.pixels = load_image(in_path);
        } catch (const IoError& e) {
            ++report.images_skipped;
            report.skipped_files.push_back(info.file_name + ": " + e.what());
            continue;
        }
        annotated.image_id = info.id;

        if (const auto it = by_image.find(info.id); it != by_image.end()) {
            for (const DatasetAnnotation* ann : it->second) {
                AnnotatedBox box;
                box.center_x = ann->x_min + ann->w / 2.0;
                box.center_y = ann->y_min + ann->h / 2.0;
                box.h = ann->h;
                box.w = ann->w;
                box.category_id = ann->category_id;
                annotated.boxes.push_back(box);
            }
        }
        const std::size_t boxes_in = annotated.boxes.size();

        // One independent stream per image: results do not depend on the
        // position of the image within the dataset.
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(info.id)));
        ZoomDecision decision;
        AnnotatedImage zoomed = apply_image_level(annotated, policy, rng, &decision);
        switch (decision.branch) {
            case ZoomBranch::zoom_in: ++report.branch_zoom_in; break;
            case ZoomBranch::zoom_out: ++report.branch_zoom_out; break;
            case ZoomBranch::original: ++report.branch_original; break;
        }
        AnnotatedImage augmented = augment_boxes(zoomed, policy, rng);

        const std::filesystem::path out_path = out_dir / info.file_name;
        if (out_path.has_parent_path()) {
            std::filesystem::create_directories(out_path.parent_path(), ec);
        }
        save_image(out_path, augmented.pixels, kJpegQuality);

        out_index.images.push_back(info);
        report.boxes_kept += static_cast<long>(augmented.boxes.size());
        report.boxes_dropped +=
            static_cast<long>(boxes_in - augmented.boxes.size());
        ++report.images_processed;

        // Surviving boxes go back to corner form; categories ride along on
        // the boxes themselves, so zoom-in drops never misalign them.
        for (const AnnotatedBox& box : augmented.boxes) {
            DatasetAnnotation ann;
            ann.id = next_annotation_id++;
            ann.image_id = info.id;
            ann.x_min = box.center_x - box.w / 2.0;
            ann.y_min = box.center_y - box.h / 2.0;
            ann.w = box.w;
            ann.h = box.h;
            ann.category_id = box.category_id;
            out_index.annotations.push_back(ann);
        }
    }

    const std::filesystem::path ann_path = out_dir / "annotations.json";
    std::ofstream out(ann_path);
    if (!out) {
        throw IoError("cannot write " + ann_path.string());
    }
    out << serialize_dataset(out_index);
    return report;
}

}  // namespace scaleaug
