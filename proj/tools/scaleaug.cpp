// scaleaug — command-line front end for the scale-aware augmentation library.
//
// Subcommands:
//   apply            augment a dataset under a policy
//   search           evolutionary policy search against an external evaluator
//   metric           scale-balance metric of one stats document
//   pearson          Pearson correlation of (x, y) pairs
//   gaussmap         render a blending weight map as a grayscale PNG
//   policy validate  schema-check a policy document
//   space-size       print the search-space cardinality
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 evaluator error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "scaleaug/dataset.hpp"
#include "scaleaug/error.hpp"
#include "scaleaug/evolution.hpp"
#include "scaleaug/gaussian.hpp"
#include "scaleaug/image_io.hpp"
#include "scaleaug/metric.hpp"
#include "scaleaug/policy.hpp"

namespace {

using nlohmann::ordered_json;
using namespace scaleaug;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open file: " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::vector<std::string> dropped_names(const std::vector<ScaleCategory>& dropped) {
    std::vector<std::string> names;
    names.reserve(dropped.size());
    for (ScaleCategory c : dropped) {
        names.emplace_back(scale_category_name(c));
    }
    return names;
}

ordered_json metric_json(const MetricValue& metric) {
    return ordered_json{{"value", metric.value},
                        {"std_component", metric.std_component},
                        {"penalty_component", metric.penalty_component},
                        {"dropped_scales", dropped_names(metric.dropped_scales)}};
}

// ---------------------------------------------------------------------------
// apply
// ---------------------------------------------------------------------------

struct ApplyArgs {
    std::string policy_path;
    std::string annotations_path;
    std::string images_dir;
    std::string out_dir;
    std::uint64_t seed = 0;
};

void run_apply(const ApplyArgs& args) {
    const Policy policy = parse_policy(read_file(args.policy_path));
    const DatasetIndex index = load_dataset(args.annotations_path, args.images_dir);
    const AugmentReport report =
        augment_dataset(index, args.images_dir, policy, args.seed, args.out_dir);
    std::cout << serialize_report(report);
}

// ---------------------------------------------------------------------------
// search
// ---------------------------------------------------------------------------

struct SearchArgs {
    std::string config_path;
    std::string evaluator_cmd;
    std::string log_path;
    std::string best_path;
    std::string workdir;
    double timeout_seconds = 0.0;
    int parallelism = 0;        // 0: take the config value
    std::int64_t seed = -1;     // <0: take the config value
};

void run_search_command(const SearchArgs& args) {
    SearchConfig config;
    if (!args.config_path.empty()) {
        config = parse_search_config(read_file(args.config_path));
    }
    if (args.parallelism > 0) {
        config.parallelism = args.parallelism;
    }
    if (args.seed >= 0) {
        config.seed = static_cast<std::uint64_t>(args.seed);
    }

    std::filesystem::path workdir = args.workdir;
    if (workdir.empty()) {
        workdir = std::filesystem::path(args.log_path).concat(".work");
    }
    ExternalEvaluator evaluator(args.evaluator_cmd, workdir, args.timeout_seconds);

    std::ofstream log(args.log_path);
    if (!log) {
        throw IoError("cannot write log file: " + args.log_path);
    }
    const auto record_line = [&log](const EvaluationRecord& record) {
        ordered_json line;
        line["generation"] = record.generation;
        line["genome"] = record.genome;
        if (record.failed) {
            line["metric"] = nullptr;
            line["std_component"] = nullptr;
            line["penalty_component"] = nullptr;
            line["dropped_scales"] = ordered_json::array();
        } else {
            line["metric"] = record.metric.value;
            line["std_component"] = record.metric.std_component;
            line["penalty_component"] = record.metric.penalty_component;
            line["dropped_scales"] = dropped_names(record.metric.dropped_scales);
        }
        line["failed"] = record.failed;
        log << line.dump() << '\n';
        log.flush();
    };

    const SearchResult result = run_search(config, evaluator, record_line);

    if (!args.best_path.empty()) {
        std::ofstream best(args.best_path);
        if (!best) {
            throw IoError("cannot write best-policy file: " + args.best_path);
        }
        best << serialize_policy(result.best_policy);
    }

    ordered_json summary;
    summary["evaluations"] = result.history.size();
    summary["best_metric"] = metric_json(result.best_metric);
    summary["best_genome"] = result.best_genome;
    if (!args.best_path.empty()) {
        summary["best_policy_file"] = args.best_path;
    }
    std::cout << summary.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// metric / pearson
// ---------------------------------------------------------------------------

void run_metric(const std::string& stats_path, double eps) {
    const ScaleStats stats = parse_stats(read_file(stats_path));
    const MetricValue metric = pareto_scale_balance(stats, eps);
    std::cout << metric_json(metric).dump(2) << '\n';
}

void run_pearson(const std::string& pairs_path) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(read_file(pairs_path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("pairs", e.what());
    }
    if (!doc.is_array()) {
        throw ParseError("pairs", "expected an array of [x, y] pairs");
    }
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const ordered_json& pair = doc[i];
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
            !pair[1].is_number()) {
            throw ParseError("pairs[" + std::to_string(i) + "]",
                             "expected a numeric [x, y] pair");
        }
        xs.push_back(pair[0].get<double>());
        ys.push_back(pair[1].get<double>());
    }
    const double r = pearson(xs, ys);
    std::cout << ordered_json{{"pearson", r}}.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// gaussmap
// ---------------------------------------------------------------------------

struct GaussmapArgs {
    std::string box_spec;    // center_x,center_y,h,w
    std::string image_spec;  // H,W
    double ratio = 1.0;
    std::string out_path;
};

std::vector<double> parse_csv_numbers(const std::string& text, std::size_t expected,
                                      const std::string& option) {
    std::vector<double> values;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        try {
            std::size_t used = 0;
            values.push_back(std::stod(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception&) {
            throw CLI::ValidationError(option, "'" + item + "' is not a number");
        }
    }
    if (values.size() != expected) {
        throw CLI::ValidationError(option, "expected " + std::to_string(expected) +
                                               " comma-separated numbers");
    }
    return values;
}

void run_gaussmap(const GaussmapArgs& args) {
    const std::vector<double> box = parse_csv_numbers(args.box_spec, 4, "--box");
    const std::vector<double> image = parse_csv_numbers(args.image_spec, 2, "--image");
    for (double d : image) {
        if (d != static_cast<int>(d)) {
            throw CLI::ValidationError("--image", "dimensions must be integers");
        }
    }
    BoxGeometry geometry;
    geometry.center_x = box[0];
    geometry.center_y = box[1];
    geometry.h = box[2];
    geometry.w = box[3];
    geometry.image_h = static_cast<int>(image[0]);
    geometry.image_w = static_cast<int>(image[1]);

    const GaussianMapParams params = make_gaussian_params(geometry, args.ratio);
    const AlphaMap map = gaussian_map(params);
    save_alpha_png(args.out_path, map);

    ordered_json info;
    info["sigma_vertical"] = params.sigmas.vertical;
    info["sigma_horizontal"] = params.sigmas.horizontal;
    info["numeric_area"] = numeric_area(map);
    info["target_area"] = args.ratio * geometry.h * geometry.w;
    std::cout << info.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scale-aware augmentation toolkit"};
    app.require_subcommand(1);

    // apply ------------------------------------------------------------
    ApplyArgs apply_args;
    CLI::App* apply = app.add_subcommand("apply", "Augment a dataset under a policy");
    apply->add_option("--policy", apply_args.policy_path, "Policy document")->required();
    apply->add_option("--annotations", apply_args.annotations_path, "Annotation document")
        ->required();
    apply->add_option("--images", apply_args.images_dir, "Image root directory")->required();
    apply->add_option("--out", apply_args.out_dir, "Output directory")->required();
    apply->add_option("--seed", apply_args.seed, "Base seed (per-image streams derive from it)")
        ->default_val(std::uint64_t{0});

    // search -----------------------------------------------------------
    SearchArgs search_args;
    CLI::App* search = app.add_subcommand("search", "Evolutionary policy search");
    search->add_option("--config", search_args.config_path,
                       "Search configuration document (defaults apply when omitted)");
    search->add_option("--evaluator-cmd", search_args.evaluator_cmd,
                       "Shell command template with {policy} and {stats} placeholders")
        ->required();
    search->add_option("--out", search_args.log_path,
                       "History log (one JSON record per evaluation)")
        ->required();
    search->add_option("--best", search_args.best_path, "Write the best policy here");
    search->add_option("--workdir", search_args.workdir,
                       "Directory for candidate/stats files (default: <log>.work)");
    search->add_option("--timeout", search_args.timeout_seconds,
                       "Per-evaluation timeout in seconds (0 = none)");
    search->add_option("--parallelism", search_args.parallelism,
                       "Concurrent evaluator invocations (overrides the config)");
    search->add_option("--seed", search_args.seed, "Search seed (overrides the config)");

    // metric -----------------------------------------------------------
    std::string stats_path;
    double eps = kDefaultMetricEps;
    CLI::App* metric = app.add_subcommand("metric", "Scale-balance metric of a stats document");
    metric->add_option("--stats", stats_path, "Stats document")->required();
    metric->add_option("--eps", eps, "Denominator guard, AP fraction units");

    // pearson ----------------------------------------------------------
    std::string pairs_path;
    CLI::App* pearson_cmd = app.add_subcommand("pearson", "Pearson correlation of [x, y] pairs");
    pearson_cmd->add_option("--pairs", pairs_path, "JSON array of [x, y] pairs")->required();

    // gaussmap ---------------------------------------------------------
    GaussmapArgs gaussmap_args;
    CLI::App* gaussmap = app.add_subcommand("gaussmap", "Render a blending weight map");
    gaussmap->add_option("--box", gaussmap_args.box_spec, "center_x,center_y,h,w")->required();
    gaussmap->add_option("--image", gaussmap_args.image_spec, "H,W")->required();
    gaussmap->add_option("--ratio", gaussmap_args.ratio, "Area ratio")->required();
    gaussmap->add_option("--out", gaussmap_args.out_path, "Output PNG")->required();

    // policy validate ----------------------------------------------------
    std::string policy_path;
    CLI::App* policy_cmd = app.add_subcommand("policy", "Policy document utilities");
    policy_cmd->require_subcommand(1);
    CLI::App* validate = policy_cmd->add_subcommand("validate", "Schema-check a policy document");
    validate->add_option("file", policy_path, "Policy document")->required();

    // space-size ---------------------------------------------------------
    CLI::App* space_size =
        app.add_subcommand("space-size", "Print the search-space cardinality");

    try {
        app.parse(argc, argv);

        if (*apply) {
            run_apply(apply_args);
        } else if (*search) {
            run_search_command(search_args);
        } else if (*metric) {
            run_metric(stats_path, eps);
        } else if (*pearson_cmd) {
            run_pearson(pairs_path);
        } else if (*gaussmap) {
            run_gaussmap(gaussmap_args);
        } else if (*policy_cmd) {
            parse_policy(read_file(policy_path));
            std::cout << "valid\n";
        } else if (*space_size) {
            std::cout << search_space_cardinality_decimal() << '\n';
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // help exits 0; any usage problem exits 1
    } catch (const EvaluationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
