// End-to-end tests of the scaleaug command-line tool: every subcommand is
// exercised through a real process invocation, checking stdout/stderr payloads
// and the 0/1/2/3 exit-code contract.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "scaleaug/dataset.hpp"
#include "scaleaug/image_io.hpp"
#include "scaleaug/policy.hpp"
#include "scaleaug/raster.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace scaleaug;
using scaleaug::test::make_noise;
using scaleaug::test::max_abs_diff;
using scaleaug::test::read_file;
using scaleaug::test::TempDir;
using scaleaug::test::write_file;

namespace {

constexpr const char* kCli = SCALEAUG_CLI_PATH;

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

/// Runs the tool with `args`, capturing stdout/stderr into files under `dir`.
CliResult run_cli(const std::string& args, const TempDir& dir, const std::string& tag) {
    const fs::path out_path = dir.path() / (tag + ".out");
    const fs::path err_path = dir.path() / (tag + ".err");
    const std::string command = "\"" + std::string(kCli) + "\" " + args + " > \"" +
                                out_path.string() + "\" 2> \"" + err_path.string() + "\"";
    const int status = std::system(command.c_str());
    CliResult result;
    result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = fs::exists(out_path) ? read_file(out_path) : std::string{};
    result.err = fs::exists(err_path) ? read_file(err_path) : std::string{};
    return result;
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("space-size prints the exact cardinality") {
    TempDir dir;
    const CliResult r = run_cli("space-size", dir, "size");
    CHECK(r.code == 0);
    CHECK(r.out == "1207358366901498445276643328000\n");
    CHECK(r.err.empty());
}

TEST_CASE("usage errors exit 1, help exits 0") {
    TempDir dir;

    CHECK(run_cli("", dir, "noargs").code == 1);
    CHECK_FALSE(run_cli("", dir, "noargs2").err.empty());
    CHECK(run_cli("bogus-subcommand", dir, "unknown").code == 1);
    CHECK(run_cli("metric", dir, "missingopt").code == 1);  // --stats is required

    CHECK(run_cli("--help", dir, "help").code == 0);
    const CliResult help = run_cli("--help", dir, "help2");
    CHECK(contains(help.out, "apply"));
    CHECK(contains(help.out, "search"));
    CHECK(run_cli("search --help", dir, "subhelp").code == 0);
}

TEST_CASE("policy validate") {
    TempDir dir;
    const std::string good = serialize_policy(reference_policy());
    const fs::path good_path = dir.path() / "good.json";
    write_file(good_path, good);

    SUBCASE("well-formed document") {
        const CliResult r = run_cli("policy validate \"" + good_path.string() + "\"", dir, "ok");
        CHECK(r.code == 0);
        CHECK(r.out == "valid\n");
    }

    SUBCASE("misspelled field reports its path and exits 2") {
        std::string bad = good;
        const auto pos = bad.find("\"zoom_in\"");
        REQUIRE(pos != std::string::npos);
        bad.replace(pos, 9, "\"zoomin\"");
        const fs::path bad_path = dir.path() / "bad.json";
        write_file(bad_path, bad);
        const CliResult r = run_cli("policy validate \"" + bad_path.string() + "\"", dir, "bad");
        CHECK(r.code == 2);
        CHECK(contains(r.err, "policy.zoom_in"));
    }

    SUBCASE("missing file exits 2") {
        const CliResult r =
            run_cli("policy validate \"" + (dir.path() / "absent.json").string() + "\"", dir,
                    "absent");
        CHECK(r.code == 2);
        CHECK(contains(r.err, "error:"));
    }
}

TEST_CASE("metric subcommand computes the balance value") {
    TempDir dir;
    const fs::path stats = dir.path() / "stats.json";
    write_file(stats, R"({
      "losses":    {"small": 0,  "middle": 0,  "large": 3},
      "ap_before": {"small": 20, "middle": 30, "large": 40},
      "ap_after":  {"small": 10, "middle": 30, "large": 40},
      "overall_ap_after": 30.0
    })");

    const CliResult r = run_cli("metric --stats \"" + stats.string() + "\"", dir, "metric");
    CHECK(r.code == 0);
    const json doc = json::parse(r.out);
    CHECK(doc["value"].get<double>() == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-9));
    CHECK(doc["std_component"].get<double>() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
    CHECK(doc["penalty_component"].get<double>() == doctest::Approx(2.0).epsilon(1e-9));
    REQUIRE(doc["dropped_scales"].is_array());
    REQUIRE(doc["dropped_scales"].size() == 1);
    CHECK(doc["dropped_scales"][0].get<std::string>() == "small");

    const CliResult missing =
        run_cli("metric --stats \"" + (dir.path() / "nope.json").string() + "\"", dir, "miss");
    CHECK(missing.code == 2);
}

TEST_CASE("pearson subcommand") {
    TempDir dir;

    SUBCASE("worked 4-point example") {
        const fs::path pairs = dir.path() / "pairs.json";
        write_file(pairs, "[[1,1],[2,2],[3,4],[4,3]]");
        const CliResult r = run_cli("pearson --pairs \"" + pairs.string() + "\"", dir, "ok");
        CHECK(r.code == 0);
        const json doc = json::parse(r.out);
        CHECK(doc["pearson"].get<double>() == doctest::Approx(0.8).epsilon(1e-9));
    }

    SUBCASE("constant x series is a data error") {
        const fs::path pairs = dir.path() / "const.json";
        write_file(pairs, "[[1,1],[1,2],[1,3]]");
        CHECK(run_cli("pearson --pairs \"" + pairs.string() + "\"", dir, "const").code == 2);
    }

    SUBCASE("ragged pair is reported by index") {
        const fs::path pairs = dir.path() / "ragged.json";
        write_file(pairs, "[[1],[2,3]]");
        const CliResult r = run_cli("pearson --pairs \"" + pairs.string() + "\"", dir, "ragged");
        CHECK(r.code == 2);
        CHECK(contains(r.err, "pairs[0]"));
    }
}

TEST_CASE("gaussmap renders a weight map and prints its geometry") {
    TempDir dir;
    const fs::path png = dir.path() / "map.png";

    const CliResult r = run_cli(
        "gaussmap --box 32.5,32.5,20,20 --image 64,64 --ratio 1.0 --out \"" + png.string() +
            "\"",
        dir, "map");
    CHECK(r.code == 0);
    REQUIRE(fs::exists(png));

    const json doc = json::parse(r.out);
    const double expected_sigma = 20.0 / std::sqrt(2.0 * 3.14159265358979323846);
    CHECK(doc["sigma_vertical"].get<double>() ==
          doctest::Approx(expected_sigma).epsilon(1e-12));
    CHECK(doc["sigma_horizontal"].get<double>() ==
          doctest::Approx(expected_sigma).epsilon(1e-12));
    CHECK(doc["target_area"].get<double>() == doctest::Approx(400.0).epsilon(1e-12));
    CHECK(doc["numeric_area"].get<double>() == doctest::Approx(400.0).epsilon(0.02));

    // Peak of the map sits at the box center pixel and saturates to white.
    const Image map = load_image(png);
    REQUIRE(map.height == 64);
    REQUIRE(map.width == 64);
    CHECK(static_cast<int>(map.pixel(32, 32).r) == 255);

    SUBCASE("malformed --box is a usage error") {
        const CliResult bad = run_cli(
            "gaussmap --box 1,2,3 --image 64,64 --ratio 1.0 --out \"" + png.string() + "\"",
            dir, "badbox");
        CHECK(bad.code == 1);
        CHECK(contains(bad.err, "--box"));
    }

    SUBCASE("fractional image dimensions are a usage error") {
        const CliResult bad = run_cli(
            "gaussmap --box 1,2,3,4 --image 64.5,64 --ratio 1.0 --out \"" + png.string() +
                "\"",
            dir, "badimg");
        CHECK(bad.code == 1);
    }
}

TEST_CASE("apply runs the full pipeline end to end") {
    TempDir dir;
    const fs::path images = dir.path() / "imgs";
    const fs::path out_dir = dir.path() / "out";
    fs::create_directories(images);

    DatasetIndex index;
    std::vector<Image> originals;
    for (int i = 0; i < 3; ++i) {
        const std::string name = "i" + std::to_string(i + 1) + ".png";
        const Image img = make_noise(24, 24, 100 + static_cast<unsigned>(i));
        save_image(images / name, img);
        originals.push_back(img);
        index.images.push_back({i + 1, name, 24, 24});
        index.annotations.push_back({i + 1, i + 1, 4.0, 4.0, 10.0, 10.0, 1});
    }
    index.categories.push_back({1, "thing"});
    const fs::path ann = dir.path() / "ann.json";
    write_file(ann, serialize_dataset(index));

    // All-zero genome decodes to a do-nothing policy: no zooms, no box ops.
    const fs::path policy_path = dir.path() / "policy.json";
    write_file(policy_path, serialize_policy(decode_genome(Genome{})));

    const CliResult r = run_cli("apply --policy \"" + policy_path.string() +
                                    "\" --annotations \"" + ann.string() + "\" --images \"" +
                                    images.string() + "\" --out \"" + out_dir.string() +
                                    "\" --seed 3",
                                dir, "apply");
    CHECK(r.code == 0);

    const json report = json::parse(r.out);
    CHECK(report["images_processed"].get<int>() == 3);
    CHECK(report["images_skipped"].get<int>() == 0);
    CHECK(report["boxes_kept"].get<int>() == 3);
    CHECK(report["boxes_dropped"].get<int>() == 0);
    CHECK(report["branch_frequencies"]["original"].get<int>() == 3);

    REQUIRE(fs::exists(out_dir / "annotations.json"));
    const DatasetIndex out_index = parse_dataset(read_file(out_dir / "annotations.json"));
    CHECK(out_index.images.size() == 3);
    CHECK(out_index.annotations.size() == 3);

    // Identity policy + lossless format: outputs are pixel-for-pixel copies.
    for (int i = 0; i < 3; ++i) {
        const fs::path out_png = out_dir / ("i" + std::to_string(i + 1) + ".png");
        REQUIRE(fs::exists(out_png));
        CHECK(max_abs_diff(load_image(out_png), originals[static_cast<std::size_t>(i)]) == 0);
    }
}

TEST_CASE("search drives an external evaluator") {
    TempDir dir;

    // Fixture stats: equal losses, no AP drop -> metric value exactly 0.
    const fs::path fixture = dir.path() / "fixture.json";
    write_file(fixture, R"({
      "losses":    {"small": 1,   "middle": 1,   "large": 1},
      "ap_before": {"small": 0.4, "middle": 0.5, "large": 0.6},
      "ap_after":  {"small": 0.4, "middle": 0.5, "large": 0.6},
      "overall_ap_after": 0.5
    })");

    const fs::path config = dir.path() / "config.json";
    write_file(config, R"({
      "population_size": 4,
      "top_k": 2,
      "iterations": 2,
      "mutation_rate": 0.05,
      "parallelism": 2,
      "seed": 5
    })");

    const fs::path log = dir.path() / "history.jsonl";
    const fs::path best = dir.path() / "best.json";
    const std::string evaluator =
        "cat {policy} > /dev/null && cp " + fixture.string() + " {stats}";

    const CliResult r = run_cli("search --config \"" + config.string() +
                                    "\" --evaluator-cmd \"" + evaluator + "\" --out \"" +
                                    log.string() + "\" --best \"" + best.string() + "\"",
                                dir, "search");
    CHECK(r.code == 0);

    // Log: one JSON record per evaluation, 4 candidates x 2 generations.
    REQUIRE(fs::exists(log));
    std::vector<std::string> lines;
    {
        std::string text = read_file(log);
        std::size_t start = 0;
        while (start < text.size()) {
            const std::size_t end = text.find('\n', start);
            if (end == std::string::npos) break;
            lines.push_back(text.substr(start, end - start));
            start = end + 1;
        }
    }
    REQUIRE(lines.size() == 8);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const json record = json::parse(lines[i]);
        CHECK(record["generation"].get<int>() == static_cast<int>(i / 4));
        REQUIRE(record["genome"].is_array());
        CHECK(record["genome"].size() == 37);
        CHECK(record["failed"].get<bool>() == false);
        CHECK(record["metric"].get<double>() == doctest::Approx(0.0));
    }

    const json summary = json::parse(r.out);
    CHECK(summary["evaluations"].get<int>() == 8);
    CHECK(summary["best_metric"]["value"].get<double>() == doctest::Approx(0.0));
    REQUIRE(summary["best_genome"].is_array());
    REQUIRE(summary["best_genome"].size() == 37);
    CHECK(summary["best_policy_file"].get<std::string>() == best.string());

    // The best-policy file round-trips to the reported genome.
    REQUIRE(fs::exists(best));
    const Policy best_policy = parse_policy(read_file(best));
    const Genome best_genome = encode_policy(best_policy);
    for (std::size_t g = 0; g < best_genome.size(); ++g) {
        CHECK(best_genome[g] == summary["best_genome"][g].get<int>());
    }

    // Default workdir is derived from the log path.
    CHECK(fs::exists(fs::path(log.string() + ".work") / "candidate_0.json"));
}

TEST_CASE("search maps evaluator failures to exit code 3") {
    TempDir dir;
    const fs::path log = dir.path() / "fail.jsonl";
    const CliResult r =
        run_cli("search --evaluator-cmd \"true {policy} {stats} && exit 7\" --out \"" +
                    log.string() + "\" --seed 1",
                dir, "fail");
    CHECK(r.code == 3);
    CHECK(contains(r.err, "error:"));
}

TEST_CASE("search rejects an evaluator template without placeholders") {
    TempDir dir;
    const fs::path log = dir.path() / "bad.jsonl";
    const CliResult r =
        run_cli("search --evaluator-cmd \"echo hi\" --out \"" + log.string() + "\"", dir,
                "noplaceholder");
    CHECK(r.code == 2);
}
