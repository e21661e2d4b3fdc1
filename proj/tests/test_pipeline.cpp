/*
 * Copyright (C) 2026 The Partlift Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <cstdlib>
#include <set>

#include <spdlog/spdlog.h>

#include "partlift/dataset/manifest.hpp"
#include "partlift/geometry/ply.hpp"
#include "partlift/pipeline/pipeline.hpp"
#include "partlift/pipeline/synth.hpp"
#include "support.hpp"

using namespace partlift;
using partlift::testing::TempDir;
using partlift::testing::read_file;
using partlift::testing::write_file;

namespace {

PipelineConfig small_config() {
    PipelineConfig c;
    c.views = 4;
    c.image_size = {128, 128};
    c.jobs = 1;
    return c;
}

// Synthesizes the shapes into `dir` and returns the manifest path.
std::filesystem::path synth_set(const TempDir& dir, std::size_t points,
                                std::initializer_list<const char*> shapes = {"two_part_cylinder", "lidded_pot"}) {
    for (const char* s : shapes) REQUIRE(cmd_synth(s, points, 3, dir.path()) == kExitOk);
    return dir / "manifest.json";
}

Vec3 centroid_of(const PointCloud& c, int label) {
    Vec3 sum = Vec3::Zero();
    int n = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c.labels()[i] == label) {
            sum += c.positions()[i];
            ++n;
        }
    }
    return sum / n;
}

struct QuietLogs {
    QuietLogs() : previous(spdlog::get_level()) { spdlog::set_level(spdlog::level::off); }
    ~QuietLogs() { spdlog::set_level(previous); }
    spdlog::level::level_enum previous;
};

}  // namespace

TEST_CASE("config: defaults, JSON overlay and validation") {
    const PipelineConfig d;
    CHECK(d.views == 10);
    CHECK(d.image_size.width == 512);
    CHECK(d.tau == 0.2);
    CHECK(d.surfel_scale == 1.0);
    CHECK_NOTHROW(d.validate());

    const PipelineConfig c = PipelineConfig::from_json(
        {{"views", 3}, {"surfel_scale", 0.0}, {"backend", "replay:/tmp/masks"}, {"image_size", 64}});
    CHECK(c.views == 3);
    CHECK(c.surfel_scale == 0.0);
    CHECK(c.backend.kind == BackendSpec::Kind::Replay);
    CHECK(c.backend.location == "/tmp/masks");
    CHECK(c.knn_k == d.knn_k);

    const PipelineConfig back = PipelineConfig::from_json(c.to_json());
    CHECK(back.to_json() == c.to_json());

    CHECK_THROWS_AS(PipelineConfig::from_json({{"views", "ten"}}), std::invalid_argument);
    CHECK_THROWS_AS(PipelineConfig::from_json(nlohmann::json::array()), std::invalid_argument);
    for (auto mutate : std::vector<void (*)(PipelineConfig&)>{
             [](PipelineConfig& x) { x.views = 0; },
             [](PipelineConfig& x) { x.tau = 1.5; },
             [](PipelineConfig& x) { x.surfel_scale = -0.5; },
             [](PipelineConfig& x) { x.jobs = 0; },
             [](PipelineConfig& x) { x.fov_deg = 180.0; },
         }) {
        PipelineConfig x;
        mutate(x);
        CHECK_THROWS_AS(x.validate(), std::invalid_argument);
    }
}

TEST_CASE("config: backend strings") {
    CHECK(BackendSpec::parse("oracle").kind == BackendSpec::Kind::Oracle);
    const BackendSpec r = BackendSpec::parse("remote:http://localhost:8000");
    CHECK(r.kind == BackendSpec::Kind::Remote);
    CHECK(r.location == "http://localhost:8000");
    CHECK(r.to_string() == "remote:http://localhost:8000");
    CHECK_THROWS_AS(BackendSpec::parse("remote:"), std::invalid_argument);
    CHECK_THROWS_AS(BackendSpec::parse("magic"), std::invalid_argument);
}

TEST_CASE("synth: shape layout and determinism") {
    const SynthObject pot = make_synthetic(SynthShape::LiddedPot, 2000, 1);
    CHECK(pot.cloud.size() == 2000);
    CHECK(pot.object_category == "pot");
    std::set<int> labels(pot.cloud.labels().begin(), pot.cloud.labels().end());
    CHECK(labels == std::set<int>{2, 3});
    CHECK(centroid_of(pot.cloud, 3).z() > centroid_of(pot.cloud, 2).z());

    const SynthObject chair = make_synthetic(SynthShape::FourLegChair, 3000, 1);
    CHECK(centroid_of(chair.cloud, 6).z() < centroid_of(chair.cloud, 4).z());
    CHECK(centroid_of(chair.cloud, 5).z() > centroid_of(chair.cloud, 4).z());
    CHECK(chair.part_names.at(4) == "seat");

    TempDir dir("synth");
    write_ply(make_synthetic(SynthShape::TwoPartCylinder, 500, 9).cloud, dir / "a.ply");
    write_ply(make_synthetic(SynthShape::TwoPartCylinder, 500, 9).cloud, dir / "b.ply");
    write_ply(make_synthetic(SynthShape::TwoPartCylinder, 500, 10).cloud, dir / "c.ply");
    CHECK(read_file(dir / "a.ply") == read_file(dir / "b.ply"));
    CHECK(read_file(dir / "a.ply") != read_file(dir / "c.ply"));

    CHECK_THROWS_AS(make_synthetic(SynthShape::LiddedPot, 50, 1), std::invalid_argument);
    CHECK_THROWS_AS(parse_synth_shape("teapot"), std::invalid_argument);
    CHECK(parse_synth_shape(to_string(SynthShape::FourLegChair)) == SynthShape::FourLegChair);
}

TEST_CASE("synth: manifest entries accumulate") {
    QuietLogs quiet;
    TempDir dir("synthset");
    const auto manifest = synth_set(dir, 300, {"lidded_pot", "four_leg_chair", "lidded_pot"});
    const auto entries = load_manifest(manifest);
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].object_id == "lidded_pot_s3");
    CHECK(entries[1].object_category == "chair");
    CHECK_FALSE(entries[0].instructions.empty());
    CHECK(std::filesystem::is_regular_file(dir / "lidded_pot_s3.ply"));
    CHECK(cmd_synth("teapot", 300, 1, dir.path()) == kExitBadInput);
}

TEST_CASE("predict_object: oracle labels visible points correctly") {
    const SynthObject pot = make_synthetic(SynthShape::LiddedPot, 2000, 5);
    PipelineConfig c;
    c.image_size = {256, 256};
    c.jobs = 2;
    const std::vector<QuerySpec> queries{{"q0", "the body", 2}, {"q1", "the lid", 3}};
    const ObjectPrediction p = predict_object(pot.cloud, queries, c, pot.part_names);

    CHECK(p.categories == std::vector<int>{2, 3});
    REQUIRE(p.explanations.size() == 2);
    for (const auto& e : p.explanations) {
        CHECK(e.view_index >= 0);
        CHECK(e.view_index < c.views);
    }
    std::size_t visible = 0, correct = 0;
    for (std::size_t i = 0; i < pot.cloud.size(); ++i) {
        if (!p.visible_any[i]) continue;
        ++visible;
        correct += p.labels.point_label[i] == pot.cloud.labels()[i];
    }
    REQUIRE(visible > 0);
    CHECK(double(correct) / double(visible) >= 0.99);

    // An unlabeled cloud cannot drive the oracle.
    CHECK_THROWS(predict_object(pot.cloud.without_labels(), queries, c));
}

TEST_CASE("prepare_cloud: normals, partition and radii") {
    const SynthObject bottle = make_synthetic(SynthShape::TwoPartCylinder, 800, 2);
    PipelineConfig c;
    const PreparedCloud prepared = prepare_cloud(bottle.cloud.without_labels(), c);
    CHECK(prepared.cloud.has_normals());
    CHECK(prepared.partition.point_count() == 800);
    CHECK(prepared.surfel_radius.size() == 800);
    c.surfel_scale = 0.0;
    CHECK(prepare_cloud(bottle.cloud, c).surfel_radius.empty());

    const PointCloud one({Vec3(1, 2, 3)}, {Rgb{1, 2, 3}});
    const PreparedCloud single = prepare_cloud(one, PipelineConfig{});
    CHECK(single.partition.superpoint_count() == 1);
}

TEST_CASE("run then eval: oracle round trip on disk") {
    QuietLogs quiet;
    TempDir dir("roundtrip");
    const auto manifest = synth_set(dir, 1500);
    const auto out = dir / "pred";
    REQUIRE(cmd_run(manifest, small_config(), out, true) == kExitOk);

    CHECK(std::filesystem::is_regular_file(out / "lidded_pot_s3.ply"));
    CHECK(std::filesystem::is_regular_file(out / "lidded_pot_s3_colorized.ply"));
    CHECK(std::filesystem::is_regular_file(out / "lidded_pot_s3_q0.txt"));
    const std::string explanation = read_file(out / "lidded_pot_s3_q0.txt");
    CHECK(explanation.rfind("view_index: ", 0) == 0);
    CHECK(explanation.find("\niou: ") != std::string::npos);

    const auto log = nlohmann::json::parse(read_file(out / "run_log.json"));
    CHECK(log["objects"].size() == 2);
    CHECK(log["failures"].empty());
    CHECK(log["config"]["views"] == 4);

    REQUIRE(cmd_eval(out, manifest) == kExitOk);
    const auto report = nlohmann::json::parse(read_file(out / "eval_report.json"));
    CHECK(report["overall"].get<double>() >= 0.9);

    // The ground truth scored against itself is exact.
    const auto gt_dir = dir / "gt";
    std::filesystem::create_directories(gt_dir);
    for (const auto& e : load_manifest(manifest)) {
        std::filesystem::copy_file(dir / e.ply_path, gt_dir / (e.object_id + ".ply"));
    }
    REQUIRE(cmd_eval(gt_dir, manifest, dir / "self.json") == kExitOk);
    CHECK(nlohmann::json::parse(read_file(dir / "self.json"))["overall"].get<double>() == 1.0);
}

TEST_CASE("eval: hand-built predictions") {
    QuietLogs quiet;
    TempDir dir("evalfiles");
    std::vector<Vec3> pos;
    for (int i = 0; i < 10; ++i) pos.emplace_back(i, 0, 0);
    const std::vector<Rgb> col(10, Rgb{9, 9, 9});
    write_ply(PointCloud(pos, col, std::nullopt, std::vector<int>{0, 0, 0, 0, 0, 0, 1, 1, 1, 1}), dir / "gt.ply");
    std::filesystem::create_directories(dir / "pred");
    write_ply(PointCloud(pos, col, std::nullopt, std::vector<int>{0, 0, 0, 0, 0, 1, 0, 1, 1, 1}),
              dir / "pred" / "obj.ply");

    ManifestEntry e;
    e.object_id = "obj";
    e.object_category = "thing";
    e.ply_path = "gt.ply";
    e.instructions = {{"part a", QueryType::Normal, 0}, {"part b", QueryType::Normal, 1}};
    save_manifest({e}, dir / "m.json");

    REQUIRE(cmd_eval(dir / "pred", dir / "m.json") == kExitOk);
    const auto report = nlohmann::json::parse(read_file(dir / "pred" / "eval_report.json"));
    CHECK(std::abs(report["overall"].get<double>() - (5.0 / 7.0 + 3.0 / 5.0) / 2.0) < 1e-9);

    ManifestEntry missing = e;
    missing.object_id = "absent";
    save_manifest({e, missing}, dir / "m2.json");
    CHECK(cmd_eval(dir / "pred", dir / "m2.json") == kExitBadInput);

    write_ply(PointCloud({pos.begin(), pos.begin() + 4}, {col.begin(), col.begin() + 4}, std::nullopt,
                         std::vector<int>{0, 0, 0, 0}),
              dir / "pred" / "obj.ply");
    CHECK(cmd_eval(dir / "pred", dir / "m.json") == kExitBadInput);
    CHECK(cmd_eval(dir / "pred", dir / "nothing.json") == kExitBadInput);
}

TEST_CASE("run: exit codes") {
    QuietLogs quiet;
    TempDir dir("exits");
    write_file(dir / "empty.json", "[]");
    CHECK(cmd_run(dir / "empty.json", small_config(), dir / "out0") == kExitOk);
    CHECK(nlohmann::json::parse(read_file(dir / "out0" / "run_log.json"))["objects"].empty());

    CHECK(cmd_run(dir / "absent.json", small_config(), dir / "out1") == kExitBadInput);

    ManifestEntry e;
    e.object_id = "ghost";
    e.object_category = "pot";
    e.ply_path = "ghost.ply";
    save_manifest({e}, dir / "ghost.json");
    CHECK(cmd_run(dir / "ghost.json", small_config(), dir / "out2") == kExitBadInput);

    write_file(dir / "ghost.ply", "ply\nformat ascii 1.0\nelement vertex 3\nend_header\n");
    CHECK(cmd_run(dir / "ghost.json", small_config(), dir / "out3") == kExitBadInput);

    const auto manifest = synth_set(dir, 300, {"lidded_pot"});
    PipelineConfig dead = small_config();
    dead.backend = BackendSpec::parse("remote:http://127.0.0.1:" + std::to_string(partlift::testing::free_port()));
    dead.remote.retries = 0;
    dead.remote.timeout_s = 2.0;
    CHECK(cmd_run(manifest, dead, dir / "out4") == kExitObjectFailures);
    const auto log = nlohmann::json::parse(read_file(dir / "out4" / "run_log.json"));
    REQUIRE(log["failures"].size() == 1);
    CHECK(log["objects"][0]["status"] == "failed");

    PipelineConfig bad = small_config();
    bad.views = 0;
    CHECK(cmd_run(manifest, bad, dir / "out5") == kExitBadInput);
}

TEST_CASE("run: output does not depend on the job count") {
    QuietLogs quiet;
    TempDir dir("jobs");
    const auto manifest = synth_set(dir, 1200);
    PipelineConfig one = small_config();
    PipelineConfig four = small_config();
    four.jobs = 4;
    REQUIRE(cmd_run(manifest, one, dir / "j1") == kExitOk);
    REQUIRE(cmd_run(manifest, four, dir / "j4") == kExitOk);
    for (const char* f : {"two_part_cylinder_s3.ply", "lidded_pot_s3.ply", "lidded_pot_s3_q1.txt"}) {
        CHECK(read_file(dir / "j1" / f) == read_file(dir / "j4" / f));
    }
}

TEST_CASE("sanitize_id") {
    CHECK(sanitize_id("chair/01 a.b-c_d") == "chair_01_a.b-c_d");
    CHECK(sanitize_id("plain") == "plain");
}

TEST_CASE("cli: synth, run and eval through the binary") {
    TempDir dir("cli");
    const std::string exe = PARTLIFT_CLI_PATH;
    const std::string d = dir.path().string();
    auto sh = [](const std::string& cmd) {
        const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    };
    REQUIRE(sh(exe + " synth --shape lidded_pot --points 600 --seed 2 --out " + d) == 0);
    REQUIRE(sh(exe + " run --manifest " + d + "/manifest.json --out " + d +
               "/pred --views 3 --image-size 96 --jobs 2 --surfel-scale 1") == 0);
    CHECK(sh(exe + " eval --pred " + d + "/pred --manifest " + d + "/manifest.json") == 0);
    CHECK(std::filesystem::is_regular_file(dir / "pred" / "eval_report.json"));
    CHECK(sh(exe + " run --manifest " + d + "/manifest.json --out " + d + "/x --views 0") == 2);
    CHECK(sh(exe + " run --manifest " + d + "/manifest.json --out " + d + "/x --backend nonsense") == 2);
    CHECK(sh(exe + " frobnicate") != 0);
}
