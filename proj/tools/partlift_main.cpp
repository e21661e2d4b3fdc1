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

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "partlift/pipeline/pipeline.hpp"

namespace {

struct RunFlags {
    std::string manifest;
    std::string out_dir;
    std::string config_file;
    bool colorize = false;

    int views = 0;
    int image_size = 0;
    double fov = 0;
    double distance_factor = 0;
    int splat_radius = 0;
    double surfel_scale = 0.0;
    double depth_tolerance = 0;
    std::size_t knn_k = 0;
    double normal_angle = 0;
    double color_dist = 0;
    std::size_t min_superpoint_size = 0;
    double tau = 0;
    std::string backend;
    int jobs = 0;
    std::uint64_t seed = 0;
    double timeout = 0;
    int retries = 0;
};

// Flags override the config file, which overrides built-in defaults.
partlift::PipelineConfig resolve_config(const RunFlags& f, const CLI::App& cmd) {
    partlift::PipelineConfig c;
    if (!f.config_file.empty()) {
        std::ifstream in(f.config_file);
        if (!in) throw std::invalid_argument("cannot open config file '" + f.config_file + "'");
        c = partlift::PipelineConfig::from_json(nlohmann::json::parse(in));
    }
    auto given = [&](const char* name) { return cmd.count(name) > 0; };
    if (given("--views")) c.views = f.views;
    if (given("--image-size")) c.image_size = {f.image_size, f.image_size};
    if (given("--fov")) c.fov_deg = f.fov;
    if (given("--distance-factor")) c.distance_factor = f.distance_factor;
    if (given("--splat-radius")) c.splat_radius_px = f.splat_radius;
    if (given("--surfel-scale")) c.surfel_scale = f.surfel_scale;
    if (given("--depth-tolerance")) c.depth_tolerance = f.depth_tolerance;
    if (given("--knn")) c.knn_k = f.knn_k;
    if (given("--normal-angle")) c.superpoints.normal_angle_deg = f.normal_angle;
    if (given("--color-dist")) c.superpoints.color_dist = f.color_dist;
    if (given("--min-superpoint")) c.superpoints.min_size = f.min_superpoint_size;
    if (given("--tau")) c.tau = f.tau;
    if (given("--backend")) c.backend = partlift::BackendSpec::parse(f.backend);
    if (given("--jobs")) c.jobs = f.jobs;
    if (given("--seed")) c.seed = f.seed;
    if (given("--timeout")) c.remote.timeout_s = f.timeout;
    if (given("--retries")) c.remote.retries = f.retries;
    c.validate();
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-view part segmentation fusion for colored point clouds"};
    app.require_subcommand(1);
    bool verbose = false;
    app.add_flag("-v,--verbose", verbose, "Debug logging");

    RunFlags run;
    auto* run_cmd = app.add_subcommand("run", "Render, segment, fuse and export labels for every manifest object");
    run_cmd->add_option("--manifest", run.manifest, "Split file (JSON array of objects)")->required();
    run_cmd->add_option("--out", run.out_dir, "Output directory")->required();
    run_cmd->add_option("--config", run.config_file, "JSON config; explicit flags take precedence");
    run_cmd->add_flag("--colorize", run.colorize, "Also write <id>_colorized.ply with palette colors per label");
    run_cmd->add_option("--views", run.views, "Number of rendered views (default 10)");
    run_cmd->add_option("--image-size", run.image_size, "Square image size in pixels (default 512)");
    run_cmd->add_option("--fov", run.fov, "Vertical field of view in degrees (default 60)");
    run_cmd->add_option("--distance-factor", run.distance_factor, "Camera distance / bounding radius (default 2.2)");
    run_cmd->add_option("--splat-radius", run.splat_radius, "Splat radius in pixels (default 2)");
    run_cmd->add_option("--surfel-scale", run.surfel_scale, "Oriented surfel radius / farthest k-NN distance, 0 disables (default 1)");
    run_cmd->add_option("--depth-tolerance", run.depth_tolerance, "Visibility slack, fraction of scene diameter (default 0.01)");
    run_cmd->add_option("--knn", run.knn_k, "Neighbors for normals and superpoints (default 10)");
    run_cmd->add_option("--normal-angle", run.normal_angle, "Superpoint normal angle threshold, degrees (default 30)");
    run_cmd->add_option("--color-dist", run.color_dist, "Superpoint RGB distance threshold (default 30)");
    run_cmd->add_option("--min-superpoint", run.min_superpoint_size, "Minimum superpoint size (default 5)");
    run_cmd->add_option("--tau", run.tau, "Background threshold on the winning score (default 0.2)");
    run_cmd->add_option("--backend", run.backend, "oracle | replay:<dir> | remote:<url> (default oracle)");
    run_cmd->add_option("--jobs", run.jobs, "Concurrent renders / segment requests (default 4)");
    run_cmd->add_option("--seed", run.seed, "Seed recorded with the run (default 0)");
    run_cmd->add_option("--timeout", run.timeout, "Remote request timeout in seconds (default 120)");
    run_cmd->add_option("--retries", run.retries, "Remote retries on connect/timeout failures (default 2)");

    std::string pred_dir, eval_manifest, report;
    bool include_background = false;
    auto* eval_cmd = app.add_subcommand("eval", "Compute category mIoU of predictions against a manifest");
    eval_cmd->add_option("--pred", pred_dir, "Directory holding <object_id>.ply predictions")->required();
    eval_cmd->add_option("--manifest", eval_manifest, "Split file with ground-truth clouds")->required();
    eval_cmd->add_option("--report", report, "Report path (default <pred>/eval_report.json)");
    eval_cmd->add_flag("--include-background", include_background, "Score background as a part of every category");

    std::string shape, synth_out;
    std::size_t points = 5000;
    std::uint64_t synth_seed = 0;
    auto* synth_cmd = app.add_subcommand("synth", "Write a labeled synthetic shape and its manifest entry");
    synth_cmd->add_option("--shape", shape, "two_part_cylinder | lidded_pot | four_leg_chair")->required();
    synth_cmd->add_option("--points", points, "Number of points (>= 100)")->check(CLI::Range(100, 100000000));
    synth_cmd->add_option("--seed", synth_seed, "Sampling seed");
    synth_cmd->add_option("--out", synth_out, "Output directory")->required();

    CLI11_PARSE(app, argc, argv);
    spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);

    if (*run_cmd) {
        partlift::PipelineConfig config;
        try {
            config = resolve_config(run, *run_cmd);
        } catch (const std::exception& e) {
            spdlog::error("{}", e.what());
            return partlift::kExitBadInput;
        }
        return partlift::cmd_run(run.manifest, config, run.out_dir, run.colorize);
    }
    if (*eval_cmd) return partlift::cmd_eval(pred_dir, eval_manifest, report, include_background);
    if (*synth_cmd) return partlift::cmd_synth(shape, points, synth_seed, synth_out);
    return partlift::kExitBadInput;
}
