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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "partlift/geometry/knn.hpp"
#include "partlift/geometry/normals.hpp"
#include "partlift/geometry/ply.hpp"
#include "support.hpp"

using namespace partlift;
using partlift::testing::TempDir;

namespace {

std::vector<std::vector<std::uint32_t>> brute_force_knn(const PointCloud& cloud, std::size_t k) {
    const auto pos = cloud.positions();
    const std::size_t n = cloud.size();
    std::vector<std::vector<std::uint32_t>> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::pair<double, std::uint32_t>> all;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) all.emplace_back((pos[j] - pos[i]).squaredNorm(), static_cast<std::uint32_t>(j));
        }
        std::sort(all.begin(), all.end());
        for (std::size_t m = 0; m < std::min(k, n - 1); ++m) rows[i].push_back(all[m].second);
    }
    return rows;
}

PointCloud plane_cloud(std::size_t side, double spacing = 0.1) {
    std::vector<Vec3> pos;
    for (std::size_t i = 0; i < side; ++i) {
        for (std::size_t j = 0; j < side; ++j) pos.emplace_back(i * spacing, j * spacing, 0.0);
    }
    return PointCloud(pos, std::vector<Rgb>(pos.size(), Rgb{200, 200, 200}));
}

}  // namespace

TEST_CASE("point cloud rejects inconsistent attributes") {
    CHECK_THROWS_AS(PointCloud({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(PointCloud({Vec3::Zero()}, {}), std::invalid_argument);
    CHECK_THROWS_AS(PointCloud({Vec3::Zero()}, {Rgb{}}, std::vector<Vec3>{Vec3(0, 0, 2)}), std::invalid_argument);
    CHECK_THROWS_AS(PointCloud({Vec3::Zero()}, {Rgb{}}, std::nullopt, std::vector<int>{1, 2}), std::invalid_argument);

    const PointCloud c({Vec3(1, 0, 0), Vec3(-1, 0, 0)}, {Rgb{}, Rgb{}});
    CHECK(c.centroid().isZero());
    CHECK(c.bounding_radius() == doctest::Approx(1.0));
    CHECK_THROWS_AS(c.labels(), std::logic_error);
    CHECK_THROWS_AS(c.normals(), std::logic_error);
}

TEST_CASE("ply: single red vertex") {
    TempDir dir("ply1");
    partlift::testing::write_file(dir / "one.ply",
                                  "ply\nformat ascii 1.0\nelement vertex 1\n"
                                  "property float x\nproperty float y\nproperty float z\n"
                                  "property uchar red\nproperty uchar green\nproperty uchar blue\n"
                                  "end_header\n0 0 0 255 0 0\n");
    const PointCloud c = load_ply(dir / "one.ply");
    REQUIRE(c.size() == 1);
    CHECK(c.colors()[0] == Rgb{255, 0, 0});
    CHECK(c.positions()[0].isZero());
    CHECK_FALSE(c.has_labels());
    CHECK_FALSE(c.has_normals());
}

TEST_CASE("ply: binary round trip is bit exact") {
    std::mt19937_64 rng(11);
    PointCloud c = partlift::testing::random_cloud(rng, 100, 3.0);
    std::vector<int> labels(100);
    for (auto& l : labels) l = static_cast<int>(rng() % 5) - 1;
    std::vector<Vec3> normals(100);
    for (auto& n : normals) n = Vec3(partlift::testing::uniform(rng, -1, 1), 0.3, 1.0).normalized();
    c = c.with_labels(labels).with_normals(normals);

    TempDir dir("ply2");
    write_ply(c, dir / "c.ply");
    const PointCloud back = load_ply(dir / "c.ply");
    REQUIRE(back.size() == 100);
    for (std::size_t i = 0; i < 100; ++i) {
        CHECK(back.positions()[i] == c.positions()[i]);
        CHECK(back.colors()[i] == c.colors()[i]);
        CHECK(back.labels()[i] == c.labels()[i]);
        CHECK((back.normals()[i] - c.normals()[i]).norm() < 1e-12);
    }
}

TEST_CASE("ply: custom label property name") {
    std::mt19937_64 rng(5);
    const PointCloud c = partlift::testing::random_cloud(rng, 10).with_labels(std::vector<int>(10, 3));
    TempDir dir("ply3");
    write_ply(c, dir / "c.ply", false, "part_id");
    CHECK_FALSE(load_ply(dir / "c.ply").has_labels());
    const PointCloud back = load_ply(dir / "c.ply", "part_id");
    REQUIRE(back.has_labels());
    CHECK(back.labels()[7] == 3);
}

TEST_CASE("ply: truncated payload names the problem") {
    std::string body = "ply\nformat ascii 1.0\nelement vertex 10\n"
                       "property float x\nproperty float y\nproperty float z\n"
                       "property uchar red\nproperty uchar green\nproperty uchar blue\nend_header\n";
    for (int i = 0; i < 9; ++i) body += "0 0 " + std::to_string(i) + " 1 2 3\n";
    TempDir dir("ply4");
    partlift::testing::write_file(dir / "t.ply", body);
    try {
        load_ply(dir / "t.ply");
        FAIL("expected a parse error");
    } catch (const PlyError& e) {
        CHECK(std::string(e.what()).find("truncated payload") != std::string::npos);
    }

    // Binary payload one vertex short.
    std::mt19937_64 rng(1);
    write_ply(partlift::testing::random_cloud(rng, 10), dir / "b.ply");
    std::string bytes = partlift::testing::read_file(dir / "b.ply");
    bytes.resize(bytes.size() - 5);
    partlift::testing::write_file(dir / "b.ply", bytes);
    CHECK_THROWS_WITH_AS(load_ply(dir / "b.ply"), doctest::Contains("truncated payload"), PlyError);
}

TEST_CASE("ply: missing mandatory property is named") {
    TempDir dir("ply5");
    partlift::testing::write_file(dir / "m.ply",
                                  "ply\nformat ascii 1.0\nelement vertex 1\n"
                                  "property float x\nproperty float y\nproperty float z\n"
                                  "property uchar green\nproperty uchar blue\nend_header\n0 0 0 1 2\n");
    CHECK_THROWS_WITH_AS(load_ply(dir / "m.ply"), doctest::Contains("'red'"), PlyError);
    partlift::testing::write_file(dir / "bad.ply", "not a ply\n");
    CHECK_THROWS_AS(load_ply(dir / "bad.ply"), PlyError);
    CHECK_THROWS_AS(load_ply(dir / "absent.ply"), PlyError);
}

TEST_CASE("ply: colorize by label") {
    const PointCloud c({Vec3::Zero(), Vec3::UnitX(), Vec3::UnitY()}, {Rgb{1, 2, 3}, Rgb{1, 2, 3}, Rgb{1, 2, 3}},
                       std::nullopt, std::vector<int>{0, 1, kBackground});
    TempDir dir("ply6");
    write_ply(c, dir / "a.ply", true);
    write_ply(c, dir / "b.ply", true);
    CHECK(partlift::testing::read_file(dir / "a.ply") == partlift::testing::read_file(dir / "b.ply"));
    const PointCloud back = load_ply(dir / "a.ply");
    CHECK(back.colors()[0] == label_color(0));
    CHECK(back.colors()[1] == label_color(1));
    CHECK(back.colors()[2] == Rgb{128, 128, 128});
    CHECK_FALSE(label_color(0) == label_color(1));

    CHECK_THROWS_AS(write_ply(c.without_labels(), dir / "c.ply", true), PlyError);
}

TEST_CASE("knn: collinear worked case") {
    const PointCloud c({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(3, 0, 0)}, std::vector<Rgb>(3));
    const NeighborGraph g = knn(c, 1);
    CHECK(g.neighbors(0)[0] == 1);
    CHECK(g.neighbors(1)[0] == 0);
    CHECK(g.neighbors(2)[0] == 1);
}

TEST_CASE("knn: k >= N clamps each row to N-1") {
    std::mt19937_64 rng(3);
    const PointCloud c = partlift::testing::random_cloud(rng, 7);
    const NeighborGraph g = knn(c, 50);
    CHECK(g.k() == 50);
    CHECK(g.row_size() == 6);
    for (std::size_t i = 0; i < 7; ++i) {
        auto row = g.neighbors(i);
        std::vector<std::uint32_t> sorted(row.begin(), row.end());
        std::sort(sorted.begin(), sorted.end());
        CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
        CHECK(std::find(sorted.begin(), sorted.end(), i) == sorted.end());
    }
    CHECK_THROWS_AS(knn(c, 0), std::invalid_argument);
    CHECK_THROWS_AS(knn(PointCloud({Vec3::Zero()}, {Rgb{}}), 1), std::invalid_argument);
}

TEST_CASE("knn: matches brute force on random clouds (property)") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = 2 + rng() % 199;
        const std::size_t k = 1 + rng() % 12;
        PointCloud c = partlift::testing::random_cloud(rng, n);
        if (trial % 4 == 0) {
            // Grid coordinates force many exact distance ties.
            std::vector<Vec3> pos(n);
            for (auto& p : pos) p = Vec3(double(rng() % 4), double(rng() % 4), double(rng() % 3));
            c = PointCloud(pos, std::vector<Rgb>(n));
        }
        const NeighborGraph g = knn(c, k);
        const auto expected = brute_force_knn(c, k);
        for (std::size_t i = 0; i < n; ++i) {
            auto row = g.neighbors(i);
            REQUIRE(std::vector<std::uint32_t>(row.begin(), row.end()) == expected[i]);
        }
    }
}

TEST_CASE("knn: random 50-point cloud with k=5") {
    std::mt19937_64 rng(50);
    const PointCloud c = partlift::testing::random_cloud(rng, 50);
    const NeighborGraph g = knn(c, 5);
    const auto expected = brute_force_knn(c, 5);
    for (std::size_t i = 0; i < 50; ++i) {
        auto row = g.neighbors(i);
        CHECK(std::vector<std::uint32_t>(row.begin(), row.end()) == expected[i]);
    }
}

TEST_CASE("normals: plane gives +-z") {
    const PointCloud c = plane_cloud(12);
    const PointCloud n = estimate_normals(c, knn(c, 8));
    for (const auto& v : n.normals()) {
        CHECK(std::abs(std::abs(v.z()) - 1.0) < 1e-5);
        CHECK(std::abs(v.norm() - 1.0) < 1e-12);
    }
}

TEST_CASE("normals: sphere normals are radial and point outward") {
    const auto pts = partlift::testing::sphere_points(2000);
    const PointCloud c(pts, std::vector<Rgb>(pts.size()));
    const PointCloud n = estimate_normals(c, knn(c, 10));
    double worst = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double cosang = std::clamp(n.normals()[i].dot(pts[i].normalized()), -1.0, 1.0);
        worst = std::max(worst, std::acos(cosang) * 180.0 / 3.14159265358979323846);
    }
    CHECK(worst < 5.0);
}

TEST_CASE("normals: invariant under uniform scaling (property)") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 10; ++trial) {
        const PointCloud c = partlift::testing::random_cloud(rng, 150);
        const double s = std::exp(partlift::testing::uniform(rng, -3.0, 3.0));
        std::vector<Vec3> scaled(c.positions().begin(), c.positions().end());
        for (auto& p : scaled) p *= s;
        const PointCloud cs(scaled, std::vector<Rgb>(c.colors().begin(), c.colors().end()));
        const PointCloud a = estimate_normals(c, knn(c, 8));
        const PointCloud b = estimate_normals(cs, knn(cs, 8));
        for (std::size_t i = 0; i < c.size(); ++i) {
            CHECK((a.normals()[i] - b.normals()[i]).norm() < 1e-5);
            CHECK(std::abs(b.normals()[i].norm() - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("normals: repeated-point neighborhood falls back to +z") {
    std::vector<Vec3> pos(6, Vec3(1, 2, 3));
    pos.push_back(Vec3(10, 0, 0));
    pos.push_back(Vec3(10, 1, 0));
    pos.push_back(Vec3(11, 0, 0));
    pos.push_back(Vec3(10, 0, 1));
    const PointCloud c(pos, std::vector<Rgb>(pos.size()));
    std::vector<std::size_t> degenerate;
    const PointCloud n = estimate_normals(c, knn(c, 4), &degenerate);
    for (std::size_t i = 0; i < 6; ++i) CHECK(n.normals()[i] == Vec3(0, 0, 1));
    CHECK(degenerate == std::vector<std::size_t>{0, 1, 2, 3, 4, 5});
    CHECK_THROWS_AS(estimate_normals(c, knn(c, 2)), std::invalid_argument);
}
