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

#include "partlift/superpoints/superpoints.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace partlift {

SuperpointPartition SuperpointPartition::from_assignment(std::span<const std::uint32_t> assignment) {
    if (assignment.empty()) throw std::invalid_argument("superpoint assignment is empty");
    SuperpointPartition out;
    out.assignment_.resize(assignment.size());
    std::map<std::uint32_t, std::uint32_t> remap;
    for (std::size_t p = 0; p < assignment.size(); ++p) {
        auto [it, inserted] = remap.try_emplace(assignment[p], static_cast<std::uint32_t>(remap.size()));
        if (inserted) out.members_.emplace_back();
        out.assignment_[p] = it->second;
        out.members_[it->second].push_back(static_cast<std::uint32_t>(p));
    }
    out.check_invariants();
    return out;
}

void SuperpointPartition::check_invariants() const {
    std::vector<std::uint8_t> seen(assignment_.size(), 0);
    for (std::size_t i = 0; i < members_.size(); ++i) {
        if (members_[i].empty()) throw std::logic_error("superpoint " + std::to_string(i) + " is empty");
        if (!std::is_sorted(members_[i].begin(), members_[i].end())) {
            throw std::logic_error("superpoint " + std::to_string(i) + " members are not sorted");
        }
        for (auto p : members_[i]) {
            if (p >= assignment_.size()) throw std::logic_error("member index out of range");
            if (seen[p]) throw std::logic_error("point " + std::to_string(p) + " belongs to two superpoints");
            if (assignment_[p] != i) throw std::logic_error("assignment disagrees with member list");
            seen[p] = 1;
        }
    }
    if (std::find(seen.begin(), seen.end(), std::uint8_t{0}) != seen.end()) {
        throw std::logic_error("superpoints do not cover every point");
    }
}

namespace {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0u); }

    std::uint32_t find(std::uint32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    // The smaller root survives, so every root is its set's minimum element.
    std::uint32_t unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return a;
        if (b < a) std::swap(a, b);
        parent_[b] = a;
        return a;
    }

private:
    std::vector<std::uint32_t> parent_;
};

// Symmetrized, deduplicated k-NN adjacency in CSR form.
struct Adjacency {
    std::vector<std::size_t> offsets;
    std::vector<std::uint32_t> targets;

    std::span<const std::uint32_t> of(std::size_t p) const {
        return {targets.data() + offsets[p], offsets[p + 1] - offsets[p]};
    }
};

Adjacency symmetrize(const NeighborGraph& graph) {
    const std::size_t n = graph.point_count();
    std::vector<std::vector<std::uint32_t>> lists(n);
    for (std::size_t p = 0; p < n; ++p) {
        for (auto q : graph.neighbors(p)) {
            lists[p].push_back(q);
            lists[q].push_back(static_cast<std::uint32_t>(p));
        }
    }
    Adjacency adj;
    adj.offsets.resize(n + 1, 0);
    for (std::size_t p = 0; p < n; ++p) {
        auto& l = lists[p];
        std::sort(l.begin(), l.end());
        l.erase(std::unique(l.begin(), l.end()), l.end());
        adj.offsets[p + 1] = adj.offsets[p] + l.size();
    }
    adj.targets.reserve(adj.offsets[n]);
    for (auto& l : lists) adj.targets.insert(adj.targets.end(), l.begin(), l.end());
    return adj;
}

}  // namespace

SuperpointPartition build_superpoints(const PointCloud& cloud, const NeighborGraph& graph,
                                      const SuperpointParams& params) {
    if (!cloud.has_normals()) throw std::invalid_argument("build_superpoints requires normals");
    if (graph.point_count() != cloud.size()) {
        throw std::invalid_argument("neighbor graph was built over a different cloud");
    }
    const std::size_t n = cloud.size();
    const auto normals = cloud.normals();
    const auto colors = cloud.colors();
    const double min_abs_cos = std::cos(params.normal_angle_deg * std::numbers::pi / 180.0);
    const double max_color2 = params.color_dist * params.color_dist;

    const Adjacency adj = symmetrize(graph);

    auto color_close = [&](std::size_t p, std::size_t q) {
        const double dr = double(colors[p].r) - colors[q].r;
        const double dg = double(colors[p].g) - colors[q].g;
        const double db = double(colors[p].b) - colors[q].b;
        return dr * dr + dg * dg + db * db <= max_color2;
    };
    auto traversable = [&](std::size_t p, std::size_t q) {
        // Normal sign is arbitrary, so the angle is taken between lines.
        return std::abs(normals[p].dot(normals[q])) >= min_abs_cos && color_close(p, q);
    };

    DisjointSets components(n);
    for (std::size_t p = 0; p < n; ++p) {
        for (auto q : adj.of(p)) {
            if (q > p && traversable(p, q)) components.unite(static_cast<std::uint32_t>(p), q);
        }
    }

    // Fold undersized groups into the neighbor group with the most members
    // adjacent over color-compatible edges (edges across groups always fail
    // the full test, and creases are exactly where normals disagree) until no
    // further merge applies. Roots are minimum point indices, so iterating
    // roots in ascending order is the deterministic seed order.
    std::vector<std::vector<std::uint32_t>> members(n);
    for (std::size_t p = 0; p < n; ++p) members[components.find(static_cast<std::uint32_t>(p))].push_back(p);

    bool merged = params.min_size > 1;
    while (merged) {
        merged = false;
        for (std::uint32_t root = 0; root < n; ++root) {
            if (components.find(root) != root || members[root].size() >= params.min_size) continue;
            std::set<std::uint32_t> adjacent;
            for (auto p : members[root]) {
                for (auto q : adj.of(p)) {
                    if (components.find(q) != root && color_close(p, q)) adjacent.insert(q);
                }
            }
            std::map<std::uint32_t, std::size_t> edge_counts;
            for (auto q : adjacent) ++edge_counts[components.find(q)];
            if (edge_counts.empty()) continue;  // no compatible neighbor: stands alone
            auto best = edge_counts.begin();
            for (auto it = edge_counts.begin(); it != edge_counts.end(); ++it) {
                if (it->second > best->second) best = it;
            }
            const std::uint32_t keep = components.unite(root, best->first);
            const std::uint32_t gone = keep == root ? best->first : root;
            auto& dst = members[keep];
            dst.insert(dst.end(), members[gone].begin(), members[gone].end());
            std::vector<std::uint32_t>().swap(members[gone]);
            merged = true;
        }
    }

    std::vector<std::uint32_t> assignment(n);
    for (std::size_t p = 0; p < n; ++p) assignment[p] = components.find(static_cast<std::uint32_t>(p));
    return SuperpointPartition::from_assignment(assignment);
}

double superpoint_purity(const SuperpointPartition& partition, std::span<const int> gt_labels) {
    if (gt_labels.size() != partition.point_count()) {
        throw std::invalid_argument("label count " + std::to_string(gt_labels.size()) + " does not match point count " +
                                    std::to_string(partition.point_count()));
    }
    std::size_t majority_total = 0;
    for (std::size_t i = 0; i < partition.superpoint_count(); ++i) {
        std::map<int, std::size_t> counts;
        std::size_t best = 0;
        for (auto p : partition.members(i)) best = std::max(best, ++counts[gt_labels[p]]);
        majority_total += best;
    }
    return static_cast<double>(majority_total) / static_cast<double>(partition.point_count());
}

}  // namespace partlift
