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

#include "partlift/geometry/knn.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>

namespace partlift {

NeighborGraph::NeighborGraph(std::size_t point_count, std::size_t k, std::vector<std::uint32_t> adjacency)
    : point_count_(point_count),
      k_(k),
      row_size_(point_count > 0 ? std::min(k, point_count - 1) : 0),
      adjacency_(std::move(adjacency)) {
    if (adjacency_.size() != point_count_ * row_size_) {
        throw std::invalid_argument("adjacency size does not match point_count * min(k, N-1)");
    }
    for (std::size_t i = 0; i < point_count_; ++i) {
        for (auto j : neighbors(i)) {
            if (j == i || j >= point_count_) {
                throw std::invalid_argument("invalid neighbor entry in row " + std::to_string(i));
            }
        }
    }
}

namespace {

struct Candidate {
    double dist2;
    std::uint32_t index;
    bool operator<(const Candidate& o) const {
        return dist2 < o.dist2 || (dist2 == o.dist2 && index < o.index);
    }
};

class KdTree {
public:
    explicit KdTree(std::span<const Vec3> points) : points_(points), order_(points.size()) {
        std::iota(order_.begin(), order_.end(), 0u);
        nodes_.reserve(2 * points.size() / kLeafSize + 2);
        build(0, order_.size());
    }

    // Fills `out` with the m best candidates (excluding `self`), ascending.
    void query(std::uint32_t self, std::size_t m, std::vector<Candidate>& out) const {
        std::priority_queue<Candidate> heap;  // max-heap: top is the current worst
        search(0, points_[self], self, m, heap);
        out.resize(heap.size());
        for (std::size_t i = heap.size(); i-- > 0;) {
            out[i] = heap.top();
            heap.pop();
        }
    }

private:
    static constexpr std::size_t kLeafSize = 16;

    struct Node {
        std::size_t begin, end;
        int axis = -1;  // -1 for leaves
        double split = 0.0;
        std::size_t left = 0, right = 0;
    };

    std::size_t build(std::size_t begin, std::size_t end) {
        const std::size_t id = nodes_.size();
        nodes_.push_back(Node{begin, end});
        if (end - begin <= kLeafSize) return id;

        Vec3 lo = points_[order_[begin]], hi = lo;
        for (std::size_t i = begin; i < end; ++i) {
            lo = lo.cwiseMin(points_[order_[i]]);
            hi = hi.cwiseMax(points_[order_[i]]);
        }
        int axis = 0;
        (hi - lo).maxCoeff(&axis);
        if (hi[axis] == lo[axis]) return id;  // all coincident: keep as leaf

        const std::size_t mid = begin + (end - begin) / 2;
        std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                         [&](std::uint32_t a, std::uint32_t b) { return points_[a][axis] < points_[b][axis]; });
        const double split = points_[order_[mid]][axis];
        const std::size_t left = build(begin, mid);
        const std::size_t right = build(mid, end);
        nodes_[id].axis = axis;
        nodes_[id].split = split;
        nodes_[id].left = left;
        nodes_[id].right = right;
        return id;
    }

    void search(std::size_t node_id, const Vec3& q, std::uint32_t self, std::size_t m,
                std::priority_queue<Candidate>& heap) const {
        const Node& node = nodes_[node_id];
        if (node.axis < 0) {
            for (std::size_t i = node.begin; i < node.end; ++i) {
                const std::uint32_t idx = order_[i];
                if (idx == self) continue;
                const Vec3& p = points_[idx];
                const double dx = p.x() - q.x(), dy = p.y() - q.y(), dz = p.z() - q.z();
                const Candidate c{dx * dx + dy * dy + dz * dz, idx};
                if (heap.size() < m) {
                    heap.push(c);
                } else if (c < heap.top()) {
                    heap.pop();
                    heap.push(c);
                }
            }
            return;
        }
        // Left subtree holds coordinates <= split, right holds >= split.
        const double diff = q[node.axis] - node.split;
        const std::size_t near = diff <= 0 ? node.left : node.right;
        const std::size_t far = diff <= 0 ? node.right : node.left;
        search(near, q, self, m, heap);
        // Equal distance must still be explored for the index tie-break.
        if (heap.size() < m || diff * diff <= heap.top().dist2) search(far, q, self, m, heap);
    }

    std::span<const Vec3> points_;
    std::vector<std::uint32_t> order_;
    std::vector<Node> nodes_;
};

}  // namespace

NeighborGraph knn(const PointCloud& cloud, std::size_t k) {
    const std::size_t n = cloud.size();
    if (n < 2) throw std::invalid_argument("knn requires at least two points");
    if (k == 0) throw std::invalid_argument("knn requires k >= 1");
    const std::size_t m = std::min(k, n - 1);

    KdTree tree(cloud.positions());
    std::vector<std::uint32_t> adjacency(n * m);
    std::vector<Candidate> best;
    for (std::size_t i = 0; i < n; ++i) {
        tree.query(static_cast<std::uint32_t>(i), m, best);
        for (std::size_t j = 0; j < m; ++j) adjacency[i * m + j] = best[j].index;
    }
    return NeighborGraph(n, k, std::move(adjacency));
}

}  // namespace partlift
