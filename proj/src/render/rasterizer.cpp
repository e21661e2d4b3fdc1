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

#include "partlift/render/rasterizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "partlift/parallel.hpp"

namespace partlift {
namespace {

// Paints the pixels whose center ray meets the disc of `radius` around
// `center` in the plane with `normal`, at the ray's depth on that plane
// pushed back by `radius`. The offset keeps tangent planes of a curved
// surface from hiding its own neighboring samples; surfels only occlude
// geometry lying further back than their extent.
template <class Paint>
void paint_surfel(const CameraFrame& frame, ImageSize size, const Vec3& center, const Vec3& normal, double radius,
                  const PixelProjection& proj, Paint&& paint) {
    const int r = std::min(kMaxSurfelRadiusPx, static_cast<int>(std::ceil(frame.focal_px() * radius / proj.depth)) + 1);
    if (proj.px + r < 0 || proj.py + r < 0 || proj.px - r >= size.width || proj.py - r >= size.height) return;
    const int x0 = static_cast<int>(std::max<std::int64_t>(0, proj.px - r));
    const int x1 = static_cast<int>(std::min<std::int64_t>(size.width - 1, proj.px + r));
    const int y0 = static_cast<int>(std::max<std::int64_t>(0, proj.py - r));
    const int y1 = static_cast<int>(std::min<std::int64_t>(size.height - 1, proj.py + r));
    const double plane = normal.dot(center - frame.eye());
    const double radius2 = radius * radius;
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            const Vec3 ray = frame.pixel_ray(x, y);
            const double denom = normal.dot(ray);
            if (std::abs(denom) < 1e-12) continue;
            const double t = plane / denom;
            if (!(t > 0.0)) continue;
            if ((frame.eye() + t * ray - center).squaredNorm() > radius2) continue;
            paint(static_cast<std::size_t>(y) * size.width + x, t + radius);
        }
    }
}

}  // namespace

std::vector<double> surfel_radii(const PointCloud& cloud, const NeighborGraph& graph, double scale) {
    if (graph.point_count() != cloud.size()) throw std::invalid_argument("neighbor graph was built over a different cloud");
    if (!(scale >= 0.0)) throw std::invalid_argument("surfel scale must be nonnegative");
    const auto positions = cloud.positions();
    std::vector<double> radii(cloud.size(), 0.0);
    for (std::size_t p = 0; p < cloud.size(); ++p) {
        double far2 = 0.0;
        for (auto q : graph.neighbors(p)) far2 = std::max(far2, (positions[q] - positions[p]).squaredNorm());
        radii[p] = scale * std::sqrt(far2);
    }
    return radii;
}


std::size_t ViewRender::visible_count() const {
    return static_cast<std::size_t>(std::count(visible.begin(), visible.end(), std::uint8_t{1}));
}

ViewRender render_view(const PointCloud& cloud, const CameraPose& pose, const RenderSettings& settings,
                       int view_index) {
    if (settings.splat_radius_px < 0) throw std::invalid_argument("splat radius must be nonnegative");
    if (!(settings.depth_tolerance > 0.0)) throw std::invalid_argument("depth tolerance must be positive");
    const bool surfels = !settings.surfel_radius.empty();
    if (surfels) {
        if (settings.surfel_radius.size() != cloud.size()) {
            throw std::invalid_argument("surfel radius count does not match point count");
        }
        if (!cloud.has_normals()) throw std::invalid_argument("surfel splatting requires normals");
    }
    const CameraFrame frame(pose);
    const ImageSize size = pose.image_size;
    const std::size_t n = cloud.size();
    const auto positions = cloud.positions();
    const auto colors = cloud.colors();

    ViewRender out;
    out.view_index = view_index;
    out.pose = pose;
    out.image = RgbImage(size, Rgb{255, 255, 255});
    out.depth.assign(size.pixel_count(), kEmptyDepth);
    out.point_index.assign(size.pixel_count(), kNoPoint);
    out.visible.assign(n, 0);
    out.point_pixel.assign(n, kNoPoint);
    out.depth_slack = settings.depth_tolerance * 2.0 * cloud.bounding_radius();

    const int r = settings.splat_radius_px;
    const std::int64_t r2 = static_cast<std::int64_t>(r) * r;
    std::vector<std::optional<PixelProjection>> projections(n);

    auto paint = [&](std::size_t i, double depth, std::size_t p) {
        // Strict comparison: on equal depth the earlier (lower) index keeps the pixel.
        if (depth < out.depth[i]) {
            out.depth[i] = depth;
            out.point_index[i] = static_cast<std::int32_t>(p);
            out.image.pixels[i] = colors[p];
        }
    };

    for (std::size_t p = 0; p < n; ++p) {
        projections[p] = frame.project(positions[p]);
        if (!projections[p]) continue;
        const PixelProjection& proj = *projections[p];
        if (surfels && settings.surfel_radius[p] > 0.0) paint_surfel(frame, size, positions[p], cloud.normals()[p],
                                                                     settings.surfel_radius[p], proj, [&](std::size_t i, double d) { paint(i, d, p); });
        // Discs entirely outside the image contribute nothing.
        if (proj.px + r < 0 || proj.py + r < 0 || proj.px - r >= size.width || proj.py - r >= size.height) continue;
        const int x0 = static_cast<int>(std::max<std::int64_t>(0, proj.px - r));
        const int x1 = static_cast<int>(std::min<std::int64_t>(size.width - 1, proj.px + r));
        const int y0 = static_cast<int>(std::max<std::int64_t>(0, proj.py - r));
        const int y1 = static_cast<int>(std::min<std::int64_t>(size.height - 1, proj.py + r));
        for (int y = y0; y <= y1; ++y) {
            const std::int64_t dy = y - proj.py;
            for (int x = x0; x <= x1; ++x) {
                const std::int64_t dx = x - proj.px;
                if (dx * dx + dy * dy > r2) continue;
                paint(static_cast<std::size_t>(y) * size.width + x, proj.depth, p);
            }
        }
    }

    for (std::size_t p = 0; p < n; ++p) {
        if (!projections[p] || !projections[p]->in_bounds(size)) continue;
        const PixelProjection& proj = *projections[p];
        const std::size_t i = static_cast<std::size_t>(proj.py) * size.width + static_cast<std::size_t>(proj.px);
        out.point_pixel[p] = static_cast<std::int32_t>(i);
        if (out.depth[i] >= proj.depth - out.depth_slack) out.visible[p] = 1;
    }
    return out;
}

std::vector<ViewRender> render_views(const PointCloud& cloud, const std::vector<CameraPose>& poses,
                                     const RenderSettings& settings, int jobs) {
    std::vector<ViewRender> renders(poses.size());
    parallel_for(poses.size(), jobs, [&](std::size_t k) {
        renders[k] = render_view(cloud, poses[k], settings, static_cast<int>(k));
    });
    return renders;
}

}  // namespace partlift
