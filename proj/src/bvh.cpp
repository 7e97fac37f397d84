#include "wildsimp/bvh.hpp"

#include <algorithm>
#include <numeric>

namespace wildsimp {

namespace {

Aabb triangle_box(const Triangle& t) {
    Aabb b;
    for (const auto& p : t) b.extend(p);
    return b;
}

bool better(double d2, std::uint32_t id, const Bvh::Hit& best) {
    return d2 < best.cp.squared_distance || (d2 == best.cp.squared_distance && id < best.id);
}

}  // namespace

double box_distance_squared(const Aabb& a, const Aabb& b) {
    double d2 = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double gap = std::max({0.0, a.lo[k] - b.hi[k], b.lo[k] - a.hi[k]});
        d2 += gap * gap;
    }
    return d2;
}

double point_box_distance_squared(const Point3& p, const Aabb& b) {
    double d2 = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double gap = std::max({0.0, b.lo[k] - p[k], p[k] - b.hi[k]});
        d2 += gap * gap;
    }
    return d2;
}

Bvh::Bvh(std::vector<Triangle> triangles, std::vector<std::uint32_t> ids, std::uint32_t leaf_size)
    : triangles_(std::move(triangles)), ids_(std::move(ids)) {
    if (ids_.size() != triangles_.size()) throw std::invalid_argument("Bvh: id count mismatch");
    if (triangles_.empty()) return;
    prim_boxes_.reserve(triangles_.size());
    for (const auto& t : triangles_) prim_boxes_.push_back(triangle_box(t));
    nodes_.reserve(2 * triangles_.size() / std::max(1u, leaf_size) + 1);
    build(0, static_cast<std::uint32_t>(triangles_.size()), std::max(1u, leaf_size));
}

Bvh Bvh::from_complex(const SimplicialComplex2& mesh, std::uint32_t leaf_size) {
    std::vector<Triangle> tris;
    std::vector<std::uint32_t> ids;
    tris.reserve(mesh.live_face_count());
    ids.reserve(mesh.live_face_count());
    for (FaceId f = 0; f < mesh.face_capacity(); ++f) {
        if (!mesh.face(f).alive) continue;
        tris.push_back(mesh.face_points(f));
        ids.push_back(f);
    }
    return Bvh(std::move(tris), std::move(ids), leaf_size);
}

std::uint32_t Bvh::build(std::uint32_t first, std::uint32_t count, std::uint32_t leaf_size) {
    const auto index = static_cast<std::uint32_t>(nodes_.size());
    nodes_.emplace_back();
    Aabb box, centroids;
    for (std::uint32_t k = first; k < first + count; ++k) {
        box.extend(prim_boxes_[k]);
        centroids.extend(prim_boxes_[k].center());
    }
    nodes_[index].box = box;
    if (count <= leaf_size) {
        nodes_[index].first = first;
        nodes_[index].count = count;
        return index;
    }

    const Vec3 extent = centroids.hi - centroids.lo;
    int axis = 0;
    if (extent.y > extent[axis]) axis = 1;
    if (extent.z > extent[axis]) axis = 2;

    // Median split on centroids; reorder the three parallel arrays together.
    std::vector<std::uint32_t> order(count);
    std::iota(order.begin(), order.end(), first);
    const std::uint32_t half = count / 2;
    std::nth_element(order.begin(), order.begin() + half, order.end(), [&](std::uint32_t a, std::uint32_t b) {
        const double ca = prim_boxes_[a].center()[axis], cb = prim_boxes_[b].center()[axis];
        return ca < cb || (ca == cb && ids_[a] < ids_[b]);
    });
    std::vector<Triangle> tris(count);
    std::vector<std::uint32_t> ids(count);
    std::vector<Aabb> boxes(count);
    for (std::uint32_t k = 0; k < count; ++k) {
        tris[k] = triangles_[order[k]];
        ids[k] = ids_[order[k]];
        boxes[k] = prim_boxes_[order[k]];
    }
    std::copy(tris.begin(), tris.end(), triangles_.begin() + first);
    std::copy(ids.begin(), ids.end(), ids_.begin() + first);
    std::copy(boxes.begin(), boxes.end(), prim_boxes_.begin() + first);

    const std::uint32_t left = build(first, half, leaf_size);
    const std::uint32_t right = build(first + half, count - half, leaf_size);
    nodes_[index].first = left;
    nodes_[index].right = right;
    nodes_[index].count = 0;
    return index;
}

void Bvh::query_box(const Aabb& box, double radius, std::vector<std::uint32_t>& out) const {
    if (nodes_.empty()) return;
    const double r2 = radius * radius;
    std::vector<std::uint32_t> stack{0};
    while (!stack.empty()) {
        const Node& node = nodes_[stack.back()];
        stack.pop_back();
        if (box_distance_squared(node.box, box) > r2) continue;
        if (node.count > 0) {
            for (std::uint32_t k = node.first; k < node.first + node.count; ++k)
                if (box_distance_squared(prim_boxes_[k], box) <= r2) out.push_back(ids_[k]);
        } else {
            stack.push_back(node.first);
            stack.push_back(node.right);
        }
    }
}

Bvh::Hit Bvh::closest(const Point3& p) const {
    Hit best;
    best.cp.squared_distance = std::numeric_limits<double>::infinity();
    if (nodes_.empty()) return best;
    std::vector<std::uint32_t> stack{0};
    while (!stack.empty()) {
        const Node& node = nodes_[stack.back()];
        stack.pop_back();
        if (point_box_distance_squared(p, node.box) > best.cp.squared_distance) continue;
        if (node.count > 0) {
            for (std::uint32_t k = node.first; k < node.first + node.count; ++k) {
                if (point_box_distance_squared(p, prim_boxes_[k]) > best.cp.squared_distance) continue;
                const ClosestPoint cp = closest_point_on_triangle(p, triangles_[k]);
                if (better(cp.squared_distance, ids_[k], best)) {
                    best.id = ids_[k];
                    best.cp = cp;
                }
            }
        } else {
            const double dl = point_box_distance_squared(p, nodes_[node.first].box);
            const double dr = point_box_distance_squared(p, nodes_[node.right].box);
            // Push the farther child first so the nearer one is visited next.
            if (dl <= dr) {
                stack.push_back(node.right);
                stack.push_back(node.first);
            } else {
                stack.push_back(node.first);
                stack.push_back(node.right);
            }
        }
    }
    return best;
}

bool Bvh::check_structure() const {
    if (nodes_.empty()) return triangles_.empty();
    std::vector<int> seen(triangles_.size(), 0);
    auto contains = [](const Aabb& outer, const Aabb& inner) {
        for (int k = 0; k < 3; ++k)
            if (inner.lo[k] < outer.lo[k] || inner.hi[k] > outer.hi[k]) return false;
        return true;
    };
    std::vector<std::uint32_t> stack{0};
    while (!stack.empty()) {
        const Node& node = nodes_[stack.back()];
        stack.pop_back();
        if (node.count > 0) {
            for (std::uint32_t k = node.first; k < node.first + node.count; ++k) {
                ++seen[k];
                if (!contains(node.box, prim_boxes_[k])) return false;
            }
        } else {
            for (std::uint32_t child : {node.first, node.right}) {
                if (!contains(node.box, nodes_[child].box)) return false;
                stack.push_back(child);
            }
        }
    }
    return std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; });
}

Bvh::Hit closest_point_brute_force(const Point3& p, std::span<const Triangle> triangles,
                                   std::span<const std::uint32_t> ids) {
    Bvh::Hit best;
    best.cp.squared_distance = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < triangles.size(); ++k) {
        const ClosestPoint cp = closest_point_on_triangle(p, triangles[k]);
        if (better(cp.squared_distance, ids[k], best)) {
            best.id = ids[k];
            best.cp = cp;
        }
    }
    return best;
}

}  // namespace wildsimp
