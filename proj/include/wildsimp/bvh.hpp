#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wildsimp/core_types.hpp"
#include "wildsimp/geometry.hpp"

namespace wildsimp {

/// Axis-aligned bounding-box tree over triangles. Each triangle carries a
/// caller-defined id (face id for complexes).
class Bvh {
public:
    struct Node {
        Aabb box;
        std::uint32_t first = 0;  // leaf: first primitive slot; inner: left child
        std::uint32_t count = 0;  // primitives in the leaf, 0 for inner nodes
        std::uint32_t right = 0;
    };

    struct Hit {
        std::uint32_t id = kInvalidId;
        ClosestPoint cp;
        bool valid() const { return id != kInvalidId; }
    };

    Bvh() = default;
    Bvh(std::vector<Triangle> triangles, std::vector<std::uint32_t> ids, std::uint32_t leaf_size = 4);

    /// Tree over the live faces of `mesh`; ids are face ids.
    static Bvh from_complex(const SimplicialComplex2& mesh, std::uint32_t leaf_size = 4);

    std::size_t size() const { return triangles_.size(); }
    bool empty() const { return triangles_.empty(); }
    const std::vector<Node>& nodes() const { return nodes_; }
    const Triangle& triangle(std::uint32_t slot) const { return triangles_[slot]; }
    std::uint32_t id(std::uint32_t slot) const { return ids_[slot]; }

    /// Appends ids of triangles whose bounding boxes are within `radius` of `box`.
    void query_box(const Aabb& box, double radius, std::vector<std::uint32_t>& out) const;

    /// Exact closest point over all triangles; ties resolve to the lowest id.
    Hit closest(const Point3& p) const;

    /// Every primitive in exactly one leaf and every node box enclosing its subtree.
    bool check_structure() const;

private:
    std::uint32_t build(std::uint32_t first, std::uint32_t count, std::uint32_t leaf_size);

    std::vector<Triangle> triangles_;
    std::vector<std::uint32_t> ids_;
    std::vector<Aabb> prim_boxes_;
    std::vector<Node> nodes_;
};

/// Brute-force closest point used as the reference for Bvh::closest.
Bvh::Hit closest_point_brute_force(const Point3& p, std::span<const Triangle> triangles,
                                   std::span<const std::uint32_t> ids);

double box_distance_squared(const Aabb& a, const Aabb& b);
double point_box_distance_squared(const Point3& p, const Aabb& b);

}  // namespace wildsimp
