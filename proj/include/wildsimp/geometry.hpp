#pragma once

#include <array>

#include "wildsimp/core_types.hpp"

namespace wildsimp {

using Triangle = std::array<Point3, 3>;

struct ClosestPoint {
    Point3 point{};
    std::array<double, 3> bary{1.0, 0.0, 0.0};  // weights of the three corners
    double squared_distance = 0.0;
};

/// Closest point on a closed triangle (Voronoi-region walk). Handles
/// degenerate triangles by falling back to the closest point on the edges.
ClosestPoint closest_point_on_triangle(const Point3& p, const Triangle& tri);

/// Closest point on segment [a, b]; bary holds (1 - t, t, 0).
ClosestPoint closest_point_on_segment(const Point3& p, const Point3& a, const Point3& b);

struct SegmentPair {
    Point3 p1{}, p2{};
    double squared_distance = 0.0;
};

SegmentPair closest_points_segments(const Point3& p1, const Point3& q1, const Point3& p2, const Point3& q2);

/// Intersection of segment [a, b] with a triangle; returns true and the hit
/// point when the closed segment touches the closed triangle off-plane.
bool segment_triangle_intersection(const Point3& a, const Point3& b, const Triangle& tri, Point3& hit);

struct TriangleDistance {
    double distance = 0.0;
    Point3 p1{}, p2{};  // realize the minimum, p1 on the first triangle
};

TriangleDistance triangle_triangle_distance(const Triangle& t1, const Triangle& t2);

inline Vec3 triangle_normal(const Triangle& t) { return cross(t[1] - t[0], t[2] - t[0]); }
inline double triangle_area(const Triangle& t) { return 0.5 * norm(triangle_normal(t)); }

/// Offsets from the heaviest corner: corners and constant coordinates come
/// out exact.
inline Point3 interpolate(const Triangle& t, const std::array<double, 3>& w) {
    const int k = w[0] >= w[1] ? (w[0] >= w[2] ? 0 : 2) : (w[1] >= w[2] ? 1 : 2);
    const int k1 = (k + 1) % 3, k2 = (k + 2) % 3;
    return t[k] + (t[k1] - t[k]) * w[k1] + (t[k2] - t[k]) * w[k2];
}

}  // namespace wildsimp
