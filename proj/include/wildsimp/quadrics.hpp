#pragma once

#include <array>
#include <optional>

#include "wildsimp/core_types.hpp"

namespace wildsimp {

/// Plane through `p` with unit normal `n`: (n n^T, -n n^T p, p^T n n^T p).
/// Throws std::invalid_argument unless |n| = 1 within 1e-6.
Quadric plane_quadric(const Vec3& unit_normal, const Point3& p);

/// Plane quadric of the triangle's supporting plane; nullopt for zero area.
std::optional<Quadric> triangle_quadric(const Point3& vi, const Point3& vj, const Point3& vk);

/// Sum over the live faces around `v` of (area / 3) * triangle quadric.
Quadric vertex_quadric(const SimplicialComplex2& mesh, VertexId v);

/// Cross-product quadric of segment (a, b): evaluates to 2 * area(a, b, x)^2.
Quadric area_summand(const Point3& a, const Point3& b);

enum class AreaEdgeSet {
    Boundary,  // border edges (one incident face) touching an endpoint
    FullLink,  // every edge of the one-ring faces
};

/// Sum of area_summand over the edges of the faces around either endpoint of
/// `e`, restricted by `set`.
Quadric area_quadric_for_edge(const SimplicialComplex2& mesh, EdgeId e, AreaEdgeSet set = AreaEdgeSet::Boundary);

/// Area quadric attached to a single vertex: the same sum over the faces
/// around `v` only. Used by memory-mode accumulation of the area term.
Quadric area_quadric_for_vertex(const SimplicialComplex2& mesh, VertexId v, AreaEdgeSet set = AreaEdgeSet::Boundary);

struct Placement {
    Point3 position{};
    double value = 0.0;
    bool well_conditioned = false;
    int fallback = -1;  // index into the fallback list when one won, else -1
};

inline constexpr double kSingularValueCutoff = 1e-9;

/// Minimizer of `q`. Well-conditioned systems (sigma_min >= 1e-9 sigma_max)
/// are solved directly; otherwise the truncated-SVD pseudoinverse solution
/// nearest fallbacks[0] is used. A fallback with a lower error wins.
/// `regularizer` adds sigma^2 |x - fallbacks[0]|^2 to the minimized function.
Placement optimal_placement(const Quadric& q, const std::array<Point3, 3>& fallbacks, double regularizer = 0.0);

}  // namespace wildsimp
