#include "wildsimp/quadrics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "wildsimp/geometry.hpp"

namespace wildsimp {

Quadric plane_quadric(const Vec3& n, const Point3& p) {
    if (std::abs(norm(n) - 1.0) > 1e-6) throw std::invalid_argument("plane_quadric: normal is not unit length");
    Quadric q;
    q.a = {n.x * n.x, n.x * n.y, n.x * n.z, n.y * n.y, n.y * n.z, n.z * n.z};
    const double d = dot(n, p);
    q.b = n * -d;  // -A p = -n (n . p)
    q.c = d * d;   // p^T A p
    return q;
}

std::optional<Quadric> triangle_quadric(const Point3& vi, const Point3& vj, const Point3& vk) {
    const Vec3 n = cross(vj - vi, vk - vi);
    const double len = norm(n);
    if (!(len > 0.0)) return std::nullopt;
    return plane_quadric(n / len, vi);
}

Quadric vertex_quadric(const SimplicialComplex2& mesh, VertexId v) {
    Quadric q;
    for (FaceId f : mesh.vertex_faces(v)) {
        const auto pts = mesh.face_points(f);
        const auto tq = triangle_quadric(pts[0], pts[1], pts[2]);
        if (!tq) continue;
        q += (triangle_area(pts) / 3.0) * *tq;
    }
    return q;
}

Quadric area_summand(const Point3& a, const Point3& b) {
    // 0.5 |s x X + t|^2 with s = b - a, t = a x b; [s]x^T [s]x = |s|^2 I - s s^T.
    const Vec3 s = b - a;
    const Vec3 t = cross(a, b);
    const double s2 = squared_norm(s);
    Quadric q;
    q.a = {0.5 * (s2 - s.x * s.x), -0.5 * s.x * s.y, -0.5 * s.x * s.z,
           0.5 * (s2 - s.y * s.y), -0.5 * s.y * s.z, 0.5 * (s2 - s.z * s.z)};
    q.b = cross(s, t) * -0.5;
    q.c = 0.5 * squared_norm(t);
    return q;
}

namespace {

// Boundary mode keeps border edges touching one of `anchors`: the edges
// whose swept triangle changes when the anchors move. A side (a, x) is on
// the border when x shows up in exactly one face around a.
Quadric area_over_faces(const SimplicialComplex2& mesh, std::initializer_list<VertexId> anchors, AreaEdgeSet set) {
    static thread_local std::vector<std::pair<VertexId, VertexId>> sides;
    static thread_local std::vector<std::pair<VertexId, int>> seen;
    sides.clear();
    for (VertexId a : anchors) {
        seen.clear();
        for (FaceId f : mesh.vertex_faces(a)) {
            const auto& v = mesh.face(f).v;
            if (set == AreaEdgeSet::FullLink) {
                for (int k = 0; k < 3; ++k) sides.push_back(std::minmax(v[k], v[(k + 1) % 3]));
                continue;
            }
            for (VertexId x : v) {
                if (x == a) continue;
                auto it = std::find_if(seen.begin(), seen.end(), [x](const auto& s) { return s.first == x; });
                if (it == seen.end()) seen.push_back({x, 1});
                else ++it->second;
            }
        }
        for (auto [x, count] : seen)
            if (count == 1) sides.push_back(std::minmax(a, x));
    }
    std::sort(sides.begin(), sides.end());
    sides.erase(std::unique(sides.begin(), sides.end()), sides.end());
    Quadric q;
    for (auto [u, w] : sides) q += area_summand(mesh.position(u), mesh.position(w));
    return q;
}

}  // namespace

Quadric area_quadric_for_edge(const SimplicialComplex2& mesh, EdgeId e, AreaEdgeSet set) {
    const Edge& ed = mesh.edge(e);
    if (!ed.alive) throw std::invalid_argument("area_quadric_for_edge: dead edge");
    return area_over_faces(mesh, {ed.v[0], ed.v[1]}, set);
}

Quadric area_quadric_for_vertex(const SimplicialComplex2& mesh, VertexId v, AreaEdgeSet set) {
    return area_over_faces(mesh, {v}, set);
}

Placement optimal_placement(const Quadric& q, const std::array<Point3, 3>& fallbacks, double regularizer) {
    const Point3& seed = fallbacks[0];
    Eigen::Matrix3d A;
    A << q.a[0], q.a[1], q.a[2], q.a[1], q.a[3], q.a[4], q.a[2], q.a[4], q.a[5];
    Eigen::Vector3d b(q.b.x, q.b.y, q.b.z);
    const Eigen::Vector3d m(seed.x, seed.y, seed.z);
    if (regularizer > 0.0) {
        const double s2 = regularizer * regularizer;
        A += s2 * Eigen::Matrix3d::Identity();
        b -= s2 * m;
    }

    Placement out;
    Point3 x = seed;
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::Vector3d sigma = svd.singularValues();
    if (sigma[0] > 0.0 && std::isfinite(sigma[0])) {
        const double cutoff = kSingularValueCutoff * sigma[0];
        out.well_conditioned = sigma[2] >= cutoff;
        // x = m + V S^+ U^T (-b - A m): exact solve when nothing is truncated,
        // otherwise the solution closest to the seed.
        const Eigen::Vector3d rhs = svd.matrixU().transpose() * (-b - A * m);
        Eigen::Vector3d y = Eigen::Vector3d::Zero();
        for (int k = 0; k < 3; ++k)
            if (sigma[k] >= cutoff) y[k] = rhs[k] / sigma[k];
        const Eigen::Vector3d sol = m + svd.matrixV() * y;
        x = {sol[0], sol[1], sol[2]};
        if (!is_finite(x)) x = seed;
    }
    out.position = x;
    out.value = q.eval(x);

    for (int k = 0; k < 3; ++k) {
        const double fv = q.eval(fallbacks[k]);
        if (fv < out.value) {
            out.value = fv;
            out.position = fallbacks[k];
            out.fallback = k;
        }
    }
    return out;
}

}  // namespace wildsimp
