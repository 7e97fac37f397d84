#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <absl/container/flat_hash_map.h>
#include <absl/container/inlined_vector.h>

namespace wildsimp {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
using FaceId = std::uint32_t;

inline constexpr std::uint32_t kInvalidId = std::numeric_limits<std::uint32_t>::max();

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
    constexpr double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

    constexpr Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    constexpr Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    constexpr Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

    friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
    friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
    friend constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
    friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
    friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
    friend constexpr Vec3 operator/(const Vec3& a, double s) { return {a.x / s, a.y / s, a.z / s}; }
    friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

using Point3 = Vec3;

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
constexpr double squared_norm(const Vec3& a) { return dot(a, a); }
inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }
constexpr double squared_distance(const Vec3& a, const Vec3& b) { return squared_norm(a - b); }
inline bool is_finite(const Vec3& a) { return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z); }

struct Vec2 {
    double u = 0.0, v = 0.0;
    friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

struct Rgb {
    double r = 0.0, g = 0.0, b = 0.0;
    friend constexpr bool operator==(const Rgb&, const Rgb&) = default;
};

inline double color_distance(const Rgb& a, const Rgb& b) {
    const double dr = a.r - b.r, dg = a.g - b.g, db = a.b - b.b;
    return std::sqrt(dr * dr + dg * dg + db * db);
}

struct Aabb {
    Vec3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
    Vec3 hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
            -std::numeric_limits<double>::infinity()};

    void extend(const Vec3& p) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    void extend(const Aabb& b) { extend(b.lo); extend(b.hi); }
    bool empty() const { return lo.x > hi.x; }
    double diagonal() const { return empty() ? 0.0 : distance(lo, hi); }
    Vec3 center() const { return (lo + hi) * 0.5; }
};

/// Quadratic error functional E(x) = x^T A x + 2 b^T x + c with symmetric A
/// stored as its six unique entries (xx, xy, xz, yy, yz, zz).
struct Quadric {
    std::array<double, 6> a{};
    Vec3 b{};
    double c = 0.0;

    double eval(const Vec3& x) const {
        const double ax = a[0] * x.x + a[1] * x.y + a[2] * x.z;
        const double ay = a[1] * x.x + a[3] * x.y + a[4] * x.z;
        const double az = a[2] * x.x + a[4] * x.y + a[5] * x.z;
        return x.x * ax + x.y * ay + x.z * az + 2.0 * dot(b, x) + c;
    }

    /// A x
    Vec3 apply(const Vec3& x) const {
        return {a[0] * x.x + a[1] * x.y + a[2] * x.z, a[1] * x.x + a[3] * x.y + a[4] * x.z,
                a[2] * x.x + a[4] * x.y + a[5] * x.z};
    }

    Quadric& operator+=(const Quadric& o) {
        for (int k = 0; k < 6; ++k) a[k] += o.a[k];
        b += o.b;
        c += o.c;
        return *this;
    }
    Quadric& operator*=(double s) {
        for (auto& v : a) v *= s;
        b *= s;
        c *= s;
        return *this;
    }
    friend Quadric operator+(Quadric p, const Quadric& q) { return p += q; }
    friend Quadric operator*(double s, Quadric q) { return q *= s; }
    friend bool operator==(const Quadric&, const Quadric&) = default;
};

inline Quadric quadric_add(const Quadric& q1, const Quadric& q2) { return q1 + q2; }
inline double quadric_eval(const Quadric& q, const Point3& x) { return q.eval(x); }

enum class EdgeKind : std::uint8_t { Physical, Virtual };

struct Edge {
    std::array<VertexId, 2> v{kInvalidId, kInvalidId};  // v[0] < v[1]
    EdgeKind kind = EdgeKind::Physical;
    bool alive = false;
};

struct Face {
    std::array<VertexId, 3> v{kInvalidId, kInvalidId, kInvalidId};  // winding preserved
    bool alive = false;
};

/// Snapshot of one vertex-pair collapse. Undoing it (a vertex split) restores
/// the previous complex exactly, including element ids.
struct CollapseRecord {
    struct FaceChange {
        FaceId id;
        std::array<VertexId, 3> before;
        bool removed;
        friend bool operator==(const FaceChange&, const FaceChange&) = default;
    };
    struct EdgeChange {
        EdgeId id;
        std::array<VertexId, 2> before;
        EdgeKind kind_before;
        bool removed;
        friend bool operator==(const EdgeChange&, const EdgeChange&) = default;
    };

    VertexId kept = kInvalidId;     // i, survives as i'
    VertexId removed = kInvalidId;  // j
    EdgeId edge = kInvalidId;       // collapsed edge
    Point3 kept_before{};
    Point3 removed_before{};
    Point3 position{};  // position of i' after the collapse
    std::vector<FaceChange> faces;
    std::vector<EdgeChange> edges;

    friend bool operator==(const CollapseRecord&, const CollapseRecord&) = default;
};

struct CompactionMap {
    std::vector<VertexId> vertex;  // old id -> new id (kInvalidId when dead)
    std::vector<EdgeId> edge;
    std::vector<FaceId> face;
};

/// Vertices, edges and faces with vertex->edge, vertex->face and edge->face
/// star lists. Dead elements keep their ids until compact().
class SimplicialComplex2 {
public:
    SimplicialComplex2() = default;

    VertexId add_vertex(const Point3& p);
    /// Returns the existing edge when the pair is already present; a virtual
    /// edge is promoted to physical when `kind` is physical.
    EdgeId add_edge(VertexId a, VertexId b, EdgeKind kind);
    /// Adds the face and any missing physical side edges. Returns kInvalidId
    /// for degenerate or duplicate triples.
    FaceId add_face(VertexId a, VertexId b, VertexId c);

    std::size_t vertex_capacity() const { return positions_.size(); }
    std::size_t edge_capacity() const { return edges_.size(); }
    std::size_t face_capacity() const { return faces_.size(); }
    std::size_t live_vertex_count() const { return live_vertices_; }
    std::size_t live_edge_count() const { return live_edges_; }
    std::size_t live_face_count() const { return live_faces_; }

    const Point3& position(VertexId v) const { return positions_[v]; }
    void set_position(VertexId v, const Point3& p) { positions_[v] = p; }
    bool vertex_alive(VertexId v) const { return vertex_alive_[v] != 0; }
    const Edge& edge(EdgeId e) const { return edges_[e]; }
    const Face& face(FaceId f) const { return faces_[f]; }

    std::span<const EdgeId> vertex_edges(VertexId v) const { return vertex_edges_[v]; }
    std::span<const FaceId> vertex_faces(VertexId v) const { return vertex_faces_[v]; }
    std::span<const FaceId> edge_faces(EdgeId e) const { return edge_faces_[e]; }

    EdgeId find_edge(VertexId a, VertexId b) const;
    FaceId find_face(VertexId a, VertexId b, VertexId c) const;

    /// Unit-free geometric helpers on live faces.
    Vec3 face_normal(FaceId f) const;  // unnormalized, |n| = 2 * area
    double face_area(FaceId f) const;
    std::array<Point3, 3> face_points(FaceId f) const;
    Aabb bounds() const;

    /// Merges j into i, moves i to `position`, removes degenerate and
    /// duplicate simplices and returns the undo record. Throws on a dead edge.
    CollapseRecord collapse_edge(EdgeId e, const Point3& position);
    /// Same as collapse_edge but for an arbitrary live vertex pair.
    CollapseRecord collapse_vertices(VertexId keep, VertexId remove, const Point3& position,
                                     EdgeId edge = kInvalidId);
    /// Vertex split: exact inverse of the collapse that produced `rec`.
    void undo_collapse(const CollapseRecord& rec);

    /// Rebuilds the three star lists from the element arrays.
    void rebuild_stars();
    /// Empty string when all structural invariants hold, otherwise a
    /// description of the first violation.
    std::string validate() const;
    /// True when the incrementally maintained stars equal a full rebuild.
    bool stars_match_rebuild() const;

    /// Drops dead elements and renumbers; star lists are rebuilt.
    CompactionMap compact();

private:
    static std::uint64_t pair_key(VertexId a, VertexId b) {
        if (a > b) std::swap(a, b);
        return (static_cast<std::uint64_t>(a) << 32) | b;
    }
    struct TripleKey {
        std::array<VertexId, 3> v;
        friend bool operator==(const TripleKey&, const TripleKey&) = default;
    };
    struct TripleHash {
        std::size_t operator()(const TripleKey& k) const noexcept {
            std::uint64_t h = 1469598103934665603ULL;
            for (VertexId x : k.v) h = (h ^ x) * 1099511628211ULL;
            return static_cast<std::size_t>(h);
        }
    };
    static TripleKey triple_key(std::array<VertexId, 3> v);

    void attach_edge(EdgeId e);
    void detach_edge(EdgeId e);
    void attach_face(FaceId f);
    void detach_face(FaceId f);

    std::vector<Point3> positions_;
    std::vector<std::uint8_t> vertex_alive_;
    std::vector<Edge> edges_;
    std::vector<Face> faces_;
    // Stars stay inline up to typical valence; spills go to the heap.
    std::vector<absl::InlinedVector<EdgeId, 7>> vertex_edges_;
    std::vector<absl::InlinedVector<FaceId, 7>> vertex_faces_;
    std::vector<absl::InlinedVector<FaceId, 2>> edge_faces_;
    absl::flat_hash_map<std::uint64_t, EdgeId> edge_lookup_;
    absl::flat_hash_map<TripleKey, FaceId, TripleHash> face_lookup_;
    std::size_t live_vertices_ = 0;
    std::size_t live_edges_ = 0;
    std::size_t live_faces_ = 0;
};

}  // namespace wildsimp
