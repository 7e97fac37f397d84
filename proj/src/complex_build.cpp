#include "wildsimp/complex_build.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>
#include <unordered_map>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wildsimp {

namespace {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0u); }
    std::uint32_t find(std::uint32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a > b) std::swap(a, b);
        parent_[b] = a;  // lowest index becomes the root
    }

private:
    std::vector<std::uint32_t> parent_;
};

/// Representative raw index per raw vertex.
std::vector<std::uint32_t> weld_representatives(const std::vector<Point3>& positions, double weld_eps) {
    const std::size_t n = positions.size();
    std::vector<std::uint32_t> rep(n);
    if (weld_eps <= 0.0) {
        std::map<std::tuple<double, double, double>, std::uint32_t> seen;
        for (std::uint32_t v = 0; v < n; ++v) {
            const auto& p = positions[v];
            auto [it, inserted] = seen.emplace(std::make_tuple(p.x, p.y, p.z), v);
            rep[v] = it->second;
        }
        return rep;
    }
    // Grid hashing with cell size eps; clusters are transitive closures.
    UnionFind uf(n);
    auto cell_of = [&](const Point3& p) {
        return std::array<long long, 3>{static_cast<long long>(std::floor(p.x / weld_eps)),
                                        static_cast<long long>(std::floor(p.y / weld_eps)),
                                        static_cast<long long>(std::floor(p.z / weld_eps))};
    };
    std::map<std::array<long long, 3>, std::vector<std::uint32_t>> grid;
    for (std::uint32_t v = 0; v < n; ++v) grid[cell_of(positions[v])].push_back(v);
    const double eps2 = weld_eps * weld_eps;
    for (std::uint32_t v = 0; v < n; ++v) {
        const auto c = cell_of(positions[v]);
        for (long long dx = -1; dx <= 1; ++dx)
            for (long long dy = -1; dy <= 1; ++dy)
                for (long long dz = -1; dz <= 1; ++dz) {
                    auto it = grid.find({c[0] + dx, c[1] + dy, c[2] + dz});
                    if (it == grid.end()) continue;
                    for (std::uint32_t w : it->second)
                        if (w < v && squared_distance(positions[v], positions[w]) <= eps2) uf.unite(v, w);
                }
    }
    for (std::uint32_t v = 0; v < n; ++v) rep[v] = uf.find(v);
    return rep;
}

VertexId nearest_corner(const SimplicialComplex2& mesh, FaceId f, const Point3& p) {
    const auto& v = mesh.face(f).v;
    VertexId best = kInvalidId;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (VertexId x : v) {
        const double d2 = squared_distance(mesh.position(x), p);
        if (d2 < best_d2 || (d2 == best_d2 && x < best)) {
            best = x;
            best_d2 = d2;
        }
    }
    return best;
}

std::vector<VirtualEdgeCandidate> finalize_candidates(const SimplicialComplex2& mesh,
                                                      std::vector<VirtualEdgeCandidate> raw,
                                                      const VirtualEdgeOptions& opts) {
    auto order = [](const VirtualEdgeCandidate& x, const VirtualEdgeCandidate& y) {
        return std::tie(x.vertex_distance, x.a, x.b) < std::tie(y.vertex_distance, y.a, y.b);
    };
    std::sort(raw.begin(), raw.end(), order);
    raw.erase(std::unique(raw.begin(), raw.end(),
                          [](const auto& x, const auto& y) { return x.a == y.a && x.b == y.b; }),
              raw.end());
    // A pair always carries the same distance, so duplicates are adjacent here.
    std::vector<VirtualEdgeCandidate> out;
    std::unordered_map<VertexId, std::uint32_t> degree;
    for (const auto& c : raw) {
        if (mesh.find_edge(c.a, c.b) != kInvalidId) continue;
        if (degree[c.a] >= opts.per_vertex_cap || degree[c.b] >= opts.per_vertex_cap) continue;
        ++degree[c.a];
        ++degree[c.b];
        out.push_back(c);
    }
    return out;
}

}  // namespace

BuildResult build_complex(const RawMesh& raw, double weld_eps) {
    if (weld_eps < 0.0) throw std::invalid_argument("build_complex: weld_eps must be non-negative");
    if (raw.faces.empty()) throw BuildError("nothing to simplify: the mesh has no faces");

    const auto rep = weld_representatives(raw.positions, weld_eps);
    std::vector<std::uint8_t> used(raw.positions.size(), 0);
    for (const auto& f : raw.faces)
        for (auto v : f) used[rep[v]] = 1;
    for (const auto& l : raw.lines)
        for (auto v : l) used[rep[v]] = 1;

    BuildResult result;
    result.vertex_map.assign(raw.positions.size(), kInvalidId);
    std::vector<VertexId> rep_to_vertex(raw.positions.size(), kInvalidId);
    for (std::uint32_t v = 0; v < raw.positions.size(); ++v) {
        if (rep[v] != v || !used[v]) continue;
        rep_to_vertex[v] = result.mesh.add_vertex(raw.positions[v]);
    }
    for (std::uint32_t v = 0; v < raw.positions.size(); ++v) result.vertex_map[v] = rep_to_vertex[rep[v]];

    for (std::uint32_t f = 0; f < raw.faces.size(); ++f) {
        const auto& tri = raw.faces[f];
        const VertexId a = result.vertex_map[tri[0]], b = result.vertex_map[tri[1]], c = result.vertex_map[tri[2]];
        if (a == b || b == c || a == c) {
            ++result.degenerate_after_weld;
            continue;
        }
        if (result.mesh.find_face(a, b, c) != kInvalidId) {
            ++result.duplicate_faces;
            continue;
        }
        result.mesh.add_face(a, b, c);
        result.face_source.push_back(f);
    }
    for (const auto& l : raw.lines) {
        const VertexId a = result.vertex_map[l[0]], b = result.vertex_map[l[1]];
        if (a != b) result.mesh.add_edge(a, b, EdgeKind::Physical);
    }
    if (result.mesh.live_face_count() == 0) throw BuildError("nothing to simplify: all faces are degenerate");
    return result;
}

ComponentLabels label_components(const SimplicialComplex2& mesh, bool include_virtual) {
    UnionFind uf(mesh.vertex_capacity());
    for (EdgeId e = 0; e < mesh.edge_capacity(); ++e) {
        const Edge& ed = mesh.edge(e);
        if (!ed.alive) continue;
        if (ed.kind == EdgeKind::Virtual && !include_virtual) continue;
        uf.unite(ed.v[0], ed.v[1]);
    }
    ComponentLabels labels;
    labels.label.assign(mesh.vertex_capacity(), kInvalidId);
    std::vector<std::uint32_t> root_label(mesh.vertex_capacity(), kInvalidId);
    for (VertexId v = 0; v < mesh.vertex_capacity(); ++v) {
        if (!mesh.vertex_alive(v)) continue;
        const auto r = uf.find(v);
        if (root_label[r] == kInvalidId) root_label[r] = labels.count++;
        labels.label[v] = root_label[r];
    }
    return labels;
}

std::optional<VirtualEdgeCandidate> face_pair_candidate(const SimplicialComplex2& mesh, FaceId f1, FaceId f2,
                                                        double eps) {
    const TriangleDistance td = triangle_triangle_distance(mesh.face_points(f1), mesh.face_points(f2));
    if (!(td.distance <= eps)) return std::nullopt;
    const VertexId a = nearest_corner(mesh, f1, td.p1);
    const VertexId b = nearest_corner(mesh, f2, td.p2);
    if (a == b) return std::nullopt;
    return VirtualEdgeCandidate{std::min(a, b), std::max(a, b), distance(mesh.position(a), mesh.position(b))};
}

std::vector<VirtualEdgeCandidate> find_virtual_edges(const SimplicialComplex2& mesh, const ComponentLabels& labels,
                                                     const VirtualEdgeOptions& opts) {
    if (!(opts.eps > 0.0)) throw std::invalid_argument("find_virtual_edges: eps must be positive");
    const Bvh bvh = Bvh::from_complex(mesh);
    std::vector<FaceId> faces;
    for (FaceId f = 0; f < mesh.face_capacity(); ++f)
        if (mesh.face(f).alive) faces.push_back(f);

    std::vector<VirtualEdgeCandidate> all;
#pragma omp parallel
    {
        std::vector<VirtualEdgeCandidate> local;
        std::vector<std::uint32_t> hits;
#pragma omp for schedule(dynamic, 64) nowait
        for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(faces.size()); ++k) {
            const FaceId f1 = faces[k];
            const std::uint32_t c1 = labels.label[mesh.face(f1).v[0]];
            Aabb box;
            for (const auto& p : mesh.face_points(f1)) box.extend(p);
            hits.clear();
            bvh.query_box(box, opts.eps, hits);
            for (const FaceId f2 : hits) {
                if (f2 <= f1 || labels.label[mesh.face(f2).v[0]] == c1) continue;
                if (auto c = face_pair_candidate(mesh, f1, f2, opts.eps)) local.push_back(*c);
            }
        }
#pragma omp critical
        all.insert(all.end(), local.begin(), local.end());
    }
    return finalize_candidates(mesh, std::move(all), opts);
}

std::vector<VirtualEdgeCandidate> find_virtual_edges_brute_force(const SimplicialComplex2& mesh,
                                                                 const ComponentLabels& labels,
                                                                 const VirtualEdgeOptions& opts) {
    std::vector<VirtualEdgeCandidate> all;
    for (FaceId f1 = 0; f1 < mesh.face_capacity(); ++f1) {
        if (!mesh.face(f1).alive) continue;
        for (FaceId f2 = f1 + 1; f2 < mesh.face_capacity(); ++f2) {
            if (!mesh.face(f2).alive) continue;
            if (labels.label[mesh.face(f1).v[0]] == labels.label[mesh.face(f2).v[0]]) continue;
            if (auto c = face_pair_candidate(mesh, f1, f2, opts.eps)) all.push_back(*c);
        }
    }
    return finalize_candidates(mesh, std::move(all), opts);
}

std::size_t insert_virtual_edges(SimplicialComplex2& mesh, const std::vector<VirtualEdgeCandidate>& edges) {
    std::size_t added = 0;
    for (const auto& c : edges) {
        if (mesh.find_edge(c.a, c.b) != kInvalidId) continue;
        mesh.add_edge(c.a, c.b, EdgeKind::Virtual);
        ++added;
    }
    return added;
}

std::vector<VirtualEdgeCandidate> build_virtual_edges(SimplicialComplex2& mesh, const ComponentLabels& labels,
                                                      const VirtualEdgeOptions& opts) {
    auto edges = find_virtual_edges(mesh, labels, opts);
    insert_virtual_edges(mesh, edges);
    return edges;
}

}  // namespace wildsimp
