#include "wildsimp/decimator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace wildsimp {

std::string to_string(Accumulation a) { return a == Accumulation::Memory ? "memory" : "memoryless"; }

Accumulation accumulation_from_string(const std::string& s) {
    if (s == "memory") return Accumulation::Memory;
    if (s == "memoryless") return Accumulation::Memoryless;
    throw std::invalid_argument("accumulation mode must be 'memory' or 'memoryless', got '" + s + "'");
}

std::size_t DecimationConfig::resolve_target(std::size_t face_count) const {
    if (target_faces) return *target_faces;
    return static_cast<std::size_t>(std::floor(target_ratio * static_cast<double>(face_count) + 1e-9));
}

void DecimationConfig::validate() const {
    if (!target_faces && !(target_ratio >= 0.0 && target_ratio <= 1.0))
        throw std::invalid_argument("target ratio must lie in [0, 1]");
    if (!(area_weight >= 0.0)) throw std::invalid_argument("area weight must be non-negative");
    if (enable_virtual_edges && !(eps_rel > 0.0)) throw std::invalid_argument("epsilon must be positive");
    if (!(regularizer >= 0.0)) throw std::invalid_argument("regularizer must be non-negative");
}

VertexQuadrics initial_vertex_quadrics(const SimplicialComplex2& mesh, const DecimationConfig& cfg) {
    VertexQuadrics vq;
    const auto n = static_cast<std::ptrdiff_t>(mesh.vertex_capacity());
    vq.edge.assign(mesh.vertex_capacity(), Quadric{});
    const bool area_memory = cfg.area_quadric_mode == Accumulation::Memory && cfg.area_weight > 0.0;
    if (area_memory) vq.area.assign(mesh.vertex_capacity(), Quadric{});
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t v = 0; v < n; ++v) {
        if (!mesh.vertex_alive(static_cast<VertexId>(v))) continue;
        vq.edge[v] = vertex_quadric(mesh, static_cast<VertexId>(v));
        if (area_memory) vq.area[v] = area_quadric_for_vertex(mesh, static_cast<VertexId>(v), cfg.area_edges);
    }
    return vq;
}

Quadric combined_edge_quadric(const SimplicialComplex2& mesh, const VertexQuadrics& vq, EdgeId e,
                              const DecimationConfig& cfg) {
    const Edge& ed = mesh.edge(e);
    Quadric q = vq.edge[ed.v[0]] + vq.edge[ed.v[1]];
    if (cfg.area_weight > 0.0) {
        const Quadric area = cfg.area_quadric_mode == Accumulation::Memoryless
                                 ? area_quadric_for_edge(mesh, e, cfg.area_edges)
                                 : vq.area[ed.v[0]] + vq.area[ed.v[1]];
        q += cfg.area_weight * area;
    }
    return q;
}

EdgeCost edge_cost(const SimplicialComplex2& mesh, const VertexQuadrics& vq, EdgeId e, const DecimationConfig& cfg) {
    const Edge& ed = mesh.edge(e);
    if (!ed.alive) throw std::invalid_argument("edge_cost: dead edge");
    const Point3& pi = mesh.position(ed.v[0]);
    const Point3& pj = mesh.position(ed.v[1]);
    const Quadric q = combined_edge_quadric(mesh, vq, e, cfg);
    const Placement placement = optimal_placement(q, {(pi + pj) * 0.5, pi, pj}, cfg.regularizer);
    EdgeCost c;
    c.edge = e;
    c.position = placement.position;
    c.cost = std::max(placement.value, 0.0);
    return c;
}

std::vector<EdgeCost> compute_all_edge_costs(const SimplicialComplex2& mesh, const VertexQuadrics& vq,
                                             const DecimationConfig& cfg, bool parallel) {
    std::vector<EdgeId> edges;
    edges.reserve(mesh.live_edge_count());
    for (EdgeId e = 0; e < mesh.edge_capacity(); ++e)
        if (mesh.edge(e).alive) edges.push_back(e);
    std::vector<EdgeCost> costs(edges.size());
    const auto n = static_cast<std::ptrdiff_t>(edges.size());
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 256)
        for (std::ptrdiff_t k = 0; k < n; ++k) costs[k] = edge_cost(mesh, vq, edges[k], cfg);
    } else {
        for (std::ptrdiff_t k = 0; k < n; ++k) costs[k] = edge_cost(mesh, vq, edges[k], cfg);
    }
    return costs;
}

void update_quadrics_after_collapse(const SimplicialComplex2& mesh, VertexQuadrics& vq, const CollapseRecord& rec,
                                    const DecimationConfig& cfg) {
    const VertexId i = rec.kept, j = rec.removed;
    if (cfg.edge_quadric_mode == Accumulation::Memory) {
        vq.edge[i] += vq.edge[j];
    } else {
        vq.edge[i] = vertex_quadric(mesh, i);
        for (EdgeId e : mesh.vertex_edges(i)) {
            const Edge& ed = mesh.edge(e);
            const VertexId k = ed.v[0] == i ? ed.v[1] : ed.v[0];
            vq.edge[k] = vertex_quadric(mesh, k);
        }
    }
    vq.edge[j] = Quadric{};
    if (!vq.area.empty()) {
        vq.area[i] += vq.area[j];
        vq.area[j] = Quadric{};
    }
}

bool collapse_preserves_topology(const SimplicialComplex2& mesh, EdgeId e, const Point3& position) {
    const Edge& ed = mesh.edge(e);
    if (ed.kind == EdgeKind::Virtual) return false;
    const VertexId i = ed.v[0], j = ed.v[1];

    auto neighbors = [&](VertexId v) {
        std::vector<VertexId> out;
        for (EdgeId x : mesh.vertex_edges(v)) {
            const Edge& xe = mesh.edge(x);
            out.push_back(xe.v[0] == v ? xe.v[1] : xe.v[0]);
        }
        std::sort(out.begin(), out.end());
        return out;
    };
    const auto ni = neighbors(i), nj = neighbors(j);
    std::vector<VertexId> common;
    std::set_intersection(ni.begin(), ni.end(), nj.begin(), nj.end(), std::back_inserter(common));
    std::vector<VertexId> opposite;
    for (FaceId f : mesh.edge_faces(e))
        for (VertexId v : mesh.face(f).v)
            if (v != i && v != j) opposite.push_back(v);
    std::sort(opposite.begin(), opposite.end());
    if (common != opposite) return false;

    auto on_boundary = [&](VertexId v) {
        for (EdgeId x : mesh.vertex_edges(v))
            if (mesh.edge_faces(x).size() == 1) return true;
        return false;
    };
    if (mesh.edge_faces(e).size() != 1 && on_boundary(i) && on_boundary(j)) return false;
    // Edge part of the link condition. With a virtual cone vertex over the
    // border, c-cone lies in both links when ic and jc are border edges.
    auto border = [&](VertexId a, VertexId b) { return mesh.edge_faces(mesh.find_edge(a, b)).size() == 1; };
    for (VertexId c : common) {
        if (border(i, c) && border(j, c)) return false;
        for (VertexId d : common)
            if (c < d && mesh.find_face(i, c, d) != kInvalidId && mesh.find_face(j, c, d) != kInvalidId) return false;
    }

    for (VertexId moving : {i, j}) {
        const VertexId fixed = moving == i ? j : i;
        for (FaceId f : mesh.vertex_faces(moving)) {
            auto v = mesh.face(f).v;
            if (v[0] == fixed || v[1] == fixed || v[2] == fixed) continue;
            // Rewritten face must not duplicate an existing one.
            std::array<VertexId, 3> rewritten = v;
            for (auto& x : rewritten)
                if (x == j) x = i;
            if (moving == j && mesh.find_face(rewritten[0], rewritten[1], rewritten[2]) != kInvalidId) return false;
            const Vec3 before = mesh.face_normal(f);
            std::array<Point3, 3> pts = mesh.face_points(f);
            for (int k = 0; k < 3; ++k)
                if (v[k] == moving) pts[k] = position;
            const Vec3 after = cross(pts[1] - pts[0], pts[2] - pts[0]);
            if (squared_norm(after) == 0.0 || dot(before, after) < 0.0) return false;
        }
    }
    return true;
}

namespace {

struct QueueEntry {
    double cost;
    EdgeId edge;
    std::uint32_t generation;
};

/// Current state of one edge; the heap entry with a matching generation is the live one.
struct EdgeSlot {
    Point3 target;
    double cost = 0.0;
    std::uint32_t generation = 0;
    std::uint8_t parked = 0;  // rejected; waits for its next recost
};

struct QueueOrder {
    bool operator()(const QueueEntry& a, const QueueEntry& b) const {
        if (a.cost != b.cost) return a.cost > b.cost;
        return a.edge > b.edge;
    }
};

/// Edges whose cost may change after a collapse into `i`.
std::vector<EdgeId> affected_edges(const SimplicialComplex2& mesh, VertexId i, const DecimationConfig& cfg) {
    std::vector<EdgeId> out;
    const bool local_only = cfg.edge_quadric_mode == Accumulation::Memory &&
                            (cfg.area_quadric_mode == Accumulation::Memory || cfg.area_weight == 0.0);
    if (local_only) {
        const auto star = mesh.vertex_edges(i);
        return {star.begin(), star.end()};
    }
    std::vector<VertexId> ring{i};
    for (EdgeId e : mesh.vertex_edges(i)) {
        const Edge& ed = mesh.edge(e);
        ring.push_back(ed.v[0] == i ? ed.v[1] : ed.v[0]);
    }
    // Faces touching i are the only ones that changed; an edge sees them
    // (and their border status) only through an endpoint in the ring.
    for (VertexId v : ring)
        for (EdgeId e : mesh.vertex_edges(v)) out.push_back(e);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void check_costs(const SimplicialComplex2& mesh, const VertexQuadrics& vq, const DecimationConfig& cfg,
                 const std::vector<EdgeSlot>& slots, double scale2) {
    for (EdgeId e = 0; e < mesh.edge_capacity(); ++e) {
        if (!mesh.edge(e).alive) continue;
        const double fresh = edge_cost(mesh, vq, e, cfg).cost;
        const double queued = slots[e].cost;
        if (std::abs(fresh - queued) > 1e-9 * std::max(std::abs(fresh), std::abs(queued)) + 1e-12 * scale2) {
            std::ostringstream msg;
            msg << "stale cost for edge " << e << ": queued " << queued << ", recomputed " << fresh;
            throw std::logic_error(msg.str());
        }
    }
}

}  // namespace

DecimationResult decimate(SimplicialComplex2 mesh, const DecimationConfig& cfg) {
    cfg.validate();
    DecimationResult result;
    result.input_faces = mesh.live_face_count();
    result.target_faces = cfg.resolve_target(result.input_faces);

    const double scale = std::max(mesh.bounds().diagonal(), 1e-300);
    VertexQuadrics vq = initial_vertex_quadrics(mesh, cfg);

    std::vector<EdgeSlot> slots(mesh.edge_capacity());
    // Binary heap in a plain vector so rebuilds reuse its storage.
    std::vector<QueueEntry> queue;
    auto push = [&](const QueueEntry& q) {
        queue.push_back(q);
        std::push_heap(queue.begin(), queue.end(), QueueOrder{});
    };
    for (const EdgeCost& c : compute_all_edge_costs(mesh, vq, cfg)) {
        slots[c.edge].target = c.position;
        slots[c.edge].cost = c.cost;
        push({c.cost, c.edge, 0});
    }

    // Rebuilds must not revive parked edges.
    auto prune = [&] {
        queue.clear();
        for (EdgeId e = 0; e < mesh.edge_capacity(); ++e)
            if (mesh.edge(e).alive && !slots[e].parked) queue.push_back({slots[e].cost, e, slots[e].generation});
        std::make_heap(queue.begin(), queue.end(), QueueOrder{});
    };

    while (mesh.live_face_count() > result.target_faces && !queue.empty()) {
        std::pop_heap(queue.begin(), queue.end(), QueueOrder{});
        const QueueEntry top = queue.back();
        queue.pop_back();
        EdgeSlot& slot = slots[top.edge];
        if (!mesh.edge(top.edge).alive || top.generation != slot.generation) continue;
        if (cfg.preserve_topology && !collapse_preserves_topology(mesh, top.edge, slot.target)) {
            slot.parked = 1;
            continue;
        }

        const EdgeKind kind = mesh.edge(top.edge).kind;
        CollapseRecord rec = mesh.collapse_edge(top.edge, slot.target);
        update_quadrics_after_collapse(mesh, vq, rec, cfg);
        result.costs.push_back({top.edge, rec.kept, rec.removed, top.cost, kind});

        for (EdgeId e : affected_edges(mesh, rec.kept, cfg)) {
            const EdgeCost c = edge_cost(mesh, vq, e, cfg);
            EdgeSlot& s = slots[e];
            if (!s.parked && c.cost == s.cost && c.position == s.target) continue;  // queued entry still valid
            ++s.generation;
            s.target = c.position;
            s.cost = c.cost;
            s.parked = 0;
            push({c.cost, e, s.generation});
        }
        if (queue.size() > 2 * mesh.live_edge_count() + 1024) prune();
        if (cfg.debug_checks) {
            if (auto err = mesh.validate(); !err.empty()) throw std::logic_error("invariant violated: " + err);
            check_costs(mesh, vq, cfg, slots, scale * scale);
        }
        if (cfg.record_history) result.history.push_back(std::move(rec));
    }
    result.target_reached = mesh.live_face_count() <= result.target_faces;
    result.mesh = std::move(mesh);
    return result;
}

}  // namespace wildsimp
