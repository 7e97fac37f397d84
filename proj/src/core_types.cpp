#include "wildsimp/core_types.hpp"

#include <set>
#include <sstream>

namespace wildsimp {

namespace {

template <typename List, typename T>
void erase_value(List& list, T value) {
    auto it = std::find(list.begin(), list.end(), value);
    if (it == list.end()) throw std::logic_error("star list out of sync");
    *it = list.back();
    list.pop_back();
}

bool contains(const std::array<VertexId, 3>& tri, VertexId v) {
    return tri[0] == v || tri[1] == v || tri[2] == v;
}

}  // namespace

SimplicialComplex2::TripleKey SimplicialComplex2::triple_key(std::array<VertexId, 3> v) {
    std::sort(v.begin(), v.end());
    return TripleKey{v};
}

VertexId SimplicialComplex2::add_vertex(const Point3& p) {
    const auto id = static_cast<VertexId>(positions_.size());
    positions_.push_back(p);
    vertex_alive_.push_back(1);
    vertex_edges_.emplace_back();
    vertex_faces_.emplace_back();
    ++live_vertices_;
    return id;
}

EdgeId SimplicialComplex2::add_edge(VertexId a, VertexId b, EdgeKind kind) {
    if (a >= positions_.size() || b >= positions_.size() || !vertex_alive(a) || !vertex_alive(b))
        throw std::out_of_range("add_edge: vertex id out of range or dead");
    if (a == b) return kInvalidId;
    if (auto it = edge_lookup_.find(pair_key(a, b)); it != edge_lookup_.end()) {
        if (kind == EdgeKind::Physical) edges_[it->second].kind = EdgeKind::Physical;
        return it->second;
    }
    const auto id = static_cast<EdgeId>(edges_.size());
    edges_.push_back(Edge{{std::min(a, b), std::max(a, b)}, kind, true});
    edge_faces_.emplace_back();
    ++live_edges_;
    attach_edge(id);
    return id;
}

FaceId SimplicialComplex2::add_face(VertexId a, VertexId b, VertexId c) {
    for (VertexId v : {a, b, c})
        if (v >= positions_.size() || !vertex_alive(v))
            throw std::out_of_range("add_face: vertex id out of range or dead");
    if (a == b || b == c || a == c) return kInvalidId;
    if (face_lookup_.count(triple_key({a, b, c}))) return kInvalidId;
    add_edge(a, b, EdgeKind::Physical);
    add_edge(b, c, EdgeKind::Physical);
    add_edge(c, a, EdgeKind::Physical);
    const auto id = static_cast<FaceId>(faces_.size());
    faces_.push_back(Face{{a, b, c}, true});
    ++live_faces_;
    attach_face(id);
    return id;
}

EdgeId SimplicialComplex2::find_edge(VertexId a, VertexId b) const {
    auto it = edge_lookup_.find(pair_key(a, b));
    return it == edge_lookup_.end() ? kInvalidId : it->second;
}

FaceId SimplicialComplex2::find_face(VertexId a, VertexId b, VertexId c) const {
    auto it = face_lookup_.find(triple_key({a, b, c}));
    return it == face_lookup_.end() ? kInvalidId : it->second;
}

Vec3 SimplicialComplex2::face_normal(FaceId f) const {
    const auto& v = faces_[f].v;
    return cross(positions_[v[1]] - positions_[v[0]], positions_[v[2]] - positions_[v[0]]);
}

double SimplicialComplex2::face_area(FaceId f) const { return 0.5 * norm(face_normal(f)); }

std::array<Point3, 3> SimplicialComplex2::face_points(FaceId f) const {
    const auto& v = faces_[f].v;
    return {positions_[v[0]], positions_[v[1]], positions_[v[2]]};
}

Aabb SimplicialComplex2::bounds() const {
    Aabb box;
    for (std::size_t v = 0; v < positions_.size(); ++v)
        if (vertex_alive_[v]) box.extend(positions_[v]);
    return box;
}

void SimplicialComplex2::attach_edge(EdgeId e) {
    const auto& ed = edges_[e];
    edge_lookup_.emplace(pair_key(ed.v[0], ed.v[1]), e);
    vertex_edges_[ed.v[0]].push_back(e);
    vertex_edges_[ed.v[1]].push_back(e);
}

void SimplicialComplex2::detach_edge(EdgeId e) {
    const auto& ed = edges_[e];
    edge_lookup_.erase(pair_key(ed.v[0], ed.v[1]));
    erase_value(vertex_edges_[ed.v[0]], e);
    erase_value(vertex_edges_[ed.v[1]], e);
}

void SimplicialComplex2::attach_face(FaceId f) {
    const auto& v = faces_[f].v;
    face_lookup_.emplace(triple_key(v), f);
    for (int k = 0; k < 3; ++k) {
        vertex_faces_[v[k]].push_back(f);
        const EdgeId e = find_edge(v[k], v[(k + 1) % 3]);
        if (e == kInvalidId) throw std::logic_error("face side edge missing");
        edge_faces_[e].push_back(f);
    }
}

void SimplicialComplex2::detach_face(FaceId f) {
    const auto& v = faces_[f].v;
    face_lookup_.erase(triple_key(v));
    for (int k = 0; k < 3; ++k) {
        erase_value(vertex_faces_[v[k]], f);
        const EdgeId e = find_edge(v[k], v[(k + 1) % 3]);
        if (e == kInvalidId) throw std::logic_error("face side edge missing");
        erase_value(edge_faces_[e], f);
    }
}

CollapseRecord SimplicialComplex2::collapse_edge(EdgeId e, const Point3& position) {
    if (e >= edges_.size() || !edges_[e].alive) throw std::invalid_argument("collapse_edge: dead edge");
    return collapse_vertices(edges_[e].v[0], edges_[e].v[1], position, e);
}

CollapseRecord SimplicialComplex2::collapse_vertices(VertexId keep, VertexId remove,
                                                     const Point3& position, EdgeId edge) {
    if (keep == remove || keep >= positions_.size() || remove >= positions_.size() ||
        !vertex_alive(keep) || !vertex_alive(remove))
        throw std::invalid_argument("collapse_vertices: invalid vertex pair");

    CollapseRecord rec;
    rec.kept = keep;
    rec.removed = remove;
    rec.edge = edge;
    rec.kept_before = positions_[keep];
    rec.removed_before = positions_[remove];
    rec.position = position;

    const auto star_faces = vertex_faces_[remove];
    const auto star_edges = vertex_edges_[remove];

    for (FaceId f : star_faces) detach_face(f);
    for (EdgeId e : star_edges) detach_edge(e);

    rec.edges.reserve(star_edges.size());
    std::vector<CollapseRecord::EdgeChange> promoted;
    for (EdgeId e : star_edges) {
        Edge& ed = edges_[e];
        CollapseRecord::EdgeChange change{e, ed.v, ed.kind, false};
        const VertexId other = ed.v[0] == remove ? ed.v[1] : ed.v[0];
        if (other == keep) {
            change.removed = true;
        } else if (const EdgeId existing = find_edge(keep, other); existing != kInvalidId) {
            change.removed = true;
            Edge& target = edges_[existing];
            if (ed.kind == EdgeKind::Physical && target.kind == EdgeKind::Virtual) {
                promoted.push_back({existing, target.v, target.kind, false});
                target.kind = EdgeKind::Physical;
            }
        } else {
            ed.v = {std::min(keep, other), std::max(keep, other)};
            attach_edge(e);
        }
        if (change.removed) {
            ed.alive = false;
            --live_edges_;
        }
        rec.edges.push_back(change);
    }
    rec.edges.insert(rec.edges.end(), promoted.begin(), promoted.end());

    rec.faces.reserve(star_faces.size());
    for (FaceId f : star_faces) {
        Face& fc = faces_[f];
        CollapseRecord::FaceChange change{f, fc.v, false};
        if (contains(fc.v, keep)) {
            change.removed = true;
        } else {
            std::array<VertexId, 3> rewritten = fc.v;
            for (auto& v : rewritten)
                if (v == remove) v = keep;
            if (face_lookup_.count(triple_key(rewritten))) {
                change.removed = true;
            } else {
                fc.v = rewritten;
                attach_face(f);
            }
        }
        if (change.removed) {
            fc.alive = false;
            --live_faces_;
        }
        rec.faces.push_back(change);
    }

    positions_[keep] = position;
    vertex_alive_[remove] = 0;
    --live_vertices_;
    return rec;
}

void SimplicialComplex2::undo_collapse(const CollapseRecord& rec) {
    const VertexId j = rec.removed;
    if (vertex_alive(j) || !vertex_alive(rec.kept)) throw std::logic_error("undo_collapse: stale record");

    for (const auto& fc : rec.faces)
        if (!fc.removed) detach_face(fc.id);
    for (const auto& ec : rec.edges) {
        const bool rewritten = !ec.removed && (ec.before[0] == j || ec.before[1] == j);
        if (rewritten) detach_edge(ec.id);
    }

    vertex_alive_[j] = 1;
    ++live_vertices_;
    positions_[j] = rec.removed_before;
    positions_[rec.kept] = rec.kept_before;

    for (const auto& ec : rec.edges) {
        Edge& ed = edges_[ec.id];
        const bool touches_j = ec.before[0] == j || ec.before[1] == j;
        ed.kind = ec.kind_before;
        if (!touches_j) continue;  // promotion only
        ed.v = ec.before;
        if (ec.removed) {
            ed.alive = true;
            ++live_edges_;
        }
        attach_edge(ec.id);
    }
    for (const auto& fc : rec.faces) {
        Face& face = faces_[fc.id];
        face.v = fc.before;
        if (fc.removed) {
            face.alive = true;
            ++live_faces_;
        }
        attach_face(fc.id);
    }
}

void SimplicialComplex2::rebuild_stars() {
    edge_lookup_.clear();
    face_lookup_.clear();
    for (auto& s : vertex_edges_) s.clear();
    for (auto& s : vertex_faces_) s.clear();
    for (auto& s : edge_faces_) s.clear();
    for (std::size_t e = 0; e < edges_.size(); ++e)
        if (edges_[e].alive) attach_edge(static_cast<EdgeId>(e));
    for (std::size_t f = 0; f < faces_.size(); ++f)
        if (faces_[f].alive) attach_face(static_cast<FaceId>(f));
}

bool SimplicialComplex2::stars_match_rebuild() const {
    SimplicialComplex2 fresh = *this;
    try {
        fresh.rebuild_stars();
    } catch (const std::logic_error&) {
        return false;
    }
    auto same = [](const auto& lhs, const auto& rhs) {
        if (lhs.size() != rhs.size()) return false;
        for (std::size_t k = 0; k < lhs.size(); ++k) {
            auto a = lhs[k], b = rhs[k];
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            if (a != b) return false;
        }
        return true;
    };
    return same(vertex_edges_, fresh.vertex_edges_) && same(vertex_faces_, fresh.vertex_faces_) &&
           same(edge_faces_, fresh.edge_faces_) && edge_lookup_ == fresh.edge_lookup_ &&
           face_lookup_ == fresh.face_lookup_;
}

std::string SimplicialComplex2::validate() const {
    std::ostringstream err;
    std::size_t nv = 0, ne = 0, nf = 0;
    for (std::size_t v = 0; v < positions_.size(); ++v) {
        if (!vertex_alive_[v]) {
            if (!vertex_edges_[v].empty() || !vertex_faces_[v].empty()) {
                err << "dead vertex " << v << " has a non-empty star";
                return err.str();
            }
            continue;
        }
        ++nv;
    }
    std::set<std::pair<VertexId, VertexId>> pairs;
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const Edge& ed = edges_[e];
        if (!ed.alive) continue;
        ++ne;
        if (ed.v[0] >= ed.v[1]) {
            err << "edge " << e << " is degenerate or unsorted";
            return err.str();
        }
        if (!vertex_alive(ed.v[0]) || !vertex_alive(ed.v[1])) {
            err << "edge " << e << " references a dead vertex";
            return err.str();
        }
        if (!pairs.insert({ed.v[0], ed.v[1]}).second) {
            err << "duplicate edge " << e;
            return err.str();
        }
    }
    std::set<std::array<VertexId, 3>> triples;
    for (std::size_t f = 0; f < faces_.size(); ++f) {
        const Face& fc = faces_[f];
        if (!fc.alive) continue;
        ++nf;
        const auto& v = fc.v;
        if (v[0] == v[1] || v[1] == v[2] || v[0] == v[2]) {
            err << "face " << f << " has a repeated vertex";
            return err.str();
        }
        for (VertexId x : v)
            if (!vertex_alive(x)) {
                err << "face " << f << " references a dead vertex";
                return err.str();
            }
        if (!triples.insert(triple_key(v).v).second) {
            err << "duplicate face " << f;
            return err.str();
        }
        for (int k = 0; k < 3; ++k) {
            const EdgeId e = find_edge(v[k], v[(k + 1) % 3]);
            if (e == kInvalidId || !edges_[e].alive || edges_[e].kind != EdgeKind::Physical) {
                err << "face " << f << " lacks a live physical side edge";
                return err.str();
            }
        }
    }
    if (nv != live_vertices_ || ne != live_edges_ || nf != live_faces_) return "live counters out of sync";
    if (!stars_match_rebuild()) return "star lists differ from a full rebuild";
    return {};
}

CompactionMap SimplicialComplex2::compact() {
    CompactionMap map;
    map.vertex.assign(positions_.size(), kInvalidId);
    map.edge.assign(edges_.size(), kInvalidId);
    map.face.assign(faces_.size(), kInvalidId);

    std::vector<Point3> positions;
    for (std::size_t v = 0; v < positions_.size(); ++v) {
        if (!vertex_alive_[v]) continue;
        map.vertex[v] = static_cast<VertexId>(positions.size());
        positions.push_back(positions_[v]);
    }
    std::vector<Edge> edges;
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        if (!edges_[e].alive) continue;
        map.edge[e] = static_cast<EdgeId>(edges.size());
        Edge ed = edges_[e];
        ed.v = {map.vertex[ed.v[0]], map.vertex[ed.v[1]]};
        if (ed.v[0] > ed.v[1]) std::swap(ed.v[0], ed.v[1]);
        edges.push_back(ed);
    }
    std::vector<Face> faces;
    for (std::size_t f = 0; f < faces_.size(); ++f) {
        if (!faces_[f].alive) continue;
        map.face[f] = static_cast<FaceId>(faces.size());
        Face fc = faces_[f];
        for (auto& v : fc.v) v = map.vertex[v];
        faces.push_back(fc);
    }

    positions_ = std::move(positions);
    vertex_alive_.assign(positions_.size(), 1);
    edges_ = std::move(edges);
    faces_ = std::move(faces);
    vertex_edges_.assign(positions_.size(), {});
    vertex_faces_.assign(positions_.size(), {});
    edge_faces_.assign(edges_.size(), {});
    live_vertices_ = positions_.size();
    live_edges_ = edges_.size();
    live_faces_ = faces_.size();
    rebuild_stars();
    return map;
}

}  // namespace wildsimp
