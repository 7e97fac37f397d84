#include "wildsimp/pipeline.hpp"

#include <chrono>
#include <utility>

namespace wildsimp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

SimplifyResult simplify(const RawMesh& raw, const SimplifyOptions& opts) {
    opts.decimation.validate();
    const auto start = Clock::now();
    SimplifyResult out;

    BuildResult built = build_complex(raw, opts.weld_eps);
    out.input_vertices = built.mesh.live_vertex_count();
    out.input_faces = built.mesh.live_face_count();

    auto t0 = Clock::now();
    if (opts.decimation.enable_virtual_edges) {
        const ComponentLabels labels = label_components(built.mesh);
        if (labels.count > 1) {
            const double eps = opts.decimation.eps_rel * built.mesh.bounds().diagonal();
            const auto added = build_virtual_edges(built.mesh, labels, {eps, opts.decimation.virtual_edge_cap});
            out.virtual_edges = added.size();
        }
    }
    out.timings.virtual_edges = seconds_since(t0);

    t0 = Clock::now();
    DecimationConfig dcfg = opts.decimation;
    dcfg.record_history = dcfg.record_history || opts.texture.enabled;
    DecimationResult dec = decimate(std::move(built.mesh), dcfg);
    out.timings.collapses = seconds_since(t0);
    out.collapses = dec.costs.size();
    out.target_faces = dec.target_faces;
    out.target_reached = dec.target_reached;

    out.mesh = std::move(dec.mesh);
    if (opts.texture.enabled) {
        t0 = Clock::now();
        const int r = opts.texture.samples_per_edge;
        out.samples = sample_mesh_colors(out.mesh, r);
        SimplicialComplex2 walk = out.mesh;
        out.projection = successive_project(out.samples, walk, dec.history);
        out.colors = resolve_colors(out.samples, walk, raw, built.face_source);
        const CompactionMap map = out.mesh.compact();
        out.chart_of_owner = map.face;
        out.atlas = bake_atlas(out.mesh.live_face_count(), out.samples, out.chart_of_owner, r, opts.texture.gutter,
                               opts.texture.atlas_max);
        out.timings.texture = seconds_since(t0);
    } else {
        out.mesh.compact();
    }
    out.timings.total = seconds_since(start);
    return out;
}

RawMesh to_raw_mesh(const SimplifyResult& result) {
    RawMesh raw;
    const auto& m = result.mesh;
    raw.positions.reserve(m.vertex_capacity());
    for (VertexId v = 0; v < m.vertex_capacity(); ++v) raw.positions.push_back(m.position(v));
    for (FaceId f = 0; f < m.face_capacity(); ++f) raw.faces.push_back(m.face(f).v);
    for (EdgeId e = 0; e < m.edge_capacity(); ++e) {
        const Edge& ed = m.edge(e);
        if (ed.kind == EdgeKind::Physical && m.edge_faces(e).empty()) raw.lines.push_back(ed.v);
    }
    if (result.atlas) {
        raw.corner_uvs = result.atlas->corner_uvs;
        raw.face_has_uv.assign(raw.faces.size(), 1);
        raw.texture = result.atlas->image;
    }
    return raw;
}

}  // namespace wildsimp
