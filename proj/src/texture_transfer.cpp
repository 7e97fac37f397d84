#include "wildsimp/texture_transfer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "wildsimp/bvh.hpp"
#include "wildsimp/geometry.hpp"

namespace wildsimp {

std::vector<SurfaceSample> sample_mesh_colors(const SimplicialComplex2& mesh, int r) {
    if (r < 1) throw std::invalid_argument("sample_mesh_colors: samples per edge must be at least 1");
    std::vector<SurfaceSample> samples;
    samples.reserve(mesh.live_face_count() * static_cast<std::size_t>((r + 1) * (r + 2) / 2));
    for (FaceId f = 0; f < mesh.face_capacity(); ++f) {
        if (!mesh.face(f).alive) continue;
        const Triangle tri = mesh.face_points(f);
        for (int i = 0; i <= r; ++i) {
            for (int j = 0; j <= r - i; ++j) {
                SurfaceSample s;
                s.owner = f;
                s.row = static_cast<std::uint16_t>(i);
                s.col = static_cast<std::uint16_t>(j);
                s.owner_bary = {static_cast<double>(r - i - j) / r, static_cast<double>(j) / r,
                                static_cast<double>(i) / r};
                s.position = interpolate(tri, s.owner_bary);
                s.host_kind = HostKind::Face;
                s.host = f;
                s.host_bary = s.owner_bary;
                samples.push_back(s);
            }
        }
    }
    return samples;
}

ProjectionCandidates split_candidates(const SimplicialComplex2& refined, const CollapseRecord& rec) {
    ProjectionCandidates c;
    for (VertexId v : {rec.kept, rec.removed}) {
        const auto& faces = refined.vertex_faces(v);
        c.faces.insert(c.faces.end(), faces.begin(), faces.end());
        for (EdgeId e : refined.vertex_edges(v))
            if (refined.edge(e).kind == EdgeKind::Physical && refined.edge_faces(e).empty()) c.edges.push_back(e);
    }
    std::sort(c.faces.begin(), c.faces.end());
    c.faces.erase(std::unique(c.faces.begin(), c.faces.end()), c.faces.end());
    std::sort(c.edges.begin(), c.edges.end());
    c.edges.erase(std::unique(c.edges.begin(), c.edges.end()), c.edges.end());
    if (c.faces.empty() && c.edges.empty()) c.vertices = {std::min(rec.kept, rec.removed), std::max(rec.kept, rec.removed)};
    return c;
}

namespace {

void project_onto(SurfaceSample& s, const SimplicialComplex2& mesh, const ProjectionCandidates& c) {
    double best = std::numeric_limits<double>::infinity();
    for (FaceId f : c.faces) {
        const ClosestPoint cp = closest_point_on_triangle(s.position, mesh.face_points(f));
        if (cp.squared_distance < best) {
            best = cp.squared_distance;
            s.host_kind = HostKind::Face;
            s.host = f;
            s.host_bary = cp.bary;
        }
    }
    for (EdgeId e : c.edges) {
        const Edge& ed = mesh.edge(e);
        const ClosestPoint cp = closest_point_on_segment(s.position, mesh.position(ed.v[0]), mesh.position(ed.v[1]));
        if (cp.squared_distance < best) {
            best = cp.squared_distance;
            s.host_kind = HostKind::Edge;
            s.host = e;
            s.host_bary = cp.bary;
        }
    }
    for (VertexId v : c.vertices) {
        const double d2 = squared_distance(s.position, mesh.position(v));
        if (d2 < best) {
            best = d2;
            s.host_kind = HostKind::Vertex;
            s.host = v;
            s.host_bary = {1.0, 0.0, 0.0};
        }
    }
}

class HostBuckets {
public:
    HostBuckets(const SimplicialComplex2& mesh, const std::vector<SurfaceSample>& samples)
        : faces_(mesh.face_capacity()), edges_(mesh.edge_capacity()), vertices_(mesh.vertex_capacity()) {
        for (std::uint32_t k = 0; k < samples.size(); ++k) insert(samples[k], k);
    }

    void insert(const SurfaceSample& s, std::uint32_t id) { bucket(s.host_kind, s.host).push_back(id); }

    void take(HostKind kind, std::uint32_t host, std::vector<std::uint32_t>& out) {
        auto& b = bucket(kind, host);
        out.insert(out.end(), b.begin(), b.end());
        b.clear();
    }

private:
    std::vector<std::uint32_t>& bucket(HostKind kind, std::uint32_t host) {
        switch (kind) {
            case HostKind::Face: return faces_[host];
            case HostKind::Edge: return edges_[host];
            case HostKind::Vertex: break;
        }
        return vertices_[host];
    }

    std::vector<std::vector<std::uint32_t>> faces_, edges_, vertices_;
};

constexpr std::size_t kParallelThreshold = 256;

}  // namespace

ProjectionStats successive_project(std::vector<SurfaceSample>& samples, SimplicialComplex2& mesh,
                                   const std::vector<CollapseRecord>& history, bool parallel,
                                   const SplitObserver& observer) {
    ProjectionStats stats;
    HostBuckets buckets(mesh, samples);
    std::vector<std::uint32_t> affected;
    for (auto it = history.rbegin(); it != history.rend(); ++it) {
        const CollapseRecord& rec = *it;
        const VertexId i = rec.kept;
        affected.clear();
        for (FaceId f : mesh.vertex_faces(i)) buckets.take(HostKind::Face, f, affected);
        for (EdgeId e : mesh.vertex_edges(i)) buckets.take(HostKind::Edge, e, affected);
        buckets.take(HostKind::Vertex, i, affected);

        mesh.undo_collapse(rec);
        ++stats.splits;
        if (affected.empty()) continue;

        const ProjectionCandidates cand = split_candidates(mesh, rec);
        const auto n = static_cast<std::ptrdiff_t>(affected.size());
        if (parallel && affected.size() >= kParallelThreshold) {
#pragma omp parallel for schedule(static)
            for (std::ptrdiff_t k = 0; k < n; ++k) project_onto(samples[affected[k]], mesh, cand);
        } else {
            for (std::ptrdiff_t k = 0; k < n; ++k) project_onto(samples[affected[k]], mesh, cand);
        }
        for (std::uint32_t id : affected) buckets.insert(samples[id], id);
        stats.reprojections += affected.size();
        if (observer) observer(mesh, rec, affected, samples);
    }

    std::vector<std::uint32_t> stray;
    for (std::uint32_t k = 0; k < samples.size(); ++k)
        if (samples[k].host_kind != HostKind::Face) stray.push_back(k);
    if (!stray.empty()) {
        const Bvh bvh = Bvh::from_complex(mesh);
        for (std::uint32_t k : stray) {
            const Bvh::Hit hit = bvh.closest(samples[k].position);
            samples[k].host_kind = HostKind::Face;
            samples[k].host = hit.id;
            samples[k].host_bary = hit.cp.bary;
        }
        stats.global_fallbacks = stray.size();
    }
    return stats;
}

void project_global(std::vector<SurfaceSample>& samples, const SimplicialComplex2& input) {
    const Bvh bvh = Bvh::from_complex(input);
    const auto n = static_cast<std::ptrdiff_t>(samples.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        const Bvh::Hit hit = bvh.closest(samples[k].position);
        samples[k].host_kind = HostKind::Face;
        samples[k].host = hit.id;
        samples[k].host_bary = hit.cp.bary;
    }
}

Rgb raw_surface_color(const RawMesh& raw, std::uint32_t rf, const std::array<double, 3>& w) {
    if (raw.texture && raw.has_uvs()) {
        if (!raw.face_has_uv[rf]) return kMissingUvColor;
        const auto& uv = raw.corner_uvs[rf];
        // Offsets from corner 0 keep equal corners exact.
        const Vec2 p{uv[0].u + w[1] * (uv[1].u - uv[0].u) + w[2] * (uv[2].u - uv[0].u),
                     uv[0].v + w[1] * (uv[1].v - uv[0].v) + w[2] * (uv[2].v - uv[0].v)};
        return sample_texture(*raw.texture, p);
    }
    if (raw.has_vertex_colors()) {
        const auto& f = raw.faces[rf];
        const Rgb& c0 = raw.vertex_colors[f[0]];
        const Rgb& c1 = raw.vertex_colors[f[1]];
        const Rgb& c2 = raw.vertex_colors[f[2]];
        return {c0.r + w[1] * (c1.r - c0.r) + w[2] * (c2.r - c0.r), c0.g + w[1] * (c1.g - c0.g) + w[2] * (c2.g - c0.g),
                c0.b + w[1] * (c1.b - c0.b) + w[2] * (c2.b - c0.b)};
    }
    return {1.0, 1.0, 1.0};
}

ColorStats resolve_colors(std::vector<SurfaceSample>& samples, const SimplicialComplex2& input, const RawMesh& raw,
                          const std::vector<std::uint32_t>& face_source) {
    ColorStats stats;
    const bool textured = raw.texture && raw.has_uvs();
    for (auto& s : samples) {
        if (s.host_kind != HostKind::Face || !input.face(s.host).alive)
            throw std::logic_error("resolve_colors: sample is not hosted on an input face");
        const std::uint32_t rf = face_source[s.host];
        if (textured && !raw.face_has_uv[rf]) ++stats.missing_uv_faces;
        s.color = raw_surface_color(raw, rf, s.host_bary);
    }
    return stats;
}

namespace {

struct NearestGrid {
    int row, col;
};

/// Nearest chart grid point (row i, col j, i + j <= r) for each texel of a cell.
std::vector<NearestGrid> dilation_table(int r, int gutter, int cell) {
    std::vector<NearestGrid> table(static_cast<std::size_t>(cell) * cell);
    for (int ty = 0; ty < cell; ++ty)
        for (int tx = 0; tx < cell; ++tx) {
            const int gx = tx - gutter, gy = ty - gutter;
            NearestGrid best{0, 0};
            long best_d = std::numeric_limits<long>::max();
            for (int i = 0; i <= r; ++i)
                for (int j = 0; j <= r - i; ++j) {
                    const long d = static_cast<long>(gx - j) * (gx - j) + static_cast<long>(gy - i) * (gy - i);
                    if (d < best_d) {
                        best_d = d;
                        best = {i, j};
                    }
                }
            table[static_cast<std::size_t>(ty) * cell + tx] = best;
        }
    return table;
}

}  // namespace

BakedAtlas bake_atlas(std::size_t chart_count, const std::vector<SurfaceSample>& samples,
                      const std::vector<std::uint32_t>& chart_of_owner, int r, int gutter, int atlas_max) {
    if (r < 1) throw std::invalid_argument("bake_atlas: samples per edge must be at least 1");
    if (gutter < 0) throw std::invalid_argument("bake_atlas: gutter must be non-negative");
    BakedAtlas out;
    AtlasLayout& layout = out.layout;
    layout.samples_per_edge = r;
    layout.gutter = gutter;
    layout.cell = r + 1 + 2 * gutter;

    int size = 1;
    while (static_cast<std::size_t>(size / layout.cell) * static_cast<std::size_t>(size / layout.cell) <
           std::max<std::size_t>(chart_count, 1)) {
        size *= 2;
        if (size > atlas_max)
            throw AtlasError("atlas would exceed " + std::to_string(atlas_max) + " texels; lower the samples per edge");
    }
    layout.width = layout.height = size;
    const int per_row = size / layout.cell;
    layout.charts.resize(chart_count);
    for (std::size_t c = 0; c < chart_count; ++c)
        layout.charts[c] = {static_cast<int>(c % per_row) * layout.cell, static_cast<int>(c / per_row) * layout.cell};

    out.image = TextureImage(size, size, kAtlasClearColor);
    out.corner_uvs.resize(chart_count);
    for (std::size_t c = 0; c < chart_count; ++c) {
        const auto [ox, oy] = layout.grid_origin(c);
        auto uv = [&](int j, int i) {
            return Vec2{(ox + j + 0.5) / size, (oy + i + 0.5) / size};
        };
        out.corner_uvs[c] = {uv(0, 0), uv(r, 0), uv(0, r)};
    }

    // Grid colors per chart, row-major over the triangle.
    const int per_chart = (r + 1) * (r + 2) / 2;
    auto grid_index = [r](int i, int j) { return i * (r + 1) - i * (i - 1) / 2 + j; };
    std::vector<Rgb> grid(chart_count * per_chart);
    std::vector<std::uint8_t> written(chart_count * per_chart, 0);
    for (const auto& s : samples) {
        const std::uint32_t c = chart_of_owner.at(s.owner);
        if (c == kInvalidId) continue;
        const std::size_t k = static_cast<std::size_t>(c) * per_chart + grid_index(s.row, s.col);
        grid[k] = s.color;
        written[k] = 1;
    }
    if (std::find(written.begin(), written.end(), 0) != written.end())
        throw std::logic_error("bake_atlas: a chart grid texel has no sample");

    const auto table = dilation_table(r, gutter, layout.cell);
    const auto n = static_cast<std::ptrdiff_t>(chart_count);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < n; ++c) {
        const ChartPlacement cp = layout.charts[c];
        for (int ty = 0; ty < layout.cell; ++ty)
            for (int tx = 0; tx < layout.cell; ++tx) {
                const NearestGrid g = table[static_cast<std::size_t>(ty) * layout.cell + tx];
                const Rgb& color = grid[static_cast<std::size_t>(c) * per_chart + grid_index(g.row, g.col)];
                // v-up texel row y maps to image row size - 1 - y.
                out.image.set(cp.x + tx, size - 1 - (cp.y + ty), color);
            }
    }
    return out;
}

void write_mesh_colors(const std::filesystem::path& path, std::size_t chart_count,
                       const std::vector<SurfaceSample>& samples, const std::vector<std::uint32_t>& chart_of_owner,
                       int r) {
    const int per_chart = (r + 1) * (r + 2) / 2;
    std::vector<std::uint8_t> rgb(chart_count * per_chart * 3, 0);
    auto quantize = [](double v) { return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)); };
    for (const auto& s : samples) {
        const std::uint32_t c = chart_of_owner.at(s.owner);
        if (c == kInvalidId) continue;
        const int idx = s.row * (r + 1) - s.row * (s.row - 1) / 2 + s.col;
        auto* dst = rgb.data() + (static_cast<std::size_t>(c) * per_chart + idx) * 3;
        dst[0] = quantize(s.color.r);
        dst[1] = quantize(s.color.g);
        dst[2] = quantize(s.color.b);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw MeshIoError(path.string() + ": cannot open for writing");
    auto put_u32 = [&](std::uint32_t v) {
        const unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                                    static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
        out.write(reinterpret_cast<const char*>(b), 4);
    };
    for (std::size_t c = 0; c < chart_count; ++c) {
        put_u32(static_cast<std::uint32_t>(c));
        put_u32(static_cast<std::uint32_t>(r));
        out.write(reinterpret_cast<const char*>(rgb.data() + c * per_chart * 3), per_chart * 3);
    }
    if (!out) throw MeshIoError(path.string() + ": write failed");
}

}  // namespace wildsimp
