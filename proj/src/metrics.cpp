#include "wildsimp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include "json.hpp"
#include <random>

#include "wildsimp/geometry.hpp"
#include "wildsimp/texture_transfer.hpp"

namespace wildsimp {

bool has_colors(const RawMesh& mesh) { return (mesh.texture && mesh.has_uvs()) || mesh.has_vertex_colors(); }

Aabb raw_bounds(const RawMesh& mesh) {
    Aabb box;
    for (const auto& f : mesh.faces)
        for (auto v : f) box.extend(mesh.positions[v]);
    return box;
}

RawMesh scaled(const RawMesh& mesh, double factor) {
    RawMesh out = mesh;
    for (auto& p : out.positions) p *= factor;
    return out;
}

namespace {

Triangle raw_triangle(const RawMesh& mesh, std::size_t f) {
    const auto& t = mesh.faces[f];
    return {mesh.positions[t[0]], mesh.positions[t[1]], mesh.positions[t[2]]};
}

/// Uniform double in [0, 1) from the top 53 bits; independent of the
/// standard library's distribution implementations.
double unit_double(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

PointCloudSample sample_surface(const RawMesh& mesh, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_surface: N must be at least 1");
    if (mesh.faces.empty()) throw std::invalid_argument("sample_surface: mesh has no faces");
    PointCloudSample out;
    out.requested = n;
    out.seed = seed;
    const bool colored = has_colors(mesh);

    auto push = [&](const Point3& p, std::uint32_t f, const std::array<double, 3>& w) {
        out.positions.push_back(p);
        out.face.push_back(f);
        out.bary.push_back(w);
        if (colored) out.colors.push_back(raw_surface_color(mesh, f, w));
    };

    std::vector<std::uint8_t> seen(mesh.positions.size(), 0);
    for (std::uint32_t f = 0; f < mesh.faces.size(); ++f)
        for (int k = 0; k < 3; ++k) {
            const auto v = mesh.faces[f][k];
            if (seen[v]) continue;
            seen[v] = 1;
            std::array<double, 3> w{0.0, 0.0, 0.0};
            w[k] = 1.0;
            push(mesh.positions[v], f, w);
        }

    std::vector<double> cumulative(mesh.faces.size());
    double total = 0.0;
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        total += triangle_area(raw_triangle(mesh, f));
        cumulative[f] = total;
    }
    if (!(total > 0.0)) {
        out.zero_area = true;
        return out;
    }

    std::mt19937_64 rng(seed);
    for (std::size_t k = 0; k < n; ++k) {
        const double pick = unit_double(rng) * total;
        const double u1 = unit_double(rng), u2 = unit_double(rng);
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick);
        if (it == cumulative.end()) --it;
        // Skip zero-area faces that share a cumulative value with their successor.
        while (it != cumulative.begin() && *(it - 1) == *it) --it;
        const auto f = static_cast<std::uint32_t>(it - cumulative.begin());
        const double s = std::sqrt(u1);
        const std::array<double, 3> w{1.0 - s, s * (1.0 - u2), s * u2};
        push(interpolate(raw_triangle(mesh, f), w), f, w);
    }
    return out;
}

Bvh mesh_bvh(const RawMesh& mesh) {
    std::vector<Triangle> tris(mesh.faces.size());
    std::vector<std::uint32_t> ids(mesh.faces.size());
    for (std::uint32_t f = 0; f < mesh.faces.size(); ++f) {
        tris[f] = raw_triangle(mesh, f);
        ids[f] = f;
    }
    return Bvh(std::move(tris), std::move(ids));
}

namespace {

std::vector<Bvh::Hit> closest_hits(const std::vector<Point3>& points, const RawMesh& target, bool parallel) {
    std::vector<Bvh::Hit> hits(points.size());
    const auto n = static_cast<std::ptrdiff_t>(points.size());
    if (parallel) {
        const Bvh bvh = mesh_bvh(target);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t k = 0; k < n; ++k) hits[k] = bvh.closest(points[k]);
    } else {
        std::vector<Triangle> tris(target.faces.size());
        std::vector<std::uint32_t> ids(target.faces.size());
        for (std::uint32_t f = 0; f < target.faces.size(); ++f) {
            tris[f] = raw_triangle(target, f);
            ids[f] = f;
        }
        for (std::ptrdiff_t k = 0; k < n; ++k) hits[k] = closest_point_brute_force(points[k], tris, ids);
    }
    return hits;
}

struct Directional {
    double max_d2 = 0.0;
    double mean_d2 = 0.0;
    std::optional<double> mean_color = std::nullopt;
};

Directional one_way(const PointCloudSample& from, const RawMesh& to, bool with_color) {
    const auto hits = closest_hits(from.positions, to, true);
    Directional d;
    // Running means: exact for constant inputs.
    double mean = 0.0, color_mean = 0.0;
    for (std::size_t k = 0; k < hits.size(); ++k) {
        const double d2 = hits[k].cp.squared_distance;
        const double step = 1.0 / static_cast<double>(k + 1);
        d.max_d2 = std::max(d.max_d2, d2);
        mean += (d2 - mean) * step;
        if (with_color) {
            const double c = color_distance(from.colors[k], raw_surface_color(to, hits[k].id, hits[k].cp.bary));
            color_mean += (c - color_mean) * step;
        }
    }
    d.mean_d2 = mean;
    if (with_color) d.mean_color = color_mean;
    return d;
}

}  // namespace

std::vector<double> squared_distances(const std::vector<Point3>& points, const RawMesh& target, bool parallel) {
    const auto hits = closest_hits(points, target, parallel);
    std::vector<double> out(hits.size());
    for (std::size_t k = 0; k < hits.size(); ++k) out[k] = hits[k].cp.squared_distance;
    return out;
}

MetricReport compare_meshes(const RawMesh& a_in, const RawMesh& b_in, const MetricOptions& opts) {
    if (a_in.faces.empty() || b_in.faces.empty()) throw std::invalid_argument("metrics: both meshes need faces");
    MetricReport report;
    report.samples = opts.samples;
    report.seed = opts.seed;
    report.normalized = opts.normalize;
    const RawMesh* a = &a_in;
    const RawMesh* b = &b_in;
    RawMesh a_scaled, b_scaled;
    if (opts.normalize) {
        Aabb box = raw_bounds(a_in);
        box.extend(raw_bounds(b_in));
        const double diag = box.diagonal();
        if (diag > 0.0) {
            report.scale = 1.0 / diag;
            a_scaled = scaled(a_in, report.scale);
            b_scaled = scaled(b_in, report.scale);
            a = &a_scaled;
            b = &b_scaled;
        }
    }
    const bool colors = has_colors(*a) && has_colors(*b);
    const PointCloudSample sa = sample_surface(*a, opts.samples, opts.seed);
    const PointCloudSample sb = sample_surface(*b, opts.samples, opts.seed);
    const Directional ab = one_way(sa, *b, colors);
    const Directional ba = one_way(sb, *a, colors);
    report.hausdorff = std::sqrt(std::max(ab.max_d2, ba.max_d2));
    report.chamfer_ms = 0.5 * (ab.mean_d2 + ba.mean_d2);
    if (colors) report.texture_chamfer = 0.5 * (*ab.mean_color + *ba.mean_color);
    return report;
}

double hausdorff(const RawMesh& a, const RawMesh& b, std::size_t n, std::uint64_t seed) {
    return compare_meshes(a, b, {n, seed, false}).hausdorff;
}

double chamfer_ms(const RawMesh& a, const RawMesh& b, std::size_t n, std::uint64_t seed) {
    return compare_meshes(a, b, {n, seed, false}).chamfer_ms;
}

double texture_chamfer(const RawMesh& a, const RawMesh& b, std::size_t n, std::uint64_t seed) {
    if (!has_colors(a) || !has_colors(b)) throw std::invalid_argument("texture_chamfer: both meshes need colors");
    return *compare_meshes(a, b, {n, seed, false}).texture_chamfer;
}

std::string MetricReport::to_json() const {
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["hausdorff"] = hausdorff;
    j["chamfer_ms"] = chamfer_ms;
    j["texture_chamfer"] = texture_chamfer ? nlohmann::ordered_json(*texture_chamfer) : nlohmann::ordered_json(nullptr);
    j["N"] = samples;
    j["seed"] = seed;
    j["normalization"] = normalized ? "unit_diagonal" : "none";
    j["scale"] = scale;
    return j.dump(2);
}

}  // namespace wildsimp
