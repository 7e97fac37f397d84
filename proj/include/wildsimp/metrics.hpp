#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wildsimp/bvh.hpp"
#include "wildsimp/mesh_io.hpp"

namespace wildsimp {

/// Points on a mesh surface: all vertices used by faces first, then N
/// area-weighted uniform samples. Sample k only depends on the first k
/// draws of the seeded stream, so larger N extends smaller N.
struct PointCloudSample {
    std::vector<Point3> positions;
    std::vector<std::uint32_t> face;           // raw face index (witness)
    std::vector<std::array<double, 3>> bary;   // barycentric witness on `face`
    std::vector<Rgb> colors;                   // filled when the mesh has colors
    std::size_t requested = 0;
    std::uint64_t seed = 0;
    bool zero_area = false;  // only vertices could be sampled
};

bool has_colors(const RawMesh& mesh);

PointCloudSample sample_surface(const RawMesh& mesh, std::size_t n, std::uint64_t seed);

/// Triangles of a raw mesh with ids equal to raw face indices.
Bvh mesh_bvh(const RawMesh& mesh);

/// Squared distance from every point to the mesh. The parallel path is an
/// OpenMP loop over BVH queries; the serial path is a brute-force scan.
std::vector<double> squared_distances(const std::vector<Point3>& points, const RawMesh& target, bool parallel = true);

struct MetricOptions {
    std::size_t samples = 100000;
    std::uint64_t seed = 0;
    bool normalize = true;  // scale both meshes by 1 / (diagonal of their joint bbox)
};

double hausdorff(const RawMesh& a, const RawMesh& b, std::size_t n, std::uint64_t seed);
double chamfer_ms(const RawMesh& a, const RawMesh& b, std::size_t n, std::uint64_t seed);
/// Throws std::invalid_argument if either mesh has no colors.
double texture_chamfer(const RawMesh& a, const RawMesh& b, std::size_t n, std::uint64_t seed);

struct MetricReport {
    double hausdorff = 0.0;
    double chamfer_ms = 0.0;
    std::optional<double> texture_chamfer;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    bool normalized = false;
    double scale = 1.0;

    std::string to_json() const;
};

/// All three metrics from one pair of sample sets.
MetricReport compare_meshes(const RawMesh& a, const RawMesh& b, const MetricOptions& opts);

/// Copy of `mesh` with positions multiplied by `factor`.
RawMesh scaled(const RawMesh& mesh, double factor);
Aabb raw_bounds(const RawMesh& mesh);

}  // namespace wildsimp
