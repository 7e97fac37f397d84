#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "wildsimp/core_types.hpp"
#include "wildsimp/mesh_io.hpp"

namespace wildsimp {

enum class HostKind : std::uint8_t { Face, Edge, Vertex };

/// A color sample placed on the simplified mesh. `position` never changes;
/// the host walks back through the collapse history to the input mesh.
struct SurfaceSample {
    FaceId owner = kInvalidId;
    std::array<double, 3> owner_bary{};
    std::uint16_t row = 0;  // barycentric grid coordinates on the owner
    std::uint16_t col = 0;
    Point3 position{};
    HostKind host_kind = HostKind::Face;
    std::uint32_t host = kInvalidId;
    std::array<double, 3> host_bary{};
    Rgb color{1.0, 1.0, 1.0};
};

/// Barycentric grid of (r+1)(r+2)/2 samples per live face: row i, column j
/// has weights (1 - (i+j)/r, j/r, i/r).
std::vector<SurfaceSample> sample_mesh_colors(const SimplicialComplex2& mesh, int samples_per_edge);

struct ProjectionStats {
    std::size_t splits = 0;
    std::size_t reprojections = 0;
    std::size_t global_fallbacks = 0;
};

/// Called after each split's re-projection with the refined mesh, the split
/// record and the ids of the samples that were re-projected.
using SplitObserver = std::function<void(const SimplicialComplex2&, const CollapseRecord&,
                                         std::span<const std::uint32_t>, const std::vector<SurfaceSample>&)>;

/// Candidate simplices for re-projection after undoing `rec`: faces around
/// either endpoint, dangling physical edges there, and the two vertices when
/// neither exists.
struct ProjectionCandidates {
    std::vector<FaceId> faces;
    std::vector<EdgeId> edges;
    std::vector<VertexId> vertices;
};
ProjectionCandidates split_candidates(const SimplicialComplex2& refined, const CollapseRecord& rec);

/// Walks `history` backwards from `mesh` (the final, uncompacted complex),
/// re-projecting affected samples onto the edge one-ring of each split.
/// On return `mesh` is the input complex and every sample hosts on a face.
ProjectionStats successive_project(std::vector<SurfaceSample>& samples, SimplicialComplex2& mesh,
                                   const std::vector<CollapseRecord>& history, bool parallel = true,
                                   const SplitObserver& observer = {});

/// Baseline: closest point on the whole input mesh.
void project_global(std::vector<SurfaceSample>& samples, const SimplicialComplex2& input);

struct ColorStats {
    std::size_t missing_uv_faces = 0;
};

inline constexpr Rgb kMissingUvColor{0.5, 0.5, 0.5};

/// Colors from the input: texture through per-corner UVs, else vertex
/// colors, else white. `face_source` maps complex face ids to raw faces.
ColorStats resolve_colors(std::vector<SurfaceSample>& samples, const SimplicialComplex2& input, const RawMesh& raw,
                          const std::vector<std::uint32_t>& face_source);

/// Color of the raw input at barycentric `bary` on raw face `raw_face`.
Rgb raw_surface_color(const RawMesh& raw, std::uint32_t raw_face, const std::array<double, 3>& bary);

struct ChartPlacement {
    int x = 0;  // lower-left texel of the cell (gutter included), v-up texel space
    int y = 0;
};

struct AtlasLayout {
    int samples_per_edge = 0;
    int gutter = 0;
    int cell = 0;  // cell edge in texels: r + 1 + 2 * gutter
    int width = 0;
    int height = 0;
    std::vector<ChartPlacement> charts;  // one per output face

    /// Texel-space (v-up) origin of the chart's grid point (0, 0).
    std::array<int, 2> grid_origin(std::size_t chart) const {
        return {charts[chart].x + gutter, charts[chart].y + gutter};
    }
};

struct BakedAtlas {
    AtlasLayout layout;
    TextureImage image;
    std::vector<std::array<Vec2, 3>> corner_uvs;  // one triple per output face
};

class AtlasError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::array<std::uint8_t, 4> kAtlasClearColor{0, 0, 0, 0};

/// Square power-of-two atlas with one right-triangle chart per face, grid
/// texels written from the samples and the rest of each cell dilated from
/// the nearest grid texel. `chart_of_owner` maps sample owner ids to charts.
BakedAtlas bake_atlas(std::size_t chart_count, const std::vector<SurfaceSample>& samples,
                      const std::vector<std::uint32_t>& chart_of_owner, int samples_per_edge, int gutter,
                      int atlas_max = 8192);

/// Raw per-face sample colors: per face, u32 face id, u32 r, then RGB8
/// triples in grid order (row-major, row i holding r - i + 1 samples).
void write_mesh_colors(const std::filesystem::path& path, std::size_t chart_count,
                       const std::vector<SurfaceSample>& samples, const std::vector<std::uint32_t>& chart_of_owner,
                       int samples_per_edge);

}  // namespace wildsimp
