#pragma once

#include <optional>
#include <vector>

#include "wildsimp/complex_build.hpp"
#include "wildsimp/decimator.hpp"
#include "wildsimp/mesh_io.hpp"
#include "wildsimp/texture_transfer.hpp"

namespace wildsimp {

struct TextureOptions {
    bool enabled = false;
    int samples_per_edge = 4;
    int gutter = 2;
    int atlas_max = 8192;
};

struct SimplifyOptions {
    DecimationConfig decimation;
    TextureOptions texture;
    double weld_eps = 0.0;
};

struct PhaseTimings {
    double virtual_edges = 0.0;  // seconds
    double collapses = 0.0;
    double texture = 0.0;
    double total = 0.0;
};

struct SimplifyResult {
    SimplicialComplex2 mesh;  // compacted output
    std::optional<BakedAtlas> atlas;  // corner_uvs indexed by output face id
    std::vector<SurfaceSample> samples;  // resolved color samples (texture runs only)
    std::vector<std::uint32_t> chart_of_owner;  // sample owner id -> output face id
    std::size_t input_vertices = 0;
    std::size_t input_faces = 0;
    std::size_t target_faces = 0;
    std::size_t collapses = 0;
    std::size_t virtual_edges = 0;
    bool target_reached = true;
    ProjectionStats projection;
    ColorStats colors;
    PhaseTimings timings;
};

/// Build, virtual edges, decimation, optional texture transfer, compaction.
SimplifyResult simplify(const RawMesh& raw, const SimplifyOptions& opts);

/// Output mesh as a RawMesh; carries the baked texture and UVs when present.
RawMesh to_raw_mesh(const SimplifyResult& result);

}  // namespace wildsimp
