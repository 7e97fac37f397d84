#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wildsimp/bvh.hpp"
#include "wildsimp/core_types.hpp"
#include "wildsimp/mesh_io.hpp"

namespace wildsimp {

class BuildError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct BuildResult {
    SimplicialComplex2 mesh;
    /// Raw vertex index -> complex vertex id.
    std::vector<VertexId> vertex_map;
    /// Complex face id -> raw face index (first occurrence of duplicates).
    std::vector<std::uint32_t> face_source;
    std::size_t duplicate_faces = 0;
    std::size_t degenerate_after_weld = 0;
};

/// Welds vertices within `weld_eps` (exact duplicates when 0), extracts one
/// physical edge per face side and drops duplicate faces. Raw vertices not
/// referenced by any face are kept only when they lie on an `l` record.
BuildResult build_complex(const RawMesh& raw, double weld_eps = 0.0);

/// Per-vertex connected-component ids (union-find), numbered 0..count-1 in
/// order of first appearance.
struct ComponentLabels {
    std::vector<std::uint32_t> label;
    std::uint32_t count = 0;
};

ComponentLabels label_components(const SimplicialComplex2& mesh, bool include_virtual = false);

struct VirtualEdgeOptions {
    double eps = 0.0;                 // absolute distance threshold
    std::uint32_t per_vertex_cap = 32;
};

struct VirtualEdgeCandidate {
    VertexId a = kInvalidId, b = kInvalidId;  // a < b
    double vertex_distance = 0.0;
    friend bool operator==(const VirtualEdgeCandidate&, const VirtualEdgeCandidate&) = default;
};

/// For two faces of different components within `eps`, the vertex pair
/// nearest the realizing closest points; nullopt when not within eps.
std::optional<VirtualEdgeCandidate> face_pair_candidate(const SimplicialComplex2& mesh, FaceId f1, FaceId f2,
                                                        double eps);

/// Candidate virtual edges from BVH range queries (OpenMP over faces).
std::vector<VirtualEdgeCandidate> find_virtual_edges(const SimplicialComplex2& mesh, const ComponentLabels& labels,
                                                     const VirtualEdgeOptions& opts);

/// O(F^2) reference: every face pair is tested.
std::vector<VirtualEdgeCandidate> find_virtual_edges_brute_force(const SimplicialComplex2& mesh,
                                                                 const ComponentLabels& labels,
                                                                 const VirtualEdgeOptions& opts);

/// Inserts the candidates as virtual edges; returns the number added.
std::size_t insert_virtual_edges(SimplicialComplex2& mesh, const std::vector<VirtualEdgeCandidate>& edges);

/// find_virtual_edges + insert_virtual_edges.
std::vector<VirtualEdgeCandidate> build_virtual_edges(SimplicialComplex2& mesh, const ComponentLabels& labels,
                                                      const VirtualEdgeOptions& opts);

}  // namespace wildsimp
