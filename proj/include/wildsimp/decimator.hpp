#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wildsimp/core_types.hpp"
#include "wildsimp/quadrics.hpp"

namespace wildsimp {

enum class Accumulation { Memory, Memoryless };

std::string to_string(Accumulation a);
Accumulation accumulation_from_string(const std::string& s);

struct DecimationConfig {
    std::optional<std::size_t> target_faces;  // takes precedence over target_ratio
    double target_ratio = 0.1;
    double eps_rel = 1e-3;  // virtual-edge threshold relative to the bbox diagonal
    double area_weight = 1.0;
    Accumulation edge_quadric_mode = Accumulation::Memory;
    Accumulation area_quadric_mode = Accumulation::Memoryless;
    bool enable_virtual_edges = true;
    bool preserve_topology = false;
    bool record_history = true;
    std::uint32_t virtual_edge_cap = 32;
    AreaEdgeSet area_edges = AreaEdgeSet::Boundary;
    double regularizer = 0.0;  // sigma of the optional Tikhonov term, model units
    bool debug_checks = false;  // full invariant validation after every collapse

    std::size_t resolve_target(std::size_t face_count) const;
    void validate() const;
};

struct EdgeCost {
    EdgeId edge = kInvalidId;
    double cost = 0.0;
    Point3 position{};
    std::uint32_t generation = 0;
};

struct CostLogEntry {
    EdgeId edge;
    VertexId kept;
    VertexId removed;
    double cost;
    EdgeKind kind;
};

struct DecimationResult {
    SimplicialComplex2 mesh;  // uncompacted; ids match the history
    std::vector<CollapseRecord> history;
    std::vector<CostLogEntry> costs;
    std::size_t input_faces = 0;
    std::size_t target_faces = 0;
    bool target_reached = true;
};

/// Per-vertex stored quadrics (edge term, plus area term in memory mode).
struct VertexQuadrics {
    std::vector<Quadric> edge;
    std::vector<Quadric> area;  // empty unless the area term accumulates
};

VertexQuadrics initial_vertex_quadrics(const SimplicialComplex2& mesh, const DecimationConfig& cfg);

/// Combined quadric Q_i + Q_j + lambda * Q_area for edge `e`.
Quadric combined_edge_quadric(const SimplicialComplex2& mesh, const VertexQuadrics& vq, EdgeId e,
                              const DecimationConfig& cfg);

/// Cost at the optimal placement of the combined quadric; negatives clamp to 0.
EdgeCost edge_cost(const SimplicialComplex2& mesh, const VertexQuadrics& vq, EdgeId e, const DecimationConfig& cfg);

/// Costs for every live edge. The parallel path is an OpenMP loop; the
/// serial path is kept as its reference.
std::vector<EdgeCost> compute_all_edge_costs(const SimplicialComplex2& mesh, const VertexQuadrics& vq,
                                             const DecimationConfig& cfg, bool parallel = true);

/// Applies the configured accumulation after `rec` was applied to `mesh`.
void update_quadrics_after_collapse(const SimplicialComplex2& mesh, VertexQuadrics& vq, const CollapseRecord& rec,
                                    const DecimationConfig& cfg);

/// Link condition, face duplication, boundary and normal-flip checks used
/// when topology preservation is requested.
bool collapse_preserves_topology(const SimplicialComplex2& mesh, EdgeId e, const Point3& position);

/// Greedy decimation of `mesh` (which should already carry its virtual edges).
DecimationResult decimate(SimplicialComplex2 mesh, const DecimationConfig& cfg);

}  // namespace wildsimp
