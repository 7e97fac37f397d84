#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "wildsimp/mesh_io.hpp"

namespace fixtures {

using wildsimp::RawMesh;

/// Geodesic sphere of radius 1: 20 * 4^level faces (level 3 = 1280).
RawMesh icosphere(int level);
/// Closed unit cube, 12 faces, shared vertices.
RawMesh cube();
/// Same cube with every triangle carrying its own three vertices.
RawMesh cube_soup();
RawMesh tetrahedron();
/// Two triangles sharing one edge.
RawMesh two_triangles();
/// Three triangles on one edge plus a lone triangle and a dangling line.
RawMesh nonmanifold_fin();
/// Small box standing on the top face of a large one, not touching any of its vertices.
RawMesh t_junction_boxes();
/// Three disconnected unit squares in a row separated by `gap`.
RawMesh coplanar_squares(double gap = 1e-4);
/// Closed wavy slab: blue top sheet, yellow bottom sheet, thickness `thickness`.
RawMesh two_sided_slab(int n = 40, double thickness = 0.01, double amplitude = 0.05);
/// Flat n x n quad grid split into four UV islands over a checker texture.
RawMesh textured_island_grid(int n = 16, int texture_size = 64);
/// Flat n x n quad grid with one UV island covering a checker texture.
RawMesh textured_quad_grid(int n, int texture_size, int checks);
/// Random triangles in the unit cube.
RawMesh random_soup(std::size_t faces, std::uint64_t seed);
/// Regular lattice of small separate cubes, nearly touching.
RawMesh cube_cluster(int per_side, double gap = 1e-4);
/// Closed blobby body with a head on a geodesic sphere; about `faces` triangles.
RawMesh duck(std::size_t faces);
/// Unit square (2 faces) at height z.
RawMesh square(double z);
/// Closed perturbed lat-long sphere with exactly 2 * nu * (nv - 1) faces.
RawMesh perturbed_sphere(int nu, int nv, double noise, std::uint64_t seed);
/// Same geometry with a constant vertex color.
RawMesh with_solid_color(RawMesh mesh, const wildsimp::Rgb& c);

/// Unique scratch directory below the system temp directory.
std::filesystem::path scratch_dir(const std::string& name);

}  // namespace fixtures
