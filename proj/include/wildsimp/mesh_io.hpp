#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wildsimp/core_types.hpp"

namespace wildsimp {

class MeshIoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// RGBA8 image, row 0 at the top. Sampling maps v = 1 to the top row.
struct TextureImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgba;

    TextureImage() = default;
    TextureImage(int w, int h, std::array<std::uint8_t, 4> fill = {0, 0, 0, 0});

    std::uint8_t* texel(int x, int y) { return rgba.data() + 4 * (static_cast<std::size_t>(y) * width + x); }
    const std::uint8_t* texel(int x, int y) const {
        return rgba.data() + 4 * (static_cast<std::size_t>(y) * width + x);
    }
    Rgb color(int x, int y) const {
        const auto* t = texel(x, y);
        return {t[0] / 255.0, t[1] / 255.0, t[2] / 255.0};
    }
    void set(int x, int y, const Rgb& c, std::uint8_t alpha = 255);
};

struct LoadStats {
    std::size_t degenerate_faces = 0;      // dropped at load
    std::size_t triangulated_polygons = 0;  // polygons with more than three corners
};

struct RawMesh {
    std::vector<Point3> positions;
    std::vector<std::array<std::uint32_t, 3>> faces;
    /// Per-corner UVs, parallel to `faces` when non-empty.
    std::vector<std::array<Vec2, 3>> corner_uvs;
    /// 1 when the face carried texture coordinates, parallel to `faces` when non-empty.
    std::vector<std::uint8_t> face_has_uv;
    std::vector<Rgb> vertex_colors;  // empty or one per position
    std::vector<std::array<std::uint32_t, 2>> lines;
    std::optional<TextureImage> texture;
    std::filesystem::path texture_path;
    LoadStats stats;

    bool has_uvs() const { return !corner_uvs.empty(); }
    bool has_vertex_colors() const { return !vertex_colors.empty(); }
};

RawMesh load_mesh(const std::filesystem::path& path);
RawMesh load_obj(const std::filesystem::path& path);
RawMesh load_ply(const std::filesystem::path& path);

/// Writes OBJ (with MTL + PNG side files when a texture is given) or PLY,
/// chosen by extension. The mesh must be compacted. `corner_uvs` is parallel
/// to the live faces. Physical edges without faces become `l` records.
void save_mesh(const SimplicialComplex2& mesh, const std::vector<std::array<Vec2, 3>>* corner_uvs,
               const TextureImage* texture, const std::filesystem::path& path);

/// Writes a RawMesh as OBJ (used for fixtures and the metrics tooling).
void save_raw_obj(const RawMesh& mesh, const std::filesystem::path& path);

TextureImage read_png(const std::filesystem::path& path);
void write_png(const TextureImage& image, const std::filesystem::path& path);

/// Bilinear lookup with repeat wrapping; texel centers at (i + 0.5) / W.
Rgb sample_texture(const TextureImage& image, const Vec2& uv);

}  // namespace wildsimp
