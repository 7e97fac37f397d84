#include "wildsimp/mesh_io.hpp"

#include <png.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

namespace wildsimp {

namespace fs = std::filesystem;

TextureImage::TextureImage(int w, int h, std::array<std::uint8_t, 4> fill) : width(w), height(h) {
    if (w < 1 || h < 1) throw std::invalid_argument("TextureImage: dimensions must be positive");
    rgba.resize(static_cast<std::size_t>(w) * h * 4);
    for (std::size_t k = 0; k < rgba.size(); k += 4) std::copy(fill.begin(), fill.end(), rgba.begin() + k);
}

void TextureImage::set(int x, int y, const Rgb& c, std::uint8_t alpha) {
    auto quantize = [](double v) {
        return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
    };
    auto* t = texel(x, y);
    t[0] = quantize(c.r);
    t[1] = quantize(c.g);
    t[2] = quantize(c.b);
    t[3] = alpha;
}

namespace {

std::string lower_extension(const fs::path& p) {
    std::string ext = p.extension().string();
    for (auto& ch : ext) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return ext;
}

[[noreturn]] void parse_fail(const fs::path& path, std::size_t line, const std::string& what) {
    throw MeshIoError(path.string() + ":" + std::to_string(line) + ": " + what);
}

double parse_double(std::string_view token, const fs::path& path, std::size_t line) {
    double v = 0.0;
    // from_chars for double is available in libstdc++ 11.
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size())
        parse_fail(path, line, "malformed number '" + std::string(token) + "'");
    return v;
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t k = 0;
    while (k < s.size()) {
        while (k < s.size() && std::isspace(static_cast<unsigned char>(s[k]))) ++k;
        const std::size_t start = k;
        while (k < s.size() && !std::isspace(static_cast<unsigned char>(s[k]))) ++k;
        if (k > start) out.push_back(s.substr(start, k - start));
    }
    return out;
}

long parse_index(std::string_view token, std::size_t count, const fs::path& path, std::size_t line) {
    long v = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size() || v == 0)
        parse_fail(path, line, "malformed index '" + std::string(token) + "'");
    const long resolved = v > 0 ? v - 1 : static_cast<long>(count) + v;
    if (resolved < 0 || resolved >= static_cast<long>(count)) parse_fail(path, line, "index out of range");
    return resolved;
}

void check_finite(const Point3& p, const fs::path& path, std::size_t line) {
    if (!is_finite(p)) parse_fail(path, line, "non-finite vertex coordinate");
}

std::optional<fs::path> texture_from_mtl(const fs::path& mtl) {
    std::ifstream in(mtl);
    if (!in) return std::nullopt;
    std::string line;
    while (std::getline(in, line)) {
        auto tokens = split_ws(line);
        if (tokens.size() >= 2 && tokens[0] == "map_Kd") {
            // Options such as -s precede the file name; the name is last.
            return mtl.parent_path() / std::string(tokens.back());
        }
    }
    return std::nullopt;
}

void push_face(RawMesh& mesh, std::array<std::uint32_t, 3> tri, const std::array<Vec2, 3>* uvs) {
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
        ++mesh.stats.degenerate_faces;
        return;
    }
    mesh.faces.push_back(tri);
    mesh.corner_uvs.push_back(uvs ? *uvs : std::array<Vec2, 3>{});
    mesh.face_has_uv.push_back(uvs ? 1 : 0);
}

void finalize_uvs(RawMesh& mesh) {
    const bool any = std::any_of(mesh.face_has_uv.begin(), mesh.face_has_uv.end(), [](auto v) { return v; });
    if (!any) {
        mesh.corner_uvs.clear();
        mesh.face_has_uv.clear();
    }
}

}  // namespace

RawMesh load_mesh(const fs::path& path) {
    if (!fs::exists(path)) throw MeshIoError(path.string() + ": file not found");
    const std::string ext = lower_extension(path);
    if (ext == ".obj") return load_obj(path);
    if (ext == ".ply") return load_ply(path);
    throw MeshIoError(path.string() + ": unsupported extension '" + ext + "'");
}

RawMesh load_obj(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw MeshIoError(path.string() + ": cannot open");
    RawMesh mesh;
    std::vector<Vec2> uvs;
    std::vector<Rgb> colors;
    bool any_color = false;
    std::optional<fs::path> texture;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        const auto tokens = split_ws(line);
        if (tokens.empty()) continue;
        const auto& tag = tokens[0];
        if (tag == "v") {
            if (tokens.size() < 4) parse_fail(path, line_no, "vertex needs three coordinates");
            Point3 p{parse_double(tokens[1], path, line_no), parse_double(tokens[2], path, line_no),
                     parse_double(tokens[3], path, line_no)};
            check_finite(p, path, line_no);
            mesh.positions.push_back(p);
            if (tokens.size() >= 7) {
                colors.push_back({parse_double(tokens[4], path, line_no), parse_double(tokens[5], path, line_no),
                                  parse_double(tokens[6], path, line_no)});
                any_color = true;
            } else {
                colors.push_back({1.0, 1.0, 1.0});
            }
        } else if (tag == "vt") {
            if (tokens.size() < 3) parse_fail(path, line_no, "texture coordinate needs two values");
            uvs.push_back({parse_double(tokens[1], path, line_no), parse_double(tokens[2], path, line_no)});
        } else if (tag == "f") {
            if (tokens.size() < 4) parse_fail(path, line_no, "face needs at least three corners");
            std::vector<std::uint32_t> corners;
            std::vector<Vec2> corner_uv;
            bool has_uv = true;
            for (std::size_t k = 1; k < tokens.size(); ++k) {
                const auto tok = tokens[k];
                const auto slash = tok.find('/');
                corners.push_back(static_cast<std::uint32_t>(
                    parse_index(tok.substr(0, slash), mesh.positions.size(), path, line_no)));
                if (slash == std::string_view::npos) {
                    has_uv = false;
                    continue;
                }
                const auto rest = tok.substr(slash + 1);
                const auto uv_tok = rest.substr(0, rest.find('/'));
                if (uv_tok.empty()) {
                    has_uv = false;
                    continue;
                }
                corner_uv.push_back(uvs[parse_index(uv_tok, uvs.size(), path, line_no)]);
            }
            if (corners.size() > 3) ++mesh.stats.triangulated_polygons;
            for (std::size_t k = 1; k + 1 < corners.size(); ++k) {
                std::array<Vec2, 3> tri_uv{};
                if (has_uv) tri_uv = {corner_uv[0], corner_uv[k], corner_uv[k + 1]};
                push_face(mesh, {corners[0], corners[k], corners[k + 1]}, has_uv ? &tri_uv : nullptr);
            }
        } else if (tag == "l") {
            std::vector<std::uint32_t> pts;
            for (std::size_t k = 1; k < tokens.size(); ++k) {
                const auto tok = tokens[k];
                pts.push_back(static_cast<std::uint32_t>(
                    parse_index(tok.substr(0, tok.find('/')), mesh.positions.size(), path, line_no)));
            }
            for (std::size_t k = 0; k + 1 < pts.size(); ++k) mesh.lines.push_back({pts[k], pts[k + 1]});
        } else if (tag == "mtllib" && tokens.size() >= 2 && !texture) {
            texture = texture_from_mtl(path.parent_path() / std::string(tokens[1]));
        }
    }
    if (any_color) mesh.vertex_colors = std::move(colors);
    finalize_uvs(mesh);
    if (texture && fs::exists(*texture)) {
        mesh.texture = read_png(*texture);
        mesh.texture_path = *texture;
    }
    return mesh;
}

namespace {

enum class PlyType { Int8, UInt8, Int16, UInt16, Int32, UInt32, Float32, Float64 };

PlyType ply_type(std::string_view name, const fs::path& path, std::size_t line) {
    if (name == "char" || name == "int8") return PlyType::Int8;
    if (name == "uchar" || name == "uint8") return PlyType::UInt8;
    if (name == "short" || name == "int16") return PlyType::Int16;
    if (name == "ushort" || name == "uint16") return PlyType::UInt16;
    if (name == "int" || name == "int32") return PlyType::Int32;
    if (name == "uint" || name == "uint32") return PlyType::UInt32;
    if (name == "float" || name == "float32") return PlyType::Float32;
    if (name == "double" || name == "float64") return PlyType::Float64;
    parse_fail(path, line, "unknown PLY type '" + std::string(name) + "'");
}

struct PlyProperty {
    std::string name;
    PlyType type;
    bool is_list = false;
    PlyType count_type = PlyType::UInt8;
};

struct PlyElement {
    std::string name;
    std::size_t count = 0;
    std::vector<PlyProperty> props;
};

class PlyReader {
public:
    PlyReader(std::istream& in, bool binary, const fs::path& path) : in_(in), binary_(binary), path_(path) {}

    double read(PlyType t) {
        if (!binary_) {
            std::string tok;
            if (!(in_ >> tok)) throw MeshIoError(path_.string() + ": unexpected end of PLY data");
            return parse_double(tok, path_, 0);
        }
        switch (t) {
            case PlyType::Int8: return raw<std::int8_t>();
            case PlyType::UInt8: return raw<std::uint8_t>();
            case PlyType::Int16: return raw<std::int16_t>();
            case PlyType::UInt16: return raw<std::uint16_t>();
            case PlyType::Int32: return raw<std::int32_t>();
            case PlyType::UInt32: return raw<std::uint32_t>();
            case PlyType::Float32: return raw<float>();
            case PlyType::Float64: return raw<double>();
        }
        return 0.0;
    }

private:
    template <typename T>
    double raw() {
        T v;
        if (!in_.read(reinterpret_cast<char*>(&v), sizeof(T)))
            throw MeshIoError(path_.string() + ": unexpected end of PLY data");
        return static_cast<double>(v);
    }

    std::istream& in_;
    bool binary_;
    const fs::path& path_;
};

}  // namespace

RawMesh load_ply(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MeshIoError(path.string() + ": cannot open");
    std::string line;
    std::size_t line_no = 0;
    std::vector<PlyElement> elements;
    bool binary = false;
    auto next_line = [&]() {
        if (!std::getline(in, line)) parse_fail(path, line_no, "truncated PLY header");
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
    };
    next_line();
    if (line != "ply") parse_fail(path, line_no, "missing 'ply' magic");
    for (;;) {
        next_line();
        const auto tokens = split_ws(line);
        if (tokens.empty() || tokens[0] == "comment" || tokens[0] == "obj_info") continue;
        if (tokens[0] == "end_header") break;
        if (tokens[0] == "format") {
            if (tokens.size() < 2) parse_fail(path, line_no, "malformed format line");
            if (tokens[1] == "ascii") binary = false;
            else if (tokens[1] == "binary_little_endian") binary = true;
            else parse_fail(path, line_no, "unsupported PLY format '" + std::string(tokens[1]) + "'");
        } else if (tokens[0] == "element") {
            if (tokens.size() < 3) parse_fail(path, line_no, "malformed element line");
            elements.push_back({std::string(tokens[1]), static_cast<std::size_t>(std::stoull(std::string(tokens[2]))), {}});
        } else if (tokens[0] == "property") {
            if (elements.empty()) parse_fail(path, line_no, "property before element");
            PlyProperty prop;
            if (tokens.size() >= 5 && tokens[1] == "list") {
                prop.is_list = true;
                prop.count_type = ply_type(tokens[2], path, line_no);
                prop.type = ply_type(tokens[3], path, line_no);
                prop.name = std::string(tokens[4]);
            } else if (tokens.size() >= 3) {
                prop.type = ply_type(tokens[1], path, line_no);
                prop.name = std::string(tokens[2]);
            } else {
                parse_fail(path, line_no, "malformed property line");
            }
            elements.back().props.push_back(prop);
        } else {
            parse_fail(path, line_no, "unexpected header line");
        }
    }

    RawMesh mesh;
    std::vector<Rgb> colors;
    bool any_color = false;
    PlyReader reader(in, binary, path);
    for (const auto& el : elements) {
        for (std::size_t row = 0; row < el.count; ++row) {
            Point3 p;
            Rgb color{1.0, 1.0, 1.0};
            std::vector<std::uint32_t> corners;
            std::vector<double> texcoords;
            for (const auto& prop : el.props) {
                if (prop.is_list) {
                    const auto n = static_cast<std::size_t>(reader.read(prop.count_type));
                    std::vector<double> values(n);
                    for (auto& v : values) v = reader.read(prop.type);
                    if (prop.name == "vertex_indices" || prop.name == "vertex_index") {
                        for (double v : values) {
                            if (v < 0) throw MeshIoError(path.string() + ": negative face index");
                            corners.push_back(static_cast<std::uint32_t>(v));
                        }
                    } else if (prop.name == "texcoord") {
                        texcoords = std::move(values);
                    }
                    continue;
                }
                const double v = reader.read(prop.type);
                if (el.name != "vertex") continue;
                const double scale = prop.type == PlyType::UInt8 ? 1.0 / 255.0 : 1.0;
                if (prop.name == "x") p.x = v;
                else if (prop.name == "y") p.y = v;
                else if (prop.name == "z") p.z = v;
                else if (prop.name == "red") color.r = v * scale, any_color = true;
                else if (prop.name == "green") color.g = v * scale;
                else if (prop.name == "blue") color.b = v * scale;
            }
            if (el.name == "vertex") {
                if (!is_finite(p)) throw MeshIoError(path.string() + ": non-finite vertex coordinate");
                mesh.positions.push_back(p);
                colors.push_back(color);
            } else if (el.name == "face") {
                if (corners.size() < 3) throw MeshIoError(path.string() + ": face with fewer than three corners");
                for (auto c : corners)
                    if (c >= mesh.positions.size()) throw MeshIoError(path.string() + ": face index out of range");
                if (corners.size() > 3) ++mesh.stats.triangulated_polygons;
                const bool has_uv = texcoords.size() == 2 * corners.size();
                for (std::size_t k = 1; k + 1 < corners.size(); ++k) {
                    std::array<Vec2, 3> tri_uv{};
                    if (has_uv) {
                        tri_uv = {Vec2{texcoords[0], texcoords[1]}, Vec2{texcoords[2 * k], texcoords[2 * k + 1]},
                                  Vec2{texcoords[2 * k + 2], texcoords[2 * k + 3]}};
                    }
                    push_face(mesh, {corners[0], corners[k], corners[k + 1]}, has_uv ? &tri_uv : nullptr);
                }
            }
        }
    }
    if (any_color) mesh.vertex_colors = std::move(colors);
    finalize_uvs(mesh);
    return mesh;
}

namespace {

void write_obj_vertices(std::ostream& out, const std::vector<Point3>& positions) {
    char buf[128];
    for (const auto& p : positions) {
        std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", p.x, p.y, p.z);
        out << buf;
    }
}

void write_ply_binary(const SimplicialComplex2& mesh, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw MeshIoError(path.string() + ": cannot open for writing");
    out << "ply\nformat binary_little_endian 1.0\n"
        << "element vertex " << mesh.vertex_capacity() << "\n"
        << "property double x\nproperty double y\nproperty double z\n"
        << "element face " << mesh.face_capacity() << "\n"
        << "property list uchar int vertex_indices\nend_header\n";
    for (VertexId v = 0; v < mesh.vertex_capacity(); ++v) {
        const Point3& p = mesh.position(v);
        out.write(reinterpret_cast<const char*>(&p.x), sizeof(double));
        out.write(reinterpret_cast<const char*>(&p.y), sizeof(double));
        out.write(reinterpret_cast<const char*>(&p.z), sizeof(double));
    }
    for (FaceId f = 0; f < mesh.face_capacity(); ++f) {
        const std::uint8_t n = 3;
        out.write(reinterpret_cast<const char*>(&n), 1);
        for (VertexId v : mesh.face(f).v) {
            const auto idx = static_cast<std::int32_t>(v);
            out.write(reinterpret_cast<const char*>(&idx), sizeof idx);
        }
    }
    if (!out) throw MeshIoError(path.string() + ": write failed");
}

}  // namespace

void save_mesh(const SimplicialComplex2& mesh, const std::vector<std::array<Vec2, 3>>* corner_uvs,
               const TextureImage* texture, const fs::path& path) {
    if (mesh.live_vertex_count() != mesh.vertex_capacity() || mesh.live_face_count() != mesh.face_capacity() ||
        mesh.live_edge_count() != mesh.edge_capacity())
        throw std::invalid_argument("save_mesh: mesh must be compacted");
    if (corner_uvs && corner_uvs->size() != mesh.face_capacity())
        throw std::invalid_argument("save_mesh: one UV triple per face required");

    const std::string ext = lower_extension(path);
    if (ext == ".ply") {
        write_ply_binary(mesh, path);
        return;
    }
    if (ext != ".obj") throw MeshIoError(path.string() + ": unsupported output extension '" + ext + "'");

    std::ofstream out(path);
    if (!out) throw MeshIoError(path.string() + ": cannot open for writing");
    out << "# wildsimp\n";
    if (texture) {
        const fs::path mtl = fs::path(path).replace_extension(".mtl");
        const fs::path png = fs::path(path).replace_extension(".png");
        {
            std::ofstream m(mtl);
            if (!m) throw MeshIoError(mtl.string() + ": cannot open for writing");
            m << "newmtl material0\nKa 1 1 1\nKd 1 1 1\nKs 0 0 0\nillum 1\nmap_Kd " << png.filename().string() << "\n";
        }
        write_png(*texture, png);
        out << "mtllib " << mtl.filename().string() << "\nusemtl material0\n";
    }
    std::vector<Point3> positions(mesh.vertex_capacity());
    for (VertexId v = 0; v < mesh.vertex_capacity(); ++v) positions[v] = mesh.position(v);
    write_obj_vertices(out, positions);
    char buf[128];
    if (corner_uvs) {
        for (const auto& tri : *corner_uvs)
            for (const auto& uv : tri) {
                std::snprintf(buf, sizeof buf, "vt %.17g %.17g\n", uv.u, uv.v);
                out << buf;
            }
    }
    for (FaceId f = 0; f < mesh.face_capacity(); ++f) {
        const auto& v = mesh.face(f).v;
        if (corner_uvs) {
            const std::size_t t = 3 * static_cast<std::size_t>(f) + 1;
            out << "f " << v[0] + 1 << '/' << t << ' ' << v[1] + 1 << '/' << t + 1 << ' ' << v[2] + 1 << '/'
                << t + 2 << '\n';
        } else {
            out << "f " << v[0] + 1 << ' ' << v[1] + 1 << ' ' << v[2] + 1 << '\n';
        }
    }
    for (EdgeId e = 0; e < mesh.edge_capacity(); ++e) {
        const Edge& ed = mesh.edge(e);
        if (ed.kind == EdgeKind::Physical && mesh.edge_faces(e).empty())
            out << "l " << ed.v[0] + 1 << ' ' << ed.v[1] + 1 << '\n';
    }
    if (!out) throw MeshIoError(path.string() + ": write failed");
}

void save_raw_obj(const RawMesh& mesh, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw MeshIoError(path.string() + ": cannot open for writing");
    const bool textured = mesh.texture.has_value() && mesh.has_uvs();
    if (textured) {
        const fs::path mtl = fs::path(path).replace_extension(".mtl");
        const fs::path png = fs::path(path).replace_extension(".png");
        std::ofstream m(mtl);
        m << "newmtl material0\nKd 1 1 1\nmap_Kd " << png.filename().string() << "\n";
        write_png(*mesh.texture, png);
        out << "mtllib " << mtl.filename().string() << "\nusemtl material0\n";
    }
    char buf[160];
    for (std::size_t v = 0; v < mesh.positions.size(); ++v) {
        const auto& p = mesh.positions[v];
        if (mesh.has_vertex_colors()) {
            const auto& c = mesh.vertex_colors[v];
            std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g %.17g %.17g %.17g\n", p.x, p.y, p.z, c.r, c.g, c.b);
        } else {
            std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", p.x, p.y, p.z);
        }
        out << buf;
    }
    if (mesh.has_uvs())
        for (const auto& tri : mesh.corner_uvs)
            for (const auto& uv : tri) {
                std::snprintf(buf, sizeof buf, "vt %.17g %.17g\n", uv.u, uv.v);
                out << buf;
            }
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        const auto& v = mesh.faces[f];
        if (mesh.has_uvs() && mesh.face_has_uv[f]) {
            const std::size_t t = 3 * f + 1;
            out << "f " << v[0] + 1 << '/' << t << ' ' << v[1] + 1 << '/' << t + 1 << ' ' << v[2] + 1 << '/' << t + 2
                << '\n';
        } else {
            out << "f " << v[0] + 1 << ' ' << v[1] + 1 << ' ' << v[2] + 1 << '\n';
        }
    }
    for (const auto& l : mesh.lines) out << "l " << l[0] + 1 << ' ' << l[1] + 1 << '\n';
    if (!out) throw MeshIoError(path.string() + ": write failed");
}

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const { if (f) std::fclose(f); }
};

}  // namespace

TextureImage read_png(const fs::path& path) {
    std::unique_ptr<std::FILE, FileCloser> file(std::fopen(path.c_str(), "rb"));
    if (!file) throw MeshIoError(path.string() + ": cannot open PNG");
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw MeshIoError("libpng initialization failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw MeshIoError(path.string() + ": corrupt PNG");
    }
    png_init_io(png, file.get());
    png_read_info(png, info);
    png_set_expand(png);
    png_set_strip_16(png);
    png_set_gray_to_rgb(png);
    png_set_add_alpha(png, 0xff, PNG_FILLER_AFTER);
    png_read_update_info(png, info);
    const int w = static_cast<int>(png_get_image_width(png, info));
    const int h = static_cast<int>(png_get_image_height(png, info));
    TextureImage img(w, h);
    std::vector<png_bytep> rows(h);
    for (int y = 0; y < h; ++y) rows[y] = img.texel(0, y);
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

void write_png(const TextureImage& image, const fs::path& path) {
    std::unique_ptr<std::FILE, FileCloser> file(std::fopen(path.c_str(), "wb"));
    if (!file) throw MeshIoError(path.string() + ": cannot open PNG for writing");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw MeshIoError("libpng initialization failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw MeshIoError(path.string() + ": PNG write failed");
    }
    png_init_io(png, file.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height), 8,
                 PNG_COLOR_TYPE_RGBA, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < image.height; ++y)
        png_write_row(png, const_cast<png_bytep>(image.texel(0, y)));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

Rgb sample_texture(const TextureImage& image, const Vec2& uv) {
    const double x = uv.u * image.width - 0.5;
    const double y = (1.0 - uv.v) * image.height - 0.5;
    const double fx0 = std::floor(x), fy0 = std::floor(y);
    const double tx = x - fx0, ty = y - fy0;
    auto wrap = [](long k, int n) { return static_cast<int>(((k % n) + n) % n); };
    const int x0 = wrap(static_cast<long>(fx0), image.width), x1 = wrap(static_cast<long>(fx0) + 1, image.width);
    const int y0 = wrap(static_cast<long>(fy0), image.height), y1 = wrap(static_cast<long>(fy0) + 1, image.height);
    const Rgb c00 = image.color(x0, y0), c10 = image.color(x1, y0);
    const Rgb c01 = image.color(x0, y1), c11 = image.color(x1, y1);
    auto lerp2 = [&](double a, double b, double c, double d) {
        return (1 - ty) * ((1 - tx) * a + tx * b) + ty * ((1 - tx) * c + tx * d);
    };
    return {lerp2(c00.r, c10.r, c01.r, c11.r), lerp2(c00.g, c10.g, c01.g, c11.g), lerp2(c00.b, c10.b, c01.b, c11.b)};
}

}  // namespace wildsimp
