#include "fixtures.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

namespace fixtures {

using wildsimp::Point3;
using wildsimp::Rgb;
using wildsimp::TextureImage;
using wildsimp::Vec2;

namespace {

std::uint32_t add(RawMesh& m, double x, double y, double z) {
    m.positions.push_back({x, y, z});
    return static_cast<std::uint32_t>(m.positions.size() - 1);
}

void tri(RawMesh& m, std::uint32_t a, std::uint32_t b, std::uint32_t c) { m.faces.push_back({a, b, c}); }

void append(RawMesh& dst, const RawMesh& src, const Point3& offset, double scale) {
    const auto base = static_cast<std::uint32_t>(dst.positions.size());
    for (const auto& p : src.positions) dst.positions.push_back(p * scale + offset);
    for (const auto& f : src.faces) dst.faces.push_back({f[0] + base, f[1] + base, f[2] + base});
}

double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Lat-long closed surface: poles plus (nv - 1) rings of nu vertices.
template <class Radius>
RawMesh latlong(int nu, int nv, Radius&& radius) {
    RawMesh m;
    const double pi = std::numbers::pi;
    auto point = [&](double theta, double phi) {
        const Point3 dir{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
        return dir * radius(dir);
    };
    const Point3 north = point(0.0, 0.0);
    const auto n = add(m, north.x, north.y, north.z);
    for (int r = 1; r < nv; ++r)
        for (int k = 0; k < nu; ++k) {
            const Point3 p = point(pi * r / nv, 2.0 * pi * k / nu);
            add(m, p.x, p.y, p.z);
        }
    const Point3 south = point(pi, 0.0);
    const auto s = add(m, south.x, south.y, south.z);
    auto ring = [&](int r, int k) { return static_cast<std::uint32_t>(1 + (r - 1) * nu + (k % nu)); };
    for (int k = 0; k < nu; ++k) tri(m, n, ring(1, k), ring(1, k + 1));
    for (int r = 1; r + 1 < nv; ++r)
        for (int k = 0; k < nu; ++k) {
            tri(m, ring(r, k), ring(r + 1, k), ring(r + 1, k + 1));
            tri(m, ring(r, k), ring(r + 1, k + 1), ring(r, k + 1));
        }
    for (int k = 0; k < nu; ++k) tri(m, s, ring(nv - 1, k + 1), ring(nv - 1, k));
    return m;
}

TextureImage checker(int size, int checks, std::array<std::uint8_t, 4> a, std::array<std::uint8_t, 4> b) {
    TextureImage img(size, size);
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            const bool odd = ((x * checks / size) + (y * checks / size)) % 2 != 0;
            const auto& c = odd ? b : a;
            std::copy(c.begin(), c.end(), img.texel(x, y));
        }
    return img;
}

}  // namespace

RawMesh icosphere(int level) {
    RawMesh m;
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    const double raw[12][3] = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                               {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
    for (const auto& p : raw) {
        const Point3 q = wildsimp::Vec3{p[0], p[1], p[2]} / wildsimp::norm({p[0], p[1], p[2]});
        m.positions.push_back(q);
    }
    m.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
               {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
               {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
    for (int l = 0; l < level; ++l) {
        std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> mid;
        auto midpoint = [&](std::uint32_t a, std::uint32_t b) {
            const auto key = std::minmax(a, b);
            auto it = mid.find(key);
            if (it != mid.end()) return it->second;
            const Point3 p = (m.positions[a] + m.positions[b]) * 0.5;
            const Point3 q = p / wildsimp::norm(p);
            const auto id = add(m, q.x, q.y, q.z);
            mid.emplace(key, id);
            return id;
        };
        std::vector<std::array<std::uint32_t, 3>> next;
        for (const auto& f : m.faces) {
            const auto a = midpoint(f[0], f[1]), b = midpoint(f[1], f[2]), c = midpoint(f[2], f[0]);
            next.push_back({f[0], a, c});
            next.push_back({f[1], b, a});
            next.push_back({f[2], c, b});
            next.push_back({a, b, c});
        }
        m.faces = std::move(next);
    }
    return m;
}

RawMesh cube() {
    RawMesh m;
    for (int k = 0; k < 8; ++k) add(m, k & 1, (k >> 1) & 1, (k >> 2) & 1);
    // Outward-facing quads as vertex index quadruples.
    const std::uint32_t quads[6][4] = {{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4},
                                       {2, 6, 7, 3}, {0, 4, 6, 2}, {1, 3, 7, 5}};
    for (const auto& q : quads) {
        tri(m, q[0], q[1], q[2]);
        tri(m, q[0], q[2], q[3]);
    }
    return m;
}

RawMesh cube_soup() {
    const RawMesh c = cube();
    RawMesh m;
    for (const auto& f : c.faces) {
        const auto a = add(m, c.positions[f[0]].x, c.positions[f[0]].y, c.positions[f[0]].z);
        const auto b = add(m, c.positions[f[1]].x, c.positions[f[1]].y, c.positions[f[1]].z);
        const auto d = add(m, c.positions[f[2]].x, c.positions[f[2]].y, c.positions[f[2]].z);
        tri(m, a, b, d);
    }
    return m;
}

RawMesh tetrahedron() {
    RawMesh m;
    add(m, 0, 0, 0);
    add(m, 1, 0, 0);
    add(m, 0, 1, 0);
    add(m, 0, 0, 1);
    tri(m, 0, 2, 1);
    tri(m, 0, 1, 3);
    tri(m, 1, 2, 3);
    tri(m, 0, 3, 2);
    return m;
}

RawMesh two_triangles() {
    RawMesh m;
    add(m, 0, 0, 0);
    add(m, 1, 0, 0);
    add(m, 1, 1, 0);
    add(m, 0, 1, 0);
    tri(m, 0, 1, 2);
    tri(m, 0, 2, 3);
    return m;
}

RawMesh nonmanifold_fin() {
    RawMesh m;
    const auto a = add(m, 0, 0, 0), b = add(m, 0, 0, 1);
    const auto c = add(m, 1, 0, 0.5), d = add(m, -0.5, 0.8, 0.4), e = add(m, -0.5, -0.8, 0.6);
    tri(m, a, b, c);
    tri(m, b, a, d);
    tri(m, a, b, e);
    // Second fan sharing only vertex c (bowtie).
    const auto f = add(m, 2, 0.3, 0.5), g = add(m, 2, -0.3, 0.5);
    tri(m, c, f, g);
    // Isolated triangle and a dangling polyline.
    const auto h = add(m, 0, 2, 0), i = add(m, 0.4, 2, 0), j = add(m, 0.2, 2.3, 0);
    tri(m, h, i, j);
    const auto k = add(m, 1, 2, 0.2);
    m.lines.push_back({i, k});
    return m;
}

RawMesh t_junction_boxes() {
    RawMesh m;
    append(m, cube(), {0, 0, 0}, 2.0);
    append(m, cube(), {0.8, 0.8, 2.0}, 0.4);
    return m;
}

RawMesh coplanar_squares(double gap) {
    RawMesh m;
    for (int s = 0; s < 3; ++s) {
        const double x0 = s * (1.0 + gap);
        const auto a = add(m, x0, 0, 0), b = add(m, x0 + 1, 0, 0), c = add(m, x0 + 1, 1, 0), d = add(m, x0, 1, 0);
        tri(m, a, b, c);
        tri(m, a, c, d);
    }
    return m;
}

RawMesh two_sided_slab(int n, double thickness, double amplitude) {
    RawMesh m;
    const double pi = std::numbers::pi;
    auto height = [&](double x, double y) { return amplitude * std::sin(6.0 * pi * x) * std::sin(6.0 * pi * y); };
    auto id = [n](int layer, int i, int j) { return static_cast<std::uint32_t>(layer * (n + 1) * (n + 1) + j * (n + 1) + i); };
    for (int layer = 0; layer < 2; ++layer)
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n; ++i) {
                const double x = static_cast<double>(i) / n, y = static_cast<double>(j) / n;
                add(m, x, y, height(x, y) + (layer == 0 ? 0.5 : -0.5) * thickness);
            }
    std::vector<Vec2> face_uv;
    const Vec2 blue_uv{0.25, 0.5}, yellow_uv{0.75, 0.5}, rim_uv{0.5, 0.5};
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            tri(m, id(0, i, j), id(0, i + 1, j), id(0, i + 1, j + 1));
            tri(m, id(0, i, j), id(0, i + 1, j + 1), id(0, i, j + 1));
            face_uv.insert(face_uv.end(), 2, blue_uv);
            tri(m, id(1, i, j), id(1, i + 1, j + 1), id(1, i + 1, j));
            tri(m, id(1, i, j), id(1, i, j + 1), id(1, i + 1, j + 1));
            face_uv.insert(face_uv.end(), 2, yellow_uv);
        }
    // Boundary loop, counter-clockwise seen from above.
    std::vector<std::pair<int, int>> loop;
    for (int i = 0; i < n; ++i) loop.push_back({i, 0});
    for (int j = 0; j < n; ++j) loop.push_back({n, j});
    for (int i = n; i > 0; --i) loop.push_back({i, n});
    for (int j = n; j > 0; --j) loop.push_back({0, j});
    for (std::size_t k = 0; k < loop.size(); ++k) {
        const auto [ai, aj] = loop[k];
        const auto [bi, bj] = loop[(k + 1) % loop.size()];
        tri(m, id(1, ai, aj), id(1, bi, bj), id(0, bi, bj));
        tri(m, id(1, ai, aj), id(0, bi, bj), id(0, ai, aj));
        face_uv.insert(face_uv.end(), 2, rim_uv);
    }
    for (const auto& uv : face_uv) m.corner_uvs.push_back({uv, uv, uv});
    m.face_has_uv.assign(m.faces.size(), 1);
    TextureImage img(4, 4);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) img.set(x, y, x < 2 ? Rgb{0, 0, 1} : Rgb{1, 1, 0});
    m.texture = img;
    return m;
}

RawMesh textured_island_grid(int n, int texture_size) {
    RawMesh m;
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i) add(m, static_cast<double>(i) / n, static_cast<double>(j) / n, 0.0);
    // Quadrant q is placed at the diagonally opposite texture quadrant, shrunk
    // to leave a background margin between islands.
    auto uv_of = [&](int i, int j, int qx, int qy) {
        const double lx = static_cast<double>(i) / n - 0.5 * qx, ly = static_cast<double>(j) / n - 0.5 * qy;
        const int tx = 1 - qx, ty = 1 - qy;
        return Vec2{0.5 * tx + 0.0625 + 0.75 * lx, 0.5 * ty + 0.0625 + 0.75 * ly};
    };
    auto vid = [n](int i, int j) { return static_cast<std::uint32_t>(j * (n + 1) + i); };
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const int qx = 2 * i >= n ? 1 : 0, qy = 2 * j >= n ? 1 : 0;
            tri(m, vid(i, j), vid(i + 1, j), vid(i + 1, j + 1));
            m.corner_uvs.push_back({uv_of(i, j, qx, qy), uv_of(i + 1, j, qx, qy), uv_of(i + 1, j + 1, qx, qy)});
            tri(m, vid(i, j), vid(i + 1, j + 1), vid(i, j + 1));
            m.corner_uvs.push_back({uv_of(i, j, qx, qy), uv_of(i + 1, j + 1, qx, qy), uv_of(i, j + 1, qx, qy)});
        }
    m.face_has_uv.assign(m.faces.size(), 1);
    TextureImage img = checker(texture_size, 8, {230, 60, 40, 255}, {40, 120, 220, 255});
    // Background between islands.
    for (int y = 0; y < texture_size; ++y)
        for (int x = 0; x < texture_size; ++x) {
            const double u = (x + 0.5) / texture_size, v = 1.0 - (y + 0.5) / texture_size;
            const double fu = std::fmod(u, 0.5), fv = std::fmod(v, 0.5);
            if (fu < 0.0625 || fu > 0.4375 || fv < 0.0625 || fv > 0.4375) img.set(x, y, Rgb{1, 0, 1});
        }
    m.texture = img;
    return m;
}

RawMesh textured_quad_grid(int n, int texture_size, int checks) {
    RawMesh m;
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i) add(m, static_cast<double>(i) / n, static_cast<double>(j) / n, 0.0);
    auto vid = [n](int i, int j) { return static_cast<std::uint32_t>(j * (n + 1) + i); };
    auto uv = [&](std::uint32_t v) { return Vec2{m.positions[v].x, m.positions[v].y}; };
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            tri(m, vid(i, j), vid(i + 1, j), vid(i + 1, j + 1));
            tri(m, vid(i, j), vid(i + 1, j + 1), vid(i, j + 1));
        }
    for (const auto& f : m.faces) m.corner_uvs.push_back({uv(f[0]), uv(f[1]), uv(f[2])});
    m.face_has_uv.assign(m.faces.size(), 1);
    m.texture = checker(texture_size, checks, {250, 250, 250, 255}, {10, 10, 10, 255});
    return m;
}

RawMesh random_soup(std::size_t faces, std::uint64_t seed) {
    RawMesh m;
    std::mt19937_64 rng(seed);
    for (std::size_t f = 0; f < faces; ++f) {
        const Point3 c{uniform(rng), uniform(rng), uniform(rng)};
        std::array<std::uint32_t, 3> ids{};
        for (auto& id : ids) {
            const Point3 p = c + Point3{uniform(rng) - 0.5, uniform(rng) - 0.5, uniform(rng) - 0.5} * 0.15;
            id = add(m, p.x, p.y, p.z);
        }
        tri(m, ids[0], ids[1], ids[2]);
    }
    return m;
}

RawMesh cube_cluster(int per_side, double gap) {
    RawMesh m;
    const double size = 1.0 / per_side;
    for (int k = 0; k < per_side; ++k)
        for (int j = 0; j < per_side; ++j)
            append(m, cube(), {j * (size + gap), k * (size + gap), 0.0}, size);
    return m;
}

RawMesh duck(std::size_t faces) {
    // Geodesic sphere of frequency f (20 f^2 faces): valence stays at 5 or 6
    // like a scanned surface, unlike a lat-long grid with its fan poles.
    const int f = std::max(1, static_cast<int>(std::lround(std::sqrt(static_cast<double>(faces) / 20.0))));
    const RawMesh ico = icosphere(0);
    RawMesh m;
    std::map<std::vector<std::pair<std::uint32_t, int>>, std::uint32_t> index;
    auto vertex = [&](const std::array<std::uint32_t, 3>& t, int ka, int kb, int kc) {
        std::vector<std::pair<std::uint32_t, int>> key;
        for (auto [v, k] : {std::pair{t[0], ka}, std::pair{t[1], kb}, std::pair{t[2], kc}})
            if (k > 0) key.push_back({v, k});
        std::sort(key.begin(), key.end());
        if (auto it = index.find(key); it != index.end()) return it->second;
        Point3 p{};
        for (auto [v, k] : key) p += ico.positions[v] * (static_cast<double>(k) / f);
        p = p / wildsimp::norm(p);
        const auto id = add(m, p.x, p.y, p.z);
        index.emplace(std::move(key), id);
        return id;
    };
    for (const auto& t : ico.faces)
        for (int i = 0; i < f; ++i)
            for (int j = 0; j < f - i; ++j) {
                auto at = [&](int a, int b) { return vertex(t, f - a - b, b, a); };
                tri(m, at(i, j), at(i, j + 1), at(i + 1, j));
                if (j < f - 1 - i) tri(m, at(i, j + 1), at(i + 1, j + 1), at(i + 1, j));
            }
    const Point3 head_dir = Point3{0.8, 0.0, 0.6} / wildsimp::norm({0.8, 0.0, 0.6});
    for (auto& d : m.positions) {
        const double head = 0.45 * std::exp(-wildsimp::squared_distance(d, head_dir) / 0.08);
        const double tail = 0.2 * std::exp(-wildsimp::squared_distance(d, {-1, 0, 0.2}) / 0.05);
        const Point3 p = d * (1.0 + head + tail + 0.03 * std::sin(7.0 * d.y) * std::cos(5.0 * d.z));
        d = {1.3 * p.x, 0.8 * p.y, 0.7 * p.z};
    }
    return m;
}

RawMesh square(double z) {
    RawMesh m;
    add(m, 0, 0, z);
    add(m, 1, 0, z);
    add(m, 1, 1, z);
    add(m, 0, 1, z);
    tri(m, 0, 1, 2);
    tri(m, 0, 2, 3);
    return m;
}

RawMesh perturbed_sphere(int nu, int nv, double noise, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return latlong(nu, nv, [&](const Point3&) { return 1.0 + noise * (2.0 * uniform(rng) - 1.0); });
}

RawMesh with_solid_color(RawMesh mesh, const Rgb& c) {
    mesh.vertex_colors.assign(mesh.positions.size(), c);
    mesh.texture.reset();
    mesh.corner_uvs.clear();
    mesh.face_has_uv.clear();
    return mesh;
}

std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("wildsimp_" + name + "_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace fixtures
