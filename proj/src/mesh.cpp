#include "reebflow/mesh.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

namespace reebflow {

namespace {

Vec3 normalized(const Vec3& v) {
    double n = std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
    return {v.x / n, v.y / n, v.z / n};
}

SurfaceMesh icosahedron() {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    SurfaceMesh m;
    const double raw[12][3] = {
        {-1, phi, 0}, {1, phi, 0},  {-1, -phi, 0}, {1, -phi, 0},
        {0, -1, phi}, {0, 1, phi},  {0, -1, -phi}, {0, 1, -phi},
        {phi, 0, -1}, {phi, 0, 1},  {-phi, 0, -1}, {-phi, 0, 1},
    };
    for (const auto& v : raw) m.vertices.push_back(normalized({v[0], v[1], v[2]}));
    const int faces[20][3] = {
        {0, 11, 5},  {0, 5, 1},   {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
        {1, 5, 9},   {5, 11, 4},  {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4},   {3, 4, 2},   {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
        {4, 9, 5},   {2, 4, 11},  {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
    };
    for (const auto& f : faces) {
        std::array<int, 3> t{f[0], f[1], f[2]};
        // normalize to outward orientation: normal must point away from the origin
        const Vec3 &a = m.vertices[t[0]], &b = m.vertices[t[1]], &c = m.vertices[t[2]];
        Vec3 u{b.x - a.x, b.y - a.y, b.z - a.z}, v{c.x - a.x, c.y - a.y, c.z - a.z};
        Vec3 n{u.y * v.z - u.z * v.y, u.z * v.x - u.x * v.z, u.x * v.y - u.y * v.x};
        Vec3 ctr{(a.x + b.x + c.x) / 3, (a.y + b.y + c.y) / 3, (a.z + b.z + c.z) / 3};
        if (n.x * ctr.x + n.y * ctr.y + n.z * ctr.z < 0) std::swap(t[1], t[2]);
        m.triangles.push_back(t);
    }
    m.on_unit_sphere = true;
    return m;
}

}  // namespace

SurfaceMesh icosphere(int level) {
    if (level < 0 || level > 8) throw std::invalid_argument("icosphere level must be in [0, 8]");
    SurfaceMesh m = icosahedron();
    for (int l = 0; l < level; ++l) {
        SurfaceMesh next;
        next.vertices = m.vertices;
        next.level = l + 1;
        next.on_unit_sphere = true;
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int i, int j) {
            auto key = std::minmax(i, j);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            const Vec3 &a = next.vertices[i], &b = next.vertices[j];
            Vec3 v = normalized({(a.x + b.x) / 2, (a.y + b.y) / 2, (a.z + b.z) / 2});
            int idx = static_cast<int>(next.vertices.size());
            next.vertices.push_back(v);
            midpoint.emplace(key, idx);
            return idx;
        };
        for (const auto& t : m.triangles) {
            int ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
            next.triangles.push_back({t[0], ab, ca});
            next.triangles.push_back({t[1], bc, ab});
            next.triangles.push_back({t[2], ca, bc});
            next.triangles.push_back({ab, bc, ca});
        }
        m = std::move(next);
    }
    m.level = level;
    return m;
}

void validate_closed_oriented(const SurfaceMesh& mesh) {
    // directed edge map: each undirected edge must appear exactly once in
    // each direction
    std::map<std::pair<int, int>, int> directed;
    for (const auto& t : mesh.triangles) {
        for (int e = 0; e < 3; ++e) {
            int a = t[e], b = t[(e + 1) % 3];
            if (a == b) throw std::invalid_argument("degenerate triangle edge");
            ++directed[{a, b}];
        }
    }
    for (const auto& [edge, count] : directed) {
        if (count != 1)
            throw std::invalid_argument("mesh is not consistently oriented: a directed edge repeats");
        auto rev = directed.find({edge.second, edge.first});
        if (rev == directed.end())
            throw std::invalid_argument("mesh is not closed: an edge lacks its opposite");
    }
}

SurfaceMesh reversed(const SurfaceMesh& mesh) {
    SurfaceMesh m = mesh;
    for (auto& t : m.triangles) std::swap(t[1], t[2]);
    return m;
}

std::string to_off(const SurfaceMesh& mesh) {
    std::string out = "OFF\n";
    char buf[128];
    std::snprintf(buf, sizeof buf, "%zu %zu 0\n", mesh.vertices.size(), mesh.triangles.size());
    out += buf;
    for (const auto& v : mesh.vertices) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", v.x, v.y, v.z);
        out += buf;
    }
    for (const auto& t : mesh.triangles) {
        std::snprintf(buf, sizeof buf, "3 %d %d %d\n", t[0], t[1], t[2]);
        out += buf;
    }
    return out;
}

void write_off(const SurfaceMesh& mesh, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << to_off(mesh);
}

}  // namespace reebflow
