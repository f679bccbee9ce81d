#pragma once

// Triangulated closed surfaces embedded in R^3, built by recursive
// icosahedral subdivision with vertex reprojection onto the unit sphere.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace reebflow {

struct Vec3 {
    double x = 0, y = 0, z = 0;
};

struct SurfaceMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;
    int level = 0;
    // set by the icosphere constructor; quadrature then evaluates on the
    // sphere itself instead of the chordal triangles
    bool on_unit_sphere = false;

    size_t triangle_count() const { return triangles.size(); }
};

// 20 * 4^level triangles, consistently oriented outward.
SurfaceMesh icosphere(int level);

// every edge shared by exactly two triangles, traversed oppositely
void validate_closed_oriented(const SurfaceMesh& mesh);

// flips every triangle's orientation
SurfaceMesh reversed(const SurfaceMesh& mesh);

std::string to_off(const SurfaceMesh& mesh);
void write_off(const SurfaceMesh& mesh, const std::string& path);

}  // namespace reebflow
