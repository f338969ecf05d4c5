#pragma once

#include <Eigen/Core>

#include <array>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace roughweyl {

using Point = Eigen::Vector2d;
using Triangle = std::array<int, 3>;

struct BoundaryEdge {
  std::array<int, 2> v;
  int tag = 0;

  friend bool operator==(const BoundaryEdge&, const BoundaryEdge&) = default;
};

// Conforming triangulation of a planar chart domain. Triangles are stored
// counterclockwise; boundary edges carry integer tags that label segments
// of the boundary.
struct Mesh {
  std::vector<Point> vertices;
  std::vector<Triangle> triangles;
  std::vector<BoundaryEdge> boundary_edges;
  int level = 0;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }

  double signed_area(int t) const;
  double total_area() const;
  Point centroid(int t) const;

  // Sorted list of distinct boundary tags.
  std::vector<int> tags() const;
};

// Diagonal layout of the structured square mesh. Mirrored flips the
// diagonals on the right half so the mesh is symmetric about x = 1/2.
enum class DiagonalPattern { Uniform, Mirrored };

// Structured mesh of [0,1]^2 with 2n^2 triangles. Boundary tags:
// 0 bottom, 1 right, 2 top, 3 left.
Mesh generate_unit_square(int n, DiagonalPattern pattern = DiagonalPattern::Uniform);

// Polygonal unit disk built from concentric rings; ring i carries 6i
// vertices and the center is vertex 0. Single boundary tag 0.
Mesh generate_disk(int rings);

// Red refinement: every triangle is split into four through its edge
// midpoints. Boundary tags are inherited by the half edges.
Mesh refine_uniform(const Mesh& m);

Mesh refine_uniform(const Mesh& m, int times);

// Returns a human-readable list of invariant violations; empty means valid.
std::vector<std::string> validate(const Mesh& m);

// Number of distinct undirected edges.
std::size_t count_edges(const Mesh& m);

// Same connectivity, vertices moved by `phi`.
Mesh map_vertices(const Mesh& m, const std::function<Point(const Point&)>& phi);

// Triangle order permuted: result.triangles[i] = m.triangles[perm[i]].
Mesh permute_triangles(const Mesh& m, const std::vector<int>& perm);

void write_mesh(const Mesh& m, std::ostream& os);
Mesh read_mesh(std::istream& is);
void save_mesh(const Mesh& m, const std::filesystem::path& path);
Mesh load_mesh(const std::filesystem::path& path);

} // namespace roughweyl
