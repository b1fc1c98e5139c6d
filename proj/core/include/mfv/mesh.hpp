// Admissible-discretization data model: cells, split edges, cell points,
// with validation, size/regularity metrics, file I/O and the generators
// for the benchmark grid families.
//
// Edges are discovered by geometric matching: the overlap of two cell
// boundaries becomes one interior edge, so a coarse cell side touching
// two fine cells yields two edges of the coarse cell (hanging nodes).
// The mesh is immutable after construction.

#ifndef MFV_MESH_HPP
#define MFV_MESH_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mfv/geometry.hpp"

namespace mfv {

struct Cell {
  ConvexPolygon polygon;
  Point2 point;                 // x_K, strictly inside
  std::vector<int> edge_ids;    // ordered along the boundary loop
  double measure = 0.0;
  double diameter = 0.0;
  Point2 centroid;
};

enum class EdgeKind { Interior, Boundary };

struct Edge {
  Segment segment;      // oriented CCW with respect to cell_a
  Point2 barycenter;    // x_sigma = segment midpoint
  double length = 0.0;
  int cell_a = -1;
  int cell_b = -1;      // -1 for boundary edges
  EdgeKind kind = EdgeKind::Boundary;
  Vec2 normal_a;        // unit normal outward from cell_a

  // Outward normal as seen from the given side cell.
  Vec2 outward(int cell) const { return cell == cell_a ? normal_a : normal_a * -1.0; }
  int other(int cell) const { return cell == cell_a ? cell_b : cell_a; }
};

// Input to build_mesh: one CCW vertex loop per cell, optional cell point.
struct CellSpec {
  std::vector<Point2> loop;
  std::optional<Point2> point;
};

class Mesh {
public:
  // Discovers edges, validates the tiling, computes metrics. Throws
  // MeshError listing offending cells on invalid input.
  static Mesh build(const std::vector<CellSpec>& specs);

  const std::vector<Cell>& cells() const { return cells_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Cell& cell(int k) const { return cells_[k]; }
  const Edge& edge(int e) const { return edges_[e]; }

  std::size_t cell_count() const { return cells_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t interior_edge_count() const { return n_interior_; }

  double domain_area() const { return domain_area_; }
  double size() const { return size_; }          // max cell diameter
  double regularity() const { return regularity_; }

  // True if every cell has exactly 3 edges.
  bool all_simplicial() const;

private:
  Mesh() = default;

  std::vector<Cell> cells_;
  std::vector<Edge> edges_;
  std::size_t n_interior_ = 0;
  double domain_area_ = 0.0;
  double size_ = 0.0;
  double regularity_ = 0.0;
};

enum class CellPointPolicy { Centroid, Circumcenter };

enum class TrianglePattern { Diagonal, Crisscross };

// n x n unit squares on (0,1)^2, x_K at centroids.
Mesh gen_uniform_squares(int n);

// n x n squares each split into triangles. Circumcenter cell points are
// validated to lie strictly inside (they do not for these right-triangle
// patterns, so that request fails with a MeshError).
Mesh gen_uniform_triangles(int n, TrianglePattern pattern,
                           CellPointPolicy points = CellPointPolicy::Centroid);

// Box of base cells [i0, i1] x [j0, j1] (inclusive indices) refined
// factor x factor.
struct RefineBox {
  int i0, j0, i1, j1;
  int factor;
};

// base_n x base_n squares with the given boxes refined; hanging-node
// edges come out of the generic edge discovery.
Mesh gen_refined_nonconforming(int base_n, const std::vector<RefineBox>& boxes);

struct Distortion {
  // Smooth sine map amplitude (fraction of h) and/or seeded random jitter.
  double map_amplitude = 0.0;
  double jitter_amplitude = 0.0;
  std::uint64_t seed = 0;
};

// n x n quads with interior vertices moved by the distortion; boundary
// vertices stay on the boundary. Throws if a cell goes non-convex.
Mesh gen_distorted_quads(int n, const Distortion& d);

// Text format `mfv-mesh v1`; floats with 17 significant digits.
void write_mesh(const Mesh& mesh, std::ostream& out);
void write_mesh(const Mesh& mesh, const std::string& path);
Mesh read_mesh(std::istream& in);
Mesh read_mesh(const std::string& path);

}  // namespace mfv

#endif
