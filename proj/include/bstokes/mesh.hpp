#pragma once

#include <Eigen/Core>
#include <array>
#include <functional>
#include <string>
#include <vector>

namespace bstokes {

enum class CellTag : int { Fluid = 0, Porous = 1 };

enum class FacetTag : int {
  GammaFU = 0,     // no-slip velocity boundary
  GammaFSigma = 1, // zero (or prescribed) normal-stress boundary, fluid side
  GammaPD = 2,     // clamped displacement boundary
  GammaPP = 3,     // prescribed pore-pressure / traction-free boundary
  Sigma = 4,       // fluid-porous interface
  Interior = 5
};

// Boundary layout of the split unit square. DirichletDagger reuses the
// VelDisp facet tags but additionally pins p_P on the GammaPD facets.
enum class BcConfig : int { VelDisp = 0, StressPressure = 1, DirichletDagger = 2 };

const char* to_string(BcConfig bc);
const char* to_string(FacetTag tag);

struct Mesh {
  std::vector<Eigen::Vector2d> vertices;
  std::vector<std::array<int, 3>> cells;  // counter-clockwise vertex triples
  std::vector<CellTag> cell_tag;

  // Unique edge list; every edge is a facet. facets[f] = {v0, v1} with v0 < v1.
  std::vector<std::array<int, 2>> facets;
  std::vector<FacetTag> facet_tag;
  std::vector<std::array<int, 2>> facet_cell;  // adjacent cells, [1] = -1 on boundary
  std::vector<std::array<int, 3>> cell_facet;  // facet opposite local vertex k

  // Unit normals: Sigma facets point Fluid -> Porous, boundary facets point
  // outward, interior facets point away from facet_cell[0].
  std::vector<Eigen::Vector2d> facet_normal;

  BcConfig bc_config = BcConfig::VelDisp;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_cells() const { return static_cast<int>(cells.size()); }
  int num_facets() const { return static_cast<int>(facets.size()); }

  double cell_area(int c) const;
  double facet_length(int f) const;
  Eigen::Vector2d cell_centroid(int c) const;
  Eigen::Vector2d facet_midpoint(int f) const;
  double total_area() const;

  std::vector<int> sigma_facets() const;
  std::vector<int> facets_with_tag(FacetTag tag) const;
  int count_cells(CellTag tag) const;
  bool sigma_is_closed() const;
};

// Builds connectivity, orients cells counter-clockwise, computes normals and
// tags facets via `tagger(midpoint, on_boundary)`; interface/interior facets
// are classified from cell adjacency before the tagger is consulted for the
// boundary.
Mesh build_from_arrays(std::vector<Eigen::Vector2d> vertices,
                       std::vector<std::array<int, 3>> cells,
                       std::vector<CellTag> cell_tags,
                       const std::function<FacetTag(const Eigen::Vector2d&)>& boundary_tagger,
                       BcConfig bc = BcConfig::VelDisp);

// Split unit square: fluid half (0,1/2)x(0,1), porous half (1/2,1)x(0,1),
// interface {1/2}x(0,1). n is the number of cells per unit length and must be
// even so the interface lies on mesh lines. Each grid square is split into two
// triangles with the diagonal direction alternating checkerboard-fashion.
Mesh build_split_square(int n, BcConfig bc);

// Polygonal disk (porous) of radius 1/4 centered in the unit square (fluid).
// The interface is a closed polygon; the outer boundary is GammaFU except for
// two short GammaFSigma arcs at the middle of the left and right edges.
Mesh build_enclosed_disk(int n);

// Red refinement: every triangle split into four by edge midpoints. Cell and
// facet tags are inherited, so refined meshes never re-classify boundaries.
Mesh refine_uniform(const Mesh& mesh);

// Throws std::runtime_error on any violated mesh invariant.
void validate_mesh(const Mesh& mesh);

Eigen::Vector2d facet_normal_from_geometry(const Mesh& mesh, int f);

// ASCII dump/load. Format: header "nv nc nf", then nv lines "x y", nc lines
// "v0 v1 v2 tag", nf lines "v0 v1 tag" with integer enum tags.
void write_mesh(const Mesh& mesh, const std::string& path);
Mesh read_mesh(const std::string& path, BcConfig bc);

}  // namespace bstokes
