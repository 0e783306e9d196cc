#pragma once

#include <array>
#include <functional>
#include <vector>

#include "bstokes/mesh.hpp"

namespace bstokes {

enum class Field : int { U = 0, D = 1, PF = 2, PHI = 3, PP = 4 };
inline constexpr int kNumFields = 5;

const char* to_string(Field f);

// Per-unknown finite element space over one subdomain. Nodes live on mesh
// vertices (order >= 1) and facets (order 2); a dof is node * vector_dim + comp.
struct FieldSpace {
  Field field = Field::U;
  CellTag subdomain = CellTag::Fluid;
  int order = 1;
  int vector_dim = 1;

  std::vector<int> vertex_node;  // mesh vertex -> node index or -1
  std::vector<int> facet_node;   // mesh facet  -> node index or -1 (order 2 only)
  std::vector<Eigen::Vector2d> node_coord;
  int num_nodes = 0;

  int global_offset = 0;  // first dof in the monolithic (u, d, pF, phi, pP) ordering

  // Dirichlet data per dof; value NaN marks an unconstrained dof.
  std::vector<char> is_dirichlet;
  std::vector<double> dirichlet_value;

  int dim() const { return num_nodes * vector_dim; }
  int dof(int node, int comp) const { return node * vector_dim + comp; }
};

using Spaces = std::array<FieldSpace, kNumFields>;

// Unconstrained space of the given order and component count over one
// subdomain; nodes ordered vertices-then-facets in mesh order.
FieldSpace make_field_space(const Mesh& mesh, Field field, CellTag subdomain, int order,
                            int vector_dim);

// Taylor-Hood layout of lowest order: u, d vector quadratic; p_F, phi linear;
// p_P quadratic. Dirichlet sets follow the mesh's boundary configuration with
// homogeneous values: u on GammaFU, d on GammaPD, p_P on GammaPP (plus GammaPD
// when the configuration pins both displacement and pressure there).
Spaces build_spaces(const Mesh& mesh);

// Overrides prescribed boundary values by sampling `value(field, x, comp)` at
// the constrained dof coordinates.
void set_dirichlet_values(Spaces& spaces,
                          const std::function<double(Field, const Eigen::Vector2d&, int)>& value);

// Adds a Dirichlet constraint on every dof of `space` whose node lies on a
// facet with the given tag. Throws if a dof is re-constrained with a
// conflicting value.
void constrain_on_facets(FieldSpace& space, const Mesh& mesh, FacetTag tag,
                         const std::function<double(const Eigen::Vector2d&, int)>& value);

int total_dim(const Spaces& spaces);

}  // namespace bstokes
