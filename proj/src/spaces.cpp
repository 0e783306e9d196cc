#include "bstokes/spaces.hpp"

#include <cmath>
#include <stdexcept>

namespace bstokes {

const char* to_string(Field f) {
  switch (f) {
    case Field::U: return "u";
    case Field::D: return "d";
    case Field::PF: return "p_F";
    case Field::PHI: return "phi";
    case Field::PP: return "p_P";
  }
  return "?";
}

FieldSpace make_field_space(const Mesh& mesh, Field field, CellTag sub, int order, int vdim) {
  FieldSpace sp;
  sp.field = field;
  sp.subdomain = sub;
  sp.order = order;
  sp.vector_dim = vdim;
  sp.vertex_node.assign(mesh.num_vertices(), -1);
  sp.facet_node.assign(mesh.num_facets(), -1);

  std::vector<char> vmark(mesh.num_vertices(), 0), fmark(mesh.num_facets(), 0);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    if (mesh.cell_tag[c] != sub) continue;
    for (int k = 0; k < 3; ++k) {
      vmark[mesh.cells[c][k]] = 1;
      fmark[mesh.cell_facet[c][k]] = 1;
    }
  }
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    if (!vmark[v]) continue;
    sp.vertex_node[v] = sp.num_nodes++;
    sp.node_coord.push_back(mesh.vertices[v]);
  }
  if (order == 2) {
    for (int f = 0; f < mesh.num_facets(); ++f) {
      if (!fmark[f]) continue;
      sp.facet_node[f] = sp.num_nodes++;
      sp.node_coord.push_back(mesh.facet_midpoint(f));
    }
  }
  sp.is_dirichlet.assign(sp.dim(), 0);
  sp.dirichlet_value.assign(sp.dim(), 0.0);
  return sp;
}

void constrain_on_facets(FieldSpace& space, const Mesh& mesh, FacetTag tag,
                         const std::function<double(const Eigen::Vector2d&, int)>& value) {
  auto pin = [&](int node) {
    if (node < 0) return;
    for (int c = 0; c < space.vector_dim; ++c) {
      int d = space.dof(node, c);
      double g = value ? value(space.node_coord[node], c) : 0.0;
      if (space.is_dirichlet[d] && std::abs(space.dirichlet_value[d] - g) > 1e-12 * (1.0 + std::abs(g)))
        throw std::runtime_error("conflicting Dirichlet values on field " +
                                 std::string(to_string(space.field)));
      space.is_dirichlet[d] = 1;
      space.dirichlet_value[d] = g;
    }
  };
  for (int f = 0; f < mesh.num_facets(); ++f) {
    if (mesh.facet_tag[f] != tag) continue;
    pin(space.vertex_node[mesh.facets[f][0]]);
    pin(space.vertex_node[mesh.facets[f][1]]);
    if (space.order == 2) pin(space.facet_node[f]);
  }
}

Spaces build_spaces(const Mesh& mesh) {
  Spaces sp{
      make_field_space(mesh, Field::U, CellTag::Fluid, 2, 2),
      make_field_space(mesh, Field::D, CellTag::Porous, 2, 2),
      make_field_space(mesh, Field::PF, CellTag::Fluid, 1, 1),
      make_field_space(mesh, Field::PHI, CellTag::Porous, 1, 1),
      make_field_space(mesh, Field::PP, CellTag::Porous, 2, 1),
  };
  int offset = 0;
  for (auto& s : sp) {
    s.global_offset = offset;
    offset += s.dim();
  }
  constrain_on_facets(sp[0], mesh, FacetTag::GammaFU, nullptr);
  constrain_on_facets(sp[1], mesh, FacetTag::GammaPD, nullptr);
  constrain_on_facets(sp[4], mesh, FacetTag::GammaPP, nullptr);
  if (mesh.bc_config == BcConfig::DirichletDagger)
    constrain_on_facets(sp[4], mesh, FacetTag::GammaPD, nullptr);
  return sp;
}

void set_dirichlet_values(Spaces& spaces,
                          const std::function<double(Field, const Eigen::Vector2d&, int)>& value) {
  for (auto& sp : spaces) {
    for (int node = 0; node < sp.num_nodes; ++node) {
      for (int c = 0; c < sp.vector_dim; ++c) {
        int d = sp.dof(node, c);
        if (sp.is_dirichlet[d]) sp.dirichlet_value[d] = value(sp.field, sp.node_coord[node], c);
      }
    }
  }
}

int total_dim(const Spaces& spaces) {
  int n = 0;
  for (const auto& s : spaces) n += s.dim();
  return n;
}

}  // namespace bstokes
