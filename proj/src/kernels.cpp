#include "bstokes/kernels.hpp"

#include <Eigen/Dense>

#include <stdexcept>

#include "bstokes/elements.hpp"
#include "bstokes/quadrature.hpp"

namespace bstokes {

namespace {

ExecPolicy g_policy = ExecPolicy::Parallel;

constexpr int kVolumeDegree = 4;  // exact for products of quadratic basis functions
constexpr int kFacetDegree = 5;

struct CellGeometry {
  Eigen::Matrix2d jac_inv_t;
  double area;
};

CellGeometry cell_geometry(const Mesh& mesh, int c) {
  const auto& t = mesh.cells[c];
  Eigen::Matrix2d J;
  J.col(0) = mesh.vertices[t[1]] - mesh.vertices[t[0]];
  J.col(1) = mesh.vertices[t[2]] - mesh.vertices[t[0]];
  double det = J.determinant();
  CellGeometry g;
  g.area = 0.5 * det;
  g.jac_inv_t = J.inverse().transpose();
  return g;
}

std::vector<int> cells_with_tag(const Mesh& mesh, CellTag tag) {
  std::vector<int> out;
  for (int c = 0; c < mesh.num_cells(); ++c)
    if (mesh.cell_tag[c] == tag) out.push_back(c);
  return out;
}

void gather_cell_nodes(const Mesh& mesh, const FieldSpace& sp, int c, int nodes[6]) {
  for (int k = 0; k < 3; ++k) nodes[k] = sp.vertex_node[mesh.cells[c][k]];
  if (sp.order == 2)
    for (int k = 0; k < 3; ++k) nodes[3 + k] = sp.facet_node[mesh.cell_facet[c][k]];
}

// Runs `local(cell, triplet slot)` over the subdomain cells, each cell filling
// its own fixed-size slice, then accumulates in cell order.
template <class Local>
SpMat assemble_cellwise(const Mesh& mesh, CellTag sub, int rows, int cols, int slot_size,
                        ExecPolicy pol, Local&& local) {
  std::vector<int> cells = cells_with_tag(mesh, sub);
  std::vector<Eigen::Triplet<double>> trip(cells.size() * slot_size,
                                           Eigen::Triplet<double>(0, 0, 0.0));
  const auto n = static_cast<std::ptrdiff_t>(cells.size());
  if (pol == ExecPolicy::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) local(cells[i], &trip[i * slot_size]);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) local(cells[i], &trip[i * slot_size]);
  }
  SpMat mat(rows, cols);
  mat.setFromTriplets(trip.begin(), trip.end());
  return mat;
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

ExecPolicy default_policy() { return g_policy; }
void set_default_policy(ExecPolicy p) { g_policy = p; }

SpMat assemble_mass(const Mesh& mesh, const FieldSpace& sp, double coeff, ExecPolicy pol) {
  require(sp.vector_dim == 1, "assemble_mass: scalar space expected");
  const TriangleRule rule = triangle_quadrature(kVolumeDegree);
  const int nloc = tri_num_nodes(sp.order);
  auto local = [&](int c, Eigen::Triplet<double>* out) {
    CellGeometry g = cell_geometry(mesh, c);
    int nodes[6];
    gather_cell_nodes(mesh, sp, c, nodes);
    double M[6][6] = {};
    for (size_t q = 0; q < rule.weights.size(); ++q) {
      double N[6];
      tri_shape(sp.order, rule.barycentric[q], N);
      double w = coeff * rule.weights[q] * 2.0 * g.area;
      for (int a = 0; a < nloc; ++a)
        for (int b = a; b < nloc; ++b) M[a][b] += w * N[a] * N[b];
    }
    int k = 0;
    for (int a = 0; a < nloc; ++a)
      for (int b = 0; b < nloc; ++b)
        out[k++] = {nodes[a], nodes[b], a <= b ? M[a][b] : M[b][a]};
  };
  return assemble_cellwise(mesh, sp.subdomain, sp.dim(), sp.dim(), nloc * nloc, pol, local);
}

SpMat assemble_stiffness(const Mesh& mesh, const FieldSpace& sp, double coeff, ExecPolicy pol) {
  require(sp.vector_dim == 1, "assemble_stiffness: scalar space expected");
  const TriangleRule rule = triangle_quadrature(kVolumeDegree);
  const int nloc = tri_num_nodes(sp.order);
  auto local = [&](int c, Eigen::Triplet<double>* out) {
    CellGeometry g = cell_geometry(mesh, c);
    int nodes[6];
    gather_cell_nodes(mesh, sp, c, nodes);
    double M[6][6] = {};
    for (size_t q = 0; q < rule.weights.size(); ++q) {
      double G[6][2];
      tri_shape_grad(sp.order, rule.barycentric[q], G);
      Eigen::Vector2d grad[6];
      for (int a = 0; a < nloc; ++a) grad[a] = g.jac_inv_t * Eigen::Vector2d(G[a][0], G[a][1]);
      double w = coeff * rule.weights[q] * 2.0 * g.area;
      for (int a = 0; a < nloc; ++a)
        for (int b = a; b < nloc; ++b) M[a][b] += w * grad[a].dot(grad[b]);
    }
    int k = 0;
    for (int a = 0; a < nloc; ++a)
      for (int b = 0; b < nloc; ++b)
        out[k++] = {nodes[a], nodes[b], a <= b ? M[a][b] : M[b][a]};
  };
  return assemble_cellwise(mesh, sp.subdomain, sp.dim(), sp.dim(), nloc * nloc, pol, local);
}

SpMat assemble_eps_eps(const Mesh& mesh, const FieldSpace& sp, double coeff, ExecPolicy pol) {
  require(sp.vector_dim == 2, "assemble_eps_eps: vector space expected");
  const TriangleRule rule = triangle_quadrature(kVolumeDegree);
  const int nloc = tri_num_nodes(sp.order);
  const int ndof = 2 * nloc;
  auto local = [&](int c, Eigen::Triplet<double>* out) {
    CellGeometry g = cell_geometry(mesh, c);
    int nodes[6];
    gather_cell_nodes(mesh, sp, c, nodes);
    double M[12][12] = {};
    for (size_t q = 0; q < rule.weights.size(); ++q) {
      double G[6][2];
      tri_shape_grad(sp.order, rule.barycentric[q], G);
      Eigen::Vector2d grad[6];
      for (int a = 0; a < nloc; ++a) grad[a] = g.jac_inv_t * Eigen::Vector2d(G[a][0], G[a][1]);
      double w = coeff * rule.weights[q] * 2.0 * g.area;
      // eps(N_a e_i) : eps(N_b e_j) = (grad_a.grad_b delta_ij + da_j db_i) / 2
      for (int A = 0; A < ndof; ++A) {
        int a = A / 2, ca = A % 2;
        for (int B = A; B < ndof; ++B) {
          int b = B / 2, cb = B % 2;
          double val = 0.5 * grad[a][cb] * grad[b][ca];
          if (ca == cb) val += 0.5 * grad[a].dot(grad[b]);
          M[A][B] += w * val;
        }
      }
    }
    int k = 0;
    for (int A = 0; A < ndof; ++A) {
      int a = A / 2, ca = A % 2;
      for (int B = 0; B < ndof; ++B) {
        int b = B / 2, cb = B % 2;
        out[k++] = {sp.dof(nodes[a], ca), sp.dof(nodes[b], cb), A <= B ? M[A][B] : M[B][A]};
      }
    }
  };
  return assemble_cellwise(mesh, sp.subdomain, sp.dim(), sp.dim(), ndof * ndof, pol, local);
}

SpMat assemble_div(const Mesh& mesh, const FieldSpace& pressure, const FieldSpace& velocity,
                   ExecPolicy pol) {
  require(pressure.vector_dim == 1 && velocity.vector_dim == 2,
          "assemble_div: scalar x vector spaces expected");
  require(pressure.subdomain == velocity.subdomain, "assemble_div: mismatched subdomains");
  const TriangleRule rule = triangle_quadrature(kVolumeDegree);
  const int np = tri_num_nodes(pressure.order);
  const int nv = tri_num_nodes(velocity.order);
  auto local = [&](int c, Eigen::Triplet<double>* out) {
    CellGeometry g = cell_geometry(mesh, c);
    int pnodes[6], vnodes[6];
    gather_cell_nodes(mesh, pressure, c, pnodes);
    gather_cell_nodes(mesh, velocity, c, vnodes);
    double M[6][12] = {};
    for (size_t q = 0; q < rule.weights.size(); ++q) {
      double Np[6], G[6][2];
      tri_shape(pressure.order, rule.barycentric[q], Np);
      tri_shape_grad(velocity.order, rule.barycentric[q], G);
      double w = rule.weights[q] * 2.0 * g.area;
      for (int b = 0; b < nv; ++b) {
        Eigen::Vector2d grad = g.jac_inv_t * Eigen::Vector2d(G[b][0], G[b][1]);
        for (int cb = 0; cb < 2; ++cb) {
          double dv = grad[cb];  // div(N_b e_cb)
          for (int a = 0; a < np; ++a) M[a][2 * b + cb] -= w * Np[a] * dv;
        }
      }
    }
    int k = 0;
    for (int a = 0; a < np; ++a)
      for (int b = 0; b < nv; ++b)
        for (int cb = 0; cb < 2; ++cb)
          out[k++] = {pnodes[a], velocity.dof(vnodes[b], cb), M[a][2 * b + cb]};
  };
  return assemble_cellwise(mesh, pressure.subdomain, pressure.dim(), velocity.dim(), np * nv * 2,
                           pol, local);
}

SpMat assemble_mixed_mass(const Mesh& mesh, const FieldSpace& rows, const FieldSpace& cols,
                          double coeff, ExecPolicy pol) {
  require(rows.vector_dim == 1 && cols.vector_dim == 1,
          "assemble_mixed_mass: scalar spaces expected");
  require(rows.subdomain == cols.subdomain, "assemble_mixed_mass: mismatched subdomains");
  const TriangleRule rule = triangle_quadrature(kVolumeDegree);
  const int nr = tri_num_nodes(rows.order);
  const int nc = tri_num_nodes(cols.order);
  auto local = [&](int c, Eigen::Triplet<double>* out) {
    CellGeometry g = cell_geometry(mesh, c);
    int rnodes[6], cnodes[6];
    gather_cell_nodes(mesh, rows, c, rnodes);
    gather_cell_nodes(mesh, cols, c, cnodes);
    double M[6][6] = {};
    for (size_t q = 0; q < rule.weights.size(); ++q) {
      double Nr[6], Nc[6];
      tri_shape(rows.order, rule.barycentric[q], Nr);
      tri_shape(cols.order, rule.barycentric[q], Nc);
      double w = coeff * rule.weights[q] * 2.0 * g.area;
      for (int a = 0; a < nr; ++a)
        for (int b = 0; b < nc; ++b) M[a][b] += w * Nr[a] * Nc[b];
    }
    int k = 0;
    for (int a = 0; a < nr; ++a)
      for (int b = 0; b < nc; ++b) out[k++] = {rnodes[a], cnodes[b], M[a][b]};
  };
  return assemble_cellwise(mesh, rows.subdomain, rows.dim(), cols.dim(), nr * nc, pol, local);
}

std::array<int, 3> facet_trace_nodes(const Mesh& mesh, const FieldSpace& sp, int facet) {
  return {sp.vertex_node[mesh.facets[facet][0]], sp.vertex_node[mesh.facets[facet][1]],
          sp.order == 2 ? sp.facet_node[facet] : -1};
}

TangentialBlocks assemble_interface_tangential(const Mesh& mesh, const FieldSpace& u_space,
                                               const FieldSpace& d_space, double coeff) {
  require(u_space.vector_dim == 2 && d_space.vector_dim == 2,
          "assemble_interface_tangential: vector spaces expected");
  std::vector<int> sig = mesh.sigma_facets();
  require(!sig.empty(), "assemble_interface_tangential: empty interface");

  const SegmentRule rule = segment_quadrature(kFacetDegree);
  std::vector<Eigen::Triplet<double>> tuu, tud, tdu, tdd;
  for (int f : sig) {
    const Eigen::Vector2d n = mesh.facet_normal[f];
    const Eigen::Vector2d t(-n.y(), n.x());
    const double len = mesh.facet_length(f);
    auto unodes = facet_trace_nodes(mesh, u_space, f);
    auto dnodes = facet_trace_nodes(mesh, d_space, f);
    double M[6][6] = {};
    for (size_t q = 0; q < rule.points.size(); ++q) {
      double N[3];
      seg_shape_p2(rule.points[q], N);
      double w = coeff * rule.weights[q] * len;
      for (int A = 0; A < 6; ++A) {
        int a = A / 2, ca = A % 2;
        for (int B = A; B < 6; ++B) {
          int b = B / 2, cb = B % 2;
          M[A][B] += w * N[a] * N[b] * t[ca] * t[cb];
        }
      }
    }
    for (int A = 0; A < 6; ++A) {
      int a = A / 2, ca = A % 2;
      for (int B = 0; B < 6; ++B) {
        int b = B / 2, cb = B % 2;
        double v = A <= B ? M[A][B] : M[B][A];
        tuu.emplace_back(u_space.dof(unodes[a], ca), u_space.dof(unodes[b], cb), v);
        tud.emplace_back(u_space.dof(unodes[a], ca), d_space.dof(dnodes[b], cb), -v);
        tdu.emplace_back(d_space.dof(dnodes[a], ca), u_space.dof(unodes[b], cb), -v);
        tdd.emplace_back(d_space.dof(dnodes[a], ca), d_space.dof(dnodes[b], cb), v);
      }
    }
  }
  TangentialBlocks blocks;
  blocks.uu.resize(u_space.dim(), u_space.dim());
  blocks.ud.resize(u_space.dim(), d_space.dim());
  blocks.du.resize(d_space.dim(), u_space.dim());
  blocks.dd.resize(d_space.dim(), d_space.dim());
  blocks.uu.setFromTriplets(tuu.begin(), tuu.end());
  blocks.ud.setFromTriplets(tud.begin(), tud.end());
  blocks.du.setFromTriplets(tdu.begin(), tdu.end());
  blocks.dd.setFromTriplets(tdd.begin(), tdd.end());
  return blocks;
}

SpMat assemble_interface_normal(const Mesh& mesh, const FieldSpace& scalar_space,
                                const FieldSpace& vector_space, double sign) {
  require(scalar_space.vector_dim == 1 && vector_space.vector_dim == 2,
          "assemble_interface_normal: scalar x vector spaces expected");
  std::vector<int> sig = mesh.sigma_facets();
  require(!sig.empty(), "assemble_interface_normal: empty interface");

  const SegmentRule rule = segment_quadrature(kFacetDegree);
  std::vector<Eigen::Triplet<double>> trip;
  for (int f : sig) {
    const Eigen::Vector2d n = mesh.facet_normal[f];
    const double len = mesh.facet_length(f);
    auto qnodes = facet_trace_nodes(mesh, scalar_space, f);
    auto vnodes = facet_trace_nodes(mesh, vector_space, f);
    const int nq = scalar_space.order == 2 ? 3 : 2;
    double M[3][6] = {};
    for (size_t q = 0; q < rule.points.size(); ++q) {
      double N[3], Ns[3];
      seg_shape_p2(rule.points[q], N);
      if (scalar_space.order == 2) {
        Ns[0] = N[0]; Ns[1] = N[1]; Ns[2] = N[2];
      } else {
        Ns[0] = 1.0 - rule.points[q]; Ns[1] = rule.points[q]; Ns[2] = 0.0;
      }
      double w = sign * rule.weights[q] * len;
      for (int a = 0; a < nq; ++a)
        for (int b = 0; b < 3; ++b)
          for (int cb = 0; cb < 2; ++cb) M[a][2 * b + cb] += w * Ns[a] * N[b] * n[cb];
    }
    for (int a = 0; a < nq; ++a)
      for (int b = 0; b < 3; ++b)
        for (int cb = 0; cb < 2; ++cb)
          trip.emplace_back(qnodes[a], vector_space.dof(vnodes[b], cb), M[a][2 * b + cb]);
  }
  SpMat mat(scalar_space.dim(), vector_space.dim());
  mat.setFromTriplets(trip.begin(), trip.end());
  return mat;
}

Vec assemble_volume_load(const Mesh& mesh, const FieldSpace& sp,
                         const std::function<double(const Eigen::Vector2d&, int)>& fn,
                         int quad_degree) {
  const TriangleRule rule = triangle_quadrature(quad_degree);
  const int nloc = tri_num_nodes(sp.order);
  Vec rhs = Vec::Zero(sp.dim());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    if (mesh.cell_tag[c] != sp.subdomain) continue;
    CellGeometry g = cell_geometry(mesh, c);
    int nodes[6];
    gather_cell_nodes(mesh, sp, c, nodes);
    const auto& tri = mesh.cells[c];
    for (size_t q = 0; q < rule.weights.size(); ++q) {
      const auto& l = rule.barycentric[q];
      Eigen::Vector2d x = l[0] * mesh.vertices[tri[0]] + l[1] * mesh.vertices[tri[1]] +
                          l[2] * mesh.vertices[tri[2]];
      double N[6];
      tri_shape(sp.order, l, N);
      double w = rule.weights[q] * 2.0 * g.area;
      for (int comp = 0; comp < sp.vector_dim; ++comp) {
        double f = fn(x, comp);
        for (int a = 0; a < nloc; ++a) rhs[sp.dof(nodes[a], comp)] += w * N[a] * f;
      }
    }
  }
  return rhs;
}

Vec assemble_gradient_load(const Mesh& mesh, const FieldSpace& sp,
                           const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& fn,
                           int quad_degree) {
  const TriangleRule rule = triangle_quadrature(quad_degree);
  const int nloc = tri_num_nodes(sp.order);
  Vec rhs = Vec::Zero(sp.dim());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    if (mesh.cell_tag[c] != sp.subdomain) continue;
    CellGeometry g = cell_geometry(mesh, c);
    int nodes[6];
    gather_cell_nodes(mesh, sp, c, nodes);
    const auto& tri = mesh.cells[c];
    for (size_t q = 0; q < rule.weights.size(); ++q) {
      const auto& l = rule.barycentric[q];
      Eigen::Vector2d x = l[0] * mesh.vertices[tri[0]] + l[1] * mesh.vertices[tri[1]] +
                          l[2] * mesh.vertices[tri[2]];
      double G[6][2];
      tri_shape_grad(sp.order, l, G);
      double w = rule.weights[q] * 2.0 * g.area;
      Eigen::Vector2d f = fn(x);
      for (int a = 0; a < nloc; ++a) {
        Eigen::Vector2d grad = g.jac_inv_t * Eigen::Vector2d(G[a][0], G[a][1]);
        rhs[sp.dof(nodes[a], 0)] += w * f.dot(grad);
      }
    }
  }
  return rhs;
}

Vec assemble_sigma_load(const Mesh& mesh, const FieldSpace& sp,
                        const std::function<double(const Eigen::Vector2d&,
                                                   const Eigen::Vector2d&)>& fn,
                        int quad_degree) {
  const SegmentRule rule = segment_quadrature(quad_degree);
  Vec rhs = Vec::Zero(sp.dim());
  for (int f : mesh.sigma_facets()) {
    auto nodes = facet_trace_nodes(mesh, sp, f);
    const Eigen::Vector2d n = mesh.facet_normal[f];
    const Eigen::Vector2d a = mesh.vertices[mesh.facets[f][0]];
    const Eigen::Vector2d b = mesh.vertices[mesh.facets[f][1]];
    const double len = mesh.facet_length(f);
    const int nloc = sp.order == 2 ? 3 : 2;
    for (size_t q = 0; q < rule.points.size(); ++q) {
      double s = rule.points[q];
      Eigen::Vector2d x = (1.0 - s) * a + s * b;
      double N[3];
      if (sp.order == 2) {
        seg_shape_p2(s, N);
      } else {
        N[0] = 1.0 - s; N[1] = s; N[2] = 0.0;
      }
      double w = rule.weights[q] * len * fn(x, n);
      for (int k = 0; k < nloc; ++k) rhs[sp.dof(nodes[k], 0)] += w * N[k];
    }
  }
  return rhs;
}

Vec assemble_facet_load(const Mesh& mesh, const FieldSpace& sp, FacetTag tag,
                        const std::function<double(const Eigen::Vector2d&, int)>& fn,
                        int quad_degree) {
  const SegmentRule rule = segment_quadrature(quad_degree);
  Vec rhs = Vec::Zero(sp.dim());
  for (int f = 0; f < mesh.num_facets(); ++f) {
    if (mesh.facet_tag[f] != tag) continue;
    auto nodes = facet_trace_nodes(mesh, sp, f);
    const double len = mesh.facet_length(f);
    const Eigen::Vector2d a = mesh.vertices[mesh.facets[f][0]];
    const Eigen::Vector2d b = mesh.vertices[mesh.facets[f][1]];
    const int nloc = sp.order == 2 ? 3 : 2;
    for (size_t q = 0; q < rule.points.size(); ++q) {
      double s = rule.points[q];
      Eigen::Vector2d x = (1.0 - s) * a + s * b;
      double N[3];
      if (sp.order == 2) {
        seg_shape_p2(s, N);
      } else {
        N[0] = 1.0 - s; N[1] = s; N[2] = 0.0;
      }
      double w = rule.weights[q] * len;
      for (int comp = 0; comp < sp.vector_dim; ++comp) {
        double v = fn(x, comp);
        for (int k = 0; k < nloc; ++k) rhs[sp.dof(nodes[k], comp)] += w * N[k] * v;
      }
    }
  }
  return rhs;
}

}  // namespace bstokes
