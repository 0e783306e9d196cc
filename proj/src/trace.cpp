#include "bstokes/trace.hpp"

#include <Eigen/SparseCholesky>
#include <map>
#include <stdexcept>

#include "bstokes/elements.hpp"
#include "bstokes/quadrature.hpp"

namespace bstokes {

TraceSpace build_trace_space(const Mesh& mesh, const FieldSpace& pp) {
  std::vector<int> sig = mesh.sigma_facets();
  if (sig.empty()) throw std::invalid_argument("build_trace_space: empty interface");
  if (pp.order != 2) throw std::invalid_argument("build_trace_space: quadratic p_P expected");

  TraceSpace ts;
  std::map<int, int> vertex_trace;  // mesh vertex -> trace node
  std::map<int, int> vertex_count;
  auto trace_node_of_vertex = [&](int v) {
    auto it = vertex_trace.find(v);
    if (it != vertex_trace.end()) return it->second;
    int id = ts.dim();
    vertex_trace.emplace(v, id);
    ts.node_coord.push_back(mesh.vertices[v]);
    ts.pp_dof.push_back(pp.vertex_node[v]);
    return id;
  };
  for (int f : sig) {
    int v0 = mesh.facets[f][0], v1 = mesh.facets[f][1];
    ++vertex_count[v0];
    ++vertex_count[v1];
    TraceSpace::Segment seg;
    seg.nodes[0] = trace_node_of_vertex(v0);
    seg.nodes[1] = trace_node_of_vertex(v1);
    seg.nodes[2] = ts.dim();
    ts.node_coord.push_back(mesh.facet_midpoint(f));
    ts.pp_dof.push_back(pp.facet_node[f]);
    seg.length = mesh.facet_length(f);
    ts.segments.push_back(seg);
  }
  for (auto [v, cnt] : vertex_count)
    if (cnt == 1) ts.boundary_nodes.push_back(vertex_trace[v]);
  ts.closed = ts.boundary_nodes.empty();

  // L2-projection: restriction R solves M_S R = T with T the cross mass
  // between trace basis and p_P traces. Only dofs on Sigma have a nonzero
  // trace, and for those T equals M_S column-for-column, so R reduces to a
  // selection up to solver round-off; solving keeps the operator faithful to
  // its definition. Entries below 1e-12 are round-off and pruned.
  SpMat ms = trace_mass(ts, 1.0);
  Eigen::SimplicialLLT<SpMat> llt(ms);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("build_trace_space: trace mass not SPD");
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(ts.dim(), ts.dim());
  for (const auto& seg : ts.segments) {
    // local 1D P2 mass
    const SegmentRule rule = segment_quadrature(5);
    double M[3][3] = {};
    for (size_t q = 0; q < rule.points.size(); ++q) {
      double N[3];
      seg_shape_p2(rule.points[q], N);
      double w = rule.weights[q] * seg.length;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) M[a][b] += w * N[a] * N[b];
    }
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) T(seg.nodes[a], seg.nodes[b]) += M[a][b];
  }
  Eigen::MatrixXd R = llt.solve(T);
  std::vector<Eigen::Triplet<double>> trip;
  for (int i = 0; i < ts.dim(); ++i)
    for (int j = 0; j < ts.dim(); ++j)
      if (std::abs(R(i, j)) > 1e-12) trip.emplace_back(i, ts.pp_dof[j], R(i, j));
  ts.restriction.resize(ts.dim(), pp.dim());
  ts.restriction.setFromTriplets(trip.begin(), trip.end());
  return ts;
}

SpMat trace_mass(const TraceSpace& ts, double weight) {
  const SegmentRule rule = segment_quadrature(5);
  std::vector<Eigen::Triplet<double>> trip;
  for (const auto& seg : ts.segments) {
    double M[3][3] = {};
    for (size_t q = 0; q < rule.points.size(); ++q) {
      double N[3];
      seg_shape_p2(rule.points[q], N);
      double w = weight * rule.weights[q] * seg.length;
      for (int a = 0; a < 3; ++a)
        for (int b = a; b < 3; ++b) M[a][b] += w * N[a] * N[b];
    }
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        trip.emplace_back(seg.nodes[a], seg.nodes[b], a <= b ? M[a][b] : M[b][a]);
  }
  SpMat mat(ts.dim(), ts.dim());
  mat.setFromTriplets(trip.begin(), trip.end());
  return mat;
}

SpMat trace_stiffness(const TraceSpace& ts, double weight) {
  const SegmentRule rule = segment_quadrature(5);
  std::vector<Eigen::Triplet<double>> trip;
  for (const auto& seg : ts.segments) {
    double M[3][3] = {};
    for (size_t q = 0; q < rule.points.size(); ++q) {
      double dN[3];
      seg_shape_p2_deriv(rule.points[q], dN);
      double w = weight * rule.weights[q] / seg.length;  // (dN/ds)^2 * |ds|
      for (int a = 0; a < 3; ++a)
        for (int b = a; b < 3; ++b) M[a][b] += w * dN[a] * dN[b];
    }
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        trip.emplace_back(seg.nodes[a], seg.nodes[b], a <= b ? M[a][b] : M[b][a]);
  }
  SpMat mat(ts.dim(), ts.dim());
  mat.setFromTriplets(trip.begin(), trip.end());
  return mat;
}

}  // namespace bstokes
