#pragma once

#include "bstokes/kernels.hpp"

namespace bstokes {

// Continuous piecewise-quadratic space on the interface polyline, aligned
// node-by-node with the p_P dofs on Sigma. The restriction from the global
// p_P space is the L2-projection onto this space; for matching meshes it
// reproduces interface traces exactly.
struct TraceSpace {
  struct Segment {
    std::array<int, 3> nodes;  // endpoint, endpoint, midpoint (trace numbering)
    double length = 0.0;
  };
  std::vector<Segment> segments;
  std::vector<Eigen::Vector2d> node_coord;
  std::vector<int> pp_dof;         // trace node -> p_P dof (field-local)
  std::vector<int> boundary_nodes; // nodes on the polyline endpoints; empty if closed
  bool closed = false;
  SpMat restriction;               // dim() x pp.dim()

  int dim() const { return static_cast<int>(node_coord.size()); }
};

TraceSpace build_trace_space(const Mesh& mesh, const FieldSpace& pp);

// Mass and stiffness of the trace space scaled by a constant weight.
SpMat trace_mass(const TraceSpace& ts, double weight);
SpMat trace_stiffness(const TraceSpace& ts, double weight);

}  // namespace bstokes
