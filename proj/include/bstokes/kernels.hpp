#pragma once

#include <Eigen/Sparse>
#include <functional>

#include "bstokes/mesh.hpp"
#include "bstokes/spaces.hpp"

namespace bstokes {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

// Cell-local work runs in parallel (OpenMP) or serially; global accumulation
// is always performed in cell order, so both policies produce bit-identical
// matrices.
enum class ExecPolicy { Serial, Parallel };
ExecPolicy default_policy();
void set_default_policy(ExecPolicy p);

// Volume kernels. All throw std::invalid_argument on a space/subdomain
// mismatch and integrate with a rule exact for the quadratic basis products.
SpMat assemble_mass(const Mesh& mesh, const FieldSpace& space, double coeff,
                    ExecPolicy pol = default_policy());
SpMat assemble_stiffness(const Mesh& mesh, const FieldSpace& space, double coeff,
                         ExecPolicy pol = default_policy());
// coeff * (eps(u), eps(v)) over the space's subdomain; vector space required.
SpMat assemble_eps_eps(const Mesh& mesh, const FieldSpace& space, double coeff,
                       ExecPolicy pol = default_policy());
// Rows q, columns v: -(div v, q). Both spaces must live on the same subdomain.
SpMat assemble_div(const Mesh& mesh, const FieldSpace& pressure, const FieldSpace& velocity,
                   ExecPolicy pol = default_policy());
// Rectangular coeff * (p, q) between two scalar spaces on one subdomain.
SpMat assemble_mixed_mass(const Mesh& mesh, const FieldSpace& rows, const FieldSpace& cols,
                          double coeff, ExecPolicy pol = default_policy());

// Tangential interface coupling coeff * <(u - d) . t, (v - w) . t> split into
// the four velocity-displacement blocks with the saddle structure
// [uu, ud; du, dd] = coeff * [G, -G; -G, G].
struct TangentialBlocks {
  SpMat uu, ud, du, dd;
};
TangentialBlocks assemble_interface_tangential(const Mesh& mesh, const FieldSpace& u_space,
                                               const FieldSpace& d_space, double coeff);

// sign * <q, v . n> over Sigma with n the stored Fluid -> Porous normal; rows
// from the scalar trace-carrying space, columns from the vector space.
SpMat assemble_interface_normal(const Mesh& mesh, const FieldSpace& scalar_space,
                                const FieldSpace& vector_space, double sign);

// RHS helpers: integrates fn against the basis over the subdomain (volume) or
// over facets with the given tag (traction on a vector space).
Vec assemble_volume_load(const Mesh& mesh, const FieldSpace& space,
                         const std::function<double(const Eigen::Vector2d&, int)>& fn,
                         int quad_degree = 4);
Vec assemble_facet_load(const Mesh& mesh, const FieldSpace& space, FacetTag tag,
                        const std::function<double(const Eigen::Vector2d&, int)>& fn,
                        int quad_degree = 5);

// Integrates fn(x) . grad(q) against a scalar space over its subdomain.
Vec assemble_gradient_load(const Mesh& mesh, const FieldSpace& space,
                           const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& fn,
                           int quad_degree = 4);
// Integrates fn(x, n) q over the interface, n the Fluid -> Porous normal.
Vec assemble_sigma_load(const Mesh& mesh, const FieldSpace& space,
                        const std::function<double(const Eigen::Vector2d&,
                                                   const Eigen::Vector2d&)>& fn,
                        int quad_degree = 5);

// Gathers the field node indices of a facet's trace: [endpoint0, endpoint1,
// midpoint]; order-1 spaces have no midpoint entry (-1).
std::array<int, 3> facet_trace_nodes(const Mesh& mesh, const FieldSpace& space, int facet);

}  // namespace bstokes
