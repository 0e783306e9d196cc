#include "bstokes/mms.hpp"

#include <Eigen/Dense>

#include <cmath>

#include "bstokes/elements.hpp"
#include "bstokes/quadrature.hpp"

namespace bstokes {

namespace {
constexpr int kLoadDegree = 8;  // trigonometric integrands
constexpr int kLoadFacetDegree = 9;
}  // namespace

MmsValue mms_exact(const Eigen::Vector2d& p, const Params& params) {
  const double x = p.x(), y = p.y();
  const double pi = M_PI;
  MmsValue v;

  v.u = {std::cos(pi * x) * std::sin(pi * y), -std::sin(pi * x) * std::cos(pi * y)};
  v.grad_u(0, 0) = -pi * std::sin(pi * x) * std::sin(pi * y);
  v.grad_u(0, 1) = pi * std::cos(pi * x) * std::cos(pi * y);
  v.grad_u(1, 0) = -pi * std::cos(pi * x) * std::cos(pi * y);
  v.grad_u(1, 1) = pi * std::sin(pi * x) * std::sin(pi * y);

  v.p_f = std::exp(x * y) + std::cos(pi * x) * std::cos(pi * y);
  v.grad_p_f = {y * std::exp(x * y) - pi * std::sin(pi * x) * std::cos(pi * y),
                x * std::exp(x * y) - pi * std::cos(pi * x) * std::sin(pi * y)};

  v.d = v.u + Eigen::Vector2d(y * (x - 0.5) / params.lambda, 0.0);
  v.grad_d = v.grad_u;
  v.grad_d(0, 0) += y / params.lambda;
  v.grad_d(0, 1) += (x - 0.5) / params.lambda;

  const double r2 = x * x + y * y;
  v.p_p = std::cos(pi * r2);
  v.grad_p_p = -std::sin(pi * r2) * pi * Eigen::Vector2d(2.0 * x, 2.0 * y);

  // div d = y / lambda, hence phi = alpha p_P - y.
  v.phi = params.alpha * v.p_p - params.lambda * v.div_d();
  v.grad_phi = params.alpha * v.grad_p_p - Eigen::Vector2d(0.0, 1.0);
  return v;
}

void set_mms_dirichlet(Spaces& spaces, const Params& params) {
  set_dirichlet_values(spaces, [&](Field f, const Eigen::Vector2d& x, int comp) {
    MmsValue v = mms_exact(x, params);
    switch (f) {
      case Field::U: return v.u[comp];
      case Field::D: return v.d[comp];
      case Field::PP: return v.p_p;
      case Field::PF: return v.p_f;
      case Field::PHI: return v.phi;
    }
    return 0.0;
  });
}

BlockRhs assemble_mms_load(const Mesh& mesh, const Spaces& sp, const Params& params,
                           const FieldEval& fields) {
  const FieldEval eval =
      fields ? fields : [&params](const Eigen::Vector2d& x) { return mms_exact(x, params); };
  BlockRhs rhs;
  for (int i = 0; i < kNumFields; ++i) rhs[i] = Vec::Zero(sp[i].dim());

  const TriangleRule vol = triangle_quadrature(kLoadDegree);
  const double ct = params.tangential_coeff();

  // Volume terms, rows u, d, p_F, phi, p_P.
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& tri = mesh.cells[c];
    Eigen::Matrix2d J;
    J.col(0) = mesh.vertices[tri[1]] - mesh.vertices[tri[0]];
    J.col(1) = mesh.vertices[tri[2]] - mesh.vertices[tri[0]];
    const double area2 = J.determinant();
    const Eigen::Matrix2d jit = J.inverse().transpose();
    const bool fluid = mesh.cell_tag[c] == CellTag::Fluid;

    const FieldSpace& vel = fluid ? sp[0] : sp[1];
    const FieldSpace& pres = fluid ? sp[2] : sp[3];
    int vnodes[6], pnodes[6], ppnodes[6];
    for (int k = 0; k < 3; ++k) {
      vnodes[k] = vel.vertex_node[tri[k]];
      pnodes[k] = pres.vertex_node[tri[k]];
      vnodes[3 + k] = vel.facet_node[mesh.cell_facet[c][k]];
      if (!fluid) {
        ppnodes[k] = sp[4].vertex_node[tri[k]];
        ppnodes[3 + k] = sp[4].facet_node[mesh.cell_facet[c][k]];
      }
    }

    for (size_t q = 0; q < vol.weights.size(); ++q) {
      const auto& l = vol.barycentric[q];
      Eigen::Vector2d x = l[0] * mesh.vertices[tri[0]] + l[1] * mesh.vertices[tri[1]] +
                          l[2] * mesh.vertices[tri[2]];
      const double w = vol.weights[q] * area2;
      MmsValue ex = eval(x);

      double N2[6], G2[6][2], N1[6];
      tri_shape(2, l, N2);
      tri_shape_grad(2, l, G2);
      tri_shape(1, l, N1);
      Eigen::Vector2d grad2[6];
      for (int a = 0; a < 6; ++a) grad2[a] = jit * Eigen::Vector2d(G2[a][0], G2[a][1]);

      if (fluid) {
        // row u: 2 mu_f (eps(u), eps(v)) - (p_F, div v)
        const Eigen::Matrix2d eps = ex.eps_u();
        for (int a = 0; a < 6; ++a) {
          for (int ca = 0; ca < 2; ++ca) {
            // eps(N_a e_ca) : eps_exact = grad_a . eps_exact.row(ca)
            double eps_term = grad2[a].dot(eps.row(ca));
            double div_v = grad2[a][ca];
            rhs[0][vel.dof(vnodes[a], ca)] +=
                w * (2.0 * params.mu_f * eps_term - ex.p_f * div_v);
          }
        }
        // row p_F: -(div u, q_F) = 0 analytically; keep for fidelity
        for (int a = 0; a < 3; ++a) rhs[2][pnodes[a]] += w * (-ex.div_u()) * N1[a];
      } else {
        // row d: 2 mu_s (eps(d), eps(w)) - (phi, div w)
        const Eigen::Matrix2d eps = ex.eps_d();
        for (int a = 0; a < 6; ++a) {
          for (int ca = 0; ca < 2; ++ca) {
            double eps_term = grad2[a].dot(eps.row(ca));
            double div_w = grad2[a][ca];
            rhs[1][vel.dof(vnodes[a], ca)] +=
                w * (2.0 * params.mu_s * eps_term - ex.phi * div_w);
          }
        }
        // row phi: (alpha p_P - phi)/lambda - div d against psi
        const double phi_term = (params.alpha * ex.p_p - ex.phi) / params.lambda - ex.div_d();
        for (int a = 0; a < 3; ++a) rhs[3][pnodes[a]] += w * phi_term * N1[a];
        // row p_P: -(C0 + alpha^2/lambda) p_P + (alpha/lambda) phi against q,
        //          - kappa/mu_f grad p_P . grad q
        const double mass_term =
            -params.storage_coeff() * ex.p_p + params.alpha / params.lambda * ex.phi;
        for (int a = 0; a < 6; ++a) {
          rhs[4][ppnodes[a]] += w * (mass_term * N2[a] -
                                     params.kappa / params.mu_f * ex.grad_p_p.dot(grad2[a]));
        }
      }
    }
  }

  // Interface terms.
  const SegmentRule seg = segment_quadrature(kLoadFacetDegree);
  for (int f : mesh.sigma_facets()) {
    const Eigen::Vector2d n = mesh.facet_normal[f];
    const Eigen::Vector2d t(-n.y(), n.x());
    const Eigen::Vector2d a = mesh.vertices[mesh.facets[f][0]];
    const Eigen::Vector2d b = mesh.vertices[mesh.facets[f][1]];
    const double len = mesh.facet_length(f);
    auto un = facet_trace_nodes(mesh, sp[0], f);
    auto dn = facet_trace_nodes(mesh, sp[1], f);
    auto pn = facet_trace_nodes(mesh, sp[4], f);
    for (size_t q = 0; q < seg.points.size(); ++q) {
      const double s = seg.points[q];
      const Eigen::Vector2d x = (1.0 - s) * a + s * b;
      const double w = seg.weights[q] * len;
      MmsValue ex = eval(x);
      double N[3];
      seg_shape_p2(s, N);
      const double slip_t = (ex.u - ex.d).dot(t);
      const double slip_n = (ex.u - ex.d).dot(n);
      for (int k = 0; k < 3; ++k) {
        for (int c = 0; c < 2; ++c) {
          // row u: ct <(u-d).t, v.t> + <p_P, v.n>
          rhs[0][sp[0].dof(un[k], c)] += w * N[k] * (ct * slip_t * t[c] + ex.p_p * n[c]);
          // row d: -ct <(u-d).t, w.t> - <p_P, w.n>
          rhs[1][sp[1].dof(dn[k], c)] += w * N[k] * (-ct * slip_t * t[c] - ex.p_p * n[c]);
        }
        // row p_P: <q, (u-d).n>
        rhs[4][pn[k]] += w * N[k] * slip_n;
      }
    }
  }
  return rhs;
}

Vec mms_interpolant(const Spaces& sp, const Params& params) {
  Vec x = Vec::Zero(total_dim(sp));
  for (const auto& s : sp) {
    for (int node = 0; node < s.num_nodes; ++node) {
      MmsValue v = mms_exact(s.node_coord[node], params);
      for (int c = 0; c < s.vector_dim; ++c) {
        double val = 0.0;
        switch (s.field) {
          case Field::U: val = v.u[c]; break;
          case Field::D: val = v.d[c]; break;
          case Field::PF: val = v.p_f; break;
          case Field::PHI: val = v.phi; break;
          case Field::PP: val = v.p_p; break;
        }
        x[s.global_offset + s.dof(node, c)] = val;
      }
    }
  }
  return x;
}

MmsErrors mms_errors(const BlockOperator& op, const Vec& solution, const Params& params) {
  const Mesh& mesh = *op.mesh;
  const Spaces& sp = op.spaces;
  auto parts = op.split(solution);

  const TriangleRule vol = triangle_quadrature(kLoadDegree);
  double u_l2 = 0, u_h1s = 0, pf_l2 = 0, d_l2 = 0, d_h1s = 0, phi_l2 = 0, pp_l2 = 0, pp_h1s = 0;

  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto& tri = mesh.cells[c];
    Eigen::Matrix2d J;
    J.col(0) = mesh.vertices[tri[1]] - mesh.vertices[tri[0]];
    J.col(1) = mesh.vertices[tri[2]] - mesh.vertices[tri[0]];
    const double area2 = J.determinant();
    const Eigen::Matrix2d jit = J.inverse().transpose();
    const bool fluid = mesh.cell_tag[c] == CellTag::Fluid;

    const FieldSpace& vel = fluid ? sp[0] : sp[1];
    const FieldSpace& pres = fluid ? sp[2] : sp[3];
    const Vec& velx = fluid ? parts[0] : parts[1];
    const Vec& presx = fluid ? parts[2] : parts[3];
    int vnodes[6], pnodes[3], ppnodes[6];
    for (int k = 0; k < 3; ++k) {
      vnodes[k] = vel.vertex_node[tri[k]];
      pnodes[k] = pres.vertex_node[tri[k]];
      vnodes[3 + k] = vel.facet_node[mesh.cell_facet[c][k]];
      if (!fluid) {
        ppnodes[k] = sp[4].vertex_node[tri[k]];
        ppnodes[3 + k] = sp[4].facet_node[mesh.cell_facet[c][k]];
      }
    }

    for (size_t q = 0; q < vol.weights.size(); ++q) {
      const auto& l = vol.barycentric[q];
      Eigen::Vector2d x = l[0] * mesh.vertices[tri[0]] + l[1] * mesh.vertices[tri[1]] +
                          l[2] * mesh.vertices[tri[2]];
      const double w = vol.weights[q] * area2;
      MmsValue ex = mms_exact(x, params);

      double N2[6], G2[6][2], N1[6];
      tri_shape(2, l, N2);
      tri_shape_grad(2, l, G2);
      tri_shape(1, l, N1);
      Eigen::Vector2d grad2[6];
      for (int a = 0; a < 6; ++a) grad2[a] = jit * Eigen::Vector2d(G2[a][0], G2[a][1]);

      Eigen::Vector2d vh = Eigen::Vector2d::Zero();
      Eigen::Matrix2d gh = Eigen::Matrix2d::Zero();
      for (int a = 0; a < 6; ++a)
        for (int comp = 0; comp < 2; ++comp) {
          double coefv = velx[vel.dof(vnodes[a], comp)];
          vh[comp] += coefv * N2[a];
          gh.row(comp) += coefv * grad2[a].transpose();
        }
      double ph = 0.0;
      for (int a = 0; a < 3; ++a) ph += presx[pnodes[a]] * N1[a];

      if (fluid) {
        u_l2 += w * (vh - ex.u).squaredNorm();
        u_h1s += w * (gh - ex.grad_u).squaredNorm();
        pf_l2 += w * (ph - ex.p_f) * (ph - ex.p_f);
      } else {
        d_l2 += w * (vh - ex.d).squaredNorm();
        d_h1s += w * (gh - ex.grad_d).squaredNorm();
        phi_l2 += w * (ph - ex.phi) * (ph - ex.phi);
        double pph = 0.0;
        Eigen::Vector2d gpp = Eigen::Vector2d::Zero();
        for (int a = 0; a < 6; ++a) {
          pph += parts[4][ppnodes[a]] * N2[a];
          gpp += parts[4][ppnodes[a]] * grad2[a];
        }
        pp_l2 += w * (pph - ex.p_p) * (pph - ex.p_p);
        pp_h1s += w * (gpp - ex.grad_p_p).squaredNorm();
      }
    }
  }

  MmsErrors e;
  e.u_h1 = std::sqrt(u_l2 + u_h1s);
  e.pf_l2 = std::sqrt(pf_l2);
  e.d_h1 = std::sqrt(d_l2 + d_h1s);
  e.phi_l2 = std::sqrt(phi_l2);
  e.pp_h1 = std::sqrt(pp_l2 + pp_h1s);
  return e;
}

}  // namespace bstokes
