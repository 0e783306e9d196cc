#include <doctest.h>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <map>

#include "bstokes/mms.hpp"
#include "bstokes/system.hpp"
#include "test_util.hpp"

using namespace bstokes;

namespace {

BlockOperator make_system(int n, BcConfig bc, const Params& p, bool with_bc = true) {
  static std::map<std::pair<int, int>, Mesh> meshes;
  auto key = std::make_pair(n, static_cast<int>(bc));
  if (!meshes.count(key)) meshes.emplace(key, build_split_square(n, bc));
  const Mesh& mesh = meshes.at(key);
  Spaces sp = build_spaces(mesh);
  BlockOperator op = assemble_blocks(mesh, sp, p);
  if (with_bc) apply_dirichlet(op);
  return op;
}

}  // namespace

TEST_CASE("assembled operator is exactly symmetric") {
  Params p;
  for (auto bc : {BcConfig::VelDisp, BcConfig::StressPressure, BcConfig::DirichletDagger}) {
    BlockOperator op = make_system(4, bc, p);
    CHECK(op.symmetry_error() <= 1e-12);
  }
  Params hard;
  hard.mu_f = 1e-6;
  hard.kappa = 1e-8;
  hard.lambda = 1e10;
  hard.alpha = 1e-4;
  CHECK(make_system(4, BcConfig::VelDisp, hard).symmetry_error() <= 1e-12);
}

TEST_CASE("block sparsity mask matches the coupled operator layout") {
  BlockOperator op = make_system(4, BcConfig::StressPressure, Params{}, false);
  // blank positions of the 5x5 operator
  const std::vector<std::pair<int, int>> zero = {{0, 3}, {3, 0}, {1, 2}, {2, 1}, {2, 2},
                                                 {2, 3}, {3, 2}, {2, 4}, {4, 2}};
  auto is_zero = [&](int i, int j) {
    for (auto [a, b] : zero)
      if (a == i && b == j) return true;
    return false;
  };
  for (int i = 0; i < kNumFields; ++i)
    for (int j = 0; j < kNumFields; ++j) {
      SpMat pruned = op.block[i][j];
      pruned.prune(0.0, 0.0);
      if (is_zero(i, j)) CHECK(pruned.nonZeros() == 0);
      else CHECK(pruned.nonZeros() > 0);
    }
}

TEST_CASE("velocity-displacement cross block carries the negated tangential coupling") {
  Params p;
  p.gamma = 2.0;
  p.mu_f = 3.0;
  p.kappa = 4.0;  // coeff = 2*3/2 = 3
  BlockOperator op = make_system(2, BcConfig::StressPressure, p, false);
  const double ct = p.tangential_coeff();
  CHECK(ct == doctest::Approx(3.0));

  // identify u and d interface dofs through node coordinates
  const FieldSpace& u = op.spaces[0];
  const FieldSpace& d = op.spaces[1];
  std::map<std::pair<double, double>, int> dnode;
  for (int nd = 0; nd < d.num_nodes; ++nd)
    dnode[{d.node_coord[nd].x(), d.node_coord[nd].y()}] = nd;

  Eigen::MatrixXd uu = Eigen::MatrixXd(op.block[0][0]);
  Eigen::MatrixXd ud = Eigen::MatrixXd(op.block[0][1]);
  SpMat eps = assemble_eps_eps(*op.mesh, u, 2.0 * p.mu_f);
  Eigen::MatrixXd coupling = uu - Eigen::MatrixXd(eps);  // tangential self term
  const double noise = 1e-12 * coupling.cwiseAbs().maxCoeff();
  int checked = 0;
  for (int i = 0; i < u.dim(); ++i) {
    for (int j = 0; j < u.dim(); ++j) {
      if (std::abs(coupling(i, j)) <= noise) continue;
      auto key = std::make_pair(u.node_coord[j / 2].x(), u.node_coord[j / 2].y());
      REQUIRE(dnode.count(key) == 1);
      int jd = d.dof(dnode[key], j % 2);
      CHECK(ud(i, jd) == doctest::Approx(-coupling(i, j)).epsilon(1e-10));
      ++checked;
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("pressure block quadratic form at a unit total-pressure state") {
  Params p;  // lambda = 1
  BlockOperator op = make_system(4, BcConfig::VelDisp, p, false);
  Vec ones = Vec::Ones(op.spaces[3].dim());
  // the C block as signed in the operator: -(1/lambda) |Omega_P| = -1/2
  CHECK(ones.dot(op.block[3][3] * ones) == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("velocity block is SPD after boundary conditions") {
  for (auto bc : {BcConfig::VelDisp, BcConfig::StressPressure}) {
    BlockOperator op = make_system(4, bc, Params{});
    std::vector<Eigen::Triplet<double>> trip;
    int nu = op.spaces[0].dim();
    auto push = [&](const SpMat& m, int ro, int co) {
      for (int k = 0; k < m.outerSize(); ++k)
        for (SpMat::InnerIterator it(m, k); it; ++it)
          trip.emplace_back(ro + it.row(), co + it.col(), it.value());
    };
    push(op.block[0][0], 0, 0);
    push(op.block[0][1], 0, nu);
    push(op.block[1][0], nu, 0);
    push(op.block[1][1], nu, nu);
    SpMat a(nu + op.spaces[1].dim(), nu + op.spaces[1].dim());
    a.setFromTriplets(trip.begin(), trip.end());
    Eigen::SimplicialLLT<SpMat> llt(a);
    CHECK(llt.info() == Eigen::Success);
  }
}

TEST_CASE("dirichlet elimination: homogeneous rows and exact symmetry") {
  BlockOperator op = make_system(4, BcConfig::StressPressure, Params{});
  CHECK(op.symmetry_error() <= 1e-12);
  SpMat a = op.monolithic();
  Eigen::SparseLU<SpMat> lu(a);
  REQUIRE(lu.info() == Eigen::Success);
  Vec x = lu.solve(op.monolithic_rhs());
  auto parts = op.split(x);
  for (int f = 0; f < kNumFields; ++f)
    for (int i = 0; i < op.spaces[f].dim(); ++i)
      if (op.spaces[f].is_dirichlet[i]) CHECK(parts[f][i] == 0.0);
}

TEST_CASE("conflicting dirichlet constraints are rejected") {
  Mesh mesh = build_split_square(2, BcConfig::VelDisp);
  Spaces sp = build_spaces(mesh);
  CHECK_THROWS_AS(
      constrain_on_facets(sp[0], mesh, FacetTag::GammaFU,
                          [](const Eigen::Vector2d&, int) { return 1.0; }),
      std::runtime_error);
}

TEST_CASE("body loads") {
  Mesh mesh = build_split_square(4, BcConfig::StressPressure);
  Spaces sp = build_spaces(mesh);
  Params p;
  p.rho_s = 2.0;
  p.rho_f = 1.5;

  SUBCASE("zero data gives a zero right-hand side") {
    BlockRhs rhs = assemble_load(mesh, sp, p, LoadData{});
    for (const auto& r : rhs) CHECK(r.lpNorm<Eigen::Infinity>() == 0.0);
  }

  SUBCASE("pressure functional on constants: source and interface terms") {
    LoadData data;
    data.g = [](const Eigen::Vector2d&, int c) { return c == 1 ? -1.0 : 0.0; };
    data.m_p = [](const Eigen::Vector2d&) { return 3.0; };
    BlockRhs rhs = assemble_load(mesh, sp, p, data);
    Vec ones = Vec::Ones(sp[4].dim());
    // gradient term vanishes for constants, g.n = 0 on a vertical interface
    CHECK(ones.dot(rhs[4]) == doctest::Approx(-3.0 * 0.5).epsilon(1e-12));
  }

  SUBCASE("constant body load integrates to rho_s |Omega_P|") {
    LoadData data;
    data.f = [](const Eigen::Vector2d&, int c) { return c == 0 ? 1.0 : 0.0; };
    BlockRhs rhs = assemble_load(mesh, sp, p, data);
    Vec wx = testutil::interpolate(sp[1],
                                   [](const Eigen::Vector2d&, int c) { return c == 0 ? 1.0 : 0.0; });
    CHECK(wx.dot(rhs[1]) == doctest::Approx(p.rho_s * 0.5).epsilon(1e-12));
  }
}

TEST_CASE("solution scaling: pressures scale with the moduli, kinematics do not") {
  Mesh mesh = build_split_square(4, BcConfig::VelDisp);
  Spaces sp = build_spaces(mesh);
  LoadData data;
  data.f = [](const Eigen::Vector2d&, int c) { return c == 0 ? 1.0 : 0.5; };

  auto solve = [&](double scale) {
    Params p;
    p.C0 = 0.0;
    p.mu_f *= scale;
    p.mu_s *= scale;
    p.lambda *= scale;
    p.rho_s = scale;  // scales the load f by the same factor
    BlockOperator op = assemble_blocks(mesh, sp, p);
    op.rhs = assemble_load(mesh, sp, p, data);
    apply_dirichlet(op);
    Eigen::SparseLU<SpMat> lu(op.monolithic());
    REQUIRE(lu.info() == Eigen::Success);
    return op.split(lu.solve(op.monolithic_rhs()));
  };

  auto base = solve(1.0);
  auto scaled = solve(100.0);
  CHECK((scaled[0] - base[0]).norm() <= 1e-8 * base[0].norm());
  CHECK((scaled[1] - base[1]).norm() <= 1e-8 * base[1].norm());
  CHECK((scaled[2] - 100.0 * base[2]).norm() <= 1e-8 * 100.0 * base[2].norm());
  CHECK((scaled[3] - 100.0 * base[3]).norm() <= 1e-8 * 100.0 * base[3].norm());
  CHECK((scaled[4] - 100.0 * base[4]).norm() <= 1e-8 * 100.0 * base[4].norm());
}
