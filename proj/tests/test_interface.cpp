#include <doctest.h>

#include <Eigen/Dense>

#include "bstokes/fractional.hpp"
#include "test_util.hpp"

using namespace bstokes;

namespace {

struct Setup {
  Mesh mesh;
  Spaces spaces;
  TraceSpace trace;
};

Setup make_setup(int n, BcConfig bc) {
  Setup s;
  s.mesh = build_split_square(n, bc);
  s.spaces = build_spaces(s.mesh);
  s.trace = build_trace_space(s.mesh, s.spaces[4]);
  return s;
}

}  // namespace

TEST_CASE("trace space: dimensions and exact restriction") {
  Setup s = make_setup(4, BcConfig::VelDisp);
  const int nseg = static_cast<int>(s.mesh.sigma_facets().size());
  CHECK(nseg == 4);
  CHECK(s.trace.dim() == 2 * nseg + 1);
  CHECK(!s.trace.closed);
  CHECK(s.trace.boundary_nodes.size() == 2);

  const FieldSpace& pp = s.spaces[4];
  Vec ones = Vec::Ones(pp.dim());
  Vec r1 = s.trace.restriction * ones;
  CHECK((r1 - Vec::Ones(s.trace.dim())).lpNorm<Eigen::Infinity>() <= 1e-12);

  Vec poly = testutil::interpolate(pp, [](const Eigen::Vector2d& x, int) { return x.x() + x.y(); });
  Vec rp = s.trace.restriction * poly;
  for (int i = 0; i < s.trace.dim(); ++i)
    CHECK(rp[i] == doctest::Approx(s.trace.node_coord[i].x() + s.trace.node_coord[i].y())
                       .epsilon(1e-12));
}

TEST_CASE("trace space on a closed interface has no boundary") {
  Mesh mesh = build_enclosed_disk(6);
  Spaces sp = build_spaces(mesh);
  TraceSpace ts = build_trace_space(mesh, sp[4]);
  CHECK(ts.closed);
  CHECK(ts.boundary_nodes.empty());
  CHECK(ts.dim() == 2 * static_cast<int>(mesh.sigma_facets().size()));
  CHECK_THROWS_AS(build_fractional(ts, 1.0, FracBc::DirichletStrong), std::invalid_argument);
  CHECK_THROWS_AS(build_fractional(ts, 1.0, FracBc::DirichletNitsche), std::invalid_argument);
}

TEST_CASE("strong Dirichlet spectrum converges to the continuous interval spectrum") {
  const double pi2 = M_PI * M_PI;
  double prev = 0.0;
  for (int level = 2; level <= 4; ++level) {
    Setup s = make_setup(1 << level, BcConfig::VelDisp);
    FractionalOperator f = build_fractional(s.trace, 1.0, FracBc::DirichletStrong);
    double err = std::abs(f.eigvals[0] - pi2);
    if (level > 2) CHECK(std::log2(prev / err) >= 1.9);
    prev = err;
  }
}

TEST_CASE("shifted Neumann operator: constants are exact eigenfunctions") {
  Setup s = make_setup(4, BcConfig::StressPressure);
  FractionalOperator f = build_fractional(s.trace, 0.8, FracBc::NeumannPlusI);
  CHECK(f.eigvals[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.eigvals.minCoeff() >= 1.0 - 1e-12);
  Eigen::VectorXd v0 = f.eigvecs.col(0);
  Eigen::VectorXd dev = v0 - Eigen::VectorXd::Constant(v0.size(), v0.mean());
  CHECK(dev.lpNorm<Eigen::Infinity>() <= 1e-10 * std::abs(v0.mean()));
}

TEST_CASE("spectral identities of the realized operator") {
  for (auto bc : {FracBc::DirichletStrong, FracBc::NeumannPlusI, FracBc::DirichletNitsche}) {
    Setup s = make_setup(4, BcConfig::VelDisp);
    FractionalOperator f = build_fractional(s.trace, 1.7, bc);

    // weighted orthonormality
    Eigen::MatrixXd gram =
        f.eigvecs.transpose() * Eigen::MatrixXd(f.weighted_mass) * f.eigvecs;
    CHECK((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() <=
          1e-10);

    // <H u_j, u_j> = lambda_j^{-1/2}
    for (int j = 0; j < f.eigvals.size(); ++j) {
      double q = f.eigvecs.col(j).dot(f.matrix * f.eigvecs.col(j));
      CHECK(q == doctest::Approx(1.0 / std::sqrt(f.eigvals[j])).epsilon(1e-10));
    }

    // symmetric PSD
    CHECK((f.matrix - f.matrix.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(f.matrix);
    CHECK(es.eigenvalues().minCoeff() >= -1e-12);
  }
}

TEST_CASE("shifted operator is dominated by the weighted mass") {
  Setup s = make_setup(8, BcConfig::StressPressure);
  FractionalOperator f = build_fractional(s.trace, 1.0, FracBc::NeumannPlusI);
  Eigen::MatrixXd m = Eigen::MatrixXd(f.weighted_mass);
  for (int k = 0; k < 20; ++k) {
    Eigen::VectorXd u = Eigen::VectorXd::Random(s.trace.dim());
    CHECK(u.dot(f.matrix * u) <= u.dot(m * u) * (1.0 + 1e-12));
  }
}

TEST_CASE("operator is linear in the weight") {
  Setup s = make_setup(4, BcConfig::VelDisp);
  for (auto bc : {FracBc::DirichletStrong, FracBc::NeumannPlusI}) {
    FractionalOperator f1 = build_fractional(s.trace, 0.7, bc);
    FractionalOperator f2 = build_fractional(s.trace, 1.4, bc);
    CHECK((f2.eigvals - f1.eigvals).lpNorm<Eigen::Infinity>() <= 1e-10);
    CHECK((f2.matrix - 2.0 * f1.matrix).cwiseAbs().maxCoeff() <=
          1e-12 * f1.matrix.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("Nitsche spectrum approaches the strong-Dirichlet spectrum with growing penalty") {
  Setup s = make_setup(8, BcConfig::VelDisp);
  FractionalOperator strong = build_fractional(s.trace, 1.0, FracBc::DirichletStrong);
  double prev_gap = 1e300;
  for (double penalty : {80.0, 800.0, 8000.0}) {
    FractionalOperator nit = build_fractional(s.trace, 1.0, FracBc::DirichletNitsche, penalty);
    // compare the lowest few eigenvalues against the interior spectrum
    double gap = 0.0;
    for (int j = 0; j < 3; ++j) gap = std::max(gap, std::abs(nit.eigvals[j] - strong.eigvals[j]));
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(prev_gap <= 0.05 * strong.eigvals[0]);
}

TEST_CASE("lifted operator: support, symmetry, spectral value") {
  Setup s = make_setup(4, BcConfig::VelDisp);
  FractionalOperator f = build_fractional(s.trace, 1.0, FracBc::DirichletStrong);
  SpMat lift = lift_to_pressure_block(f, s.trace);
  const FieldSpace& pp = s.spaces[4];
  REQUIRE(lift.rows() == pp.dim());

  std::vector<char> on_sigma(pp.dim(), 0);
  for (int i = 0; i < s.trace.dim(); ++i) on_sigma[s.trace.pp_dof[i]] = 1;
  for (int k = 0; k < lift.outerSize(); ++k)
    for (SpMat::InnerIterator it(lift, k); it; ++it)
      if (it.value() != 0.0) {
        CHECK(on_sigma[it.row()]);
        CHECK(on_sigma[it.col()]);
      }

  SpMat asym = SpMat(lift - SpMat(lift.transpose()));
  CHECK(asym.norm() <= 1e-12);

  // quadratic form at the lifted first eigenvector
  Vec p = Vec::Zero(pp.dim());
  for (int i = 0; i < s.trace.dim(); ++i) p[s.trace.pp_dof[i]] = f.eigvecs(i, 0);
  CHECK(p.dot(lift * p) == doctest::Approx(1.0 / std::sqrt(f.eigvals[0])).epsilon(1e-10));
}

TEST_CASE("negative Nitsche penalty is rejected") {
  Setup s = make_setup(4, BcConfig::VelDisp);
  CHECK_THROWS_AS(build_fractional(s.trace, 1.0, FracBc::DirichletNitsche, -1.0),
                  std::invalid_argument);
}
