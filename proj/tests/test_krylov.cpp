#include <doctest.h>

#include <Eigen/Dense>

#include "bstokes/eig.hpp"
#include "bstokes/minres.hpp"
#include "bstokes/trace.hpp"

using namespace bstokes;

namespace {

LinOp identity_op() {
  return [](const Vec& x) { return x; };
}

LinOp matrix_op(const Eigen::MatrixXd& m) {
  return [m](const Vec& x) { return Vec(m * x); };
}

}  // namespace

TEST_CASE("minres solves tiny diagonal systems in the expected step counts") {
  Eigen::MatrixXd a = Eigen::Vector3d(1, 2, 3).asDiagonal();
  Vec b = Vec::Ones(3);
  auto [x, rep] = minres(matrix_op(a), identity_op(), b, Vec::Zero(3));
  CHECK(rep.converged);
  CHECK(rep.iterations <= 3);
  CHECK((a * x - b).norm() <= 1e-10);

  auto [xi, repi] = minres(identity_op(), identity_op(), b, Vec::Zero(3));
  CHECK(repi.converged);
  CHECK(repi.iterations == 1);
  CHECK((xi - b).norm() <= 1e-14);
}

TEST_CASE("minres respects the iteration cap") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Random(20, 20);
  a = Eigen::MatrixXd(a + a.transpose()) + 25.0 * Eigen::MatrixXd::Identity(20, 20);
  Vec b = random_vector(20, 3);
  auto [x, rep] = minres(matrix_op(a), identity_op(), b, Vec::Zero(20), 1e-14, 2);
  CHECK(!rep.converged);
  CHECK(rep.stop_reason == StopReason::MaxIt);
  CHECK(rep.iterations == 2);
}

TEST_CASE("minres history is positive, monotone, and consistent with convergence") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Random(40, 40);
  a = Eigen::MatrixXd(a + a.transpose());  // symmetric indefinite
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(40, 40) * 0.5;
  Vec b = random_vector(40, 5);
  auto [x, rep] = minres(matrix_op(a), matrix_op(p), b, random_vector(40, 6), 1e-8, 200);
  REQUIRE(rep.converged);
  for (size_t k = 0; k < rep.residual_history.size(); ++k) {
    CHECK(rep.residual_history[k] > 0.0);
    if (k > 0)
      CHECK(rep.residual_history[k] <=
            rep.residual_history[k - 1] * (1.0 + 1e-12));
  }
  CHECK(rep.final_residual() / rep.initial_residual() <= 1e-8);
}

TEST_CASE("minres reports breakdown on a non-SPD preconditioner") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(5, 5);
  Eigen::MatrixXd p = -Eigen::MatrixXd::Identity(5, 5);
  Vec b = Vec::Ones(5);
  auto [x, rep] = minres(matrix_op(a), matrix_op(p), b, Vec::Zero(5));
  CHECK(!rep.converged);
  CHECK(rep.stop_reason == StopReason::Breakdown);
}

TEST_CASE("generalized eigensolver basics") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Random(12, 12);
  m = Eigen::MatrixXd(m * m.transpose()) + 12.0 * Eigen::MatrixXd::Identity(12, 12);

  SUBCASE("K = M gives unit spectrum") {
    EigResult r = generalized_sym_eig(m, m);
    for (int i = 0; i < 12; ++i) CHECK(r.values[i] == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("diagonal pencil") {
    Eigen::MatrixXd k = Eigen::Vector2d(4, 1).asDiagonal();
    EigResult r = generalized_sym_eig(k, Eigen::MatrixXd::Identity(2, 2));
    CHECK(r.values[0] == doctest::Approx(1.0));
    CHECK(r.values[1] == doctest::Approx(4.0));
  }
  SUBCASE("residual and orthonormality invariants") {
    Eigen::MatrixXd k = Eigen::MatrixXd::Random(12, 12);
    k = Eigen::MatrixXd(k + k.transpose());
    EigResult r = generalized_sym_eig(k, m);
    Eigen::MatrixXd res = k * r.vectors - m * r.vectors * r.values.asDiagonal();
    CHECK(res.cwiseAbs().maxCoeff() <= 1e-8 * k.cwiseAbs().maxCoeff());
    Eigen::MatrixXd gram = r.vectors.transpose() * m * r.vectors;
    CHECK((gram - Eigen::MatrixXd::Identity(12, 12)).cwiseAbs().maxCoeff() <= 1e-10);
  }
  SUBCASE("non-SPD mass is rejected") {
    Eigen::MatrixXd bad = -Eigen::MatrixXd::Identity(3, 3);
    CHECK_THROWS_AS(generalized_sym_eig(Eigen::MatrixXd::Identity(3, 3), bad),
                    std::invalid_argument);
  }
}

TEST_CASE("interface segment eigenvalue converges to the continuous one") {
  // P2 Dirichlet Laplacian vs mass on (0,1) through the interface machinery
  const double pi2 = M_PI * M_PI;
  double prev_err = 0.0;
  for (int level = 2; level <= 4; ++level) {
    Mesh mesh = build_split_square(1 << level, BcConfig::VelDisp);
    Spaces sp = build_spaces(mesh);
    TraceSpace ts = build_trace_space(mesh, sp[4]);
    Eigen::MatrixXd k = Eigen::MatrixXd(trace_stiffness(ts, 1.0));
    Eigen::MatrixXd m = Eigen::MatrixXd(trace_mass(ts, 1.0));
    // eliminate the two endpoint nodes
    std::vector<int> keep;
    for (int i = 0; i < ts.dim(); ++i) {
      bool bnd = false;
      for (int b : ts.boundary_nodes) bnd |= (b == i);
      if (!bnd) keep.push_back(i);
    }
    Eigen::MatrixXd ki(keep.size(), keep.size()), mi(keep.size(), keep.size());
    for (size_t i = 0; i < keep.size(); ++i)
      for (size_t j = 0; j < keep.size(); ++j) {
        ki(i, j) = k(keep[i], keep[j]);
        mi(i, j) = m(keep[i], keep[j]);
      }
    EigResult r = generalized_sym_eig(ki, mi);
    double err = std::abs(r.values[0] - pi2);
    if (level > 2) CHECK(std::log2(prev_err / err) >= 1.9);
    prev_err = err;
  }
  CHECK(prev_err <= 1e-4);
}

TEST_CASE("cholesky factor round-trip") {
  Mesh mesh = build_split_square(4, BcConfig::VelDisp);
  Spaces sp = build_spaces(mesh);
  TraceSpace ts = build_trace_space(mesh, sp[4]);
  Eigen::MatrixXd m = Eigen::MatrixXd(trace_mass(ts, 1.0));
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  REQUIRE(llt.info() == Eigen::Success);
  Eigen::MatrixXd l = llt.matrixL();
  CHECK((l * l.transpose() - m).cwiseAbs().maxCoeff() <= 1e-12 * m.cwiseAbs().maxCoeff());
}

TEST_CASE("spectral condition number") {
  auto sparse_diag = [](std::initializer_list<double> vals) {
    SpMat m(static_cast<int>(vals.size()), static_cast<int>(vals.size()));
    int i = 0;
    for (double v : vals) m.insert(i, i) = v, ++i;
    m.makeCompressed();
    return m;
  };
  SpMat eye = sparse_diag({1, 1});
  CHECK(spectral_condition_number(sparse_diag({1, 10}), eye) == doctest::Approx(10.0));
  SpMat a = sparse_diag({3, 7});
  CHECK(spectral_condition_number(a, a) == doctest::Approx(1.0));
  CHECK(spectral_condition_number(sparse_diag({-2, 1}), eye) == doctest::Approx(2.0));
  CHECK_THROWS_AS(spectral_condition_number(sparse_diag({1, 2, 3}), sparse_diag({1, 1, 1}), 2),
                  std::invalid_argument);
}
