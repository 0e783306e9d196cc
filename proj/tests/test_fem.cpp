#include <doctest.h>

#include <Eigen/Dense>

#include "bstokes/kernels.hpp"
#include "test_util.hpp"

using namespace bstokes;
using testutil::interpolate;
using testutil::unit_square;
using testutil::unit_triangle;

namespace {

double matrix_asymmetry(const SpMat& m) {
  SpMat diff = SpMat(m - SpMat(m.transpose()));
  double err = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (SpMat::InnerIterator it(diff, k); it; ++it) err = std::max(err, std::abs(it.value()));
  return err;
}

}  // namespace

TEST_CASE("eps-eps on a single unit right triangle") {
  Mesh mesh = unit_triangle();
  FieldSpace sp = make_field_space(mesh, Field::U, CellTag::Fluid, 2, 2);
  const double coeff = 2.0 * 3.0;  // 2 mu with mu = 3
  SpMat m = assemble_eps_eps(mesh, sp, coeff);

  // u = (x, 0): eps = [[1,0],[0,0]], eps:eps = 1, energy = coeff * |K|
  Vec u = interpolate(sp, [](const Eigen::Vector2d& x, int c) { return c == 0 ? x.x() : 0.0; });
  CHECK(u.dot(m * u) == doctest::Approx(coeff * 0.5).epsilon(1e-12));

  // rigid rotation (-y, x) is in the kernel
  Vec rot = interpolate(sp, [](const Eigen::Vector2d& x, int c) { return c == 0 ? -x.y() : x.x(); });
  CHECK((m * rot).lpNorm<Eigen::Infinity>() <= 1e-12);

  CHECK(matrix_asymmetry(m) == 0.0);
  CHECK_THROWS_AS(assemble_eps_eps(mesh, make_field_space(mesh, Field::PF, CellTag::Fluid, 1, 1), 1.0),
                  std::invalid_argument);
}

TEST_CASE("div coupling against analytic integrals") {
  // fluid half of the split square has area 1/2
  Mesh mesh = build_split_square(4, BcConfig::StressPressure);
  FieldSpace pf = make_field_space(mesh, Field::PF, CellTag::Fluid, 1, 1);
  FieldSpace u = make_field_space(mesh, Field::U, CellTag::Fluid, 2, 2);
  SpMat b = assemble_div(mesh, pf, u);
  CHECK(b.rows() == pf.dim());
  CHECK(b.cols() == u.dim());

  Vec v = interpolate(u, [](const Eigen::Vector2d& x, int c) { return c == 0 ? x.x() : x.y(); });
  Vec q = Vec::Ones(pf.dim());
  CHECK(q.dot(b * v) == doctest::Approx(-1.0).epsilon(1e-12));

  Vec rot = interpolate(u, [](const Eigen::Vector2d& x, int c) { return c == 0 ? -x.y() : x.x(); });
  CHECK((b * rot).lpNorm<Eigen::Infinity>() <= 1e-12);

  FieldSpace d = make_field_space(mesh, Field::D, CellTag::Porous, 2, 2);
  CHECK_THROWS_AS(assemble_div(mesh, pf, d), std::invalid_argument);
}

TEST_CASE("mass: partition of unity and positivity") {
  Mesh mesh = unit_square();
  FieldSpace p1 = make_field_space(mesh, Field::PF, CellTag::Fluid, 1, 1);
  SpMat m = assemble_mass(mesh, p1, 1.0);
  Vec ones = Vec::Ones(p1.dim());
  CHECK(ones.dot(m * ones) == doctest::Approx(1.0).epsilon(1e-12));

  // coeff C0 + alpha^2/lambda with C0=0, alpha=lambda=1 is just the mass
  SpMat m2 = assemble_mass(mesh, p1, 0.0 + 1.0 * 1.0 / 1.0);
  CHECK((m - m2).norm() == 0.0);

  Eigen::MatrixXd md = Eigen::MatrixXd(m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(md);
  CHECK(es.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("stiffness: linear field energy and constant kernel") {
  Mesh mesh = unit_square();
  FieldSpace p2 = make_field_space(mesh, Field::PF, CellTag::Fluid, 2, 1);
  const double coeff = 0.3;  // kappa / mu_f
  SpMat k = assemble_stiffness(mesh, p2, coeff);
  Vec p = interpolate(p2, [](const Eigen::Vector2d& x, int) { return x.x(); });
  CHECK(p.dot(k * p) == doctest::Approx(coeff).epsilon(1e-12));
  Vec ones = Vec::Ones(p2.dim());
  CHECK(ones.dot(k * ones) <= 1e-12);
  CHECK(matrix_asymmetry(k) == 0.0);
}

TEST_CASE("interface tangential coupling") {
  Mesh mesh = build_split_square(2, BcConfig::VelDisp);
  FieldSpace u = make_field_space(mesh, Field::U, CellTag::Fluid, 2, 2);
  FieldSpace d = make_field_space(mesh, Field::D, CellTag::Porous, 2, 2);
  const double coeff = 2.5;
  TangentialBlocks t = assemble_interface_tangential(mesh, u, d, coeff);

  auto energy = [&](const Vec& uu, const Vec& dd) {
    return uu.dot(t.uu * uu) + uu.dot(t.ud * dd) + dd.dot(t.du * uu) + dd.dot(t.dd * dd);
  };
  Vec ut = interpolate(u, [](const Eigen::Vector2d&, int c) { return c == 1 ? 1.0 : 0.0; });
  Vec dt = interpolate(d, [](const Eigen::Vector2d&, int c) { return c == 1 ? 1.0 : 0.0; });
  CHECK(energy(ut, dt) <= 1e-12);  // matching tangential traces

  Vec zero_d = Vec::Zero(d.dim());
  CHECK(energy(ut, zero_d) == doctest::Approx(coeff * 1.0).epsilon(1e-12));  // |Sigma| = 1

  Vec un = interpolate(u, [](const Eigen::Vector2d&, int c) { return c == 0 ? 1.0 : 0.0; });
  CHECK(energy(un, zero_d) <= 1e-12);  // pure normal motion

  // support confined to interface dofs
  for (int k = 0; k < t.uu.outerSize(); ++k)
    for (SpMat::InnerIterator it(t.uu, k); it; ++it)
      if (it.value() != 0.0) CHECK(u.node_coord[it.row() / 2].x() == doctest::Approx(0.5));
}

TEST_CASE("interface normal coupling") {
  Mesh mesh = build_split_square(2, BcConfig::VelDisp);
  FieldSpace u = make_field_space(mesh, Field::U, CellTag::Fluid, 2, 2);
  FieldSpace pp = make_field_space(mesh, Field::PP, CellTag::Porous, 2, 1);
  SpMat n = assemble_interface_normal(mesh, pp, u, +1.0);

  Vec q = Vec::Ones(pp.dim());
  Vec vx = interpolate(u, [](const Eigen::Vector2d&, int c) { return c == 0 ? 1.0 : 0.0; });
  CHECK(q.dot(n * vx) == doctest::Approx(1.0).epsilon(1e-12));
  Vec vy = interpolate(u, [](const Eigen::Vector2d&, int c) { return c == 1 ? 1.0 : 0.0; });
  CHECK(q.dot(n * vy) <= 1e-12);

  // flipping the stored orientation flips every entry
  Mesh flipped = mesh;
  for (int f : flipped.sigma_facets()) flipped.facet_normal[f] = -flipped.facet_normal[f];
  SpMat nf = assemble_interface_normal(flipped, pp, u, +1.0);
  CHECK((SpMat(n + nf)).norm() <= 1e-14);

  CHECK((assemble_interface_normal(mesh, pp, u, -1.0) + n).norm() <= 1e-14);
}

TEST_CASE("patch test: strain form annihilates rigid modes before constraints") {
  Mesh mesh = build_split_square(4, BcConfig::VelDisp);
  FieldSpace u = make_field_space(mesh, Field::U, CellTag::Fluid, 2, 2);
  SpMat m = assemble_eps_eps(mesh, u, 2.0);
  for (auto fn : {+[](const Eigen::Vector2d&, int c) { return c == 0 ? 1.0 : 0.0; },
                  +[](const Eigen::Vector2d&, int c) { return c == 1 ? 1.0 : 0.0; },
                  +[](const Eigen::Vector2d& x, int c) { return c == 0 ? -x.y() : x.x(); }}) {
    Vec r = interpolate(u, fn);
    CHECK((m * r).lpNorm<Eigen::Infinity>() <= 1e-12);
  }
}

TEST_CASE("parallel assembly is bit-identical to serial") {
  Mesh mesh = build_split_square(8, BcConfig::StressPressure);
  FieldSpace u = make_field_space(mesh, Field::U, CellTag::Fluid, 2, 2);
  FieldSpace pp = make_field_space(mesh, Field::PP, CellTag::Porous, 2, 1);
  CHECK((assemble_eps_eps(mesh, u, 2.0, ExecPolicy::Serial) -
         assemble_eps_eps(mesh, u, 2.0, ExecPolicy::Parallel))
            .norm() == 0.0);
  CHECK((assemble_mass(mesh, pp, 1.0, ExecPolicy::Serial) -
         assemble_mass(mesh, pp, 1.0, ExecPolicy::Parallel))
            .norm() == 0.0);
  CHECK((assemble_stiffness(mesh, pp, 1.0, ExecPolicy::Serial) -
         assemble_stiffness(mesh, pp, 1.0, ExecPolicy::Parallel))
            .norm() == 0.0);
}

TEST_CASE("empty interface is rejected") {
  Mesh mesh = unit_square();
  FieldSpace a = make_field_space(mesh, Field::U, CellTag::Fluid, 2, 2);
  CHECK_THROWS_AS(assemble_interface_tangential(mesh, a, a, 1.0), std::invalid_argument);
}
