#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "invgeo/models.hpp"

using namespace invgeo;

TEST_CASE("hopf structure equations match the su(2) x R presentation") {
  LieModel m = hopf_model();
  CHECK((m.d_basis(1) - wedge(Form::basis(4, 0b0010), Form::basis(4, 0b0100))).is_zero(1e-15));
  CHECK((m.d_basis(2) - wedge(Form::basis(4, 0b0100), Form::basis(4, 0b0001))).is_zero(1e-15));
  CHECK((m.d_basis(3) - wedge(Form::basis(4, 0b0001), Form::basis(4, 0b0010))).is_zero(1e-15));
  CHECK(m.d_basis(4).is_zero());
  CHECK(m.unimodular());
}

TEST_CASE("hopf parameter validation") {
  CHECK_THROWS(load_hopf({-1.0, 0.0, 1.0, 1.0}));
  CHECK_THROWS(load_hopf({1.0, 0.0, -1.0, 1.0}));
  CHECK_THROWS(load_hopf({1.0, 0.0, 1.0, 0.0}));
  CHECK_NOTHROW(load_hopf({0.3, -0.9, 0.7, 2.0}));
}

TEST_CASE("hopf solution data at w real, t = a/x") {
  CatalogEntry e = load_hopf({0.8, 0.0, 1.6, 2.0});  // t = a/x = 2
  // normalized psi
  CHECK(e.hermitian->psi_norm_squared(e.psi) == doctest::Approx(1.0).epsilon(1e-12));
  // theta = -x e^4 at this t
  Form theta = e.hermitian->lee_form();
  CHECK(theta.coeff(0b1000).real() == doctest::Approx(-0.8).epsilon(1e-12));
  // d psi = theta ^ psi
  Form defect = e.model->d(e.psi) - wedge(theta, e.psi);
  CHECK(defect.cmax() <= 1e-12);
}

TEST_CASE("torus entries") {
  for (int n : {2, 3}) {
    CatalogEntry e = load_torus(n);
    CHECK(e.model->dim() == 2 * n);
    CHECK(e.hermitian->positive());
    CHECK(e.hermitian->lee_form().cmax() <= 1e-14);
    CHECK(e.hermitian->psi_norm_squared(e.psi) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e.model->d(e.psi).cmax() <= 1e-14);  // holomorphic volume form
  }
}

TEST_CASE("su2_r3 product solution") {
  CatalogEntry e = load_su2_r3(1.0, 1.0, 1.0, 1.0);
  CHECK(e.hermitian->positive());
  Form theta = e.hermitian->lee_form();
  Form expected(6, 1);
  expected.set(0b001000, -1.0);  // -(a/t) e^4
  CHECK((theta - expected).cmax() <= 1e-12);
  Form defect = e.model->d(e.psi) - wedge(theta, e.psi);
  CHECK(defect.cmax() <= 1e-12);
  CHECK(e.hermitian->psi_norm_squared(e.psi) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("h3 smoke: nilpotent, integrable J, closed holomorphic volume") {
  CatalogEntry e = load_h3();
  CHECK(e.model->unimodular());
  CHECK(e.hermitian->J().nijenhuis_norm(*e.model) <= 1e-12);
  CHECK(e.model->d(e.psi).cmax() <= 1e-14);
  CHECK(e.hermitian->positive());
}

TEST_CASE("bundle entries have integrable curved connections") {
  for (const auto& name : {"hopf_su2", "torus6_stdemb", "torus6_su2"}) {
    CatalogEntry e = load_entry(name, {});
    REQUIRE(e.bundle != nullptr);
    VForm F = e.bundle->curvature(*e.model);
    CHECK(F.cmax() > 1e-3);  // genuinely curved
    CHECK(project_type(e.hermitian->J(), F, 0, 2).cmax() <= 1e-12);
    CHECK(project_type(e.hermitian->J(), F, 2, 0).cmax() <= 1e-12);
    // coefficients live in the compact form on real directions: dagger = -F
    CHECK((F + F.adjoint_dagger()).cmax() <= 1e-12);
  }
  // standard embedding pairing kills c(F ^ F)
  CatalogEntry se = load_torus6_stdemb();
  VForm F = se.bundle->curvature(*se.model);
  CHECK(pairing_wedge(se.bundle->algebra, F, F).cmax() <= 1e-14);
}

TEST_CASE("catalog dispatch") {
  for (const auto& name : catalog_names()) CHECK_NOTHROW(load_entry(name, {}));
  CHECK_THROWS(load_entry("nope", {}));
}
