#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "invgeo/systems.hpp"

using namespace invgeo;

TEST_CASE("twisted system: Hopf solution passes, y != 0 fails the dPsi equation") {
  for (auto [x, a] : std::vector<std::pair<double, double>>{{1.0, 1.0}, {0.5, 2.0}, {2.0, 0.5}}) {
    CatalogEntry e = load_hopf({x, 0.0, a, a / x});
    ResidualReport rep = twisted_hs_residual(*e.hermitian, e.psi, nullptr);
    CHECK(rep.pass());
    for (const auto& [k, v] : rep.residuals) CHECK(v <= 1e-10);
  }
  CatalogEntry bad = load_hopf({1.0, 0.5, 1.0, 1.0});
  ResidualReport rep = twisted_hs_residual(*bad.hermitian, bad.psi, nullptr);
  CHECK_FALSE(rep.pass());
  CHECK(rep.residuals["dpsi"] > 1e-6);
}

TEST_CASE("twisted system: su2_r3 product solution passes") {
  CatalogEntry e = load_entry("su2_r3", {});
  ResidualReport rep = twisted_hs_residual(*e.hermitian, e.psi, nullptr);
  CHECK(rep.pass());
  // off the product solution line (t != a/x) the dPsi equation fails
  CatalogEntry off = load_su2_r3(1.0, 1.0, 2.0, 1.0);
  ResidualReport bad = twisted_hs_residual(*off.hermitian, off.psi, nullptr);
  CHECK_FALSE(bad.pass());
  CHECK(bad.residuals["dpsi"] > 1e-6);
}

TEST_CASE("twisted system: flat torus with constant data") {
  CatalogEntry t = load_entry("torus4", {});
  ResidualReport rep = twisted_hs_residual(*t.hermitian, t.psi, nullptr);
  CHECK(rep.pass());
  for (const auto& [k, v] : rep.residuals) CHECK(v <= 1e-12);
  // wrong-type psi rejected
  Form not_psi = t.hermitian->omega();
  CHECK_THROWS(twisted_hs_residual(*t.hermitian, not_psi, nullptr));
}

TEST_CASE("Hull-Strominger: torus standard embedding and round trip") {
  CatalogEntry t = load_entry("torus4", {});
  ResidualReport rep = hs_residual(*t.hermitian, t.psi, nullptr);
  CHECK(rep.pass());

  // standard embedding: doubled flat bundle, c(F^F) = 0, all residuals small
  GaugeAlgebra alg;
  alg.matrix_dim = 4;
  alg.blocks.push_back({0, 2, -1.0});
  alg.blocks.push_back({2, 2, 1.0});
  GaugeBundle flat{alg, VForm(4, 1, 4)};
  ResidualReport rep2 = hs_residual(*t.hermitian, t.psi, &flat);
  CHECK(rep2.pass());

  // round trip (both directions of the conversion):
  // twisted data with normalized psi <-> holomorphic volume form data
  ResidualReport tw = twisted_hs_residual(*t.hermitian, t.psi, &flat);
  CHECK(tw.pass());

  // non-closed Omega rejected
  CatalogEntry e = load_hopf({1.0, 0.0, 1.0, 1.0});
  CHECK_THROWS(hs_residual(*e.hermitian, e.psi, nullptr));
}

TEST_CASE("Calabi residuals: torus passes, Hopf has no critical points") {
  CatalogEntry t = load_entry("torus4", {});
  ResidualReport rep = calabi_residual(*t.hermitian, nullptr);
  CHECK(rep.pass());

  for (double tt : {0.5, 1.0, 2.0}) {
    CatalogEntry e = load_hopf({1.0, 0.0, 1.0, tt});
    ResidualReport r = calabi_residual(*e.hermitian, nullptr);
    CHECK_FALSE(r.pass());
    CHECK(r.residuals["dilaton_balanced"] > 1e-3);
    // the two evaluation routes agree
    CHECK(r.residuals["dilaton_balanced"] ==
          doctest::Approx(r.residuals["dilaton_balanced_theta"]).epsilon(1e-10));
  }
}

TEST_CASE("appendix system: constants, T6 base case, bridge") {
  CHECK(appendix_lambda(3) == doctest::Approx(4.0));
  CHECK(appendix_gamma(3) == doctest::Approx(1.0 / 3.0));
  CHECK(appendix_lambda(4) == doctest::Approx(3.0));
  CHECK(appendix_gamma(4) == doctest::Approx(0.5));
  CHECK(appendix_lambda(5) == doctest::Approx(8.0 / 3.0));
  CHECK(appendix_gamma(5) == doctest::Approx(0.6));
  CHECK_THROWS(appendix_lambda(2));

  CatalogEntry t6 = load_entry("torus6", {});
  ResidualReport rep = appendix_residual(*t6.hermitian, nullptr);
  CHECK(rep.pass());
  // n = 2 rejected
  CatalogEntry t4 = load_entry("torus4", {});
  CHECK_THROWS(appendix_residual(*t4.hermitian, nullptr));

  // bridge: critical appendix data maps to a Hull-Strominger solution
  HermitianStructure bridged = appendix_bridge_metric(*t6.hermitian);
  ResidualReport hs = hs_residual(bridged, t6.psi, nullptr);
  for (const auto& [k, v] : hs.residuals) CHECK(v <= 1e-8);
}

TEST_CASE("report JSON schema is stable and deterministic") {
  CatalogEntry t = load_entry("torus4", {});
  ResidualReport rep = twisted_hs_residual(*t.hermitian, t.psi, nullptr);
  rep.model = "torus4";
  rep.params["volume"] = 1.0;
  std::string j1 = rep.to_json();
  std::string j2 = rep.to_json();
  CHECK(j1 == j2);
  CHECK(j1.find("\"model\"") != std::string::npos);
  CHECK(j1.find("\"residuals\"") != std::string::npos);
  CHECK(j1.find("\"tol\"") != std::string::npos);
  CHECK(j1.find("\"pass\"") != std::string::npos);
}

TEST_CASE("run_system dispatch") {
  CatalogEntry t = load_entry("torus4", {});
  CHECK(run_system("twisted-hs", t).pass());
  CHECK(run_system("hs", t).pass());
  CHECK(run_system("calabi", t).pass());
  CHECK_THROWS(run_system("nope", t));
}
