#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "invgeo/variation.hpp"

using namespace invgeo;

namespace {

GaugeAlgebra trivial_algebra() {
  GaugeAlgebra a;
  a.matrix_dim = 1;
  a.blocks.push_back({0, 1, 1.0});
  return a;
}

MetricBase base_of(const CatalogEntry& e, const GaugeAlgebra& fallback) {
  MetricBase b;
  b.geometry = e.hermitian.get();
  b.algebra = e.bundle ? &e.bundle->algebra : &fallback;
  b.omega0 = e.hermitian->omega();
  b.theta0 = e.bundle ? e.bundle->theta
                      : VForm(e.model->dim(), 1, fallback.matrix_dim);
  return b;
}

Direction random_direction(const CatalogEntry& e, const GaugeAlgebra& alg,
                           std::mt19937_64& rng, double scale = 0.3) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Direction d;
  d.xi = Form(e.model->dim(), 1);
  for (Mask I : degree_masks(e.model->dim(), 1)) d.xi.set(I, scale * u(rng));
  d.s = e.bundle ? e.bundle->algebra.random_compact(rng, scale)
                 : Mat::Zero(alg.matrix_dim, alg.matrix_dim);
  return d;
}

}  // namespace

TEST_CASE("dilaton functional: torus volume, two routes agree") {
  CatalogEntry t = load_entry("torus4", {});
  HermitianStructure match(*t.model, t.hermitian->J(), t.hermitian->omega(),
                           t.hermitian->volume_form());
  DilatonValue v = dilaton_functional(match);
  CHECK(v.via_omega == doctest::Approx(match.total_volume()).epsilon(1e-13));
  CHECK(v.agreement() <= 1e-12 * (1.0 + v.via_omega));
}

TEST_CASE("Hopf closed form: M(t) = 2 sqrt(a x t) V, sqrt scaling, mu doubling") {
  for (auto [a, x, V] : std::vector<std::array<double, 3>>{{1, 1, 1}, {2, 0.5, 2.5}}) {
    for (double tt : {0.4, 1.0, 3.7}) {
      CatalogEntry e = load_hopf({x, 0.0, a, tt, V});
      DilatonValue v = dilaton_functional(*e.hermitian);
      CHECK(v.agreement() <= 1e-12 * (1.0 + v.via_mu));
      CHECK(v.via_mu == doctest::Approx(2.0 * std::sqrt(a * x * tt) * V).epsilon(1e-13));
    }
    // exact sqrt scaling M(4t) = 2 M(t)
    CatalogEntry e1 = load_hopf({x, 0.0, a, 1.1, V});
    CatalogEntry e4 = load_hopf({x, 0.0, a, 4.4, V});
    CHECK(dilaton_functional(*e4.hermitian).via_mu ==
          doctest::Approx(2.0 * dilaton_functional(*e1.hermitian).via_mu).epsilon(1e-13));
  }
  // mu -> 2 mu multiplies M by sqrt(2) at fixed omega
  CatalogEntry e = load_hopf({1.0, 0.0, 1.0, 1.0});
  HermitianStructure doubled(*e.model, e.hermitian->J(), e.hermitian->omega(),
                             2.0 * e.hermitian->mu());
  CHECK(dilaton_functional(doubled).via_mu ==
        doctest::Approx(std::sqrt(2.0) * dilaton_functional(*e.hermitian).via_mu)
            .epsilon(1e-13));
}

TEST_CASE("first variation: zero direction, Hopf radial direction, FD oracle") {
  GaugeAlgebra triv = trivial_algebra();
  CatalogEntry e = load_hopf({1.0, 0.0, 1.0, 1.0});
  MetricBase base = base_of(e, triv);

  // closed xi, s = 0: derivative vanishes
  Direction closed{Form(4, 1), Mat::Zero(1, 1)};
  closed.xi.set(0b1000, 0.8);  // e^4 is closed
  CHECK(std::abs(first_variation(base, closed)) <= 1e-13);

  // the t-direction on the Hopf model: omega_t = a e^{41} + t e^{23} gives
  // dM/dt = sqrt(a x / t) V; realized as a family sweep, d/dt M(omega0 + t' e23)
  auto omega_of = [&](double tp) {
    return hopf_omega(*e.model, 1.0, 1.0 + tp);
  };
  auto Mof = [&](double tp) {
    HermitianStructure g(*e.model, e.hermitian->J(), omega_of(tp), e.hermitian->mu());
    return dilaton_functional(g).via_mu;
  };
  FdResult fd = fd_first(Mof, 0.0);
  CHECK(fd.value == doctest::Approx(std::sqrt(1.0)).epsilon(1e-8));  // d/dt 2 sqrt(t) at t=1

  // random directions, FD cross-check (trivial bundle)
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 8; ++trial) {
    Direction dir = random_direction(e, triv, rng);
    double analytic = first_variation(base, dir);
    auto M = [&](double t) { return functional_along(base, dir, t); };
    FdResult f = fd_first(M, 0.0);
    double denom = std::max({std::abs(analytic), std::abs(f.value), 1e-10});
    CHECK(std::abs(analytic - f.value) / denom <= 1e-6);
  }
}

TEST_CASE("first/second variation with bundles, FD oracle") {
  std::mt19937_64 rng(11);
  GaugeAlgebra triv = trivial_algebra();
  for (const auto& name : {"hopf_su2", "torus6_stdemb"}) {
    CatalogEntry e = load_entry(name, {});
    MetricBase base = base_of(e, triv);
    for (int trial = 0; trial < 5; ++trial) {
      Direction dir = random_direction(e, e.bundle->algebra, rng, 0.25);
      VariationReport rep = variation_report(e.name, base, dir);
      CHECK(rep.first_rel_err <= 1e-6);
      CHECK(rep.second_rel_err <= 1e-5);
    }
  }
}

TEST_CASE("second variation: exact n=2 case is -|sigma|^2 term, trace term dies") {
  GaugeAlgebra triv = trivial_algebra();
  CatalogEntry e = load_hopf({1.0, 0.0, 1.0, 1.0});
  MetricBase base = base_of(e, triv);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 6; ++trial) {
    Direction dir{Form(4, 1), Mat::Zero(1, 1)};
    for (Mask I : degree_masks(4, 1)) dir.xi.set(I, 0.25 * u(rng));
    double d2 = second_variation(base, dir, 0.1, Form(4, 1));
    // compute -0.5 e^{-f} |sigma|^2 Vol at t = 0.1 directly
    MetricPair pair = metric_from_parameters(base, cd(0.1) * dir.xi, Mat::Zero(1, 1));
    HermitianStructure g(*e.model, e.hermitian->J(), pair.omega, e.hermitian->mu());
    Form dxi = e.model->d(dir.xi);
    Form vel = (dxi + e.hermitian->J().apply(dxi)).real_part();
    double beta = g.lambda_scalar(vel);
    Form sigma = vel - 0.5 * beta * g.omega();
    double expected = -0.5 * std::exp(-g.dilaton_function()) *
                      g.inner(sigma, sigma).real() * g.total_volume();
    CHECK(d2 == doctest::Approx(expected).epsilon(1e-10));
    CHECK(d2 <= 1e-12);  // concave
  }
}

TEST_CASE("concave path residual: linear exact-case paths are exactly balanced") {
  GaugeAlgebra triv = trivial_algebra();
  CatalogEntry e = load_hopf({1.0, 0.0, 1.0, 1.0});
  MetricBase base = base_of(e, triv);
  DiscretePath path;
  path.s = Mat::Zero(1, 1);
  int N = 33;
  double h = 1.0 / 32.0;  // binary-exact step
  // binary-exact data: linear tracks difference to exactly zero
  Form xi(4, 1);
  xi.set(0b0001, 0.25);
  xi.set(0b0100, -0.5);
  for (int i = 0; i < N; ++i) {
    path.t.push_back(i * h);
    path.xi.push_back(cd(i * h) * xi);
  }
  std::vector<double> res = concave_path_residual(base, path);
  for (size_t i = 1; i + 1 < res.size(); ++i) CHECK(res[i] == 0.0);

  // generic coefficients: zero up to roundoff
  DiscretePath generic;
  generic.s = Mat::Zero(1, 1);
  Form xi2(4, 1);
  xi2.set(0b0001, 0.21);
  xi2.set(0b0100, -0.37);
  for (int i = 0; i < N; ++i) {
    generic.t.push_back(i * h);
    generic.xi.push_back(cd(i * h) * xi2);
  }
  std::vector<double> res2 = concave_path_residual(base, generic);
  for (size_t i = 1; i + 1 < res2.size(); ++i) CHECK(res2[i] <= 1e-12);

  // constant path with s = 0: also zero
  DiscretePath constant;
  constant.s = Mat::Zero(1, 1);
  for (int i = 0; i < 5; ++i) {
    constant.t.push_back(i * 0.25);
    constant.xi.push_back(Form(4, 1));
  }
  for (size_t i = 1; i + 1 < 5; ++i)
    CHECK(concave_path_residual(base, constant)[i] == 0.0);
  CHECK_THROWS(concave_path_residual(base, DiscretePath{{0.0, 1.0}, {Form(4, 1), Form(4, 1)},
                                                        Mat::Zero(1, 1)}));
}

TEST_CASE("surface path generator balances the curvature term") {
  CatalogEntry e = load_entry("hopf_stdemb", {});
  GaugeAlgebra triv = trivial_algebra();
  MetricBase base = base_of(e, triv);
  std::mt19937_64 rng(17);
  Mat s = e.bundle->algebra.random_compact(rng, 0.35);
  Form shape(4, 1);
  shape.set(0b0001, 0.5);  // (1+J) d e^1 has nonzero trace
  DiscretePath path = generate_surface_path(base, shape, s, 1.0, 33, 0.7);
  std::vector<double> res = concave_path_residual(base, path);
  double worst = 0.0;
  for (size_t i = 1; i + 1 < res.size(); ++i) worst = std::max(worst, res[i]);
  CHECK(worst <= 1e-6);

  // concavity along the balanced path: interior discrete d2M <= 1e-9
  std::vector<SweepRow> rows = sweep_along(base, path);
  for (size_t i = 1; i + 1 < rows.size(); ++i) CHECK(rows[i].d2M <= 1e-9);
}

TEST_CASE("sweeps: Hopf sqrt growth, torus family maximum at matched volume") {
  CatalogEntry e = load_hopf({1.0, 0.0, 1.0, 1.0});
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) grid.push_back(0.5 + 0.1 * i);
  std::function<Form(double)> omega_of = [&](double t) { return hopf_omega(*e.model, 1.0, t); };
  std::vector<SweepRow> rows = sweep_family(*e.hermitian, omega_of, grid);
  for (size_t i = 1; i + 1 < rows.size(); ++i) {
    CHECK(rows[i].d2M <= 1e-10);           // concave
    CHECK(rows[i].M > rows[i - 1].M);      // strictly increasing
    CHECK(rows[i].M ==
          doctest::Approx(2.0 * std::sqrt(grid[i])).epsilon(1e-12));  // 2 sqrt(axt) V
  }

  // torus: omega_t = (1+t) e12 + (1-t) e34 (+ e56); maximum at the
  // volume-matched point t = 0 where the metric is the critical one
  CatalogEntry t6 = load_entry("torus4", {});
  std::function<Form(double)> om = [&](double t) {
    Form e12(4, 2), e34(4, 2);
    e12.set(0b0011, 1.0);
    e34.set(0b1100, 1.0);
    return cd(1.0 + t) * e12 + cd(1.0 - t) * e34;
  };
  std::vector<double> g2;
  for (int i = -8; i <= 8; ++i) g2.push_back(i * 0.1);
  std::vector<SweepRow> r2 = sweep_family(*t6.hermitian, om, g2);
  size_t imax = 0;
  for (size_t i = 0; i < r2.size(); ++i)
    if (r2[i].M > r2[imax].M) imax = i;
  CHECK(g2[imax] == doctest::Approx(0.0));
  for (size_t i = 1; i + 1 < r2.size(); ++i) CHECK(r2[i].d2M <= 1e-10);

  // degenerate zero-length path: a single value
  std::vector<SweepRow> single = sweep_family(*t6.hermitian, om, {0.0});
  CHECK(single.size() == 1);
  CHECK(std::isnan(single[0].dM));

  // CSV emission
  std::string csv = sweep_to_csv(rows);
  CHECK(csv.rfind("t,M,dM,d2M,residual\n", 0) == 0);
}

TEST_CASE("appendix functional: FD of first variation and hessian on T6") {
  CatalogEntry e = load_entry("torus6_stdemb", {});
  AppendixState st{e.hermitian.get(), &e.bundle->algebra, e.bundle->theta, e.hermitian->omega()};
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 4; ++trial) {
    Mat u = cd(0, 1) * e.bundle->algebra.random_compact(rng, 0.4);
    auto M = [&](double t) { return appendix_functional(st, u, t); };
    for (double t0 : {0.0, 0.3}) {
      FdResult f1 = fd_first(M, t0);
      double a1 = appendix_first_variation(st, u, t0);
      CHECK(std::abs(a1 - f1.value) / std::max({std::abs(a1), std::abs(f1.value), 1e-8}) <=
            1e-6);
      FdResult f2 = fd_second(M, t0);
      double a2 = appendix_hessian(st, u, t0);
      CHECK(std::abs(a2 - f2.value) / std::max({std::abs(a2), std::abs(f2.value), 1e-8}) <=
            1e-5);
    }
  }
}
