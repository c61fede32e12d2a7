// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "invgeo/cohomology.hpp"
#include "invgeo/linearize.hpp"
#include "invgeo/systems.hpp"
#include "invgeo/variation.hpp"

using namespace invgeo;

namespace {

struct Criterion {
  std::string name;
  double budget_seconds;
  std::function<bool(std::string&)> run;
};

GaugeAlgebra trivial_algebra() {
  GaugeAlgebra a;
  a.matrix_dim = 1;
  a.blocks.push_back({0, 1, 1.0});
  return a;
}

MetricBase base_of(const CatalogEntry& e, const GaugeAlgebra& alg, const VForm* theta) {
  MetricBase b;
  b.geometry = e.hermitian.get();
  b.algebra = e.bundle ? &e.bundle->algebra : &alg;
  b.omega0 = e.hermitian->omega();
  b.theta0 = e.bundle ? e.bundle->theta
                      : (theta ? *theta : VForm(e.model->dim(), 1, alg.matrix_dim));
  return b;
}

bool criterion1(std::string& note) {
  for (double a : {0.5, 1.0, 2.0})
    for (double x : {0.5, 1.0, 2.0})
      for (double t : {0.5, 1.0, 2.0}) {
        CatalogEntry e = load_hopf({x, 0.0, a, t});
        Form theta = e.hermitian->lee_form();
        Form expected(4, 1);
        expected.set(0b1000, -a / t);
        if ((theta - expected).cmax() > 1e-12) {
          note = "Lee form mismatch";
          return false;
        }
        double f = e.hermitian->dilaton_function();
        if (std::abs(f - 0.5 * std::log(a * t / (4.0 * x))) > 1e-12) {
          note = "dilaton function mismatch";
          return false;
        }
        Form mu = e.hermitian->mu();
        // top coefficient w.r.t. the e^{4123} orientation form
        double coeff = mu.coeff(0b1111).real() * e.model->orientation_sign();
        if (std::abs(coeff - 4.0 * x) > 1e-12) {
          note = "mu coefficient mismatch";
          return false;
        }
      }
  note = "theta = -(a/t)e4, f = log(at/4x)/2, mu = 4x e(4123) on the 27-point grid";
  return true;
}

bool criterion2(std::string& note) {
  const double derived_constant = 2.0;  // from the verified f_t and mu_w
  for (double a : {0.5, 1.0, 2.0})
    for (double x : {0.5, 1.0, 2.0}) {
      double V = 1.7;
      for (double t : {0.3, 1.0, 4.9}) {
        CatalogEntry e = load_hopf({x, 0.0, a, t, V});
        double M = dilaton_functional(*e.hermitian).via_mu;
        if (std::abs(M - derived_constant * std::sqrt(a * x * t) * V) >
            1e-12 * (1.0 + M)) {
          note = "closed form M(t) mismatch";
          return false;
        }
      }
      CatalogEntry e1 = load_hopf({x, 0.0, a, 0.9, V});
      CatalogEntry e4 = load_hopf({x, 0.0, a, 3.6, V});
      double M1 = dilaton_functional(*e1.hermitian).via_mu;
      double M4 = dilaton_functional(*e4.hermitian).via_mu;
      if (std::abs(M4 - 2.0 * M1) > 1e-12 * (1.0 + M4)) {
        note = "scaling M(4t) = 2M(t) fails";
        return false;
      }
    }
  // concavity on a uniform grid and monotone growth on [0.1, 1000]
  CatalogEntry e = load_hopf({1.0, 0.0, 1.0, 1.0});
  std::function<Form(double)> omega_of = [&](double t) { return hopf_omega(*e.model, 1.0, t); };
  std::vector<double> grid;
  for (int i = 0; i <= 60; ++i) grid.push_back(0.5 + 0.05 * i);
  auto rows = sweep_family(*e.hermitian, omega_of, grid);
  for (size_t i = 1; i + 1 < rows.size(); ++i)
    if (!(rows[i].d2M <= 1e-10)) {
      note = "concavity violated";
      return false;
    }
  double prev = -1.0;
  for (int i = 0; i <= 200; ++i) {
    double t = 0.1 * std::pow(1e4, i / 200.0);  // 0.1 .. 1000
    CatalogEntry et = load_hopf({1.0, 0.0, 1.0, t});
    double M = dilaton_functional(*et.hermitian).via_mu;
    if (M <= prev) {
      note = "monotonicity violated";
      return false;
    }
    prev = M;
  }
  std::ostringstream os;
  os << "M(t) = 2 sqrt(axt) V; literature constant sqrt(2axt) V differs by the factor "
     << std::sqrt(2.0) << " (flagged)";
  note = os.str();
  return true;
}

bool criterion3(std::string& note) {
  for (auto [x, a] : std::vector<std::pair<double, double>>{{1.0, 1.0}, {0.5, 2.0}, {2.0, 0.7}}) {
    CatalogEntry e = load_hopf({x, 0.0, a, a / x});
    ResidualReport rep = twisted_hs_residual(*e.hermitian, e.psi, nullptr);
    for (const auto& [k, v] : rep.residuals)
      if (v > 1e-10) {
        note = "solution residual " + k + " too large";
        return false;
      }
  }
  CatalogEntry bad = load_hopf({1.0, 0.5, 1.0, 1.0});
  ResidualReport rep = twisted_hs_residual(*bad.hermitian, bad.psi, nullptr);
  if (!(rep.residuals["dpsi"] > 1e-6)) {
    note = "y != 0 perturbation not detected";
    return false;
  }
  note = "all five residuals <= 1e-10 at solutions; dPsi fails by " +
         std::to_string(rep.residuals["dpsi"]) + " at y = 0.5";
  return true;
}

bool criterion4(std::string& note) {
  CatalogEntry e = load_entry("hopf_su2", {});
  const auto& h = *e.hermitian;
  const auto& alg = e.bundle->algebra;
  const VForm& theta0 = e.bundle->theta;
  std::mt19937_64 rng(2024);
  // projection target for the cocycle: Im(del (+) dbar) into (1,1)
  std::vector<Eigen::VectorXcd> cols;
  for (Mask I : degree_masks(4, 1)) {
    Form b = Form::basis(4, I);
    cols.push_back(form_to_vector(h.J().del(*e.model, h.J().project(b, 0, 1))));
    cols.push_back(form_to_vector(h.J().dbar(*e.model, h.J().project(b, 1, 0))));
  }
  Eigen::MatrixXcd image((long)degree_masks(4, 2).size(), (long)cols.size());
  for (size_t i = 0; i < cols.size(); ++i) image.col((long)i) = cols[i];

  for (int trial = 0; trial < 20; ++trial) {
    Mat u = cd(0, 1) * alg.random_compact(rng, 0.5);
    auto res = donaldson_r(*e.model, h.J(), alg, theta0, u, 64);
    VForm theta1 = chern_connection(h.J(), theta0, u);
    VForm F1 = curvature_of(*e.model, theta1), F0 = curvature_of(*e.model, theta0);
    Form identity = h.J().ddc(*e.model, res.r_tilde) -
                    (pairing_wedge(alg, F1, F1) - pairing_wedge(alg, F0, F0));
    if (h.l2_norm(identity) > 1e-8) {
      note = "dd^c R identity fails";
      return false;
    }
    Mat u2 = cd(0, 1) * alg.random_compact(rng, 0.5);
    Form r20 = donaldson_r(*e.model, h.J(), alg, theta0, u2, 64).r_tilde;
    Form r10 = res.r_tilde;
    Mat v = relative_generator(u, u2);
    Form r21 = donaldson_r(*e.model, h.J(), alg, theta1, v, 64).r_tilde;
    Form gap = r20 - r21 - r10;
    if (distance_to_span(form_to_vector(gap), image, h.gram(2)) *
            std::sqrt(h.total_volume()) >
        1e-8) {
      note = "cocycle identity fails";
      return false;
    }
    if (csr_defect(h, alg, theta0, u, 64) > 1e-8) {
      note = "Chern-Simons comparison defect too large";
      return false;
    }
  }
  note = "dd^cR, cocycle and CS comparison identities hold for 20 generators at order 64";
  return true;
}

bool criterion5(std::string& note) {
  std::mt19937_64 rng(5150);
  GaugeAlgebra triv = trivial_algebra();
  double worst1 = 0.0, worst2 = 0.0;
  for (const auto& name : {"torus4", "torus6_stdemb", "hopf", "hopf_su2"}) {
    CatalogEntry e = load_entry(name, {});
    MetricBase base = base_of(e, triv, nullptr);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
      Direction dir;
      dir.xi = Form(e.model->dim(), 1);
      for (Mask I : degree_masks(e.model->dim(), 1)) dir.xi.set(I, 0.25 * u(rng));
      dir.s = e.bundle ? e.bundle->algebra.random_compact(rng, 0.25) : Mat::Zero(1, 1);
      VariationReport rep = variation_report(name, base, dir);
      worst1 = std::max(worst1, rep.first_rel_err);
      worst2 = std::max(worst2, rep.second_rel_err);
      if (rep.first_rel_err > 1e-6 || rep.second_rel_err > 1e-5) {
        note = std::string("FD mismatch on ") + name;
        return false;
      }
    }
  }
  std::ostringstream os;
  os << "25 directions x 4 models; worst rel err first " << worst1 << ", second " << worst2;
  note = os.str();
  return true;
}

bool criterion6(std::string& note) {
  GaugeAlgebra triv = trivial_algebra();
  // exact-case linear paths: residual is identically zero, M concave
  CatalogEntry e = load_hopf({1.0, 0.0, 1.0, 1.0});
  MetricBase base = base_of(e, triv, nullptr);
  DiscretePath linear;
  linear.s = Mat::Zero(1, 1);
  Form xi(4, 1);
  xi.set(0b0001, 0.25);
  xi.set(0b0010, -0.125);
  for (int i = 0; i < 33; ++i) {
    linear.t.push_back(i / 32.0);
    linear.xi.push_back(cd(i / 32.0) * xi);
  }
  auto res = concave_path_residual(base, linear);
  for (size_t i = 1; i + 1 < res.size(); ++i)
    if (res[i] != 0.0) {
      note = "linear exact-case path residual nonzero";
      return false;
    }
  auto rows = sweep_along(base, linear);
  for (size_t i = 1; i + 1 < rows.size(); ++i)
    if (!(rows[i].d2M <= 1e-9)) {
      note = "exact-case concavity fails";
      return false;
    }

  // balanced surface paths with a bundle generator
  CatalogEntry se = load_entry("hopf_stdemb", {});
  MetricBase sbase = base_of(se, triv, nullptr);
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 3; ++trial) {
    Mat s = se.bundle->algebra.random_compact(rng, 0.35);
    Form shape(4, 1);
    shape.set(0b0001, 0.5);
    DiscretePath path = generate_surface_path(sbase, shape, s, 1.0, 33, 0.7);
    auto sres = concave_path_residual(sbase, path);
    auto srows = sweep_along(sbase, path);
    for (size_t i = 1; i + 1 < sres.size(); ++i) {
      if (!(sres[i] <= 1e-8)) {
        note = "balanced path residual too large";
        return false;
      }
      if (!(srows[i].d2M <= 1e-9)) {
        note = "concavity fails along balanced path";
        return false;
      }
    }
  }
  note = "linear paths: residual 0 and d2M <= 1e-9; generated balanced paths obey both bounds";
  return true;
}

bool criterion7(std::string& note) {
  GaugeAlgebra triv = trivial_algebra();
  GaugeAlgebra su2;
  su2.matrix_dim = 2;
  su2.blocks.push_back({0, 2, 1.0});
  GaugeAlgebra doubled;
  doubled.matrix_dim = 4;
  doubled.blocks.push_back({0, 2, -1.0});
  doubled.blocks.push_back({2, 2, 1.0});

  // FD Jacobian on solution bases
  {
    CatalogEntry e = load_hopf({1.0, 0.0, 1.0, 1.0});
    MetricBase base = base_of(e, triv, nullptr);
    LinearOperator op = assemble_linearization(base);
    if (!compare_jacobian(op, fd_jacobian(base)).pass(1e-6)) {
      note = "FD Jacobian mismatch on the exact Hopf solution";
      return false;
    }
    // Ker d subset Ker L, exactly
    Eigen::VectorXd dir = direction_coordinates(base, Form::basis(4, 0b1000), Mat::Zero(1, 1));
    if ((op.L * dir).norm() != 0.0) {
      note = "closed direction not exactly in ker L";
      return false;
    }
  }
  {
    CatalogEntry t6 = load_entry("torus6", {});
    VForm flat(6, 1, 4);
    MetricBase base = base_of(t6, doubled, &flat);
    LinearOperator op = assemble_linearization(base);
    if (!compare_jacobian(op, fd_jacobian(base)).pass(1e-6)) {
      note = "FD Jacobian mismatch on the torus standard embedding";
      return false;
    }
  }

  // ellipticity scans
  for (const auto& name : {"hopf", "torus4"}) {
    CatalogEntry e = load_entry(name, {});
    EllipticityScan scan = ellipticity_scan(*e.hermitian, 200, 42);
    if (!scan.pass) {
      note = std::string("ellipticity scan fails on ") + name;
      return false;
    }
  }

  // duality on Kahler models
  CatalogEntry t4 = load_entry("torus4", {});
  CatalogEntry t6r = load_torus(3, {1.0, 2.0, 0.5});
  if (duality_defect(*t4.hermitian) > 1e-10 || duality_defect(*t6r.hermitian) > 1e-10) {
    note = "duality defect too large";
    return false;
  }

  // rescaling identity, exact
  for (const auto& name : {"hopf_stdemb", "torus6_stdemb"}) {
    CatalogEntry e = load_entry(name, {});
    MetricBase base = base_of(e, triv, nullptr);
    LinearOperator at_base = assemble_linearization(base);
    int n = e.hermitian->n();
    for (double r : {1.0, 2.0, 10.0}) {
      MetricBase scaled = base;
      scaled.omega0 = r * base.omega0;
      LinearOperator op_r = assemble_linearization(scaled);
      Eigen::MatrixXd scale_dom = Eigen::MatrixXd::Identity(op_r.L.cols(), op_r.L.cols());
      scale_dom.topLeftCorner(op_r.xi_dim, op_r.xi_dim) *= r;
      Eigen::MatrixXd lhs = op_r.L * scale_dom;
      Eigen::MatrixXd rhs =
          std::pow(r, n - 1) * at_base.U_prime + std::pow(r, n - 2) * at_base.K_prime;
      if ((lhs - rhs).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + rhs.cwiseAbs().maxCoeff())) {
        note = std::string("rescaling identity fails on ") + name;
        return false;
      }
    }
  }

  // index zero on torus solutions
  {
    CatalogEntry t4b = load_entry("torus4", {});
    MetricBase base = base_of(t4b, su2, nullptr);
    if (index_report(base, assemble_linearization(base)).index != 0) {
      note = "index nonzero on the torus4 solution";
      return false;
    }
    CatalogEntry t6 = load_entry("torus6", {});
    VForm flat(6, 1, 4);
    MetricBase base6 = base_of(t6, doubled, &flat);
    if (index_report(base6, assemble_linearization(base6)).index != 0) {
      note = "index nonzero on the torus6 solution";
      return false;
    }
  }
  note = "Jacobian, kernel containment, 200-covector scans, duality, rescaling, index 0";
  return true;
}

bool criterion8(std::string& note) {
  CatalogEntry e = load_entry("hopf", {});
  const auto& h = *e.hermitian;
  CohomologyGroup a11 = aeppli_group(h, 1, 1);
  if (a11.dim() != 1) {
    note = "h^{1,1}_A != 1 on the Hopf model";
    return false;
  }
  Form gen = a11.representative(0, 4);
  Form e41 = hopf_omega(*e.model, 1.0, 0.0);
  cd ratio = 0.0;
  for (const auto& [I, c] : e41.coeffs()) ratio = gen.coeff(I) / c;
  if ((gen - ratio * e41).cmax() > 1e-10 * (1.0 + gen.cmax())) {
    note = "Aeppli generator not proportional to e^{41}";
    return false;
  }
  if (dolbeault_group(h, 2, 1).dim() != 1) {
    note = "h^{2,1} != 1 on the Hopf model";
    return false;
  }
  PartialMapReport hm = partial_map(h);
  if (hm.kernel_dim != 0 || hm.image_dim != 1) {
    note = "del map is not an isomorphism on the Hopf model";
    return false;
  }
  for (const auto& name : {"torus4", "torus6"}) {
    PartialMapReport tm = partial_map(*load_entry(name, {}).hermitian);
    if (tm.image_dim != 0) {
      note = std::string("del map nonzero on ") + name;
      return false;
    }
  }
  for (const auto& name : {"hopf", "torus4", "torus6", "su2_r3", "h3"}) {
    PartialMapReport r = partial_map(*load_entry(name, {}).hermitian);
    if (r.kernel_dim + r.image_dim != r.h11_a_real) {
      note = std::string("rank-nullity fails on ") + name;
      return false;
    }
  }
  note = "Hopf h11_A = 1 (gen e41), h21 = 1; del map iso/zero; rank-nullity on the catalog";
  return true;
}

bool criterion9(std::string& note) {
  struct {
    int n;
    double lambda, gamma;
  } table[] = {{3, 4.0, 1.0 / 3.0}, {4, 3.0, 0.5}, {5, 8.0 / 3.0, 0.6}};
  for (auto& row : table)
    if (appendix_lambda(row.n) != row.lambda || appendix_gamma(row.n) != row.gamma) {
      note = "constants mismatch";
      return false;
    }

  CatalogEntry e = load_entry("torus6_stdemb", {});
  AppendixState st{e.hermitian.get(), &e.bundle->algebra, e.bundle->theta,
                   e.hermitian->omega()};
  std::mt19937_64 rng(909);
  double worst = 0.0;
  for (int trial = 0; trial < 6; ++trial) {
    Mat u = cd(0, 1) * e.bundle->algebra.random_compact(rng, 0.4);
    auto M = [&](double t) { return appendix_functional(st, u, t); };
    for (double t0 : {0.0, 0.25}) {
      FdResult f2 = fd_second(M, t0);
      double a2 = appendix_hessian(st, u, t0);
      double rel = std::abs(a2 - f2.value) / std::max({std::abs(a2), std::abs(f2.value), 1e-8});
      worst = std::max(worst, rel);
      if (rel > 1e-5) {
        note = "hessian vs FD mismatch";
        return false;
      }
    }
  }

  // bridge: appendix critical data gives a Hull-Strominger solution
  CatalogEntry t6 = load_entry("torus6", {});
  HermitianStructure bridged = appendix_bridge_metric(*t6.hermitian);
  ResidualReport hs = hs_residual(bridged, t6.psi, nullptr);
  for (const auto& [k, v] : hs.residuals)
    if (v > 1e-8) {
      note = "bridge residual " + k + " too large";
      return false;
    }
  std::ostringstream os;
  os << "lambda/gamma exact for n in {3,4,5}; hessian worst rel err " << worst
     << "; bridge residuals <= 1e-8";
  note = os.str();
  return true;
}

bool criterion10(std::string& note) {
  std::string cli = INVGEO_CLI_PATH;
  auto slurp = [](const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  for (const std::string& args :
       {std::string("variation --model hopf_su2 --trials 5 --seed 42 --json "),
        std::string("symbol --model hopf --trials 100 --seed 9 --json "),
        std::string("functional --model hopf --a 1 --x 1 --t 0.1:10:50 --csv ")}) {
    std::string p1 = "/tmp/invgeo_acc_1.out", p2 = "/tmp/invgeo_acc_2.out";
    if (std::system((cli + " " + args + p1 + " > /dev/null 2>&1").c_str()) != 0 ||
        std::system((cli + " " + args + p2 + " > /dev/null 2>&1").c_str()) != 0) {
      note = "CLI run failed";
      return false;
    }
    std::string a = slurp(p1), b = slurp(p2);
    std::remove(p1.c_str());
    std::remove(p2.c_str());
    if (a.empty() || a != b) {
      note = "reports differ between runs";
      return false;
    }
  }
  note = "variation, symbol and functional reports byte-identical across repeated runs";
  return true;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {"criterion-1 hopf closed forms", 1.0, criterion1},
      {"criterion-2 dilaton functional", 1.0, criterion2},
      {"criterion-3 twisted system residuals", 1.0, criterion3},
      {"criterion-4 Donaldson invariant", 10.0, criterion4},
      {"criterion-5 variational oracles", 60.0, criterion5},
      {"criterion-6 concavity", 30.0, criterion6},
      {"criterion-7 linearization", 60.0, criterion7},
      {"criterion-8 cohomology", 5.0, criterion8},
      {"criterion-9 appendix functional", 60.0, criterion9},
      {"criterion-10 determinism", 60.0, criterion10},
  };
  int failures = 0;
  for (auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    std::string note;
    bool ok = false;
    try {
      ok = c.run(note);
    } catch (const std::exception& ex) {
      note = std::string("exception: ") + ex.what();
    }
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > c.budget_seconds) {
      ok = false;
      note += " [over time budget]";
    }
    std::printf("%s %s (%.2fs) %s\n", ok ? "PASS" : "FAIL", c.name.c_str(), seconds,
                note.c_str());
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
