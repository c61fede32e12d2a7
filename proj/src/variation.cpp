#include "invgeo/variation.hpp"

#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

namespace invgeo {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// dbar^h del^h u for an invariant algebra element u
VForm dbar_del(const LieModel& model, const ComplexStructure& J, const VForm& theta,
               const Mat& u) {
  VForm u0(model.dim(), 0, (int)u.rows());
  u0.set(0, u);
  VForm du = covariant_d(model, theta, u0);
  VForm del_u = project_type(J, du, 1, 0);
  VForm ddel = covariant_d(model, theta, del_u);
  return project_type(J, ddel, 1, 1);
}

Form velocity_form(const MetricBase& base, const Direction& dir, const VForm& theta_t) {
  const HermitianStructure& h = *base.geometry;
  VForm F_t = curvature_of(h.model(), theta_t);
  Mat u = cd(0, 1) * dir.s;
  Form dxi = h.model().d(dir.xi);
  Form move = dxi + h.J().apply(dxi);
  return (move + cd(0, 1) * pairing_form(*base.algebra, u, F_t)).real_part();
}

}  // namespace

DilatonValue dilaton_functional(const HermitianStructure& h) {
  double f = h.dilaton_function();
  double vol_omega = h.total_volume();
  double vol_mu = h.model().integrate_top(h.mu()).real();
  return {std::exp(-f) * vol_omega, std::exp(f) * vol_mu};
}

double functional_along(const MetricBase& base, const Direction& dir, double t,
                        int quad_order) {
  const HermitianStructure& h = *base.geometry;
  Form xi_t = cd(t) * dir.xi;
  Mat s_t = t * dir.s;
  MetricPair pair = metric_from_parameters(base, xi_t, s_t, quad_order);
  HermitianStructure geom(h.model(), h.J(), pair.omega, h.mu());
  DilatonValue v = dilaton_functional(geom);
  return v.via_mu;
}

double first_variation(const MetricBase& base, const Direction& dir, int quad_order) {
  (void)quad_order;
  const HermitianStructure& h = *base.geometry;
  HermitianStructure geom(h.model(), h.J(), base.omega0, h.mu());
  Form delta = velocity_form(base, dir, base.theta0);
  double f = geom.dilaton_function();
  return 0.5 * geom.lambda_scalar(delta) * std::exp(-f) * geom.total_volume();
}

double second_variation(const MetricBase& base, const Direction& dir, double t,
                        const Form& xi_ddot, int quad_order) {
  const HermitianStructure& h = *base.geometry;
  const LieModel& model = h.model();
  int n = h.n();
  Mat u = cd(0, 1) * dir.s;
  MetricPair pair = metric_from_parameters(base, cd(t) * dir.xi, t * dir.s, quad_order);
  HermitianStructure geom(model, h.J(), pair.omega, h.mu());
  VForm theta_t = chern_connection(h.J(), base.theta0, pair.u);

  Form vel = velocity_form(base, dir, theta_t);
  double beta = geom.lambda_scalar(vel);
  Form sigma = vel - (beta / n) * geom.omega();
  double sigma2 = geom.inner(sigma, sigma).real();

  Form acc(model.dim(), 2);
  if (!xi_ddot.is_zero()) {
    Form ddxi = model.d(xi_ddot);
    acc += (ddxi + h.J().apply(ddxi)).real_part();
  }
  acc += (cd(0, 1) * pairing_form(*base.algebra, u, dbar_del(model, h.J(), theta_t, u)))
             .real_part();

  double f = geom.dilaton_function();
  double bracket = geom.lambda_scalar(acc) - sigma2 + (n - 2) / (2.0 * n) * beta * beta;
  return 0.5 * std::exp(-f) * bracket * geom.total_volume();
}

FdResult fd_first(const std::function<double(double)>& f, double t0) {
  auto central = [&](double h) { return (f(t0 + h) - f(t0 - h)) / (2.0 * h); };
  double d1 = central(1e-3), d2 = central(5e-4), d3 = central(2.5e-4);
  double r1 = (4.0 * d2 - d1) / 3.0;
  double r2 = (4.0 * d3 - d2) / 3.0;
  return {r2, r1, 1e-3};
}

FdResult fd_second(const std::function<double(double)>& f, double t0) {
  double f0 = f(t0);
  auto central = [&](double h) { return (f(t0 + h) - 2.0 * f0 + f(t0 - h)) / (h * h); };
  double d1 = central(1e-3), d2 = central(5e-4), d3 = central(2.5e-4);
  double r1 = (4.0 * d2 - d1) / 3.0;
  double r2 = (4.0 * d3 - d2) / 3.0;
  return {r2, r1, 1e-3};
}

static double rel_err(double a, double b, double scale) {
  double denom = std::max({std::abs(a), std::abs(b), 1e-10 * std::max(1.0, scale)});
  return std::abs(a - b) / denom;
}

std::string VariationReport::to_json() const {
  nlohmann::ordered_json j;
  j["model"] = model;
  j["value"] = value;
  j["first"] = {{"analytic", first_analytic}, {"fd", first_fd}, {"rel_err", first_rel_err},
                {"fd_steps", {1e-3, 5e-4, 2.5e-4}}, {"richardson_order", 1}};
  j["second"] = {{"analytic", second_analytic}, {"fd", second_fd},
                 {"rel_err", second_rel_err}, {"fd_steps", {1e-3, 5e-4, 2.5e-4}},
                 {"richardson_order", 1}};
  return j.dump(2);
}

VariationReport variation_report(const std::string& model_name, const MetricBase& base,
                                 const Direction& dir, int quad_order) {
  VariationReport rep;
  rep.model = model_name;
  rep.value = functional_along(base, dir, 0.0, quad_order);
  auto M = [&](double t) { return functional_along(base, dir, t, quad_order); };
  rep.first_analytic = first_variation(base, dir, quad_order);
  FdResult f1 = fd_first(M, 0.0);
  rep.first_fd = f1.value;
  rep.second_analytic = second_variation(base, dir, 0.0, Form(base.geometry->dim(), 1),
                                         quad_order);
  FdResult f2 = fd_second(M, 0.0);
  rep.second_fd = f2.value;
  rep.first_rel_err = rel_err(rep.first_analytic, rep.first_fd, rep.value);
  rep.second_rel_err = rel_err(rep.second_analytic, rep.second_fd, rep.value);
  return rep;
}

std::vector<double> concave_path_residual(const MetricBase& base, const DiscretePath& path,
                                          int quad_order) {
  size_t N = path.t.size();
  if (N < 3) throw std::invalid_argument("concave_path_residual: need at least 3 samples");
  if (path.xi.size() != N) throw std::invalid_argument("concave_path_residual: sizes");
  const HermitianStructure& h = *base.geometry;
  const LieModel& model = h.model();
  int n = h.n();
  double step = path.t[1] - path.t[0];
  for (size_t i = 1; i + 1 < N; ++i)
    if (std::abs((path.t[i + 1] - path.t[i]) - step) > 1e-12 * (1.0 + std::abs(step)))
      throw std::invalid_argument("concave_path_residual: nonuniform grid");

  Mat u = cd(0, 1) * path.s;
  std::vector<double> residuals(N, std::numeric_limits<double>::quiet_NaN());
  for (size_t i = 1; i + 1 < N; ++i) {
    Form xi_ddot = (1.0 / (step * step)) *
                   (path.xi[i - 1] + path.xi[i + 1] - cd(2.0) * path.xi[i]);
    Form xi_dot = (1.0 / (2.0 * step)) * (path.xi[i + 1] - path.xi[i - 1]);
    MetricPair pair = metric_from_parameters(base, path.xi[i], path.t[i] * path.s, quad_order);
    HermitianStructure geom(model, h.J(), pair.omega, h.mu());
    VForm theta_t = chern_connection(h.J(), base.theta0, pair.u);
    VForm F_t = curvature_of(model, theta_t);

    Form dxdd = model.d(xi_ddot);
    double lhs = geom.lambda_scalar((dxdd + h.J().apply(dxdd)).real_part());

    Form dxd = model.d(xi_dot);
    Form vel = ((dxd + h.J().apply(dxd)) +
                cd(0, 1) * pairing_form(*base.algebra, u, F_t)).real_part();
    double beta = geom.lambda_scalar(vel);
    Form curv_acc =
        (cd(0, 1) * pairing_form(*base.algebra, u, dbar_del(model, h.J(), theta_t, u)))
            .real_part();
    double rhs = (2.0 - n) / (2.0 * n) * beta * beta - geom.lambda_scalar(curv_acc);
    residuals[i] = std::abs(lhs - rhs);
  }
  return residuals;
}

DiscretePath generate_surface_path(const MetricBase& base, const Form& xi_shape, const Mat& s,
                                   double t_max, int samples, double phi_dot0, int quad_order) {
  const HermitianStructure& h = *base.geometry;
  const LieModel& model = h.model();
  if (h.n() != 2)
    throw std::invalid_argument("generate_surface_path: surface case (n = 2) only");
  if (samples < 3) throw std::invalid_argument("generate_surface_path: need >= 3 samples");
  Mat u = cd(0, 1) * s;
  double step = t_max / (samples - 1);
  DiscretePath path;
  path.s = s;
  path.t.resize(samples);
  path.xi.resize(samples, Form(model.dim(), 1));
  std::vector<double> phi(samples, 0.0);

  auto balance = [&](int i) {
    // kappa * phi_ddot = -Lambda(i c(u, dbar del u)) at the current state
    MetricPair pair = metric_from_parameters(base, phi[i] * xi_shape, path.t[i] * s, quad_order);
    HermitianStructure geom(model, h.J(), pair.omega, h.mu());
    VForm theta_t = chern_connection(h.J(), base.theta0, pair.u);
    Form shape = model.d(xi_shape);
    double kappa = geom.lambda_scalar((shape + h.J().apply(shape)).real_part());
    if (std::abs(kappa) < 1e-10)
      throw std::invalid_argument("generate_surface_path: degenerate xi_shape (trace-free)");
    Form curv_acc =
        (cd(0, 1) * pairing_form(*base.algebra, u, dbar_del(model, h.J(), theta_t, u)))
            .real_part();
    return -geom.lambda_scalar(curv_acc) / kappa;
  };

  for (int i = 0; i < samples; ++i) path.t[i] = i * step;
  phi[0] = 0.0;
  phi[1] = phi_dot0 * step + 0.5 * step * step * balance(0);
  path.xi[0] = phi[0] * xi_shape;
  path.xi[1] = phi[1] * xi_shape;
  for (int i = 1; i + 1 < samples; ++i) {
    double g = balance(i);
    phi[i + 1] = 2.0 * phi[i] - phi[i - 1] + step * step * g;
    path.xi[i + 1] = phi[i + 1] * xi_shape;
  }
  return path;
}

std::vector<SweepRow> sweep_along(const MetricBase& base, const DiscretePath& path,
                                  int quad_order) {
  const HermitianStructure& h = *base.geometry;
  size_t N = path.t.size();
  std::vector<double> M(N);
  for (size_t i = 0; i < N; ++i) {
    MetricPair pair = metric_from_parameters(base, path.xi[i], path.t[i] * path.s, quad_order);
    HermitianStructure geom(h.model(), h.J(), pair.omega, h.mu());
    M[i] = dilaton_functional(geom).via_mu;
  }
  std::vector<double> res = concave_path_residual(base, path, quad_order);
  std::vector<SweepRow> rows(N);
  double nan = std::numeric_limits<double>::quiet_NaN();
  for (size_t i = 0; i < N; ++i) {
    double step = (N > 1) ? path.t[1] - path.t[0] : 1.0;
    rows[i].t = path.t[i];
    rows[i].M = M[i];
    rows[i].dM = (i > 0 && i + 1 < N) ? (M[i + 1] - M[i - 1]) / (2.0 * step) : nan;
    rows[i].d2M =
        (i > 0 && i + 1 < N) ? (M[i + 1] - 2.0 * M[i] + M[i - 1]) / (step * step) : nan;
    rows[i].residual = res[i];
  }
  return rows;
}

std::vector<SweepRow> sweep_family(const HermitianStructure& h_reference,
                                   const std::function<Form(double)>& omega_of_t,
                                   const std::vector<double>& grid) {
  size_t N = grid.size();
  std::vector<double> M(N);
  for (size_t i = 0; i < N; ++i) {
    HermitianStructure geom(h_reference.model(), h_reference.J(), omega_of_t(grid[i]),
                            h_reference.mu());
    M[i] = dilaton_functional(geom).via_mu;
  }
  std::vector<SweepRow> rows(N);
  double nan = std::numeric_limits<double>::quiet_NaN();
  for (size_t i = 0; i < N; ++i) {
    rows[i].t = grid[i];
    rows[i].M = M[i];
    bool interior = i > 0 && i + 1 < N;
    double hl = interior ? grid[i] - grid[i - 1] : 1.0;
    double hr = interior ? grid[i + 1] - grid[i] : 1.0;
    rows[i].dM = interior ? (M[i + 1] - M[i - 1]) / (hl + hr) : nan;
    rows[i].d2M = interior
                      ? 2.0 * (hl * M[i + 1] - (hl + hr) * M[i] + hr * M[i - 1]) /
                            (hl * hr * (hl + hr))
                      : nan;
    rows[i].residual = nan;
  }
  return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os.precision(17);
  os << "t,M,dM,d2M,residual\n";
  for (const auto& r : rows)
    os << r.t << "," << r.M << "," << r.dM << "," << r.d2M << "," << r.residual << "\n";
  return os.str();
}

double appendix_functional(const AppendixState& st, const Mat& u, double t, int quad_order) {
  const HermitianStructure& h = *st.geometry;
  const LieModel& model = h.model();
  int n = h.n();
  double lambda = appendix_lambda(n);
  double gamma = appendix_gamma(n);
  Form om_pow = wedge_pow(h.omega(), n - 1);
  if (h.l2_norm(model.d(om_pow)) > 1e-10)
    throw std::invalid_argument("appendix_functional: omega is not balanced");
  double f = h.dilaton_function();
  double dil = gamma * std::exp((lambda - 2.0) * f) * factorial(n) * h.total_volume();
  Form r = donaldson_r(model, h.J(), *st.algebra, st.theta0, t * u, quad_order).r_tilde;
  double don = model.integrate_top(wedge(st.tau0 + r, om_pow)).real();
  return dil - don;
}

double appendix_first_variation(const AppendixState& st, const Mat& u, double t) {
  const HermitianStructure& h = *st.geometry;
  const LieModel& model = h.model();
  VForm theta_t = chern_connection(h.J(), st.theta0, t * u);
  VForm F_t = curvature_of(model, theta_t);
  Form integrand = cd(0, 1) * pairing_form(*st.algebra, u, F_t);
  Form om_pow = wedge_pow(h.omega(), h.n() - 1);
  return -model.integrate_top(wedge(integrand, om_pow)).real();
}

double appendix_hessian(const AppendixState& st, const Mat& u, double t) {
  const HermitianStructure& h = *st.geometry;
  const LieModel& model = h.model();
  VForm theta_t = chern_connection(h.J(), st.theta0, t * u);
  Form integrand =
      cd(0, 1) * pairing_form(*st.algebra, u, dbar_del(model, h.J(), theta_t, u));
  Form om_pow = wedge_pow(h.omega(), h.n() - 1);
  return -model.integrate_top(wedge(integrand, om_pow)).real();
}

}  // namespace invgeo
