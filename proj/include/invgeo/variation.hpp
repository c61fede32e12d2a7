#ifndef INVGEO_VARIATION_HPP
#define INVGEO_VARIATION_HPP

#include <functional>
#include <string>
#include <vector>

#include "invgeo/algebroid.hpp"
#include "invgeo/systems.hpp"

namespace invgeo {

struct DilatonValue {
  double via_omega;  // int e^{-f} om^n/n!
  double via_mu;     // int e^{f} mu
  double agreement() const { return std::abs(via_omega - via_mu); }
};

// The dilaton functional, evaluated through both defining integrals.
DilatonValue dilaton_functional(const HermitianStructure& h);

// Direction in a fixed Aeppli class: omega_t = omega0 + 2(d(t xi))^{1,1} + R(h_t,h0),
// h_t = e^{t i s} h0 with s in the compact form.
struct Direction {
  Form xi;
  Mat s;
};

// M(t) along the class-constrained path through the metric parametrization.
double functional_along(const MetricBase& base, const Direction& dir, double t,
                        int quad_order = 64);

double first_variation(const MetricBase& base, const Direction& dir, int quad_order = 64);

// Second variation at parameter t along the path; xi_ddot is the acceleration
// of the xi-track (zero for the linear track).
double second_variation(const MetricBase& base, const Direction& dir, double t,
                        const Form& xi_ddot, int quad_order = 64);

// Central finite differences with one Richardson pass, steps {1e-3, 5e-4, 2.5e-4}.
struct FdResult {
  double value;
  double coarse;  // pre-extrapolation estimate at the base step
  double step;
};
FdResult fd_first(const std::function<double(double)>& f, double t0);
FdResult fd_second(const std::function<double(double)>& f, double t0);

struct VariationReport {
  std::string model;
  double value;
  double first_analytic, first_fd;
  double second_analytic, second_fd;
  double first_rel_err, second_rel_err;
  std::string to_json() const;
};

VariationReport variation_report(const std::string& model_name, const MetricBase& base,
                                 const Direction& dir, int quad_order = 64);

// Discretized path in a fixed class: xi-track samples with a fixed generator.
struct DiscretePath {
  std::vector<double> t;
  std::vector<Form> xi;
  Mat s;  // compact generator, h_t = e^{t i s} h0
};

// Residual of the concavity path equation at interior samples; second
// derivatives of the xi-track by interior differencing.
std::vector<double> concave_path_residual(const MetricBase& base, const DiscretePath& path,
                                          int quad_order = 64);

// Surface-case (n = 2) path generator: the xi-track is phi(t) * xi_shape where
// phi solves the discrete balance between the trace of the xi-acceleration and
// the curvature term, step by step (exact for the checker's differencing).
DiscretePath generate_surface_path(const MetricBase& base, const Form& xi_shape, const Mat& s,
                                   double t_max, int samples, double phi_dot0 = 1.0,
                                   int quad_order = 64);

struct SweepRow {
  double t;
  double M;
  double dM;     // discrete first difference (NaN at ends)
  double d2M;    // discrete second difference (NaN at ends)
  double residual;
};

std::vector<SweepRow> sweep_along(const MetricBase& base, const DiscretePath& path,
                                  int quad_order = 64);

// Direct functional sweep over a one-parameter family of metrics.
std::vector<SweepRow> sweep_family(const HermitianStructure& h_reference,
                                   const std::function<Form(double)>& omega_of_t,
                                   const std::vector<double>& grid);

std::string sweep_to_csv(const std::vector<SweepRow>& rows);

// Appendix functional M = int gamma e^{(lambda-2) f} om^n - (tau0 + R(h,h0)) ^ om^{n-1}
// for product metrics h_t = e^{tu} h0 on a balanced model.
struct AppendixState {
  const HermitianStructure* geometry;
  const GaugeAlgebra* algebra;
  VForm theta0;
  Form tau0;
};

double appendix_functional(const AppendixState& st, const Mat& u, double t,
                           int quad_order = 64);
// Analytic t-derivatives of the h-track at parameter t (the volume-form track
// is inert on invariant balanced models; see the ledger for the constants).
double appendix_first_variation(const AppendixState& st, const Mat& u, double t);
double appendix_hessian(const AppendixState& st, const Mat& u, double t);

}  // namespace invgeo

#endif
