#ifndef INVGEO_SYSTEMS_HPP
#define INVGEO_SYSTEMS_HPP

#include <map>
#include <optional>
#include <string>

#include "invgeo/algebroid.hpp"
#include "invgeo/models.hpp"

namespace invgeo {

// Per-equation residual norms with tolerances; pass iff every norm is within
// its tolerance. Deterministic given inputs.
struct ResidualReport {
  std::string system;
  std::string model;
  std::map<std::string, double> params;
  std::map<std::string, double> residuals;
  std::map<std::string, double> tolerances;

  bool pass() const {
    for (const auto& [k, v] : residuals) {
      auto it = tolerances.find(k);
      if (it == tolerances.end() || v > it->second) return false;
    }
    return true;
  }
  std::string to_json() const;  // stable schema {model, params, residuals, tol, pass}
};

struct Tolerances {
  double exact = 1e-10;       // identities evaluated in closed form
  double quadrature = 1e-8;   // quadrature-backed identities
};

// Twisted Hull-Strominger system: F ^ om^{n-1}, dPsi - theta ^ Psi, d theta,
// dd^c om - c(F^F), and the norm condition ||Psi|| = 1.
ResidualReport twisted_hs_residual(const HermitianStructure& h, const Form& psi,
                                   const GaugeBundle* bundle, Tolerances tol = {});

// Hull-Strominger system for a holomorphic volume form Omega (d Omega = 0 required):
// F ^ om^{n-1}, d* om - d^c log ||Omega||, dd^c om - c(F^F).
ResidualReport hs_residual(const HermitianStructure& h, const Form& Omega,
                           const GaugeBundle* bundle, Tolerances tol = {});

// Calabi system: F ^ om^{n-1} and d(e^{-f} om^{n-1}); the balanced-type equation
// is evaluated both directly and through theta + df.
ResidualReport calabi_residual(const HermitianStructure& h, const GaugeBundle* bundle,
                               Tolerances tol = {});

// Appendix system for n >= 3: F ^ om^{n-1}, d om^{n-1},
// dd^c(e^{(lambda-2) f} om) - c(F^F) with lambda = 2(n-1)/(n-2).
ResidualReport appendix_residual(const HermitianStructure& h, const GaugeBundle* bundle,
                                 Tolerances tol = {});

double appendix_lambda(int n);
double appendix_gamma(int n);

// Conformal bridge: the metric e^{2/(n-2) f_omega} omega entering the
// Hull-Strominger system from appendix critical data.
HermitianStructure appendix_bridge_metric(const HermitianStructure& h);

// Residual map constrained to an Aeppli class through the metric
// parametrization; its Jacobian at (xi,s) = 0 is the linearized operator.
struct ReducedResidual {
  Form r1;    // degree 2n-1
  VForm r2;   // ad-valued top degree, projected to the compact form
};
ReducedResidual reduced_residual(const MetricBase& base, const Form& xi, const Mat& s,
                                 int quad_order = 64);

// Convenience: run the named system on a catalog entry.
ResidualReport run_system(const std::string& system, const CatalogEntry& entry,
                          Tolerances tol = {});

}  // namespace invgeo

#endif
