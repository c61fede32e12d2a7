#ifndef INVGEO_MODELS_HPP
#define INVGEO_MODELS_HPP

#include <memory>
#include <optional>
#include <string>

#include "invgeo/gauge.hpp"
#include "invgeo/hermitian.hpp"

namespace invgeo {

struct HopfParams {
  double x = 1.0;   // Re w
  double y = 0.0;   // Im w
  double a = 1.0;   // Aeppli parameter, omega = a e^{41} + t e^{23}
  double t = 1.0;
  double volume = 1.0;
};

// Catalog entry: a model with its complex structure, a distinguished metric
// family, canonical-bundle data where known, and an optional bundle.
struct CatalogEntry {
  std::string name;
  std::shared_ptr<LieModel> model;
  std::shared_ptr<HermitianStructure> hermitian;
  Form psi;                    // distinguished (n,0)-form (zero form if none)
  bool psi_normalized = false; // whether psi was rescaled to ||psi||_omega = 1
  std::shared_ptr<GaugeBundle> bundle;  // may be null (trivial structure group)
  std::string notes;
};

// Hopf surface S^3 x S^1: de^1=e^{23}, de^2=e^{31}, de^3=e^{12}, de^4=0,
// orientation e^{4123}. Requires x > 0 and a,t > 0 for a positive metric.
LieModel hopf_model(double volume = 1.0);
ComplexStructure hopf_complex_structure(const LieModel& model, double x, double y);
Form hopf_psi(const LieModel& model, double x, double y);     // eta^1_w ^ eta^2
Form hopf_omega(const LieModel& model, double a, double t);   // a e^{41} + t e^{23}
Form hopf_mu(const LieModel& model, double x);                // psi ^ conj(psi) = 4x e^{4123}

CatalogEntry load_hopf(const HopfParams& p, bool normalize_psi = true);
CatalogEntry load_hopf_su2(const HopfParams& p);  // adds an SU(2) bundle with curved Chern connection
// SU(2)xSU(2) with c = alpha(-tr + tr) and the connection doubled, so
// c(F^F) = 0 and (omega_t, h0) satisfies the anomaly equation on the nose.
CatalogEntry load_hopf_stdemb(const HopfParams& p, double alpha = 1.0);

// Flat torus T^{2n}; J pairs e^{2k-1},e^{2k}; omega = sum lambda_k e^{2k-1,2k}.
CatalogEntry load_torus(int n, std::vector<double> lambda = {}, double volume = 1.0);

// T^6 with an SU(2)xSU(2) bundle carrying the doubled Hermite-Einstein
// connection (a standard embedding style solution, c = alpha(tr - tr)).
CatalogEntry load_torus6_stdemb(double alpha = 1.0);

// T^6 with a single SU(2) bundle and indefinite-signature pairing weights,
// for variational cross-checks off the anomaly constraint.
CatalogEntry load_torus6_su2(double alpha = 1.0);

// su(2) + R^3 product threefold (S^3 x T^3 quotient); product of the Hopf
// solution with flat data. The Z^3 quotient data affects topology only.
CatalogEntry load_su2_r3(double x, double a, double t, double s, double volume = 1.0);

// Nilmanifold h3 = (0,0,0,0,0,12+34): structure constants and smoke data only.
CatalogEntry load_h3();

// Dispatch by name with uniform parameters (unused ones ignored).
struct CatalogParams {
  double w_re = 1.0, w_im = 0.0;
  double a = 1.0, t = 1.0, x = 1.0, s = 1.0;
  double volume = 1.0;
};
CatalogEntry load_entry(const std::string& name, const CatalogParams& p);
std::vector<std::string> catalog_names();

}  // namespace invgeo

#endif
