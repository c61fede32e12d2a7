#ifndef INVGEO_ALGEBROID_HPP
#define INVGEO_ALGEBROID_HPP

#include <optional>

#include "invgeo/cohomology.hpp"
#include "invgeo/gauge.hpp"

namespace invgeo {

// Representative (H, theta) of a holomorphic string class, H in
// Omega^{3,0} + Omega^{2,1}, with dH + c(F ^ F) = 0 enforced at construction.
struct StringClassRep {
  Form H;
  VForm theta;
  std::optional<Form> tau;  // when the class came as (2i del tau, theta^h)

  static StringClassRep from_tau(const HermitianStructure& h, const GaugeAlgebra& c,
                                 const Form& tau, const VForm& theta, double tol = 1e-8);
  static StringClassRep make(const HermitianStructure& h, const GaugeAlgebra& c, const Form& H,
                             const VForm& theta, double tol = 1e-8);
};

struct EquivalenceCertificate {
  bool equivalent = false;
  double residual = 0.0;
  Form B;  // minimal-norm (2,0)-form with H' = H + CS - CS' - dc(.) + dB
};

// Class equivalence with the gauge transformation restricted to the identity.
EquivalenceCertificate class_equivalent(const HermitianStructure& h, const GaugeAlgebra& c,
                                        const StringClassRep& r1, const StringClassRep& r2,
                                        double tol = 1e-8);

// Twist by a dd^c-closed (1,1)-form: (H + 2i del beta, theta).
StringClassRep twist(const HermitianStructure& h, const GaugeAlgebra& c,
                     const StringClassRep& r, const Form& beta, double tol = 1e-10);

// Hermitian metric on the algebroid: pair (omega, h = e^u h0) relative to a base.
struct MetricPair {
  Form omega;
  Mat u;             // generator, h = e^u h0 (u = i s for s in the compact form)
  bool positive = false;
  double anomaly_defect = 0.0;  // ||dd^c omega - c(F_h ^ F_h)||
};

struct MetricBase {
  const HermitianStructure* geometry;  // base complex structure, metric, Grams
  const GaugeAlgebra* algebra;
  Form omega0;
  VForm theta0;
};

// omega = omega0 + 2(d xi)^{1,1} + R(h, h0), h = e^{is} h0. Positivity is
// reported, not required, so sweeps can probe the cone boundary.
MetricPair metric_from_parameters(const MetricBase& base, const Form& xi, const Mat& s,
                                  int quad_order = 64);

// dbar operator of the algebroid on the kernel section 2 xi^{1,0} - s/4:
// (dbar r, dbar(2 xi^{1,0}) + 2 c(F^{1,1}, r)) with r = -s/4.
struct KernelSectionImage {
  VForm ad_part;   // (0,1)-form valued in the algebra
  Form form_part;  // (1,1)-form
  double norm(const HermitianStructure& h) const;
};

KernelSectionImage dbar_kernel_section(const HermitianStructure& h, const GaugeAlgebra& c,
                                       const VForm& theta, const Form& xi, const Mat& s);

// Positivity of a class over invariant representatives: search the affine set
// tau + 2(d xi)^{1,1} for a positive form (linear program on a coarse grid).
bool positive_class_invariant(const HermitianStructure& h, const Form& tau);

}  // namespace invgeo

#endif
