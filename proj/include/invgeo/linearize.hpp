#ifndef INVGEO_LINEARIZE_HPP
#define INVGEO_LINEARIZE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "invgeo/systems.hpp"

namespace invgeo {

// Linearization of the class-constrained system at a base pair, assembled on
// real coordinates: domain Omega^1 (+) Omega^0(ad P_h), codomain
// Omega^{2n-1} (+) Omega^{2n}(ad P_h).
struct LinearOperator {
  long xi_dim = 0;    // real 1-form coordinates
  long s_dim = 0;     // compact-form coordinates
  long out_form_dim = 0;

  Eigen::MatrixXd L;   // full operator
  Eigen::MatrixXd U;   // second-order part (U1 on forms, U2 on sections)
  Eigen::MatrixXd K;   // L - U, first order
  Eigen::MatrixXd U_prime;  // rescaling split: L_{r om}(r xi, s) = r^{n-1} U' + r^{n-2} K'
  Eigen::MatrixXd K_prime;

  Eigen::MatrixXd gram_domain;
  Eigen::MatrixXd gram_codomain;

  bool base_is_solution = false;
  double base_residual = 0.0;
};

LinearOperator assemble_linearization(const MetricBase& base, double solution_tol = 1e-8);

// Coordinates of a direction and of operator outputs (for cross-checks).
Eigen::VectorXd direction_coordinates(const MetricBase& base, const Form& xi, const Mat& s);
Eigen::VectorXd residual_coordinates(const MetricBase& base, const ReducedResidual& r);

// FD Jacobian of the reduced residual map through the metric parametrization.
Eigen::MatrixXd fd_jacobian(const MetricBase& base, int quad_order = 64);

struct JacobianComparison {
  double max_abs_diff;
  double scale;          // largest |L| entry
  double worst_rel;      // entrywise on significant entries
  bool pass(double rel_tol = 1e-6) const { return worst_rel <= rel_tol; }
};
JacobianComparison compare_jacobian(const LinearOperator& op, const Eigen::MatrixXd& fd);

// Principal symbol of the elliptic block at covector v:
// sigma(v)(xi) = v ^ T(v ^ xi + Jv ^ J xi) ^ om^{n-2}.
Eigen::MatrixXd symbol_u1(const HermitianStructure& h, const Form& v);

struct EllipticityScan {
  int trials = 0;
  int failures = 0;
  double worst_gap = 0.0;        // smallest second singular value across trials
  double worst_alignment = 1.0;  // kernel alignment with span{v}
  bool pass = false;
  std::string to_json() const;
};
EllipticityScan ellipticity_scan(const HermitianStructure& h, int trials, std::uint64_t seed);

// || U1^* - * U1 * || as matrices; requires a vanishing Lee form.
double duality_defect(const HermitianStructure& h);

struct IndexReport {
  long domain_dim = 0, codomain_dim = 0;
  long kernel = 0, cokernel = 0, index = 0;
  std::vector<double> singular_values;
  std::string to_json() const;
};

// Restriction to (Im d^*) (+) Omega^0(ad P_h) -> (Im d) (+) Omega^{2n}(ad P_h)
// via Gram-orthogonal projectors; ranks by SVD.
IndexReport index_report(const MetricBase& base, const LinearOperator& op);

// Mutual Gram-orthogonality defects of Im L^* (+) ker L in the domain and
// Im L (+) ker L^* in the codomain (finite-dimensional harmonic splitting).
struct DecompositionCheck {
  double domain_orthogonality = 0.0;
  double codomain_orthogonality = 0.0;
  bool dims_consistent = false;
};
DecompositionCheck harmonic_decomposition_check(const LinearOperator& op);

// sup norm of (d - theta) composed with the form row of L (complex property).
double complex_property_defect(const MetricBase& base, const LinearOperator& op);

// Holomorphic kernel sections (dbar_Q = 0, anti-self-adjoint r) and the norm of
// L on them; the containment in ker L is reported at solution bases.
struct KernelSectionReport {
  long section_space_dim = 0;
  long l_kernel_dim = 0;
  double worst_l_norm = 0.0;  // max ||L e|| over unit holomorphic sections
};
KernelSectionReport kernel_section_report(const MetricBase& base, const LinearOperator& op);

}  // namespace invgeo

#endif
