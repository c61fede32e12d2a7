#ifndef INVGEO_HERMITIAN_HPP
#define INVGEO_HERMITIAN_HPP

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <utility>

#include "invgeo/forms.hpp"

namespace invgeo {

// Integrable almost complex structure, stored as its action on the covector
// basis: (J a)(X) = a(JX). (1,0)-forms are the +i eigenvectors of this action.
class ComplexStructure {
 public:
  ComplexStructure(const LieModel& model, Eigen::MatrixXd j_covector);

  const Eigen::MatrixXd& covector_matrix() const { return jcov_; }
  Eigen::MatrixXd vector_matrix() const { return jcov_.transpose(); }
  int dim() const { return (int)jcov_.rows(); }
  int n() const { return dim() / 2; }

  Form apply(const Form& a) const;  // multiplicative extension J(e^I) = Je^{i1}^...^Je^{ik}
  Form project(const Form& a, int p, int q) const;
  std::map<std::pair<int, int>, Form> type_decompose(const Form& a) const;

  Form dbar(const LieModel& model, const Form& a) const;  // (0,1)-part of d, typewise
  Form del(const LieModel& model, const Form& a) const;   // (1,0)-part of d, typewise
  Form dc(const LieModel& model, const Form& a) const;    // d^c = i(dbar - del)
  Form ddc(const LieModel& model, const Form& a) const;   // dd^c = 2i del dbar

  // Basis of (1,0)-forms (n columns of covector coefficients).
  const Eigen::MatrixXcd& holomorphic_basis() const { return eta_; }

  double nijenhuis_norm(const LieModel& model) const;

 private:
  Eigen::MatrixXd jcov_;
  Eigen::MatrixXcd eta_;
};

// Hermitian structure: J plus a positive (1,1)-form omega, with the induced
// metric, k-form Gram matrices, Hodge star, Lambda and Lee form. The reference
// volume mu enters the dilaton function.
class HermitianStructure {
 public:
  HermitianStructure(const LieModel& model, ComplexStructure j, Form omega, Form mu);
  // mu defaults to the orientation top-form (coefficient chosen so integral = V).
  HermitianStructure(const LieModel& model, ComplexStructure j, Form omega);

  const LieModel& model() const { return *model_; }
  const ComplexStructure& J() const { return j_; }
  const Form& omega() const { return omega_; }
  const Form& mu() const { return mu_; }
  int n() const { return j_.n(); }
  int dim() const { return j_.dim(); }

  const Eigen::MatrixXd& metric() const { return g_; }
  double min_metric_eigenvalue() const;
  bool positive(double tol = 1e-12) const { return min_metric_eigenvalue() > tol; }

  Form volume_form() const;  // omega^n / n!
  double total_volume() const;

  // Hermitian Gram matrix on complexified k-forms in the canonical e^I basis.
  const Eigen::MatrixXd& gram(int degree) const;

  cd inner(const Form& a, const Form& b) const;        // <a,b> pointwise, sesquilinear
  double l2_norm(const Form& a) const;                 // sqrt(<a,a> * total volume)
  Form star(const Form& a) const;                      // a ^ *b = <a,b> vol
  Form lambda(const Form& a) const;                    // Gram-adjoint of omega ^ .
  double lambda_scalar(const Form& a) const;           // Lambda of a 2-form

  Form lee_form() const;             // unique theta with d om^{n-1} = theta ^ om^{n-1}
  Form lee_form_codifferential() const;  // cross-check route J d* omega

  double dilaton_function() const;   // f with om^n/n! = e^{2f} mu
  double psi_norm_squared(const Form& psi) const;  // ||psi||^2 via the (n,0)-pairing

  Form codifferential(const Form& a) const;  // d* = -(*) d (*) on even-dimensional models

 private:
  const LieModel* model_;
  ComplexStructure j_;
  Form omega_;
  Form mu_;
  Eigen::MatrixXd g_;
  mutable std::map<int, Eigen::MatrixXd> gram_cache_;
};

// Bismut connection check: returns ||nabla^+ psi|| for the invariant data.
double bismut_psi_norm(const HermitianStructure& h, const Form& psi);

}  // namespace invgeo

#endif
