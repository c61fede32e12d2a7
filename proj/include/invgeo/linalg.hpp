#ifndef INVGEO_LINALG_HPP
#define INVGEO_LINALG_HPP

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "invgeo/forms.hpp"
#include "invgeo/hermitian.hpp"

namespace invgeo {

// Coordinates of complexified k-form spaces in the canonical e^I basis.
inline Eigen::VectorXcd form_to_vector(const Form& a) {
  auto masks = degree_masks(a.dim(), a.degree());
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero((long)masks.size());
  for (size_t i = 0; i < masks.size(); ++i) v((long)i) = a.coeff(masks[i]);
  return v;
}

inline Form vector_to_form(const Eigen::VectorXcd& v, int dim, int degree) {
  auto masks = degree_masks(dim, degree);
  Form a(dim, degree);
  for (size_t i = 0; i < masks.size(); ++i)
    if (v((long)i) != cd(0.0)) a.set(masks[i], v((long)i));
  return a;
}

// Matrix of a linear map between form degrees, columns = images of e^I.
inline Eigen::MatrixXcd operator_matrix(int dim, int deg_from, int deg_to,
                                        const std::function<Form(const Form&)>& op) {
  auto from = degree_masks(dim, deg_from);
  long rows = (long)degree_masks(dim, deg_to).size();
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(rows, (long)from.size());
  for (size_t j = 0; j < from.size(); ++j)
    M.col((long)j) = form_to_vector(op(Form::basis(dim, from[j])));
  return M;
}

// Orthonormal basis (w.r.t. Hermitian Gram G) of the column span of A;
// rank cut at rel_tol relative to the largest singular value.
Eigen::MatrixXcd span_orthonormal(const Eigen::MatrixXcd& A, const Eigen::MatrixXd& G,
                                  double rel_tol = 1e-9);

// Orthogonal projector (w.r.t. G) onto the column span of A.
Eigen::MatrixXcd span_projector(const Eigen::MatrixXcd& A, const Eigen::MatrixXd& G,
                                double rel_tol = 1e-9);

// Basis of the kernel of A (Euclidean SVD, relative threshold).
Eigen::MatrixXcd kernel_basis(const Eigen::MatrixXcd& A, double rel_tol = 1e-9);

long rank_of(const Eigen::MatrixXcd& A, double rel_tol = 1e-9);

// Gram-orthonormal basis of {x in span(C) : A x = 0}: kernel within a subspace.
Eigen::MatrixXcd kernel_in_span(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& C,
                                const Eigen::MatrixXd& G, double rel_tol = 1e-9);

// Distance (G-norm) from v to the column span of A.
double distance_to_span(const Eigen::VectorXcd& v, const Eigen::MatrixXcd& A,
                        const Eigen::MatrixXd& G, double rel_tol = 1e-9);

}  // namespace invgeo

#endif
