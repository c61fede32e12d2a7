#include "invgeo/linalg.hpp"

#include <stdexcept>

namespace invgeo {

namespace {

// Cholesky-style factor of a positive Hermitian Gram matrix.
Eigen::MatrixXcd gram_factor(const Eigen::MatrixXd& G) {
  Eigen::LLT<Eigen::MatrixXd> llt(G);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("gram_factor: Gram matrix not positive definite");
  return Eigen::MatrixXd(llt.matrixL()).transpose().cast<cd>();  // G = L L^T, factor = L^T
}

}  // namespace

Eigen::MatrixXcd span_orthonormal(const Eigen::MatrixXcd& A, const Eigen::MatrixXd& G,
                                  double rel_tol) {
  if (A.cols() == 0) return Eigen::MatrixXcd::Zero(A.rows(), 0);
  Eigen::MatrixXcd R = gram_factor(G);  // x^H G y = (Rx)^H (Ry)
  Eigen::MatrixXcd B = R * A;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(B, Eigen::ComputeThinU);
  double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  long r = 0;
  for (long i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > rel_tol * smax && svd.singularValues()(i) > 0) ++r;
  Eigen::MatrixXcd U = svd.matrixU().leftCols(r);
  return R.triangularView<Eigen::Upper>().solve(U);
}

Eigen::MatrixXcd span_projector(const Eigen::MatrixXcd& A, const Eigen::MatrixXd& G,
                                double rel_tol) {
  Eigen::MatrixXcd Q = span_orthonormal(A, G, rel_tol);
  return Q * Q.adjoint() * G.cast<cd>();
}

Eigen::MatrixXcd kernel_basis(const Eigen::MatrixXcd& A, double rel_tol) {
  if (A.rows() == 0)
    return Eigen::MatrixXcd::Identity(A.cols(), A.cols());
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeFullV);
  double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  long r = 0;
  for (long i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > rel_tol * smax && svd.singularValues()(i) > 0) ++r;
  return svd.matrixV().rightCols(A.cols() - r);
}

long rank_of(const Eigen::MatrixXcd& A, double rel_tol) {
  if (A.rows() == 0 || A.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
  double smax = svd.singularValues()(0);
  long r = 0;
  for (long i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > rel_tol * smax && svd.singularValues()(i) > 0) ++r;
  return r;
}

Eigen::MatrixXcd kernel_in_span(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& C,
                                const Eigen::MatrixXd& G, double rel_tol) {
  Eigen::MatrixXcd Q = span_orthonormal(C, G, rel_tol);
  if (Q.cols() == 0) return Q;
  Eigen::MatrixXcd K = kernel_basis(A * Q, rel_tol);
  return Q * K;
}

double distance_to_span(const Eigen::VectorXcd& v, const Eigen::MatrixXcd& A,
                        const Eigen::MatrixXd& G, double rel_tol) {
  Eigen::MatrixXcd P = span_projector(A, G, rel_tol);
  Eigen::VectorXcd w = v - P * v;
  return std::sqrt(std::abs((w.adjoint() * G.cast<cd>() * w)(0, 0).real()));
}

}  // namespace invgeo
