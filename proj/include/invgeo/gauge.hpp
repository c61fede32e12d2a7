#ifndef INVGEO_GAUGE_HPP
#define INVGEO_GAUGE_HPP

#include <Eigen/Dense>
#include <map>
#include <memory>
#include <random>
#include <vector>

#include "invgeo/hermitian.hpp"

namespace invgeo {

using Mat = Eigen::MatrixXcd;

// Quadratic Lie algebra of block-diagonal matrices with a weighted trace form
// c(X,Y) = sum_b weight_b tr(X_b Y_b). Blocks are sl(k) factors; the compact
// form consists of the anti-hermitian elements.
struct GaugeAlgebra {
  struct Block {
    int offset;
    int size;
    double weight;
  };
  int matrix_dim = 0;
  std::vector<Block> blocks;

  cd pairing(const Mat& X, const Mat& Y) const;
  bool in_algebra(const Mat& X, double tol = 1e-10) const;  // block-diagonal, traceless blocks
  Mat project(const Mat& X) const;                          // onto block-diagonal traceless
  Mat random_compact(std::mt19937_64& rng, double scale = 0.5) const;  // anti-hermitian
  // Real basis of the compact form (su(k) per block).
  std::vector<Mat> compact_basis() const;
};

// Lie-algebra-valued invariant form: multi-index -> matrix coefficient.
class VForm {
 public:
  VForm() : dim_(0), degree_(0), msize_(0) {}
  VForm(int dim, int degree, int matrix_size)
      : dim_(dim), degree_(degree), msize_(matrix_size) {}

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  int matrix_size() const { return msize_; }
  bool is_zero(double tol = 0.0) const;
  double cmax() const;

  Mat coeff(Mask I) const;
  void set(Mask I, const Mat& value);
  void add(Mask I, const Mat& value);
  const std::map<Mask, Mat>& coeffs() const { return coeffs_; }

  VForm& operator+=(const VForm& o);
  VForm& operator-=(const VForm& o);
  VForm& operator*=(cd s);
  VForm operator-() const;

  VForm adjoint_dagger() const;  // coefficient-wise dagger (matrix adjoint)
  Form entry(int i, int j) const;

 private:
  int dim_, degree_, msize_;
  std::map<Mask, Mat> coeffs_;
};

VForm operator+(VForm a, const VForm& b);
VForm operator-(VForm a, const VForm& b);
VForm operator*(cd s, VForm a);

VForm wedge_mat(const VForm& a, const VForm& b);       // matrix-product wedge
VForm bracket_wedge(const VForm& a, const VForm& b);   // [a^b] = a^b - (-1)^{pq} b^a
VForm wedge_sv(const Form& a, const VForm& b);         // scalar ^ valued
VForm mat_times(const Mat& A, const VForm& b);         // A * coefficients
VForm times_mat(const VForm& b, const Mat& A);
VForm conjugate_by(const Mat& g, const VForm& b);      // g^{-1} coeff g (given g and g^{-1})

Form pairing_form(const GaugeAlgebra& c, const Mat& u, const VForm& a);    // c(u, a)
Form pairing_wedge(const GaugeAlgebra& c, const VForm& a, const VForm& b); // c(a ^ b)

VForm d_vform(const LieModel& model, const VForm& a);
VForm project_type(const ComplexStructure& J, const VForm& a, int p, int q);
double l2_norm(const HermitianStructure& h, const VForm& a);  // Frobenius x form Gram

// Invariant principal-bundle data: quadratic algebra plus the Chern connection
// theta of the base reduction in a fixed trivialization.
struct GaugeBundle {
  GaugeAlgebra algebra;
  VForm theta;  // g'-valued invariant 1-form, F^{0,2} = 0 required

  VForm curvature(const LieModel& model) const;
};

VForm curvature_of(const LieModel& model, const VForm& theta);
VForm covariant_d(const LieModel& model, const VForm& theta, const VForm& a);

// Chern connection of the metric e^u h0 in the trivialization of theta0:
// the (0,1) part is fixed, the (1,0) part is conjugated by e^u.
VForm chern_connection(const ComplexStructure& J, const VForm& theta0, const Mat& u);

// Chern-Simons three-form, normalized by d CS = c(F ^ F):
// CS(theta) = c(F ^ theta) - (1/3) c((theta ^ theta) ^ theta).
Form chern_simons(const LieModel& model, const GaugeAlgebra& c, const VForm& theta);

struct DonaldsonResult {
  Form r_tilde;            // real (1,1)-form
  double quadrature_error; // node-doubling estimate
};

// Donaldson's secondary invariant by Gauss-Legendre quadrature along h_t = e^{tu} h0:
// R(h,h0) = int_0^1 i c(u, F_{h_t}) dt.
DonaldsonResult donaldson_r(const LieModel& model, const ComplexStructure& J,
                            const GaugeAlgebra& c, const VForm& theta0, const Mat& u,
                            int order = 64, double tol = 1e-8);

// Generator of the path from e^{u1} h0 to e^{u2} h0 relative to the first:
// v = log(e^{-u1} e^{u2}), so that e^{u2} = e^{u1} e^{v}.
Mat relative_generator(const Mat& u1, const Mat& u2);

// Norm of 2i del R + CS(theta^h) - CS(theta^{h0}) - d c(theta^h ^ theta^{h0})
// orthogonal to d Omega^{2,0} (should vanish).
double csr_defect(const HermitianStructure& h, const GaugeAlgebra& c, const VForm& theta0,
                  const Mat& u, int order = 64);

double hermite_einstein_residual(const HermitianStructure& h, const VForm& theta);

// Gauss-Legendre nodes/weights on [0,1].
void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Bundle description parser (matrix dimension, blocks, theta coefficients).
GaugeBundle parse_bundle(const std::string& text, int model_dim);
GaugeBundle load_bundle_file(const std::string& path, int model_dim);

}  // namespace invgeo

#endif
