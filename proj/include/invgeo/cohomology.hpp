#ifndef INVGEO_COHOMOLOGY_HPP
#define INVGEO_COHOMOLOGY_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "invgeo/gauge.hpp"
#include "invgeo/hermitian.hpp"
#include "invgeo/linalg.hpp"

namespace invgeo {

// Harmonic presentation of an invariant cohomology group: representatives are
// Gram-orthonormal, closed for the defining operator and orthogonal to the
// image subspace. Coordinates live in the canonical basis of Lambda^degree.
struct CohomologyGroup {
  std::string which;     // "deRham k" | "dolbeault p,q" | "aeppli p,q" | ...
  int degree = 0;        // ambient form degree
  Eigen::MatrixXcd reps; // columns = harmonic representatives
  long dim() const { return reps.cols(); }

  Form representative(int i, int dim_model) const {
    return vector_to_form(reps.col(i), dim_model, degree);
  }
};

struct AeppliClass {
  Eigen::VectorXcd coords;  // coefficients in the harmonic basis of H^{1,1}_A
  double norm() const { return coords.norm(); }
};

// Span matrices (columns in canonical Lambda^k coordinates).
Eigen::MatrixXcd subspace_pq(const HermitianStructure& h, int p, int q);
Eigen::MatrixXcd subspace_string(const HermitianStructure& h, int k);  // Omega^{<= k}
Eigen::MatrixXcd d_matrix(const LieModel& model, int k);
Eigen::MatrixXcd del_matrix(const HermitianStructure& h, int k);
Eigen::MatrixXcd dbar_matrix(const HermitianStructure& h, int k);

CohomologyGroup de_rham_group(const HermitianStructure& h, int k);
CohomologyGroup dolbeault_group(const HermitianStructure& h, int p, int q);
CohomologyGroup aeppli_group(const HermitianStructure& h, int p, int q);
CohomologyGroup bott_chern_group(const HermitianStructure& h, int p, int q);
CohomologyGroup morse_novikov_group(const HermitianStructure& h, const Form& theta, int k);
CohomologyGroup string_complex_group(const HermitianStructure& h, int k);

// Real harmonic representatives of H^{p,p}_A (conjugation-fixed subspace).
CohomologyGroup aeppli_group_real(const HermitianStructure& h, int p);

// Class of a dd^c-closed (p,q)-form in the harmonic basis of the group.
Eigen::VectorXcd class_coordinates(const HermitianStructure& h, const CohomologyGroup& group,
                                   const Form& a);

struct PartialMapReport {
  Eigen::MatrixXcd matrix;  // [tau] -> [2i del tau], bases: real H^{1,1}_A -> H^1(Omega^{<=})
  long kernel_dim = 0;
  long image_dim = 0;
  long h11_a_real = 0;
};

// The del-induced map H^{1,1}_A(R) -> H^1(Omega^{<= .}).
PartialMapReport partial_map(const HermitianStructure& h);

// Aeppli class of (tau, h = e^u h0) against (tau0, h0): [tau - tau0 - R(h,h0)].
// Both pairs must satisfy dd^c tau = c(F ^ F) up to `tol`.
AeppliClass aeppli_class_of(const HermitianStructure& h, const GaugeAlgebra& c,
                            const Form& tau, const VForm& theta0_for_tau, const Mat& u,
                            const Form& tau0, const VForm& theta0, double tol = 1e-8);

// Integration pairing of class representatives of complementary degree.
cd cup_integrate(const HermitianStructure& h, const Form& a, const Form& b);

// Residuals of the defining conditions for every representative (max over reps).
struct GroupDefect {
  double closure = 0.0;       // defining closure conditions
  double orthogonality = 0.0; // against the image subspace
};
GroupDefect group_defect(const HermitianStructure& h, const CohomologyGroup& g);

}  // namespace invgeo

#endif
