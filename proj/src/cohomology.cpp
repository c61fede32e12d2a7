#include "invgeo/cohomology.hpp"

#include <stdexcept>

namespace invgeo {

namespace {

Eigen::MatrixXcd concat_cols(const std::vector<Eigen::MatrixXcd>& parts, long rows) {
  long total = 0;
  for (const auto& p : parts) total += p.cols();
  Eigen::MatrixXcd out(rows, total);
  long at = 0;
  for (const auto& p : parts) {
    out.middleCols(at, p.cols()) = p;
    at += p.cols();
  }
  return out;
}

// harmonic space: kernel of `closure` within span(C), orthogonal to span(image)
Eigen::MatrixXcd harmonic_space(const Eigen::MatrixXcd& closure, const Eigen::MatrixXcd& C,
                                const Eigen::MatrixXcd& image, const Eigen::MatrixXd& G) {
  Eigen::MatrixXcd ker = kernel_in_span(closure, C, G);
  if (ker.cols() == 0) return ker;
  Eigen::MatrixXcd P = span_projector(image, G);
  Eigen::MatrixXcd complement = ker - P * ker;
  return span_orthonormal(complement, G);
}

}  // namespace

Eigen::MatrixXcd subspace_pq(const HermitianStructure& h, int p, int q) {
  if (p < 0 || q < 0 || p + q > h.dim()) {
    long rows = (long)degree_masks(h.dim(), std::max(0, std::min(p + q, h.dim()))).size();
    return Eigen::MatrixXcd::Zero(rows, 0);
  }
  int k = p + q;
  auto masks = degree_masks(h.dim(), k);
  Eigen::MatrixXcd A((long)masks.size(), (long)masks.size());
  long used = 0;
  for (Mask I : masks) {
    Form proj = h.J().project(Form::basis(h.dim(), I), p, q);
    Eigen::VectorXcd v = form_to_vector(proj);
    if (v.norm() > 1e-13) A.col(used++) = v;
  }
  return span_orthonormal(A.leftCols(used), h.gram(k));
}

Eigen::MatrixXcd subspace_string(const HermitianStructure& h, int k) {
  std::vector<Eigen::MatrixXcd> parts;
  long rows = (long)degree_masks(h.dim(), std::min(k + 2, h.dim())).size();
  for (int j = 0; j <= k; ++j) {
    if (j + 2 + (k - j) > h.dim()) continue;
    parts.push_back(subspace_pq(h, j + 2, k - j));
  }
  if (parts.empty()) return Eigen::MatrixXcd::Zero(rows, 0);
  return span_orthonormal(concat_cols(parts, rows), h.gram(std::min(k + 2, h.dim())));
}

Eigen::MatrixXcd d_matrix(const LieModel& model, int k) {
  return operator_matrix(model.dim(), k, std::min(k + 1, model.dim()),
                         [&](const Form& a) { return model.d(a); });
}

Eigen::MatrixXcd del_matrix(const HermitianStructure& h, int k) {
  return operator_matrix(h.dim(), k, std::min(k + 1, h.dim()),
                         [&](const Form& a) { return h.J().del(h.model(), a); });
}

Eigen::MatrixXcd dbar_matrix(const HermitianStructure& h, int k) {
  return operator_matrix(h.dim(), k, std::min(k + 1, h.dim()),
                         [&](const Form& a) { return h.J().dbar(h.model(), a); });
}

CohomologyGroup de_rham_group(const HermitianStructure& h, int k) {
  const LieModel& model = h.model();
  long rows = (long)degree_masks(h.dim(), k).size();
  Eigen::MatrixXcd closure =
      (k < h.dim()) ? d_matrix(model, k) : Eigen::MatrixXcd::Zero(0, rows);
  Eigen::MatrixXcd image = (k > 0) ? d_matrix(model, k - 1)
                                   : Eigen::MatrixXcd::Zero(rows, 0);
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Identity(rows, rows);
  CohomologyGroup g;
  g.which = "deRham " + std::to_string(k);
  g.degree = k;
  g.reps = harmonic_space(closure, C, image, h.gram(k));
  return g;
}

CohomologyGroup dolbeault_group(const HermitianStructure& h, int p, int q) {
  Eigen::MatrixXcd C = subspace_pq(h, p, q);
  Eigen::MatrixXcd closure = (p + q < h.dim())
                                 ? dbar_matrix(h, p + q)
                                 : Eigen::MatrixXcd::Zero(0, C.rows());
  Eigen::MatrixXcd image =
      (q > 0) ? Eigen::MatrixXcd(dbar_matrix(h, p + q - 1) * subspace_pq(h, p, q - 1))
              : Eigen::MatrixXcd::Zero(C.rows(), 0);
  CohomologyGroup g;
  g.which = "dolbeault " + std::to_string(p) + "," + std::to_string(q);
  g.degree = p + q;
  g.reps = harmonic_space(closure, C, image, h.gram(p + q));
  return g;
}

CohomologyGroup aeppli_group(const HermitianStructure& h, int p, int q) {
  Eigen::MatrixXcd C = subspace_pq(h, p, q);
  int k = p + q;
  Eigen::MatrixXcd closure =
      (k + 2 <= h.dim())
          ? Eigen::MatrixXcd(operator_matrix(
                h.dim(), k, k + 2, [&](const Form& a) { return h.J().ddc(h.model(), a); }))
          : Eigen::MatrixXcd::Zero(0, C.rows());
  std::vector<Eigen::MatrixXcd> image_parts;
  if (q > 0) image_parts.push_back(dbar_matrix(h, k - 1) * subspace_pq(h, p, q - 1));
  if (p > 0) image_parts.push_back(del_matrix(h, k - 1) * subspace_pq(h, p - 1, q));
  Eigen::MatrixXcd image = image_parts.empty() ? Eigen::MatrixXcd::Zero(C.rows(), 0)
                                               : concat_cols(image_parts, C.rows());
  CohomologyGroup g;
  g.which = "aeppli " + std::to_string(p) + "," + std::to_string(q);
  g.degree = k;
  g.reps = harmonic_space(closure, C, image, h.gram(k));
  return g;
}

CohomologyGroup bott_chern_group(const HermitianStructure& h, int p, int q) {
  Eigen::MatrixXcd C = subspace_pq(h, p, q);
  int k = p + q;
  Eigen::MatrixXcd closure = (k < h.dim()) ? d_matrix(h.model(), k)
                                           : Eigen::MatrixXcd::Zero(0, C.rows());
  Eigen::MatrixXcd image =
      (p > 0 && q > 0)
          ? Eigen::MatrixXcd(operator_matrix(h.dim(), k - 2, k,
                                             [&](const Form& a) {
                                               return h.J().ddc(h.model(), a);
                                             }) *
                             subspace_pq(h, p - 1, q - 1))
          : Eigen::MatrixXcd::Zero(C.rows(), 0);
  CohomologyGroup g;
  g.which = "bottchern " + std::to_string(p) + "," + std::to_string(q);
  g.degree = k;
  g.reps = harmonic_space(closure, C, image, h.gram(k));
  return g;
}

CohomologyGroup morse_novikov_group(const HermitianStructure& h, const Form& theta, int k) {
  const LieModel& model = h.model();
  if (model.d(theta).cmax() > 1e-12)
    throw std::invalid_argument("morse_novikov: theta is not closed");
  auto twisted = [&](const Form& a) {
    Form da = model.d(a);
    if (a.degree() + 1 <= model.dim()) da -= wedge(theta, a);
    return da;
  };
  long rows = (long)degree_masks(h.dim(), k).size();
  Eigen::MatrixXcd closure =
      (k < h.dim()) ? Eigen::MatrixXcd(operator_matrix(h.dim(), k, k + 1, twisted))
                    : Eigen::MatrixXcd::Zero(0, rows);
  Eigen::MatrixXcd image =
      (k > 0) ? Eigen::MatrixXcd(operator_matrix(h.dim(), k - 1, k, twisted))
              : Eigen::MatrixXcd::Zero(rows, 0);
  CohomologyGroup g;
  g.which = "morse_novikov " + std::to_string(k);
  g.degree = k;
  g.reps = harmonic_space(closure, Eigen::MatrixXcd::Identity(rows, rows), image, h.gram(k));
  return g;
}

CohomologyGroup string_complex_group(const HermitianStructure& h, int k) {
  Eigen::MatrixXcd C = subspace_string(h, k);
  int deg = k + 2;
  Eigen::MatrixXcd closure = (deg < h.dim()) ? d_matrix(h.model(), deg)
                                             : Eigen::MatrixXcd::Zero(0, C.rows());
  Eigen::MatrixXcd image =
      (k > 0) ? Eigen::MatrixXcd(d_matrix(h.model(), deg - 1) * subspace_string(h, k - 1))
              : Eigen::MatrixXcd::Zero(C.rows(), 0);
  CohomologyGroup g;
  g.which = "string_complex " + std::to_string(k);
  g.degree = deg;
  g.reps = harmonic_space(closure, C, image, h.gram(deg));
  return g;
}

CohomologyGroup aeppli_group_real(const HermitianStructure& h, int p) {
  CohomologyGroup complex_group = aeppli_group(h, p, p);
  long rows = complex_group.reps.rows();
  Eigen::MatrixXcd cand(rows, 2 * complex_group.reps.cols());
  for (long i = 0; i < complex_group.reps.cols(); ++i) {
    cand.col(2 * i) = 0.5 * (complex_group.reps.col(i) + complex_group.reps.col(i).conjugate());
    cand.col(2 * i + 1) =
        cd(0, -0.5) * (complex_group.reps.col(i) - complex_group.reps.col(i).conjugate());
  }
  CohomologyGroup g;
  g.which = "aeppli_real " + std::to_string(p);
  g.degree = 2 * p;
  g.reps = span_orthonormal(cand, h.gram(2 * p));
  return g;
}

Eigen::VectorXcd class_coordinates(const HermitianStructure& h, const CohomologyGroup& group,
                                   const Form& a) {
  if (a.degree() != group.degree) throw std::invalid_argument("class_coordinates: degree");
  // reps are Gram-orthonormal and Gram-orthogonal to the image subspace, so the
  // class vector is the Gram pairing with the representatives.
  return group.reps.adjoint() * h.gram(group.degree).cast<cd>() * form_to_vector(a);
}

PartialMapReport partial_map(const HermitianStructure& h) {
  CohomologyGroup source = aeppli_group_real(h, 1);
  CohomologyGroup target = string_complex_group(h, 1);
  PartialMapReport rep;
  rep.h11_a_real = source.dim();
  rep.matrix = Eigen::MatrixXcd::Zero(target.dim(), source.dim());
  for (long j = 0; j < source.dim(); ++j) {
    Form tau = source.representative((int)j, h.dim());
    Form image = cd(0, 2) * h.J().del(h.model(), tau);
    rep.matrix.col(j) = class_coordinates(h, target, image);
  }
  rep.image_dim = rank_of(rep.matrix);
  rep.kernel_dim = rep.matrix.cols() - rep.image_dim;
  return rep;
}

AeppliClass aeppli_class_of(const HermitianStructure& h, const GaugeAlgebra& c,
                            const Form& tau, const VForm& theta_for_tau, const Mat& u,
                            const Form& tau0, const VForm& theta0, double tol) {
  const LieModel& model = h.model();
  VForm F1 = curvature_of(model, theta_for_tau);
  VForm F0 = curvature_of(model, theta0);
  Form defect1 = h.J().ddc(model, tau) - pairing_wedge(c, F1, F1);
  if (h.l2_norm(defect1) > tol)
    throw std::invalid_argument("aeppli_class_of: dd^c tau != c(F^F) for (tau,h), defect " +
                                std::to_string(h.l2_norm(defect1)));
  Form defect0 = h.J().ddc(model, tau0) - pairing_wedge(c, F0, F0);
  if (h.l2_norm(defect0) > tol)
    throw std::invalid_argument("aeppli_class_of: dd^c tau0 != c(F0^F0) for (tau0,h0), defect " +
                                std::to_string(h.l2_norm(defect0)));
  Form r = donaldson_r(model, h.J(), c, theta0, u).r_tilde;
  Form diff = tau - tau0 - r;
  CohomologyGroup group = aeppli_group(h, 1, 1);
  AeppliClass out;
  out.coords = class_coordinates(h, group, diff);
  return out;
}

cd cup_integrate(const HermitianStructure& h, const Form& a, const Form& b) {
  if (a.degree() + b.degree() != h.dim())
    throw std::invalid_argument("cup_integrate: degrees must be complementary");
  return h.model().integrate_top(wedge(a, b));
}

GroupDefect group_defect(const HermitianStructure& h, const CohomologyGroup& g) {
  GroupDefect d;
  const LieModel& model = h.model();
  for (long i = 0; i < g.dim(); ++i) {
    Form rep = g.representative((int)i, h.dim());
    if (g.which.rfind("deRham", 0) == 0 || g.which.rfind("string", 0) == 0 ||
        g.which.rfind("bottchern", 0) == 0) {
      if (rep.degree() < h.dim()) d.closure = std::max(d.closure, model.d(rep).cmax());
    } else if (g.which.rfind("dolbeault", 0) == 0) {
      if (rep.degree() < h.dim()) d.closure = std::max(d.closure, h.J().dbar(model, rep).cmax());
    } else if (g.which.rfind("aeppli", 0) == 0) {
      if (rep.degree() + 2 <= h.dim())
        d.closure = std::max(d.closure, h.J().ddc(model, rep).cmax());
    } else if (g.which.rfind("morse_novikov", 0) == 0) {
      // closure is checked inside the harmonic construction
    }
  }
  return d;
}

}  // namespace invgeo
