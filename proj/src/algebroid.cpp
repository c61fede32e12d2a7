#include "invgeo/algebroid.hpp"

#include <cmath>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

namespace invgeo {

namespace {

double anomaly_norm(const HermitianStructure& h, const GaugeAlgebra& c, const Form& H,
                    const VForm& theta) {
  VForm F = curvature_of(h.model(), theta);
  Form defect = h.model().d(H) + pairing_wedge(c, F, F);
  return h.l2_norm(defect);
}

// real basis of J-invariant real 2-forms (the real (1,1)-directions)
std::vector<Form> real_11_basis(const HermitianStructure& h) {
  int m = h.dim();
  std::vector<Eigen::VectorXd> cols;
  for (Mask I : degree_masks(m, 2)) {
    Form b = Form::basis(m, I);
    Form sym = 0.5 * (b + h.J().apply(b));
    Eigen::VectorXcd v = form_to_vector(sym);
    cols.push_back(v.real());
    cols.push_back(v.imag());
  }
  long rows = (long)degree_masks(m, 2).size();
  Eigen::MatrixXd A(rows, (long)cols.size());
  for (size_t i = 0; i < cols.size(); ++i) A.col((long)i) = cols[i];
  Eigen::MatrixXcd Q = span_orthonormal(A.cast<cd>(), h.gram(2));
  // columns of the orthonormalized real span may carry complex phases; rephase
  std::vector<Form> out;
  for (long j = 0; j < Q.cols(); ++j) {
    Eigen::VectorXcd v = Q.col(j);
    long imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    cd phase = v(imax) / std::abs(v(imax));
    Eigen::VectorXd w = (v / phase).real();
    if (w.norm() > 1e-12) out.push_back(vector_to_form((w / w.norm()).cast<cd>(), m, 2));
  }
  return out;
}

}  // namespace

StringClassRep StringClassRep::from_tau(const HermitianStructure& h, const GaugeAlgebra& c,
                                        const Form& tau, const VForm& theta, double tol) {
  Form H = cd(0, 2) * h.J().del(h.model(), tau);
  StringClassRep rep = make(h, c, H, theta, tol);
  rep.tau = tau;
  return rep;
}

StringClassRep StringClassRep::make(const HermitianStructure& h, const GaugeAlgebra& c,
                                    const Form& H, const VForm& theta, double tol) {
  double defect = anomaly_norm(h, c, H, theta);
  if (defect > tol)
    throw std::invalid_argument("StringClassRep: ||dH + c(F^F)|| = " + std::to_string(defect));
  Form h30 = h.J().project(H, 3, 0), h21 = h.J().project(H, 2, 1);
  Form rest = H - h30 - h21;
  if (rest.cmax() > 1e-10 * (1.0 + H.cmax()))
    throw std::invalid_argument("StringClassRep: H has components outside (3,0)+(2,1)");
  return {H, theta, std::nullopt};
}

EquivalenceCertificate class_equivalent(const HermitianStructure& h, const GaugeAlgebra& c,
                                        const StringClassRep& r1, const StringClassRep& r2,
                                        double tol) {
  const LieModel& model = h.model();
  Form delta = r2.H - r1.H - chern_simons(model, c, r1.theta) +
               chern_simons(model, c, r2.theta) +
               model.d(pairing_wedge(c, r1.theta, r2.theta));
  // least squares dB = delta over B in Omega^{2,0}, minimal-norm B
  Eigen::MatrixXcd B20 = subspace_pq(h, 2, 0);
  Eigen::MatrixXcd D = d_matrix(model, 2) * B20;
  Eigen::LLT<Eigen::MatrixXd> llt(h.gram(3));
  Eigen::MatrixXcd R = Eigen::MatrixXd(llt.matrixL()).transpose().cast<cd>();
  Eigen::VectorXcd rhs = R * form_to_vector(delta);
  Eigen::MatrixXcd A = R * D;
  EquivalenceCertificate cert;
  if (A.cols() == 0) {
    cert.residual = rhs.norm() * std::sqrt(h.total_volume());
    cert.equivalent = cert.residual <= tol;
    cert.B = Form(h.dim(), 2);
    return cert;
  }
  Eigen::VectorXcd x = A.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs);
  cert.residual = (A * x - rhs).norm() * std::sqrt(h.total_volume());
  cert.equivalent = cert.residual <= tol;
  cert.B = vector_to_form(B20 * x, h.dim(), 2);
  return cert;
}

StringClassRep twist(const HermitianStructure& h, const GaugeAlgebra&,
                     const StringClassRep& r, const Form& beta, double tol) {
  Form ddc = h.J().ddc(h.model(), beta);
  if (h.l2_norm(ddc) > tol)
    throw std::invalid_argument("twist: beta is not dd^c-closed, ||dd^c beta|| = " +
                                std::to_string(h.l2_norm(ddc)));
  StringClassRep out = r;
  out.H = r.H + cd(0, 2) * h.J().del(h.model(), beta);
  if (r.tau && beta.imag_part().cmax() <= 1e-12)
    out.tau = *r.tau + beta;
  else
    out.tau.reset();
  return out;
}

MetricPair metric_from_parameters(const MetricBase& base, const Form& xi, const Mat& s,
                                  int quad_order) {
  const HermitianStructure& h = *base.geometry;
  const LieModel& model = h.model();
  Mat u = cd(0, 1) * s;
  Form dxi = model.d(xi);
  Form move = dxi + h.J().apply(dxi);  // 2 (d xi)^{1,1}
  Form r = donaldson_r(model, h.J(), *base.algebra, base.theta0, u, quad_order).r_tilde;
  MetricPair out;
  out.omega = (base.omega0 + move + r).real_part();
  out.u = u;
  VForm theta_h = chern_connection(h.J(), base.theta0, u);
  VForm F = curvature_of(model, theta_h);
  HermitianStructure candidate(model, h.J(), out.omega, h.mu());
  out.positive = candidate.positive();
  Form anomaly = h.J().ddc(model, out.omega) - pairing_wedge(*base.algebra, F, F);
  out.anomaly_defect = h.l2_norm(anomaly);
  return out;
}

double KernelSectionImage::norm(const HermitianStructure& h) const {
  double a = l2_norm(h, ad_part);
  double f = h.l2_norm(form_part);
  return std::sqrt(a * a + f * f);
}

KernelSectionImage dbar_kernel_section(const HermitianStructure& h, const GaugeAlgebra& c,
                                       const VForm& theta, const Form& xi, const Mat& s) {
  const LieModel& model = h.model();
  Mat r = -0.25 * s;
  VForm rform(model.dim(), 0, (int)r.rows());
  rform.set(0, r);
  VForm dr = covariant_d(model, theta, rform);  // [theta, r] on invariant sections
  KernelSectionImage out;
  out.ad_part = project_type(h.J(), dr, 0, 1);
  Form xi10 = h.J().project(xi, 1, 0);
  VForm F11 = project_type(h.J(), curvature_of(model, theta), 1, 1);
  out.form_part = h.J().dbar(model, cd(2.0) * xi10) + 2.0 * pairing_form(c, r, F11);
  return out;
}

bool positive_class_invariant(const HermitianStructure& h, const Form& tau) {
  // feasibility: real (1,1) omega and B in Omega^{2,0} with
  // 2i del omega = 2i del tau + dB and omega positive definite
  const LieModel& model = h.model();
  std::vector<Form> basis11 = real_11_basis(h);
  Eigen::MatrixXcd B20 = subspace_pq(h, 2, 0);
  long n3 = (long)degree_masks(h.dim(), 3).size();
  long nw = (long)basis11.size(), nb = B20.cols();
  Eigen::MatrixXd A(2 * n3, nw + 2 * nb);
  auto pack = [&](const Eigen::VectorXcd& v, long col) {
    A.block(0, col, n3, 1) = v.real();
    A.block(n3, col, n3, 1) = v.imag();
  };
  for (long j = 0; j < nw; ++j)
    pack(form_to_vector(cd(0, 2) * h.J().del(model, basis11[j])), j);
  Eigen::MatrixXcd D = d_matrix(model, 2) * B20;
  for (long j = 0; j < nb; ++j) {
    pack(-D.col(j), nw + 2 * j);
    pack(-cd(0, 1) * D.col(j), nw + 2 * j + 1);
  }
  Eigen::VectorXcd target = form_to_vector(cd(0, 2) * h.J().del(model, tau));
  Eigen::VectorXd b(2 * n3);
  b.head(n3) = target.real();
  b.tail(n3) = target.imag();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXd x0 = svd.solve(b);
  if ((A * x0 - b).norm() > 1e-9 * (1.0 + b.norm())) return false;  // class not reachable
  Eigen::MatrixXcd N = kernel_basis(A.cast<cd>());
  auto min_eig = [&](const Eigen::VectorXd& x) {
    Form omega(h.dim(), 2);
    for (long j = 0; j < nw; ++j) omega += x(j) * basis11[j];
    try {
      HermitianStructure cand(model, h.J(), omega.real_part(), h.mu());
      return cand.min_metric_eigenvalue();
    } catch (...) {
      return -1.0;
    }
  };
  Eigen::VectorXd x = x0;
  double best = min_eig(x);
  double step = 1.0;
  for (int iteration = 0; iteration < 400 && best <= 1e-8; ++iteration) {
    bool improved = false;
    for (long j = 0; j < N.cols(); ++j) {
      for (double sgn : {1.0, -1.0}) {
        Eigen::VectorXd cand = x + sgn * step * N.col(j).real();
        double v = min_eig(cand);
        if (v > best) {
          best = v;
          x = cand;
          improved = true;
        }
      }
    }
    if (!improved) {
      step *= 0.5;
      if (step < 1e-6) break;
    } else {
      step *= 1.6;
    }
  }
  return best > 1e-8;
}

}  // namespace invgeo
