#include "invgeo/models.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace invgeo {

namespace {

Form two_form(int m, int i, int j, cd c = 1.0) {
  Form f(m, 2);
  Mask I = (Mask(1) << (i - 1)) | (Mask(1) << (j - 1));
  f.set(I, c * double(merge_sign(Mask(1) << (i - 1), Mask(1) << (j - 1))));
  return f;
}

Mat sl2_E() {
  Mat E = Mat::Zero(2, 2);
  E(0, 1) = 1.0;
  return E;
}

Mat sl2_H() {
  Mat H = Mat::Zero(2, 2);
  H(0, 0) = 1.0;
  H(1, 1) = -1.0;
  return H;
}

// theta = theta01 + theta10 with theta10 = -(theta01 coefficients)^dagger on the
// conjugate covectors; inputs are (0,1) coefficient matrices over eta-bar directions.
VForm unitary_connection(const ComplexStructure& J, int m, int msize,
                         const std::vector<std::pair<Form, Mat>>& antihol_terms) {
  VForm theta(m, 1, msize);
  for (const auto& [etabar, A] : antihol_terms) {
    for (const auto& [I, c] : etabar.coeffs()) {
      theta.add(I, c * A);
      theta.add(I, -std::conj(c) * A.adjoint());
    }
  }
  (void)J;
  return theta;
}

}  // namespace

LieModel hopf_model(double volume) {
  int m = 4;
  std::vector<Form> de;
  de.push_back(two_form(m, 2, 3));  // de^1 = e^{23}
  de.push_back(two_form(m, 3, 1));  // de^2 = e^{31}
  de.push_back(two_form(m, 1, 2));  // de^3 = e^{12}
  de.push_back(Form(m, 2));         // de^4 = 0
  return LieModel(m, std::move(de), {4, 1, 2, 3}, volume);
}

ComplexStructure hopf_complex_structure(const LieModel& model, double x, double y) {
  if (x <= 0.0) throw std::invalid_argument("hopf: need Re w > 0 for the stored orientation");
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(4, 4);
  // J e^1 = (y/x) e^1 + ((x^2+y^2)/x) e^4;  J e^4 = -(1/x) e^1 - (y/x) e^4
  B(0, 0) = y / x;
  B(3, 0) = (x * x + y * y) / x;
  B(0, 3) = -1.0 / x;
  B(3, 3) = -y / x;
  // J e^2 = -e^3, J e^3 = e^2
  B(2, 1) = -1.0;
  B(1, 2) = 1.0;
  return ComplexStructure(model, B);
}

Form hopf_psi(const LieModel& model, double x, double y) {
  int m = model.dim();
  Form eta1(m, 1);
  eta1.set(Mask(1) << 0, cd(0, 1));
  eta1.set(Mask(1) << 3, cd(x, y));
  Form eta2(m, 1);
  eta2.set(Mask(1) << 1, 1.0);
  eta2.set(Mask(1) << 2, cd(0, 1));
  return wedge(eta1, eta2);
}

Form hopf_omega(const LieModel& model, double a, double t) {
  return two_form(model.dim(), 4, 1, a) + two_form(model.dim(), 2, 3, t);
}

Form hopf_mu(const LieModel& model, double x) {
  // psi ^ conj(psi) = 4x e^{4123}
  Form mu(model.dim(), 4);
  Mask full = (Mask(1) << 4) - 1;
  mu.set(full, -4.0 * x);  // e^{4123} = -e^{1234}
  return mu;
}

CatalogEntry load_hopf(const HopfParams& p, bool normalize_psi) {
  if (p.x <= 0.0) throw std::invalid_argument("hopf: x > 0 required");
  if (p.a <= 0.0 || p.t <= 0.0) throw std::invalid_argument("hopf: a,t > 0 required for positivity");
  CatalogEntry e;
  e.name = "hopf";
  e.model = std::make_shared<LieModel>(hopf_model(p.volume));
  ComplexStructure J = hopf_complex_structure(*e.model, p.x, p.y);
  Form omega = hopf_omega(*e.model, p.a, p.t);
  Form psi = hopf_psi(*e.model, p.x, p.y);
  Form mu = wedge(psi, psi.conj());  // = 4x e^{4123} for w = x + iy
  e.hermitian = std::make_shared<HermitianStructure>(*e.model, J, omega, mu);
  if (!e.hermitian->positive())
    throw std::invalid_argument("hopf: metric not positive for these parameters");
  if (normalize_psi) {
    double norm2 = e.hermitian->psi_norm_squared(psi);
    psi *= 1.0 / std::sqrt(norm2);
    e.psi_normalized = true;
  }
  e.psi = psi;
  e.notes = "diagonal Hopf surface, w = x + iy; solution of the exact twisted system at y=0, t=a/x";
  return e;
}

CatalogEntry load_hopf_su2(const HopfParams& p) {
  CatalogEntry e = load_hopf(p, true);
  e.name = "hopf_su2";
  const int m = 4;
  GaugeAlgebra alg;
  alg.matrix_dim = 2;
  alg.blocks.push_back({0, 2, 1.0});
  // Integrable (0,1)-part: A1 etabar^1 + A2 etabar^2 with [A1,A2] = -(w/2x) A2.
  cd w(p.x, p.y);
  Mat A1 = -(w / (4.0 * p.x)) * sl2_H();
  Mat A2 = sl2_E();
  Form etabar1(m, 1);
  etabar1.set(Mask(1) << 0, cd(0, -1));
  etabar1.set(Mask(1) << 3, std::conj(w));
  Form etabar2(m, 1);
  etabar2.set(Mask(1) << 1, 1.0);
  etabar2.set(Mask(1) << 2, cd(0, -1));
  VForm theta = unitary_connection(e.hermitian->J(), m, 2, {{etabar1, A1}, {etabar2, A2}});
  auto bundle = std::make_shared<GaugeBundle>();
  bundle->algebra = alg;
  bundle->theta = theta;
  // curvature sanity: F^{0,2} must vanish
  VForm F = bundle->curvature(*e.model);
  if (project_type(e.hermitian->J(), F, 0, 2).cmax() > 1e-10)
    throw std::runtime_error("hopf_su2: connection not integrable");
  e.bundle = bundle;
  e.notes += "; SU(2) bundle with curved integrable Chern connection";
  return e;
}

CatalogEntry load_hopf_stdemb(const HopfParams& p, double alpha) {
  CatalogEntry e = load_hopf(p, true);
  e.name = "hopf_stdemb";
  const int m = 4;
  GaugeAlgebra alg;
  alg.matrix_dim = 4;
  alg.blocks.push_back({0, 2, -alpha});
  alg.blocks.push_back({2, 2, alpha});
  cd w(p.x, p.y);
  Mat A1 = Mat::Zero(4, 4), A2 = Mat::Zero(4, 4);
  for (int b = 0; b < 2; ++b) {
    A1.block(2 * b, 2 * b, 2, 2) = -(w / (4.0 * p.x)) * sl2_H();
    A2.block(2 * b, 2 * b, 2, 2) = sl2_E();
  }
  Form etabar1(m, 1);
  etabar1.set(Mask(1) << 0, cd(0, -1));
  etabar1.set(Mask(1) << 3, std::conj(w));
  Form etabar2(m, 1);
  etabar2.set(Mask(1) << 1, 1.0);
  etabar2.set(Mask(1) << 2, cd(0, -1));
  auto bundle = std::make_shared<GaugeBundle>();
  bundle->algebra = alg;
  bundle->theta = unitary_connection(e.hermitian->J(), m, 4, {{etabar1, A1}, {etabar2, A2}});
  VForm F = bundle->curvature(*e.model);
  if (project_type(e.hermitian->J(), F, 0, 2).cmax() > 1e-10)
    throw std::runtime_error("hopf_stdemb: connection not integrable");
  e.bundle = bundle;
  e.notes += "; doubled SU(2) bundle, c = alpha(-tr + tr), c(F^F) = 0";
  return e;
}

CatalogEntry load_torus(int n, std::vector<double> lambda, double volume) {
  if (n < 2 || n > 4) throw std::invalid_argument("torus: n in {2,3,4}");
  int m = 2 * n;
  if (lambda.empty()) lambda.assign(n, 1.0);
  if ((int)lambda.size() != n) throw std::invalid_argument("torus: need n scale factors");
  std::vector<Form> de(m, Form(m, 2));
  std::vector<int> orient(m);
  for (int k = 0; k < m; ++k) orient[k] = k + 1;
  CatalogEntry e;
  e.name = "torus" + std::to_string(m);
  e.model = std::make_shared<LieModel>(m, std::move(de), orient, volume);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m, m);
  for (int k = 0; k < n; ++k) {
    B(2 * k + 1, 2 * k) = -1.0;  // J e^{2k+1} = -e^{2k+2}
    B(2 * k, 2 * k + 1) = 1.0;   // J e^{2k+2} = e^{2k+1}
  }
  ComplexStructure J(*e.model, B);
  Form omega(m, 2);
  for (int k = 0; k < n; ++k) omega += two_form(m, 2 * k + 1, 2 * k + 2, lambda[k]);
  Form psi(m, 0);
  psi.set(0, 1.0);
  for (int k = 0; k < n; ++k) {
    Form eta(m, 1);
    eta.set(Mask(1) << (2 * k), 1.0);
    eta.set(Mask(1) << (2 * k + 1), cd(0, 1));
    psi = wedge(psi, eta);
  }
  double sgn = ((n * (n - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
  Form mu = sgn * std::pow(cd(0, 1), n) * wedge(psi, psi.conj());
  e.hermitian = std::make_shared<HermitianStructure>(*e.model, J, omega, mu.real_part());
  double norm2 = e.hermitian->psi_norm_squared(psi);
  e.psi = (1.0 / std::sqrt(norm2)) * psi;
  e.psi_normalized = true;
  e.notes = "flat torus, holomorphic volume form eta^1^...^eta^n";
  return e;
}

namespace {

// Commuting (0,1)-coefficients B1 = E, B2 = z E over etabar^1, etabar^2 give an
// integrable unitary connection with F = H (eta^1+z eta^2)^(conj), nonflat, not HE.
std::shared_ptr<GaugeBundle> torus_curved_bundle(const CatalogEntry& e, int copies,
                                                 double alpha) {
  int m = e.model->dim();
  int r = 2 * copies;
  GaugeAlgebra alg;
  alg.matrix_dim = r;
  if (copies == 1) {
    alg.blocks.push_back({0, 2, alpha});
  } else {
    alg.blocks.push_back({0, 2, -alpha});
    alg.blocks.push_back({2, 2, alpha});
  }
  Form etabar1(m, 1), etabar2(m, 1);
  etabar1.set(Mask(1) << 0, 1.0);
  etabar1.set(Mask(1) << 1, cd(0, -1));
  etabar2.set(Mask(1) << 2, 1.0);
  etabar2.set(Mask(1) << 3, cd(0, -1));
  Mat B1 = Mat::Zero(r, r), B2 = Mat::Zero(r, r);
  for (int c = 0; c < copies; ++c) {
    B1.block(2 * c, 2 * c, 2, 2) = sl2_E();
    B2.block(2 * c, 2 * c, 2, 2) = 0.7 * sl2_E();
  }
  auto bundle = std::make_shared<GaugeBundle>();
  bundle->algebra = alg;
  bundle->theta = unitary_connection(e.hermitian->J(), m, r, {{etabar1, B1}, {etabar2, B2}});
  return bundle;
}

}  // namespace

CatalogEntry load_torus6_stdemb(double alpha) {
  CatalogEntry e = load_torus(3);
  e.name = "torus6_stdemb";
  e.bundle = torus_curved_bundle(e, 2, alpha);
  e.notes += "; SU(2)xSU(2) bundle, c = alpha(tr - tr), doubled connection so c(F^F) = 0";
  return e;
}

CatalogEntry load_torus6_su2(double alpha) {
  CatalogEntry e = load_torus(3);
  e.name = "torus6_su2";
  e.bundle = torus_curved_bundle(e, 1, alpha);
  e.notes += "; single SU(2) bundle with curved integrable connection";
  return e;
}

CatalogEntry load_su2_r3(double x, double a, double t, double s, double volume) {
  if (x <= 0.0 || a <= 0.0 || t <= 0.0 || s <= 0.0)
    throw std::invalid_argument("su2_r3: positive parameters required");
  int m = 6;
  std::vector<Form> de(m, Form(m, 2));
  de[0] = two_form(m, 2, 3);
  de[1] = two_form(m, 3, 1);
  de[2] = two_form(m, 1, 2);
  CatalogEntry e;
  e.name = "su2_r3";
  e.model = std::make_shared<LieModel>(m, std::move(de), std::vector<int>{4, 1, 2, 3, 5, 6},
                                       volume);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m, m);
  B(0, 0) = 0.0;
  B(3, 0) = x;        // J e^1 = x e^4 (w real)
  B(0, 3) = -1.0 / x; // J e^4 = -(1/x) e^1
  B(2, 1) = -1.0;
  B(1, 2) = 1.0;
  B(5, 4) = -1.0;
  B(4, 5) = 1.0;
  ComplexStructure J(*e.model, B);
  Form omega = two_form(m, 4, 1, a) + two_form(m, 2, 3, t) + two_form(m, 5, 6, s);
  Form eta1(m, 1), eta2(m, 1), eta3(m, 1);
  eta1.set(Mask(1) << 0, cd(0, 1));
  eta1.set(Mask(1) << 3, x);
  eta2.set(Mask(1) << 1, 1.0);
  eta2.set(Mask(1) << 2, cd(0, 1));
  eta3.set(Mask(1) << 4, 1.0);
  eta3.set(Mask(1) << 5, cd(0, 1));
  Form psi = wedge(wedge(eta1, eta2), eta3);
  Form mu = (std::pow(cd(0, 1), 3) * double(((3 * 2 / 2) % 2 == 0) ? 1 : -1)) * wedge(psi, psi.conj());
  e.hermitian = std::make_shared<HermitianStructure>(*e.model, J, omega, mu.real_part());
  double norm2 = e.hermitian->psi_norm_squared(psi);
  e.psi = (1.0 / std::sqrt(norm2)) * psi;
  e.psi_normalized = true;
  e.notes = "S^3 x T^3 product; Z^3 quotient homomorphism affects topology only (metadata)";
  return e;
}

CatalogEntry load_h3() {
  int m = 6;
  std::vector<Form> de(m, Form(m, 2));
  de[5] = two_form(m, 1, 2) + two_form(m, 3, 4);  // de^6 = e^{12} + e^{34}
  CatalogEntry e;
  e.name = "h3";
  std::vector<int> orient(m);
  for (int k = 0; k < m; ++k) orient[k] = k + 1;
  e.model = std::make_shared<LieModel>(m, std::move(de), orient, 1.0);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m, m);
  for (int k = 0; k < 3; ++k) {
    B(2 * k + 1, 2 * k) = -1.0;
    B(2 * k, 2 * k + 1) = 1.0;
  }
  ComplexStructure J(*e.model, B);
  Form omega(m, 2);
  for (int k = 0; k < 3; ++k) omega += two_form(m, 2 * k + 1, 2 * k + 2, 1.0);
  e.hermitian = std::make_shared<HermitianStructure>(*e.model, J, omega);
  Form eta1(m, 1), eta2(m, 1), eta3(m, 1);
  eta1.set(Mask(1) << 0, 1.0);
  eta1.set(Mask(1) << 1, cd(0, 1));
  eta2.set(Mask(1) << 2, 1.0);
  eta2.set(Mask(1) << 3, cd(0, 1));
  eta3.set(Mask(1) << 4, 1.0);
  eta3.set(Mask(1) << 5, cd(0, 1));
  e.psi = wedge(wedge(eta1, eta2), eta3);
  e.notes = "nilmanifold h3 = (0,0,0,0,0,12+34); structure constants and smoke data only";
  return e;
}

CatalogEntry load_entry(const std::string& name, const CatalogParams& p) {
  if (name == "hopf")
    return load_hopf({p.w_re, p.w_im, p.a, p.t, p.volume});
  if (name == "hopf_su2")
    return load_hopf_su2({p.w_re, p.w_im, p.a, p.t, p.volume});
  if (name == "hopf_stdemb")
    return load_hopf_stdemb({p.w_re, p.w_im, p.a, p.t, p.volume});
  if (name == "torus4") return load_torus(2, {}, p.volume);
  if (name == "torus6") return load_torus(3, {}, p.volume);
  if (name == "torus8") return load_torus(4, {}, p.volume);
  if (name == "torus6_stdemb") return load_torus6_stdemb();
  if (name == "torus6_su2") return load_torus6_su2();
  if (name == "su2_r3") return load_su2_r3(p.x, p.a, p.t, p.s, p.volume);
  if (name == "h3") return load_h3();
  throw std::invalid_argument("unknown catalog model: " + name);
}

std::vector<std::string> catalog_names() {
  return {"hopf", "hopf_su2", "hopf_stdemb", "torus4", "torus6", "torus8",
          "torus6_stdemb", "torus6_su2", "su2_r3", "h3"};
}

}  // namespace invgeo
