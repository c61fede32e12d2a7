#include "invgeo/gauge.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

#include "invgeo/linalg.hpp"

namespace invgeo {

cd GaugeAlgebra::pairing(const Mat& X, const Mat& Y) const {
  cd s = 0.0;
  for (const auto& b : blocks) {
    Mat xb = X.block(b.offset, b.offset, b.size, b.size);
    Mat yb = Y.block(b.offset, b.offset, b.size, b.size);
    s += b.weight * (xb * yb).trace();
  }
  return s;
}

bool GaugeAlgebra::in_algebra(const Mat& X, double tol) const {
  return (X - project(X)).norm() <= tol * (1.0 + X.norm());
}

Mat GaugeAlgebra::project(const Mat& X) const {
  Mat out = Mat::Zero(matrix_dim, matrix_dim);
  for (const auto& b : blocks) {
    Mat xb = X.block(b.offset, b.offset, b.size, b.size);
    xb -= (xb.trace() / double(b.size)) * Mat::Identity(b.size, b.size);
    out.block(b.offset, b.offset, b.size, b.size) = xb;
  }
  return out;
}

Mat GaugeAlgebra::random_compact(std::mt19937_64& rng, double scale) const {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat X = Mat::Zero(matrix_dim, matrix_dim);
  for (const auto& b : blocks) {
    Mat A(b.size, b.size);
    for (int i = 0; i < b.size; ++i)
      for (int j = 0; j < b.size; ++j) A(i, j) = cd(u(rng), u(rng));
    Mat anti = 0.5 * (A - A.adjoint());
    anti -= (anti.trace() / double(b.size)) * Mat::Identity(b.size, b.size);
    X.block(b.offset, b.offset, b.size, b.size) = scale * anti;
  }
  return X;
}

std::vector<Mat> GaugeAlgebra::compact_basis() const {
  std::vector<Mat> basis;
  for (const auto& b : blocks) {
    // su(k): i(E_jj - E_{j+1,j+1}), (E_jk - E_kj), i(E_jk + E_kj)
    for (int j = 0; j + 1 < b.size; ++j) {
      Mat H = Mat::Zero(matrix_dim, matrix_dim);
      H(b.offset + j, b.offset + j) = cd(0, 1);
      H(b.offset + j + 1, b.offset + j + 1) = cd(0, -1);
      basis.push_back(H);
    }
    for (int j = 0; j < b.size; ++j)
      for (int k = j + 1; k < b.size; ++k) {
        Mat A = Mat::Zero(matrix_dim, matrix_dim);
        A(b.offset + j, b.offset + k) = 1.0;
        A(b.offset + k, b.offset + j) = -1.0;
        basis.push_back(A);
        Mat S = Mat::Zero(matrix_dim, matrix_dim);
        S(b.offset + j, b.offset + k) = cd(0, 1);
        S(b.offset + k, b.offset + j) = cd(0, 1);
        basis.push_back(S);
      }
  }
  return basis;
}

bool VForm::is_zero(double tol) const {
  for (const auto& [I, M] : coeffs_)
    if (M.cwiseAbs().maxCoeff() > tol) return false;
  return true;
}

double VForm::cmax() const {
  double m = 0.0;
  for (const auto& [I, M] : coeffs_) m = std::max(m, M.cwiseAbs().maxCoeff());
  return m;
}

Mat VForm::coeff(Mask I) const {
  auto it = coeffs_.find(I);
  return it == coeffs_.end() ? Mat::Zero(msize_, msize_) : it->second;
}

void VForm::set(Mask I, const Mat& value) {
  if (popcount(I) != degree_) throw std::invalid_argument("VForm::set: index degree mismatch");
  if (value.cwiseAbs().maxCoeff() == 0.0)
    coeffs_.erase(I);
  else
    coeffs_[I] = value;
}

void VForm::add(Mask I, const Mat& value) { set(I, coeff(I) + value); }

VForm& VForm::operator+=(const VForm& o) {
  for (const auto& [I, M] : o.coeffs_) add(I, M);
  return *this;
}

VForm& VForm::operator-=(const VForm& o) {
  for (const auto& [I, M] : o.coeffs_) add(I, -M);
  return *this;
}

VForm& VForm::operator*=(cd s) {
  for (auto& [I, M] : coeffs_) M *= s;
  return *this;
}

VForm VForm::operator-() const {
  VForm out = *this;
  out *= -1.0;
  return out;
}

VForm VForm::adjoint_dagger() const {
  VForm out(dim_, degree_, msize_);
  for (const auto& [I, M] : coeffs_) out.set(I, M.adjoint());
  return out;
}

Form VForm::entry(int i, int j) const {
  Form out(dim_, degree_);
  for (const auto& [I, M] : coeffs_)
    if (M(i, j) != cd(0.0)) out.set(I, M(i, j));
  return out;
}

VForm operator+(VForm a, const VForm& b) { return a += b; }
VForm operator-(VForm a, const VForm& b) { return a -= b; }
VForm operator*(cd s, VForm a) { return a *= s; }

VForm wedge_mat(const VForm& a, const VForm& b) {
  int degree = a.degree() + b.degree();
  if (degree > a.dim()) throw std::invalid_argument("wedge_mat: degree exceeds dimension");
  VForm out(a.dim(), degree, a.matrix_size());
  for (const auto& [I, MA] : a.coeffs())
    for (const auto& [J, MB] : b.coeffs()) {
      if (I & J) continue;
      out.add(I | J, double(merge_sign(I, J)) * (MA * MB));
    }
  return out;
}

VForm bracket_wedge(const VForm& a, const VForm& b) {
  double sign = ((a.degree() * b.degree()) % 2 == 0) ? 1.0 : -1.0;
  return wedge_mat(a, b) - sign * wedge_mat(b, a);
}

VForm wedge_sv(const Form& a, const VForm& b) {
  int degree = a.degree() + b.degree();
  if (degree > a.dim()) throw std::invalid_argument("wedge_sv: degree exceeds dimension");
  VForm out(b.dim(), degree, b.matrix_size());
  for (const auto& [I, ca] : a.coeffs())
    for (const auto& [J, MB] : b.coeffs()) {
      if (I & J) continue;
      out.add(I | J, double(merge_sign(I, J)) * ca * MB);
    }
  return out;
}

VForm mat_times(const Mat& A, const VForm& b) {
  VForm out(b.dim(), b.degree(), b.matrix_size());
  for (const auto& [I, M] : b.coeffs()) out.set(I, A * M);
  return out;
}

VForm times_mat(const VForm& b, const Mat& A) {
  VForm out(b.dim(), b.degree(), b.matrix_size());
  for (const auto& [I, M] : b.coeffs()) out.set(I, M * A);
  return out;
}

VForm conjugate_by(const Mat& g, const VForm& b) {
  Mat ginv = g.inverse();
  VForm out(b.dim(), b.degree(), b.matrix_size());
  for (const auto& [I, M] : b.coeffs()) out.set(I, ginv * M * g);
  return out;
}

Form pairing_form(const GaugeAlgebra& c, const Mat& u, const VForm& a) {
  Form out(a.dim(), a.degree());
  for (const auto& [I, M] : a.coeffs()) {
    cd v = c.pairing(u, M);
    if (v != cd(0.0)) out.add(I, v);
  }
  return out;
}

Form pairing_wedge(const GaugeAlgebra& c, const VForm& a, const VForm& b) {
  int degree = a.degree() + b.degree();
  if (degree > a.dim()) throw std::invalid_argument("pairing_wedge: degree exceeds dimension");
  Form out(a.dim(), degree);
  for (const auto& [I, MA] : a.coeffs())
    for (const auto& [J, MB] : b.coeffs()) {
      if (I & J) continue;
      out.add(I | J, double(merge_sign(I, J)) * c.pairing(MA, MB));
    }
  out.prune(0.0);
  return out;
}

VForm d_vform(const LieModel& model, const VForm& a) {
  if (a.degree() >= model.dim()) return VForm(a.dim(), a.degree() + 1, a.matrix_size());
  VForm out(a.dim(), a.degree() + 1, a.matrix_size());
  for (const auto& [I, M] : a.coeffs()) {
    Form dI = model.d(Form::basis(model.dim(), I));
    for (const auto& [J, cj] : dI.coeffs()) out.add(J, cj.real() * M);
  }
  return out;
}

VForm project_type(const ComplexStructure& J, const VForm& a, int p, int q) {
  int r = a.matrix_size();
  VForm out(a.dim(), p + q, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      Form pij = J.project(a.entry(i, j), p, q);
      for (const auto& [I, c] : pij.coeffs()) {
        Mat M = out.coeff(I);
        M(i, j) += c;
        out.set(I, M);
      }
    }
  return out;
}

double l2_norm(const HermitianStructure& h, const VForm& a) {
  double total = 0.0;
  int r = a.matrix_size();
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      double nij = h.l2_norm(a.entry(i, j));
      total += nij * nij;
    }
  return std::sqrt(total);
}

VForm GaugeBundle::curvature(const LieModel& model) const { return curvature_of(model, theta); }

VForm curvature_of(const LieModel& model, const VForm& theta) {
  return d_vform(model, theta) + wedge_mat(theta, theta);
}

VForm covariant_d(const LieModel& model, const VForm& theta, const VForm& a) {
  return d_vform(model, a) + bracket_wedge(theta, a);
}

VForm chern_connection(const ComplexStructure& J, const VForm& theta0, const Mat& u) {
  VForm t01 = project_type(J, theta0, 0, 1);
  VForm t10 = project_type(J, theta0, 1, 0);
  Mat eu = u.exp();
  Mat eun = (-u).exp();
  VForm conj(theta0.dim(), 1, theta0.matrix_size());
  for (const auto& [I, M] : t10.coeffs()) conj.set(I, eun * M * eu);
  return t01 + conj;
}

Form chern_simons(const LieModel& model, const GaugeAlgebra& c, const VForm& theta) {
  VForm F = curvature_of(model, theta);
  Form cs = pairing_wedge(c, F, theta);
  Form cube = pairing_wedge(c, wedge_mat(theta, theta), theta);
  cs -= (1.0 / 3.0) * cube;
  return cs;
}

void gauss_legendre_01(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const double eps = 1e-15;
  int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double z1, pp;
    do {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      z1 = z;
      z = z1 - p1 / pp;
    } while (std::abs(z - z1) > eps);
    // map [-1,1] -> [0,1]
    nodes[i] = 0.5 * (1.0 - z);
    nodes[n - 1 - i] = 0.5 * (1.0 + z);
    weights[i] = weights[n - 1 - i] = 1.0 / ((1.0 - z * z) * pp * pp);
  }
}

namespace {

Form donaldson_quadrature(const LieModel& model, const ComplexStructure& J,
                          const GaugeAlgebra& c, const VForm& theta0, const Mat& u, int order) {
  std::vector<double> nodes, weights;
  gauss_legendre_01(order, nodes, weights);
  Form acc(model.dim(), 2);
  for (int k = 0; k < order; ++k) {
    VForm theta_t = chern_connection(J, theta0, nodes[k] * u);
    VForm F_t = curvature_of(model, theta_t);
    Form integrand = cd(0, 1) * pairing_form(c, u, F_t);
    acc += weights[k] * integrand;
  }
  return acc;
}

}  // namespace

DonaldsonResult donaldson_r(const LieModel& model, const ComplexStructure& J,
                            const GaugeAlgebra& c, const VForm& theta0, const Mat& u, int order,
                            double tol) {
  Form r1 = donaldson_quadrature(model, J, c, theta0, u, order);
  Form r2 = donaldson_quadrature(model, J, c, theta0, u, 2 * order);
  double err = (r1 - r2).cnorm();
  if (err > tol)
    throw std::runtime_error("donaldson_r: quadrature not converged, node-doubling error " +
                             std::to_string(err));
  return {r2, err};
}

Mat relative_generator(const Mat& u1, const Mat& u2) {
  Mat P = (-u1).exp() * u2.exp();
  Eigen::ComplexEigenSolver<Mat> es(P);
  if (es.info() != Eigen::Success) throw std::runtime_error("relative_generator: eigensolver failed");
  Eigen::VectorXcd lam = es.eigenvalues();
  for (long i = 0; i < lam.size(); ++i) {
    if (lam(i).real() <= 0.0 && std::abs(lam(i).imag()) < 1e-14)
      throw std::runtime_error("relative_generator: log branch cut hit");
    lam(i) = std::log(lam(i));
  }
  Mat V = es.eigenvectors();
  return V * lam.asDiagonal() * V.inverse();
}

double csr_defect(const HermitianStructure& h, const GaugeAlgebra& c, const VForm& theta0,
                  const Mat& u, int order) {
  const LieModel& model = h.model();
  const ComplexStructure& J = h.J();
  Form r = donaldson_r(model, J, c, theta0, u, order).r_tilde;
  VForm theta1 = chern_connection(J, theta0, u);
  Form expr = cd(0, 2) * J.del(model, r);
  expr += chern_simons(model, c, theta1) - chern_simons(model, c, theta0);
  expr -= model.d(pairing_wedge(c, theta1, theta0));
  // project away d Omega^{2,0}
  int m = model.dim();
  std::vector<Eigen::VectorXcd> cols;
  for (Mask I : degree_masks(m, 2)) {
    Form b20 = J.project(Form::basis(m, I), 2, 0);
    if (b20.is_zero(1e-14)) continue;
    cols.push_back(form_to_vector(model.d(b20)));
  }
  Eigen::MatrixXcd A(form_to_vector(expr).size(), (long)cols.size());
  for (size_t i = 0; i < cols.size(); ++i) A.col((long)i) = cols[i];
  double dist = distance_to_span(form_to_vector(expr), A, h.gram(3));
  return dist * std::sqrt(h.total_volume());
}

double hermite_einstein_residual(const HermitianStructure& h, const VForm& theta) {
  VForm F = curvature_of(h.model(), theta);
  Form om_pow = wedge_pow(h.omega(), h.n() - 1);
  VForm top = wedge_sv(om_pow, F);
  return l2_norm(h, top);
}

namespace {

void strip_ws(std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  size_t b = s.find_last_not_of(" \t\r\n");
  s = (a == std::string::npos) ? "" : s.substr(a, b - a + 1);
}

}  // namespace

GaugeBundle parse_bundle(const std::string& text, int model_dim) {
  std::istringstream in(text);
  std::string line;
  GaugeBundle bundle;
  std::map<int, std::string> theta_lines;
  while (std::getline(in, line)) {
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    strip_ws(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("bundle parse: expected '='");
    std::string key = line.substr(0, eq), value = line.substr(eq + 1);
    strip_ws(key);
    strip_ws(value);
    if (key == "matrix_dim") {
      bundle.algebra.matrix_dim = std::stoi(value);
    } else if (key == "block") {
      std::istringstream vs(value);
      GaugeAlgebra::Block b{};
      vs >> b.offset >> b.size >> b.weight;
      bundle.algebra.blocks.push_back(b);
    } else if (key.rfind("theta^", 0) == 0) {
      theta_lines[std::stoi(key.substr(6))] = value;
    } else {
      throw std::invalid_argument("bundle parse: unknown key '" + key + "'");
    }
  }
  int r = bundle.algebra.matrix_dim;
  if (r == 0) throw std::invalid_argument("bundle parse: missing matrix_dim");
  bundle.theta = VForm(model_dim, 1, r);
  // theta^k = (re,im) E(i,j) + ...
  for (const auto& [k, expr] : theta_lines) {
    if (k < 1 || k > model_dim) throw std::invalid_argument("bundle parse: theta index range");
    Mat M = Mat::Zero(r, r);
    size_t pos = 0;
    while (pos < expr.size()) {
      size_t open = expr.find('(', pos);
      if (open == std::string::npos) break;
      size_t close = expr.find(')', open);
      size_t eopen = expr.find("E(", close);
      size_t eclose = expr.find(')', eopen + 2);
      if (close == std::string::npos || eopen == std::string::npos || eclose == std::string::npos)
        throw std::invalid_argument("bundle parse: bad theta term");
      std::string nums = expr.substr(open + 1, close - open - 1);
      std::string idx = expr.substr(eopen + 2, eclose - eopen - 2);
      double re, im;
      char comma;
      std::istringstream ns(nums);
      ns >> re >> comma >> im;
      int i, j;
      std::istringstream is(idx);
      is >> i >> comma >> j;
      if (i < 0 || j < 0 || i >= r || j >= r) throw std::invalid_argument("bundle parse: E index");
      M(i, j) += cd(re, im);
      pos = eclose + 1;
    }
    if (M.cwiseAbs().maxCoeff() > 0.0) bundle.theta.set(Mask(1) << (k - 1), M);
  }
  return bundle;
}

GaugeBundle load_bundle_file(const std::string& path, int model_dim) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open bundle file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_bundle(ss.str(), model_dim);
}

}  // namespace invgeo
