#include "invgeo/linearize.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <random>
#include <stdexcept>
#include <unsupported/Eigen/MatrixFunctions>

#include "invgeo/variation.hpp"

namespace invgeo {

namespace {

struct Frames {
  std::vector<Mask> one_masks, out_masks;
  std::vector<Mat> compact;
  Eigen::MatrixXd compact_gram;  // Frobenius pairings
  Mask full = 0;
  double top_coeff_sign = 1.0;   // coordinates of top forms = orientation coefficient
};

Frames make_frames(const MetricBase& base) {
  const HermitianStructure& h = *base.geometry;
  Frames fr;
  fr.one_masks = degree_masks(h.dim(), 1);
  fr.out_masks = degree_masks(h.dim(), h.dim() - 1);
  fr.compact = base.algebra->compact_basis();
  long dk = (long)fr.compact.size();
  fr.compact_gram.resize(dk, dk);
  for (long a = 0; a < dk; ++a)
    for (long b = 0; b < dk; ++b)
      fr.compact_gram(a, b) = (fr.compact[a] * fr.compact[b].adjoint()).trace().real();
  fr.full = (Mask(1) << h.dim()) - 1;
  fr.top_coeff_sign = double(h.model().orientation_sign());
  return fr;
}

// coordinates of an anti-hermitian matrix over the compact basis
Eigen::VectorXd compact_coords(const Frames& fr, const Mat& M) {
  long dk = (long)fr.compact.size();
  Eigen::VectorXd rhs(dk);
  for (long a = 0; a < dk; ++a) rhs(a) = (fr.compact[a] * M.adjoint()).trace().real();
  return fr.compact_gram.ldlt().solve(rhs);
}

Eigen::VectorXd form_coords_real(const std::vector<Mask>& masks, const Form& a,
                                 double imag_tol = 1e-9) {
  Eigen::VectorXd out((long)masks.size());
  double scale = 1.0 + a.cmax();
  for (size_t i = 0; i < masks.size(); ++i) {
    cd c = a.coeff(masks[i]);
    if (std::abs(c.imag()) > imag_tol * scale)
      throw std::runtime_error("form_coords_real: unexpected imaginary part");
    out((long)i) = c.real();
  }
  return out;
}

struct BaseData {
  Form theta;        // Lee form of the base metric
  VForm F0;          // curvature of theta0
  Form om_n1, om_n2; // omega^{n-1}, omega^{n-2}
  double lee_norm;
};

BaseData base_data(const MetricBase& base, const HermitianStructure& geom) {
  BaseData d;
  d.theta = geom.lee_form();
  d.F0 = curvature_of(geom.model(), base.theta0);
  d.om_n1 = wedge_pow(geom.omega(), geom.n() - 1);
  d.om_n2 = wedge_pow(geom.omega(), geom.n() - 2);
  d.lee_norm = geom.l2_norm(d.theta);
  return d;
}

Form t_operator(const HermitianStructure& geom, const Form& alpha) {
  int n = geom.n();
  return alpha - (geom.lambda_scalar(alpha) / (2.0 * (n - 1))) * geom.omega();
}

Form d_minus_theta(const LieModel& model, const Form& theta, const Form& a) {
  Form da = model.d(a);
  if (a.degree() + 1 <= model.dim()) da -= wedge(theta, a);
  return da;
}

VForm i_dbar_del_section(const HermitianStructure& geom, const VForm& theta0, const Mat& s) {
  const LieModel& model = geom.model();
  VForm s0(model.dim(), 0, (int)s.rows());
  s0.set(0, s);
  VForm ds = covariant_d(model, theta0, s0);
  VForm del_s = project_type(geom.J(), ds, 1, 0);
  VForm dd = covariant_d(model, theta0, del_s);
  return cd(0, 1) * project_type(geom.J(), dd, 1, 1);
}

VForm anti_hermitian_part(const VForm& a) {
  VForm out(a.dim(), a.degree(), a.matrix_size());
  for (const auto& [I, M] : a.coeffs()) out.set(I, 0.5 * (M - M.adjoint()));
  return out;
}

// rows of the operator for one domain element
struct Row {
  Form form_part;   // degree 2n-1
  VForm ad_part;    // top degree, anti-hermitian coefficients
};

Row apply_L(const MetricBase& base, const HermitianStructure& geom, const BaseData& bd,
            const Form& xi, const Mat& s) {
  const LieModel& model = geom.model();
  int n = geom.n();
  Form dxi = model.d(xi);
  Form move = (dxi + geom.J().apply(dxi)).real_part();  // (1 + J) d xi
  Form csf = pairing_form(*base.algebra, s, bd.F0).real_part();
  Row row;
  Form inner = t_operator(geom, move) - csf;
  row.form_part = d_minus_theta(model, bd.theta, wedge(inner, bd.om_n2));
  VForm elliptic = wedge_sv(bd.om_n1, i_dbar_del_section(geom, base.theta0, s));
  Form delta_omega = move - csf;
  VForm curv = wedge_sv(wedge(delta_omega, bd.om_n2), cd(double(n - 1)) * bd.F0);
  row.ad_part = anti_hermitian_part(elliptic + curv);
  return row;
}

Row apply_U(const MetricBase& base, const HermitianStructure& geom, const BaseData& bd,
            const Form& xi, const Mat& s) {
  const LieModel& model = geom.model();
  Form dxi = model.d(xi);
  Form move = (dxi + geom.J().apply(dxi)).real_part();
  Row row;
  row.form_part = d_minus_theta(model, bd.theta, wedge(t_operator(geom, move), bd.om_n2));
  row.ad_part =
      anti_hermitian_part(wedge_sv(bd.om_n1, i_dbar_del_section(geom, base.theta0, s)));
  return row;
}

Row apply_U_prime(const MetricBase& base, const HermitianStructure& geom, const BaseData& bd,
                  const Form& xi, const Mat& s) {
  const LieModel& model = geom.model();
  int n = geom.n();
  Form dxi = model.d(xi);
  Form move = (dxi + geom.J().apply(dxi)).real_part();
  Row row;
  row.form_part = d_minus_theta(model, bd.theta, wedge(t_operator(geom, move), bd.om_n2));
  VForm elliptic = wedge_sv(bd.om_n1, i_dbar_del_section(geom, base.theta0, s));
  VForm curv = wedge_sv(wedge(move, bd.om_n2), cd(double(n - 1)) * bd.F0);
  row.ad_part = anti_hermitian_part(elliptic + curv);
  return row;
}

Row apply_K_prime(const MetricBase& base, const HermitianStructure& geom, const BaseData& bd,
                  const Form& xi, const Mat& s) {
  (void)xi;
  const LieModel& model = geom.model();
  int n = geom.n();
  Form csf = pairing_form(*base.algebra, s, bd.F0).real_part();
  Row row;
  row.form_part = -1.0 * d_minus_theta(model, bd.theta, wedge(csf, bd.om_n2));
  VForm curv = wedge_sv(wedge(csf, bd.om_n2), cd(double(n - 1)) * bd.F0);
  row.ad_part = anti_hermitian_part(-curv);
  return row;
}

Eigen::VectorXd row_coords(const Frames& fr, const Row& row) {
  Eigen::VectorXd fpart = form_coords_real(fr.out_masks, row.form_part);
  long dk = (long)fr.compact.size();
  Eigen::VectorXd spart = Eigen::VectorXd::Zero(dk);
  Mat top = row.ad_part.coeff(fr.full);
  spart = compact_coords(fr, top) * fr.top_coeff_sign;
  Eigen::VectorXd out(fpart.size() + dk);
  out << fpart, spart;
  return out;
}

using RowFn = Row (*)(const MetricBase&, const HermitianStructure&, const BaseData&,
                      const Form&, const Mat&);

Eigen::MatrixXd assemble_matrix(const MetricBase& base, const HermitianStructure& geom,
                                const BaseData& bd, const Frames& fr, RowFn fn) {
  long m = (long)fr.one_masks.size();
  long dk = (long)fr.compact.size();
  long rows = (long)fr.out_masks.size() + dk;
  Eigen::MatrixXd M(rows, m + dk);
  for (long j = 0; j < m; ++j) {
    Form xi = Form::basis(geom.dim(), fr.one_masks[j]);
    M.col(j) = row_coords(fr, fn(base, geom, bd, xi, Mat::Zero(base.algebra->matrix_dim,
                                                               base.algebra->matrix_dim)));
  }
  for (long a = 0; a < dk; ++a)
    M.col(m + a) = row_coords(fr, fn(base, geom, bd, Form(geom.dim(), 1), fr.compact[a]));
  return M;
}

}  // namespace

LinearOperator assemble_linearization(const MetricBase& base, double solution_tol) {
  const HermitianStructure& h = *base.geometry;
  HermitianStructure geom(h.model(), h.J(), base.omega0, h.mu());
  BaseData bd = base_data(base, geom);
  Frames fr = make_frames(base);

  LinearOperator op;
  op.xi_dim = (long)fr.one_masks.size();
  op.s_dim = (long)fr.compact.size();
  op.out_form_dim = (long)fr.out_masks.size();
  op.L = assemble_matrix(base, geom, bd, fr, &apply_L);
  op.U = assemble_matrix(base, geom, bd, fr, &apply_U);
  op.K = op.L - op.U;
  op.U_prime = assemble_matrix(base, geom, bd, fr, &apply_U_prime);
  op.K_prime = assemble_matrix(base, geom, bd, fr, &apply_K_prime);

  // Gram matrices: forms via the metric, sections via Frobenius, both L2-scaled
  double V = geom.total_volume();
  long m = op.xi_dim, dk = op.s_dim, fo = op.out_form_dim;
  op.gram_domain = Eigen::MatrixXd::Zero(m + dk, m + dk);
  op.gram_domain.topLeftCorner(m, m) = geom.gram(1) * V;
  op.gram_domain.bottomRightCorner(dk, dk) = fr.compact_gram * V;
  op.gram_codomain = Eigen::MatrixXd::Zero(fo + dk, fo + dk);
  op.gram_codomain.topLeftCorner(fo, fo) = geom.gram(h.dim() - 1) * V;
  double gtop = geom.gram(h.dim())(0, 0);
  op.gram_codomain.bottomRightCorner(dk, dk) = fr.compact_gram * gtop * V;

  // operator hypotheses at the base: closed Lee form, Hermite-Einstein,
  // anomaly equation (the balanced identity holds for theta_omega by definition)
  double dtheta = geom.l2_norm(geom.model().d(bd.theta));
  double he = hermite_einstein_residual(geom, base.theta0);
  Form anomaly = geom.J().ddc(geom.model(), geom.omega()) -
                 pairing_wedge(*base.algebra, bd.F0, bd.F0);
  double an = geom.l2_norm(anomaly);
  op.base_residual = std::sqrt(dtheta * dtheta + he * he + an * an);
  op.base_is_solution = op.base_residual <= solution_tol;
  return op;
}

Eigen::VectorXd direction_coordinates(const MetricBase& base, const Form& xi, const Mat& s) {
  Frames fr = make_frames(base);
  Eigen::VectorXd fpart = form_coords_real(fr.one_masks, xi);
  Eigen::VectorXd spart = compact_coords(fr, s);
  Eigen::VectorXd out(fpart.size() + spart.size());
  out << fpart, spart;
  return out;
}

Eigen::VectorXd residual_coordinates(const MetricBase& base, const ReducedResidual& r) {
  Frames fr = make_frames(base);
  Row row{r.r1.real_part(), r.r2};
  return row_coords(fr, row);
}

Eigen::MatrixXd fd_jacobian(const MetricBase& base, int quad_order) {
  Frames fr = make_frames(base);
  long m = (long)fr.one_masks.size();
  long dk = (long)fr.compact.size();
  int md = base.algebra->matrix_dim;
  auto eval = [&](const Form& xi, const Mat& s) {
    return residual_coordinates(base, reduced_residual(base, xi, s, quad_order));
  };
  long rows = (long)fr.out_masks.size() + dk;
  Eigen::MatrixXd J(rows, m + dk);
  auto column = [&](auto&& at) {
    auto central = [&](double step) {
      return Eigen::VectorXd(((at(step) - at(-step)) / (2.0 * step)).eval());
    };
    Eigen::VectorXd d1 = central(1e-3), d2 = central(5e-4);
    return Eigen::VectorXd(((4.0 * d2 - d1) / 3.0).eval());
  };
  for (long j = 0; j < m; ++j) {
    Form xi = Form::basis(base.geometry->dim(), fr.one_masks[j]);
    J.col(j) = column([&](double step) { return eval(cd(step) * xi, Mat::Zero(md, md)); });
  }
  for (long a = 0; a < dk; ++a) {
    Mat s = fr.compact[a];
    J.col(m + a) = column([&](double step) { return eval(Form(base.geometry->dim(), 1),
                                                         Mat(step * s)); });
  }
  return J;
}

JacobianComparison compare_jacobian(const LinearOperator& op, const Eigen::MatrixXd& fd) {
  JacobianComparison out;
  out.scale = op.L.cwiseAbs().maxCoeff();
  out.max_abs_diff = (op.L - fd).cwiseAbs().maxCoeff();
  out.worst_rel = 0.0;
  for (long i = 0; i < op.L.rows(); ++i)
    for (long j = 0; j < op.L.cols(); ++j) {
      double l = op.L(i, j), f = fd(i, j);
      if (std::abs(l) > 1e-8 * std::max(1.0, out.scale)) {
        out.worst_rel = std::max(out.worst_rel, std::abs(l - f) / std::abs(l));
      } else if (std::abs(f) > 1e-7 * std::max(1.0, out.scale)) {
        out.worst_rel = std::max(out.worst_rel, 1.0);  // analytic zero, fd nonzero
      }
    }
  return out;
}

Eigen::MatrixXd symbol_u1(const HermitianStructure& h, const Form& v) {
  if (v.cmax() == 0.0) throw std::invalid_argument("symbol_u1: zero covector");
  const LieModel& model = h.model();
  int m = h.dim();
  Form jv = h.J().apply(v).real_part();
  Form om_n2 = wedge_pow(h.omega(), h.n() - 2);
  auto masks1 = degree_masks(m, 1);
  auto masks_out = degree_masks(m, m - 1);
  Eigen::MatrixXd M((long)masks_out.size(), (long)masks1.size());
  (void)model;
  for (size_t j = 0; j < masks1.size(); ++j) {
    Form xi = Form::basis(m, masks1[j]);
    Form jxi = h.J().apply(xi).real_part();
    Form inner = wedge(v, xi) + wedge(jv, jxi);
    Form out = wedge(v, wedge(t_operator(h, inner), om_n2));
    M.col((long)j) = form_coords_real(masks_out, out);
  }
  return M;
}

std::string EllipticityScan::to_json() const {
  nlohmann::ordered_json j;
  j["trials"] = trials;
  j["failures"] = failures;
  j["worst_gap"] = worst_gap;
  j["worst_alignment"] = worst_alignment;
  j["pass"] = pass;
  return j.dump(2);
}

EllipticityScan ellipticity_scan(const HermitianStructure& h, int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  int m = h.dim();
  EllipticityScan scan;
  scan.trials = trials;
  scan.worst_gap = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < trials; ++trial) {
    Form v(m, 1);
    for (Mask I : degree_masks(m, 1)) v.set(I, gauss(rng));
    double norm = std::sqrt(h.inner(v, v).real());
    v *= 1.0 / norm;
    Eigen::MatrixXd S = symbol_u1(h, v);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(S, Eigen::ComputeFullV);
    Eigen::VectorXd sv = svd.singularValues();
    double smax = sv(0);
    double snull = sv(sv.size() - 1);
    double sgap = sv(sv.size() - 2);
    Eigen::VectorXd kernel = svd.matrixV().col(sv.size() - 1);
    Eigen::VectorXd vc = form_coords_real(degree_masks(m, 1), v);
    double alignment = std::abs(kernel.dot(vc)) / (kernel.norm() * vc.norm());
    scan.worst_gap = std::min(scan.worst_gap, sgap / std::max(smax, 1e-30));
    scan.worst_alignment = std::min(scan.worst_alignment, alignment);
    bool ok = snull <= 1e-10 * smax && sgap >= 1e-6 * smax && alignment >= 1.0 - 1e-8;
    if (!ok) ++scan.failures;
  }
  scan.pass = scan.failures == 0;
  return scan;
}

double duality_defect(const HermitianStructure& h) {
  Form theta = h.lee_form();
  if (h.l2_norm(theta) > 1e-10)
    throw std::invalid_argument("duality_defect: Lee form does not vanish (ell_X != 0)");
  const LieModel& model = h.model();
  int m = h.dim();
  Form om_n2 = wedge_pow(h.omega(), h.n() - 2);
  auto u1 = [&](const Form& xi) {
    Form dxi = model.d(xi);
    Form move = dxi + h.J().apply(dxi);
    return model.d(wedge(t_operator(h, move), om_n2));
  };
  Eigen::MatrixXcd U1 = operator_matrix(m, 1, m - 1, u1);
  // Gram adjoint of U1: Omega^{2n-1} -> Omega^1
  Eigen::MatrixXd G1 = h.gram(1), Gn = h.gram(m - 1);
  Eigen::MatrixXcd adjoint = G1.cast<cd>().ldlt().solve((U1.adjoint() * Gn.cast<cd>()).eval());
  // star route: alpha -> *(U1(*alpha))
  Eigen::MatrixXcd star_u1_star =
      operator_matrix(m, m - 1, 1, [&](const Form& a) { return h.star(u1(h.star(a))); });
  return (adjoint - star_u1_star).norm();
}

std::string IndexReport::to_json() const {
  nlohmann::ordered_json j;
  j["dims"] = {{"domain", domain_dim}, {"codomain", codomain_dim}};
  j["singular_values"] = singular_values;
  j["ker"] = kernel;
  j["coker"] = cokernel;
  j["index"] = index;
  return j.dump(2);
}

IndexReport index_report(const MetricBase& base, const LinearOperator& op) {
  const HermitianStructure& h = *base.geometry;
  HermitianStructure geom(h.model(), h.J(), base.omega0, h.mu());
  const LieModel& model = geom.model();
  int m = geom.dim();
  long dk = op.s_dim;

  // Im d^* in Omega^1: Gram-adjoint image of d: Omega^1 -> Omega^2
  Eigen::MatrixXcd D1 = d_matrix(model, 1);
  Eigen::MatrixXd G1 = geom.gram(1), G2 = geom.gram(2);
  Eigen::MatrixXcd dstar = G1.cast<cd>().ldlt().solve((D1.adjoint() * G2.cast<cd>()).eval());
  Eigen::MatrixXcd Qd = span_orthonormal(dstar, G1);
  // Im d in Omega^{2n-1}
  Eigen::MatrixXcd Dn = d_matrix(model, m - 2);
  Eigen::MatrixXcd Qc = span_orthonormal(Dn, geom.gram(m - 1));

  long nd = Qd.cols(), nc = Qc.cols();
  long dom = nd + dk, codom = nc + dk;
  // restricted operator in Gram-orthonormal coordinates
  Eigen::MatrixXd restricted = Eigen::MatrixXd::Zero(codom, dom);
  Eigen::MatrixXd form_block = op.L.topRows(op.out_form_dim);
  Eigen::MatrixXd s_block = op.L.bottomRows(dk);
  Eigen::MatrixXd Gn1 = geom.gram(m - 1);
  for (long j = 0; j < nd; ++j) {
    Eigen::VectorXd dir(op.xi_dim + dk);
    Eigen::VectorXd xi_part = Qd.col(j).real();
    dir << xi_part, Eigen::VectorXd::Zero(dk);
    Eigen::VectorXd image = op.L * dir;
    restricted.col(j).head(nc) = (Qc.adjoint() * Gn1.cast<cd>() * image.head(op.out_form_dim))
                                     .real();
    restricted.col(j).tail(dk) = image.tail(dk);
  }
  for (long a = 0; a < dk; ++a) {
    Eigen::VectorXd dir = Eigen::VectorXd::Zero(op.xi_dim + dk);
    dir(op.xi_dim + a) = 1.0;
    Eigen::VectorXd image = op.L * dir;
    restricted.col(nd + a).head(nc) =
        (Qc.adjoint() * Gn1.cast<cd>() * image.head(op.out_form_dim)).real();
    restricted.col(nd + a).tail(dk) = image.tail(dk);
  }

  IndexReport rep;
  rep.domain_dim = dom;
  rep.codomain_dim = codom;
  if (dom == 0 || codom == 0) {
    rep.kernel = dom;
    rep.cokernel = codom;
    rep.index = rep.kernel - rep.cokernel;
    return rep;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(restricted);
  Eigen::VectorXd sv = svd.singularValues();
  double smax = sv.size() ? sv(0) : 0.0;
  long rank = 0;
  for (long i = 0; i < sv.size(); ++i) {
    if (sv(i) > 1e-9 * std::max(smax, 1e-30)) ++rank;
    if (i < 12) rep.singular_values.push_back(sv(i));
  }
  rep.kernel = dom - rank;
  rep.cokernel = codom - rank;
  rep.index = rep.kernel - rep.cokernel;
  return rep;
}

DecompositionCheck harmonic_decomposition_check(const LinearOperator& op) {
  DecompositionCheck out;
  // domain: Im L^* (Gram adjoint) against ker L
  Eigen::MatrixXd Gd = op.gram_domain, Gc = op.gram_codomain;
  Eigen::MatrixXd Lstar = Gd.ldlt().solve(op.L.transpose() * Gc);
  Eigen::MatrixXcd Qim = span_orthonormal(Lstar.cast<cd>(), Gd);
  Eigen::MatrixXcd Qker = kernel_basis(op.L.cast<cd>());
  if (Qim.cols() > 0 && Qker.cols() > 0)
    out.domain_orthogonality = (Qim.adjoint() * Gd.cast<cd>() * Qker).cwiseAbs().maxCoeff();
  // codomain: Im L against ker L^*
  Eigen::MatrixXcd Qim2 = span_orthonormal(op.L.cast<cd>(), Gc);
  Eigen::MatrixXcd Qker2 = kernel_basis(Lstar.cast<cd>().eval());
  if (Qim2.cols() > 0 && Qker2.cols() > 0)
    out.codomain_orthogonality =
        (Qim2.adjoint() * Gc.cast<cd>() * Qker2).cwiseAbs().maxCoeff();
  long rank = rank_of(op.L.cast<cd>());
  out.dims_consistent = (rank + Qker.cols() == op.L.cols()) &&
                        (rank + Qker2.cols() == op.L.rows());
  return out;
}

double complex_property_defect(const MetricBase& base, const LinearOperator& op) {
  const HermitianStructure& h = *base.geometry;
  HermitianStructure geom(h.model(), h.J(), base.omega0, h.mu());
  BaseData bd = base_data(base, geom);
  Frames fr = make_frames(base);
  double worst = 0.0;
  long m = op.xi_dim;
  for (long j = 0; j < m + op.s_dim; ++j) {
    Eigen::VectorXd col = op.L.col(j).head(op.out_form_dim);
    Form image(geom.dim(), geom.dim() - 1);
    for (size_t i = 0; i < fr.out_masks.size(); ++i)
      if (col((long)i) != 0.0) image.set(fr.out_masks[i], col((long)i));
    Form composed = d_minus_theta(geom.model(), bd.theta, image);
    worst = std::max(worst, composed.cmax());
  }
  return worst;
}

KernelSectionReport kernel_section_report(const MetricBase& base, const LinearOperator& op) {
  const HermitianStructure& h = *base.geometry;
  HermitianStructure geom(h.model(), h.J(), base.omega0, h.mu());
  Frames fr = make_frames(base);
  long m = op.xi_dim, dk = op.s_dim;
  // linear map (xi, s) -> coordinates of dbar_Q(2 xi^{1,0} - s/4), real splitting
  std::vector<Eigen::VectorXd> cols;
  auto pack = [&](const KernelSectionImage& img) {
    std::vector<double> vals;
    for (Mask I : degree_masks(geom.dim(), 1)) {
      Mat M = img.ad_part.coeff(I);
      for (long i = 0; i < M.rows(); ++i)
        for (long jj = 0; jj < M.cols(); ++jj) {
          vals.push_back(M(i, jj).real());
          vals.push_back(M(i, jj).imag());
        }
    }
    for (Mask I : degree_masks(geom.dim(), 2)) {
      cd c = img.form_part.coeff(I);
      vals.push_back(c.real());
      vals.push_back(c.imag());
    }
    return Eigen::Map<Eigen::VectorXd>(vals.data(), (long)vals.size()).eval();
  };
  for (long j = 0; j < m; ++j) {
    Form xi = Form::basis(geom.dim(), fr.one_masks[j]);
    cols.push_back(pack(dbar_kernel_section(geom, *base.algebra, base.theta0, xi,
                                            Mat::Zero(base.algebra->matrix_dim,
                                                      base.algebra->matrix_dim))));
  }
  for (long a = 0; a < dk; ++a)
    cols.push_back(pack(
        dbar_kernel_section(geom, *base.algebra, base.theta0, Form(geom.dim(), 1),
                            fr.compact[a])));
  Eigen::MatrixXd A(cols.empty() ? 0 : cols[0].size(), (long)cols.size());
  for (size_t j = 0; j < cols.size(); ++j) A.col((long)j) = cols[j];
  Eigen::MatrixXcd K = kernel_basis(A.cast<cd>());

  KernelSectionReport rep;
  rep.section_space_dim = K.cols();
  rep.l_kernel_dim = op.L.cols() - rank_of(op.L.cast<cd>());
  double scale = std::max(op.L.cwiseAbs().maxCoeff(), 1e-30);
  for (long j = 0; j < K.cols(); ++j) {
    Eigen::VectorXd dir = K.col(j).real();
    if (dir.norm() < 1e-9) dir = K.col(j).imag();
    if (dir.norm() < 1e-9) continue;
    dir.normalize();
    rep.worst_l_norm = std::max(rep.worst_l_norm, (op.L * dir).norm() / scale);
  }
  return rep;
}

}  // namespace invgeo
