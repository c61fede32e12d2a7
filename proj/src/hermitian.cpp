#include "invgeo/hermitian.hpp"

#include <cmath>
#include <stdexcept>

namespace invgeo {

namespace {

Eigen::MatrixXd form_to_antisym(const Form& omega) {
  int m = omega.dim();
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(m, m);
  for (int j = 1; j <= m; ++j)
    for (int i = 1; i <= m; ++i)
      if (i != j) W(j - 1, i - 1) = evaluate(omega, {j, i}).real();
  return W;
}

}  // namespace

ComplexStructure::ComplexStructure(const LieModel& model, Eigen::MatrixXd j_covector)
    : jcov_(std::move(j_covector)) {
  int m = (int)jcov_.rows();
  if (m != model.dim() || jcov_.cols() != m)
    throw std::invalid_argument("ComplexStructure: matrix size mismatch");
  if (m % 2 != 0) throw std::invalid_argument("ComplexStructure: odd dimension");
  Eigen::MatrixXd jj = jcov_ * jcov_ + Eigen::MatrixXd::Identity(m, m);
  if (jj.norm() > 1e-12) throw std::invalid_argument("ComplexStructure: J^2 != -Id");

  // (1,0)-covectors: column span of the projector (I - iJ)/2.
  Eigen::MatrixXcd P = 0.5 * (Eigen::MatrixXcd::Identity(m, m) -
                              cd(0, 1) * jcov_.cast<cd>());
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(P);
  if (qr.rank() != m / 2) throw std::invalid_argument("ComplexStructure: bad projector rank");
  Eigen::MatrixXcd Q = qr.householderQ();
  eta_ = Q.leftCols(m / 2);

  double nij = nijenhuis_norm(model);
  if (nij > 1e-10)
    throw std::invalid_argument("ComplexStructure: Nijenhuis tensor nonzero (" +
                                std::to_string(nij) + "), J not integrable");
}

Form ComplexStructure::apply(const Form& a) const {
  int m = dim();
  Form out(m, a.degree());
  for (const auto& [I, c] : a.coeffs()) {
    // wedge of J(e^{i}) over i in I
    Form term(m, 0);
    term.set(0, c);
    for (Mask rest = I; rest != 0; rest &= rest - 1) {
      int bit = std::countr_zero(rest);
      Form je(m, 1);
      for (int r = 0; r < m; ++r) {
        double v = jcov_(r, bit);
        if (v != 0.0) je.set(Mask(1) << r, v);
      }
      term = wedge(term, je);
    }
    out += term;
  }
  out.prune(0.0);
  return out;
}

std::map<std::pair<int, int>, Form> ComplexStructure::type_decompose(const Form& a) const {
  int m = dim();
  std::map<std::pair<int, int>, Form> out;
  // per-covector projections
  std::vector<Form> hol(m, Form(m, 1)), antihol(m, Form(m, 1));
  for (int k = 0; k < m; ++k) {
    for (int r = 0; r < m; ++r) {
      cd jrk = jcov_(r, k);
      cd delta = (r == k) ? 1.0 : 0.0;
      cd h = 0.5 * (delta - cd(0, 1) * jrk);
      cd ah = 0.5 * (delta + cd(0, 1) * jrk);
      if (h != cd(0.0)) hol[k].add(Mask(1) << r, h);
      if (ah != cd(0.0)) antihol[k].add(Mask(1) << r, ah);
    }
  }
  for (const auto& [I, c] : a.coeffs()) {
    std::vector<int> bits;
    for (Mask rest = I; rest != 0; rest &= rest - 1) bits.push_back(std::countr_zero(rest));
    int k = (int)bits.size();
    for (Mask S = 0; S < (Mask(1) << k); ++S) {
      Form term(m, 0);
      term.set(0, c);
      int p = 0;
      for (int pos = 0; pos < k; ++pos) {
        bool holomorphic = S & (Mask(1) << pos);
        if (holomorphic) ++p;
        term = wedge(term, holomorphic ? hol[bits[pos]] : antihol[bits[pos]]);
      }
      if (term.is_zero()) continue;
      auto key = std::make_pair(p, k - p);
      auto it = out.find(key);
      if (it == out.end())
        out.emplace(key, term);
      else
        it->second += term;
    }
  }
  for (auto it = out.begin(); it != out.end();) {
    it->second.prune(1e-15);
    if (it->second.is_zero())
      it = out.erase(it);
    else
      ++it;
  }
  return out;
}

Form ComplexStructure::project(const Form& a, int p, int q) const {
  auto parts = type_decompose(a);
  auto it = parts.find({p, q});
  if (it == parts.end()) return Form(dim(), p + q);
  return it->second;
}

Form ComplexStructure::dbar(const LieModel& model, const Form& a) const {
  Form out(dim(), std::min(a.degree() + 1, dim() + 1));
  if (a.degree() >= dim()) return out;
  out = Form(dim(), a.degree() + 1);
  for (const auto& [pq, comp] : type_decompose(a))
    out += project(model.d(comp), pq.first, pq.second + 1);
  return out;
}

Form ComplexStructure::del(const LieModel& model, const Form& a) const {
  Form out(dim(), std::min(a.degree() + 1, dim() + 1));
  if (a.degree() >= dim()) return out;
  out = Form(dim(), a.degree() + 1);
  for (const auto& [pq, comp] : type_decompose(a))
    out += project(model.d(comp), pq.first + 1, pq.second);
  return out;
}

Form ComplexStructure::dc(const LieModel& model, const Form& a) const {
  return cd(0, 1) * (dbar(model, a) - del(model, a));
}

Form ComplexStructure::ddc(const LieModel& model, const Form& a) const {
  if (a.degree() + 2 > dim()) return Form(dim(), std::min(a.degree() + 2, dim() + 1));
  return cd(0, 2) * del(model, dbar(model, a));
}

double ComplexStructure::nijenhuis_norm(const LieModel& model) const {
  int m = dim();
  Eigen::MatrixXd Jv = vector_matrix();
  // [e_i,e_j] coefficients
  auto bracket = [&](const Eigen::VectorXd& X, const Eigen::VectorXd& Y) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(m);
    for (int i = 1; i <= m; ++i)
      for (int j = 1; j <= m; ++j) {
        double xy = X(i - 1) * Y(j - 1);
        if (xy == 0.0) continue;
        for (int k = 1; k <= m; ++k) out(k - 1) += xy * model.bracket_coeff(k, i, j);
      }
    return out;
  };
  double total = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      Eigen::VectorXd X = Eigen::VectorXd::Unit(m, i), Y = Eigen::VectorXd::Unit(m, j);
      Eigen::VectorXd JX = Jv * X, JY = Jv * Y;
      Eigen::VectorXd N = bracket(JX, JY) - Jv * bracket(JX, Y) - Jv * bracket(X, JY) -
                          bracket(X, Y);
      total += N.squaredNorm();
    }
  return std::sqrt(total);
}

HermitianStructure::HermitianStructure(const LieModel& model, ComplexStructure j, Form omega,
                                       Form mu)
    : model_(&model), j_(std::move(j)), omega_(std::move(omega)), mu_(std::move(mu)) {
  if (omega_.degree() != 2) throw std::invalid_argument("HermitianStructure: omega must be a 2-form");
  Eigen::MatrixXd W = form_to_antisym(omega_);
  g_ = W * j_.covector_matrix().transpose();
  if ((g_ - g_.transpose()).norm() > 1e-10 * (1.0 + g_.norm()))
    throw std::invalid_argument("HermitianStructure: omega is not J-invariant");
  if (mu_.degree() != model.dim())
    throw std::invalid_argument("HermitianStructure: mu must be a top form");
  // all values are immutable after construction; fill the Gram cache eagerly
  // so concurrent reads stay safe
  if (positive()) {
    for (int k = 0; k <= model.dim(); ++k) gram(k);
  }
}

HermitianStructure::HermitianStructure(const LieModel& model, ComplexStructure j, Form omega)
    : HermitianStructure(model, std::move(j), std::move(omega), [&model]() {
        Mask full = (Mask(1) << model.dim()) - 1;
        Form mu(model.dim(), model.dim());
        mu.set(full, double(model.orientation_sign()));
        return mu;
      }()) {}

double HermitianStructure::min_metric_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g_);
  return es.eigenvalues().minCoeff();
}

Form HermitianStructure::volume_form() const {
  int nn = n();
  Form v = wedge_pow(omega_, nn);
  double fact = 1.0;
  for (int k = 2; k <= nn; ++k) fact *= k;
  v *= 1.0 / fact;
  return v;
}

double HermitianStructure::total_volume() const {
  cd v = model_->integrate_top(volume_form());
  return v.real();
}

const Eigen::MatrixXd& HermitianStructure::gram(int degree) const {
  auto it = gram_cache_.find(degree);
  if (it != gram_cache_.end()) return it->second;
  Eigen::MatrixXd G1 = g_.inverse();
  auto masks = degree_masks(dim(), degree);
  Eigen::MatrixXd G((int)masks.size(), (int)masks.size());
  for (size_t a = 0; a < masks.size(); ++a) {
    std::vector<int> rows;
    for (Mask r = masks[a]; r != 0; r &= r - 1) rows.push_back(std::countr_zero(r));
    for (size_t b = 0; b < masks.size(); ++b) {
      std::vector<int> cols;
      for (Mask r = masks[b]; r != 0; r &= r - 1) cols.push_back(std::countr_zero(r));
      Eigen::MatrixXd sub((int)rows.size(), (int)cols.size());
      for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < cols.size(); ++j) sub(i, j) = G1(rows[i], cols[j]);
      G(a, b) = degree == 0 ? 1.0 : sub.determinant();
    }
  }
  if (degree == 0) G = Eigen::MatrixXd::Ones(1, 1);
  return gram_cache_.emplace(degree, std::move(G)).first->second;
}

cd HermitianStructure::inner(const Form& a, const Form& b) const {
  if (a.degree() != b.degree()) throw std::invalid_argument("inner: degree mismatch");
  if (a.degree() > dim() || b.degree() > dim()) return 0.0;
  const Eigen::MatrixXd& G = gram(a.degree());
  auto masks = degree_masks(dim(), a.degree());
  std::map<Mask, int> index;
  for (size_t i = 0; i < masks.size(); ++i) index[masks[i]] = (int)i;
  cd s = 0.0;
  for (const auto& [I, ca] : a.coeffs())
    for (const auto& [J, cb] : b.coeffs()) s += ca * std::conj(cb) * G(index[I], index[J]);
  return s;
}

double HermitianStructure::l2_norm(const Form& a) const {
  if (a.degree() > dim()) return 0.0;
  double v = total_volume();
  return std::sqrt(std::max(0.0, inner(a, a).real() * v));
}

Form HermitianStructure::star(const Form& a) const {
  // Complex-linear star: alpha ^ *beta = (alpha,beta)_bilinear vol.
  int k = a.degree();
  int m = dim();
  Mask full = (Mask(1) << m) - 1;
  double vfull = volume_form().coeff(full).real();
  const Eigen::MatrixXd& G = gram(k);
  auto masks = degree_masks(m, k);
  std::map<Mask, int> index;
  for (size_t i = 0; i < masks.size(); ++i) index[masks[i]] = (int)i;
  Form out(m, m - k);
  for (size_t i = 0; i < masks.size(); ++i) {
    cd gb = 0.0;
    for (const auto& [J, cb] : a.coeffs()) gb += G((int)i, index[J]) * cb;
    if (gb == cd(0.0)) continue;
    Mask I = masks[i];
    Mask K = full & ~I;
    double s = merge_sign(I, K);
    out.add(K, gb * vfull * s);
  }
  out.prune(1e-16 * (1.0 + out.cmax()));
  return out;
}

Form HermitianStructure::lambda(const Form& a) const {
  int k = a.degree();
  if (k < 2) return Form(dim(), 0);
  auto masks_lo = degree_masks(dim(), k - 2);
  auto masks_hi = degree_masks(dim(), k);
  std::map<Mask, int> hi_index;
  for (size_t i = 0; i < masks_hi.size(); ++i) hi_index[masks_hi[i]] = (int)i;
  // L matrix of omega ^ . : Lambda^{k-2} -> Lambda^k
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero((int)masks_hi.size(), (int)masks_lo.size());
  for (size_t j = 0; j < masks_lo.size(); ++j) {
    Form w = wedge(omega_, Form::basis(dim(), masks_lo[j]));
    for (const auto& [I, c] : w.coeffs()) L(hi_index[I], (int)j) = c.real();
  }
  Eigen::MatrixXd M = gram(k - 2).ldlt().solve(L.transpose() * gram(k));
  Eigen::VectorXcd av = Eigen::VectorXcd::Zero((int)masks_hi.size());
  for (const auto& [I, c] : a.coeffs()) av(hi_index[I]) = c;
  Eigen::VectorXcd res = M.cast<cd>() * av;
  Form out(dim(), k - 2);
  for (size_t j = 0; j < masks_lo.size(); ++j)
    if (std::abs(res((int)j)) > 1e-15) out.set(masks_lo[j], res((int)j));
  return out;
}

double HermitianStructure::lambda_scalar(const Form& a) const {
  if (a.degree() != 2) throw std::invalid_argument("lambda_scalar: need a 2-form");
  return lambda(a).coeff(0).real();
}

Form HermitianStructure::lee_form() const {
  int m = dim();
  Form om_pow = wedge_pow(omega_, n() - 1);
  Form rhs = model_->d(om_pow);
  auto masks = degree_masks(m, 2 * n() - 1);
  std::map<Mask, int> index;
  for (size_t i = 0; i < masks.size(); ++i) index[masks[i]] = (int)i;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero((int)masks.size(), m);
  for (int j = 0; j < m; ++j) {
    Form col = wedge(Form::basis(m, Mask(1) << j), om_pow);
    for (const auto& [I, c] : col.coeffs()) A(index[I], j) = c.real();
  }
  Eigen::VectorXd b = Eigen::VectorXd::Zero((int)masks.size());
  for (const auto& [I, c] : rhs.coeffs()) b(index[I]) = c.real();
  Eigen::VectorXd theta = A.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(b);
  double resid = (A * theta - b).norm();
  if (resid > 1e-10 * (1.0 + b.norm()))
    throw std::runtime_error("lee_form: defining system inconsistent, invalid hermitian data");
  Form out(m, 1);
  for (int j = 0; j < m; ++j)
    if (theta(j) != 0.0) out.set(Mask(1) << j, theta(j));
  return out;
}

Form HermitianStructure::codifferential(const Form& a) const {
  // d* = -(*) d (*) on k-forms of even-dimensional oriented models
  return -1.0 * star(model_->d(star(a)));
}

Form HermitianStructure::lee_form_codifferential() const {
  Form delta = codifferential(omega_);
  return -1.0 * j_.apply(delta);
}

double HermitianStructure::dilaton_function() const {
  cd volw = model_->integrate_top(volume_form());
  cd volmu = model_->integrate_top(mu_);
  if (volw.real() <= 0.0)
    throw std::runtime_error("dilaton_function: omega^n not positive (orientation or positivity)");
  if (volmu.real() <= 0.0) throw std::runtime_error("dilaton_function: mu not positive");
  return 0.5 * std::log(volw.real() / volmu.real());
}

double HermitianStructure::psi_norm_squared(const Form& psi) const {
  int nn = n();
  if (psi.degree() != nn) throw std::invalid_argument("psi_norm_squared: need an (n,0)-form");
  Form pp = wedge(psi, psi.conj());
  double sgn = ((nn * (nn - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
  cd in = std::pow(cd(0, 1), nn);
  cd num = sgn * in * model_->integrate_top(pp);
  cd den = model_->integrate_top(volume_form());
  if (std::abs(den) == 0.0) throw std::runtime_error("psi_norm_squared: omega^n vanishes");
  cd r = num / den;
  return r.real();
}

double bismut_psi_norm(const HermitianStructure& h, const Form& psi) {
  const LieModel& model = h.model();
  int m = h.dim();
  const Eigen::MatrixXd& g = h.metric();
  Eigen::MatrixXd ginv = g.inverse();

  // Koszul formula on invariant fields: 2 g(nabla_i e_j, e_k)
  auto gbr = [&](int i, int j, int k) {
    double s = 0.0;
    for (int mm = 1; mm <= m; ++mm) s += model.bracket_coeff(mm, i, j) * g(mm - 1, k - 1);
    return s;
  };
  Form torsion = h.J().dc(model, h.omega());

  std::vector<Eigen::MatrixXd> covector_action(m);  // D_i with nabla^+_{e_i} e^k = sum D(r,k) e^r
  for (int i = 1; i <= m; ++i) {
    Eigen::MatrixXd Gamma(m, m);  // Gamma(j,k) = g(nabla^+_{e_i} e_j, e_k)
    for (int j = 1; j <= m; ++j)
      for (int k = 1; k <= m; ++k) {
        double lc = 0.5 * (gbr(i, j, k) - gbr(j, k, i) + gbr(k, i, j));
        double tor = evaluate(torsion, {i, j, k}).real();
        Gamma(j - 1, k - 1) = lc - 0.5 * tor;
      }
    Eigen::MatrixXd coeff = Gamma * ginv;  // nabla_{e_i} e_j = sum_k coeff(j,k) e_k
    covector_action[i - 1] = -coeff.transpose();
  }

  std::vector<Form> derivatives;
  derivatives.reserve(m);
  for (int i = 1; i <= m; ++i) {
    // nabla^+_{e_i} psi by the Leibniz rule on covectors
    Form dpsi(m, psi.degree());
    for (const auto& [I, c] : psi.coeffs()) {
      int position = 0;
      for (Mask rest = I; rest != 0; rest &= rest - 1, ++position) {
        int bit = std::countr_zero(rest);
        Mask without = I & ~(Mask(1) << bit);
        Form repl(m, 1);
        for (int r = 0; r < m; ++r) {
          double v = covector_action[i - 1](r, bit);
          if (v != 0.0) repl.set(Mask(1) << r, v);
        }
        double sgn = (position % 2 == 0) ? 1.0 : -1.0;
        Form term = wedge(repl, Form::basis(m, without));
        term *= sgn * c;
        dpsi += term;
      }
    }
    derivatives.push_back(dpsi);
  }
  double total = 0.0;
  for (int a = 1; a <= m; ++a)
    for (int b = 1; b <= m; ++b) {
      if (ginv(a - 1, b - 1) == 0.0) continue;
      total += (ginv(a - 1, b - 1) * h.inner(derivatives[a - 1], derivatives[b - 1])).real();
    }
  return std::sqrt(std::max(0.0, total));
}

}  // namespace invgeo
