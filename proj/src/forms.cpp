#include "invgeo/forms.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace invgeo {

int popcount(Mask m) { return std::popcount(m); }

int merge_sign(Mask I, Mask J) {
  // Count inversions: pairs (i in I, j in J) with i > j.
  int inversions = 0;
  for (Mask j = J; j != 0; j &= j - 1) {
    int bit = std::countr_zero(j);
    inversions += std::popcount(I >> (bit + 1));
  }
  return (inversions % 2 == 0) ? 1 : -1;
}

int permutation_sign(const std::vector<int>& perm) {
  int inversions = 0;
  for (size_t i = 0; i < perm.size(); ++i)
    for (size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) ++inversions;
  return (inversions % 2 == 0) ? 1 : -1;
}

std::vector<Mask> degree_masks(int dim, int degree) {
  std::vector<Mask> out;
  for (Mask m = 0; m < (Mask(1) << dim); ++m)
    if (std::popcount(m) == degree) out.push_back(m);
  return out;
}

std::string mask_to_string(Mask I) {
  std::string s;
  for (int b = 0; b < 32; ++b)
    if (I & (Mask(1) << b)) s += std::to_string(b + 1);
  return s;
}

Form Form::basis(int dim, Mask I) {
  Form f(dim, popcount(I));
  f.set(I, 1.0);
  return f;
}

bool Form::is_zero(double tol) const {
  for (const auto& [I, c] : coeffs_)
    if (std::abs(c) > tol) return false;
  return true;
}

cd Form::coeff(Mask I) const {
  auto it = coeffs_.find(I);
  return it == coeffs_.end() ? cd(0.0) : it->second;
}

void Form::set(Mask I, cd value) {
  if (popcount(I) != degree_) throw std::invalid_argument("Form::set: index degree mismatch");
  if (value == cd(0.0))
    coeffs_.erase(I);
  else
    coeffs_[I] = value;
}

void Form::add(Mask I, cd value) { set(I, coeff(I) + value); }

Form& Form::operator+=(const Form& other) {
  if (degree_ != other.degree_ || dim_ != other.dim_)
    throw std::invalid_argument("Form::+=: degree/dim mismatch");
  for (const auto& [I, c] : other.coeffs_) add(I, c);
  return *this;
}

Form& Form::operator-=(const Form& other) {
  if (degree_ != other.degree_ || dim_ != other.dim_)
    throw std::invalid_argument("Form::-=: degree/dim mismatch");
  for (const auto& [I, c] : other.coeffs_) add(I, -c);
  return *this;
}

Form& Form::operator*=(cd scalar) {
  if (scalar == cd(0.0)) {
    coeffs_.clear();
    return *this;
  }
  for (auto& [I, c] : coeffs_) c *= scalar;
  return *this;
}

Form Form::operator-() const {
  Form out = *this;
  out *= -1.0;
  return out;
}

Form Form::conj() const {
  Form out(dim_, degree_);
  for (const auto& [I, c] : coeffs_) out.set(I, std::conj(c));
  return out;
}

Form Form::real_part() const {
  Form out(dim_, degree_);
  for (const auto& [I, c] : coeffs_) out.set(I, cd(c.real(), 0.0));
  return out;
}

Form Form::imag_part() const {
  Form out(dim_, degree_);
  for (const auto& [I, c] : coeffs_) out.set(I, cd(c.imag(), 0.0));
  return out;
}

double Form::cmax() const {
  double m = 0.0;
  for (const auto& [I, c] : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

double Form::cnorm() const {
  double s = 0.0;
  for (const auto& [I, c] : coeffs_) s += std::norm(c);
  return std::sqrt(s);
}

void Form::prune(double tol) {
  for (auto it = coeffs_.begin(); it != coeffs_.end();) {
    if (std::abs(it->second) <= tol)
      it = coeffs_.erase(it);
    else
      ++it;
  }
}

std::string Form::to_string() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& [I, c] : coeffs_) {
    std::string suffix = degree_ > 0 ? " e^{" + mask_to_string(I) + "}" : "";
    if (c.real() != 0.0 || c.imag() == 0.0) {
      if (!first) os << " + ";
      first = false;
      os << c.real() << suffix;
    }
    if (c.imag() != 0.0) {
      if (!first) os << " + ";
      first = false;
      os << c.imag() << "i" << suffix;
    }
  }
  return os.str();
}

Form operator+(Form a, const Form& b) { return a += b; }
Form operator-(Form a, const Form& b) { return a -= b; }
Form operator*(cd scalar, Form a) { return a *= scalar; }

Form wedge(const Form& a, const Form& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("wedge: ambient dimension mismatch");
  int degree = a.degree() + b.degree();
  if (degree > a.dim())
    throw std::invalid_argument("wedge: degree " + std::to_string(degree) +
                                " exceeds dimension " + std::to_string(a.dim()));
  Form out(a.dim(), degree);
  for (const auto& [I, ca] : a.coeffs()) {
    for (const auto& [J, cb] : b.coeffs()) {
      if (I & J) continue;
      out.add(I | J, double(merge_sign(I, J)) * ca * cb);
    }
  }
  out.prune(0.0);
  return out;
}

Form wedge_pow(const Form& a, int k) {
  if (k < 0) throw std::invalid_argument("wedge_pow: negative power");
  Form out(a.dim(), 0);
  out.set(0, 1.0);
  for (int i = 0; i < k; ++i) out = wedge(out, a);
  return out;
}

LieModel::LieModel(int dim, std::vector<Form> structure, std::vector<int> orientation,
                   double volume)
    : dim_(dim),
      structure_(std::move(structure)),
      orientation_(std::move(orientation)),
      volume_(volume) {
  if ((int)structure_.size() != dim_) throw std::invalid_argument("LieModel: need de^k for k=1..m");
  if ((int)orientation_.size() != dim_) throw std::invalid_argument("LieModel: bad orientation");
  std::vector<int> sorted = orientation_;
  std::sort(sorted.begin(), sorted.end());
  for (int k = 0; k < dim_; ++k)
    if (sorted[k] != k + 1) throw std::invalid_argument("LieModel: orientation is not a permutation");
  if (volume_ <= 0.0) throw std::invalid_argument("LieModel: volume must be positive");
  orientation_sign_ = permutation_sign(orientation_);
  validate();
}

void LieModel::validate() const {
  for (int k = 1; k <= dim_; ++k) {
    if (structure_[k - 1].degree() != 2 || structure_[k - 1].dim() != dim_)
      throw std::invalid_argument("LieModel: de^k must be a 2-form over the model");
    Form dd = d(structure_[k - 1]);
    if (dd.cmax() > 1e-12)
      throw std::invalid_argument("LieModel: d(de^" + std::to_string(k) +
                                  ") != 0, Jacobi identity fails");
  }
}

Form LieModel::d(const Form& a) const {
  Form out(dim_, std::min(a.degree() + 1, dim_ + 1));
  if (a.degree() >= dim_) return out;  // d of a top form vanishes identically
  out = Form(dim_, a.degree() + 1);
  for (const auto& [I, c] : a.coeffs()) {
    int position = 0;
    for (Mask rest = I; rest != 0; rest &= rest - 1, ++position) {
      int bit = std::countr_zero(rest);
      Mask without = I & ~(Mask(1) << bit);
      double sign = (position % 2 == 0) ? 1.0 : -1.0;
      // d(e^I) = sum_p (-1)^{p-1} de^{i_p} ^ e^{I \ i_p}
      const Form& dk = structure_[bit];
      for (const auto& [J, cj] : dk.coeffs()) {
        if (J & without) continue;
        if (popcount(J | without) > dim_) continue;
        out.add(J | without, sign * c * cj * double(merge_sign(J, without)));
      }
    }
  }
  out.prune(0.0);
  return out;
}

cd LieModel::integrate_top(const Form& a) const {
  if (a.degree() != dim_)
    throw std::invalid_argument("integrate_top: form degree != model dimension");
  Mask full = (Mask(1) << dim_) - 1;
  return a.coeff(full) * double(orientation_sign_) * volume_;
}

double LieModel::bracket_coeff(int k, int i, int j) const {
  // de^k(e_i,e_j) = -c^k_ij
  cd v = evaluate(structure_[k - 1], {i, j});
  return -v.real();
}

bool LieModel::unimodular(double tol) const {
  for (int k = 1; k <= dim_; ++k) {
    double trace = 0.0;
    for (int i = 1; i <= dim_; ++i) trace += bracket_coeff(i, i, k);
    if (std::abs(trace) > tol) return false;
  }
  return true;
}

std::string LieModel::to_string() const {
  std::ostringstream os;
  os << "dim = " << dim_ << "\n";
  for (int k = 1; k <= dim_; ++k) os << "de^" << k << " = " << structure_[k - 1].to_string() << "\n";
  os << "orientation =";
  for (int v : orientation_) os << " " << v;
  os << "\nvolume = " << volume_ << "\n";
  return os.str();
}

cd evaluate(const Form& a, const std::vector<int>& vectors) {
  if ((int)vectors.size() != a.degree())
    throw std::invalid_argument("evaluate: wrong number of vectors");
  Mask J = 0;
  std::vector<int> labels = vectors;
  for (int v : vectors) {
    Mask bit = Mask(1) << (v - 1);
    if (J & bit) return 0.0;  // repeated vector
    J |= bit;
  }
  // e^I(e_{j1},..,e_{jk}) = sign of permutation sorting (j1..jk) when {j}=I, else 0.
  return a.coeff(J) * double(permutation_sign(labels));
}

namespace {

void strip(std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  size_t b = s.find_last_not_of(" \t\r\n");
  s = (a == std::string::npos) ? "" : s.substr(a, b - a + 1);
}

// Parses a coefficient token like "", "-", "3", "-1/2", "2.5", "i", "-2i", "3/4i".
cd parse_coefficient(std::string tok) {
  strip(tok);
  double sign = 1.0;
  while (!tok.empty() && (tok[0] == '+' || tok[0] == '-')) {
    if (tok[0] == '-') sign = -sign;
    tok = tok.substr(1);
    strip(tok);
  }
  bool imaginary = false;
  if (!tok.empty() && tok.back() == 'i') {
    imaginary = true;
    tok.pop_back();
    strip(tok);
  }
  if (!tok.empty() && tok.back() == '*') {
    tok.pop_back();
    strip(tok);
  }
  double value = 1.0;
  if (!tok.empty()) {
    size_t slash = tok.find('/');
    if (slash != std::string::npos) {
      value = std::stod(tok.substr(0, slash)) / std::stod(tok.substr(slash + 1));
    } else {
      value = std::stod(tok);
    }
  }
  value *= sign;
  return imaginary ? cd(0.0, value) : cd(value, 0.0);
}

// Parses "c e^{i j ...} + c e^{...} - ..." into a Form of uniform degree.
Form parse_form_expr(const std::string& expr, int dim, int degree) {
  Form out(dim, degree);
  std::string body = expr;
  strip(body);
  if (body == "0" || body.empty()) return out;
  size_t pos = 0;
  while (pos < body.size()) {
    size_t e = body.find("e^{", pos);
    if (e == std::string::npos) {
      std::string tail = body.substr(pos);
      strip(tail);
      if (!tail.empty()) throw std::invalid_argument("model parse: trailing junk '" + tail + "'");
      break;
    }
    std::string coef_tok = body.substr(pos, e - pos);
    size_t close = body.find('}', e);
    if (close == std::string::npos) throw std::invalid_argument("model parse: unterminated e^{");
    std::string idx = body.substr(e + 3, close - e - 3);
    Mask I = 0;
    std::vector<int> order;
    for (char ch : idx) {
      if (ch == ' ' || ch == ',') continue;
      if (ch < '1' || ch > '9') throw std::invalid_argument("model parse: bad index char");
      int v = ch - '0';
      if (v > dim) throw std::invalid_argument("model parse: index exceeds dimension");
      order.push_back(v);
      Mask bit = Mask(1) << (v - 1);
      if (I & bit) throw std::invalid_argument("model parse: repeated index");
      I |= bit;
    }
    if ((int)order.size() != degree) throw std::invalid_argument("model parse: index degree mismatch");
    cd c = parse_coefficient(coef_tok) * double(permutation_sign(order));
    out.add(I, c);
    pos = close + 1;
  }
  return out;
}

}  // namespace

LieModel parse_model(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int dim = 0;
  double volume = 1.0;
  std::vector<int> orientation;
  std::map<int, std::string> de_lines;
  while (std::getline(in, line)) {
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    strip(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("model parse: expected '=' in: " + line);
    std::string key = line.substr(0, eq), value = line.substr(eq + 1);
    strip(key);
    strip(value);
    if (key == "dim") {
      dim = std::stoi(value);
    } else if (key == "volume") {
      volume = std::stod(value);
    } else if (key == "orientation") {
      std::istringstream vs(value);
      int v;
      while (vs >> v) orientation.push_back(v);
    } else if (key.rfind("de^", 0) == 0) {
      de_lines[std::stoi(key.substr(3))] = value;
    } else {
      throw std::invalid_argument("model parse: unknown key '" + key + "'");
    }
  }
  if (dim == 0) throw std::invalid_argument("model parse: missing dim");
  std::vector<Form> structure;
  for (int k = 1; k <= dim; ++k) {
    auto it = de_lines.find(k);
    if (it == de_lines.end())
      throw std::invalid_argument("model parse: missing de^" + std::to_string(k));
    structure.push_back(parse_form_expr(it->second, dim, 2));
  }
  if (orientation.empty())
    for (int k = 1; k <= dim; ++k) orientation.push_back(k);
  return LieModel(dim, std::move(structure), std::move(orientation), volume);
}

LieModel load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

}  // namespace invgeo
