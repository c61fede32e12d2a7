#ifndef INVGEO_FORMS_HPP
#define INVGEO_FORMS_HPP

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace invgeo {

using cd = std::complex<double>;

// Multi-indices are bitmasks over the covector basis e^1..e^m (bit k-1 <-> e^k).
using Mask = std::uint32_t;

int popcount(Mask m);

// Sign of merging two disjoint increasing multi-indices: e^I ^ e^J = sign * e^{I u J}.
int merge_sign(Mask I, Mask J);

// Sign of the permutation given by listing `perm` (1-based labels) relative to increasing order.
int permutation_sign(const std::vector<int>& perm);

std::vector<Mask> degree_masks(int dim, int degree);

std::string mask_to_string(Mask I);

// Complex-coefficient exterior form over a fixed covector basis, indexed by
// strictly increasing multi-indices. Absent index = zero coefficient.
class Form {
 public:
  Form() : dim_(0), degree_(0) {}
  Form(int dim, int degree) : dim_(dim), degree_(degree) {}

  static Form basis(int dim, Mask I);  // e^I

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  bool is_zero(double tol = 0.0) const;

  cd coeff(Mask I) const;
  void set(Mask I, cd value);
  void add(Mask I, cd value);
  const std::map<Mask, cd>& coeffs() const { return coeffs_; }

  Form& operator+=(const Form& other);
  Form& operator-=(const Form& other);
  Form& operator*=(cd scalar);
  Form operator-() const;

  Form conj() const;
  Form real_part() const;
  Form imag_part() const;

  // max |coefficient|; coefficient-space l2 norm (metric-free)
  double cmax() const;
  double cnorm() const;

  void prune(double tol = 1e-15);

  std::string to_string() const;

 private:
  int dim_;
  int degree_;
  std::map<Mask, cd> coeffs_;
};

Form operator+(Form a, const Form& b);
Form operator-(Form a, const Form& b);
Form operator*(cd scalar, Form a);

// Graded product with permutation-sign bookkeeping. Throws if degrees sum past the
// ambient dimension (a silent zero would mask dimension bugs).
Form wedge(const Form& a, const Form& b);

Form wedge_pow(const Form& a, int k);

// A real Lie algebra presented by its Chevalley-Eilenberg structure equations
// de^k, plus an orientation top index and the total volume V of the compact quotient.
class LieModel {
 public:
  LieModel(int dim, std::vector<Form> structure, std::vector<int> orientation,
           double volume);

  int dim() const { return dim_; }
  double volume() const { return volume_; }
  const std::vector<int>& orientation() const { return orientation_; }
  int orientation_sign() const { return orientation_sign_; }
  const Form& d_basis(int k) const { return structure_[k - 1]; }  // de^k, 1-based

  // Chevalley-Eilenberg differential extended by the Leibniz rule.
  Form d(const Form& a) const;

  // Integral of a top-degree form: orientation coefficient times V.
  cd integrate_top(const Form& a) const;

  // Structure constants [e_i,e_j] = sum_k c^k_ij e_k, derived from de^k(e_i,e_j) = -c^k_ij.
  double bracket_coeff(int k, int i, int j) const;
  bool unimodular(double tol = 1e-12) const;

  std::string to_string() const;

 private:
  void validate() const;

  int dim_;
  std::vector<Form> structure_;
  std::vector<int> orientation_;
  int orientation_sign_;
  double volume_;
};

// Evaluate e^I on basis vectors (e_{j1},...,e_{jk}); forms evaluate multilinearly.
cd evaluate(const Form& a, const std::vector<int>& vectors);

// Model file parser: lines "de^k = ...", "orientation = ...", "volume = ...".
LieModel parse_model(const std::string& text);
LieModel load_model_file(const std::string& path);

}  // namespace invgeo

#endif
