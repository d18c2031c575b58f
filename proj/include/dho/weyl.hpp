#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dho/rational.hpp"

namespace dho {

// Exact symbolic algebra over the canonical pair (y, p) with [y, p] = i*hbar,
// hbar an exact rational parameter of the algebra. Every polynomial is kept
// in normal order (all y factors left of all p factors) with no zero
// coefficients stored, so equality is plain term-map equality and every
// identity test is exact, not tolerance-based.

struct SymbolicParams {
  Rational m{1};
  Rational omega{1};
  Rational lambda{0};
  Rational hbar{1};

  void validate() const {
    if (!(Rational(0) < m)) throw std::invalid_argument("symbolic m must be positive");
    if (!(Rational(0) < omega)) throw std::invalid_argument("symbolic omega must be positive");
    if (lambda.is_negative()) throw std::invalid_argument("symbolic lambda must be non-negative");
    if (!(Rational(0) < hbar)) throw std::invalid_argument("symbolic hbar must be positive");
  }
};

enum class HamiltonianForm { EQ2, EQ4, EQ5 };

class OperatorPoly {
 public:
  // Guards against runaway symbolic blowup; degree 2 is all the physics
  // here needs. Exceeding the cap is a hard error.
  static constexpr int kMaxExponent = 16;

  struct Monomial {
    int y_pow = 0;
    int p_pow = 0;
    friend auto operator<=>(const Monomial&, const Monomial&) = default;
  };

  using TermMap = std::map<Monomial, RationalComplex>;

  OperatorPoly() = default;

  static OperatorPoly zero() { return {}; }

  static OperatorPoly constant(RationalComplex c) { return monomial(0, 0, std::move(c)); }

  static OperatorPoly y() { return monomial(1, 0, Rational(1)); }

  static OperatorPoly p() { return monomial(0, 1, Rational(1)); }

  static OperatorPoly monomial(int y_pow, int p_pow, RationalComplex coeff) {
    check_exponent(y_pow);
    check_exponent(p_pow);
    OperatorPoly poly;
    poly.add_term(y_pow, p_pow, coeff);
    return poly;
  }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  RationalComplex coefficient(int y_pow, int p_pow) const {
    auto it = terms_.find(Monomial{y_pow, p_pow});
    return it == terms_.end() ? RationalComplex{} : it->second;
  }

  void add_term(int y_pow, int p_pow, const RationalComplex& coeff) {
    check_exponent(y_pow);
    check_exponent(p_pow);
    if (coeff.is_zero()) return;
    Monomial key{y_pow, p_pow};
    auto [it, inserted] = terms_.emplace(key, coeff);
    if (!inserted) {
      it->second += coeff;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  friend OperatorPoly operator+(const OperatorPoly& a, const OperatorPoly& b) {
    OperatorPoly r = a;
    for (const auto& [mono, c] : b.terms_) r.add_term(mono.y_pow, mono.p_pow, c);
    return r;
  }
  friend OperatorPoly operator-(const OperatorPoly& a, const OperatorPoly& b) {
    OperatorPoly r = a;
    for (const auto& [mono, c] : b.terms_) r.add_term(mono.y_pow, mono.p_pow, -c);
    return r;
  }
  OperatorPoly operator-() const {
    OperatorPoly r;
    for (const auto& [mono, c] : terms_) r.terms_.emplace(mono, -c);
    return r;
  }
  friend OperatorPoly operator*(const RationalComplex& s, const OperatorPoly& a) {
    OperatorPoly r;
    if (s.is_zero()) return r;
    for (const auto& [mono, c] : a.terms_) r.terms_.emplace(mono, s * c);
    return r;
  }
  OperatorPoly& operator+=(const OperatorPoly& o) { return *this = *this + o; }
  OperatorPoly& operator-=(const OperatorPoly& o) { return *this = *this - o; }

  friend bool operator==(const OperatorPoly& a, const OperatorPoly& b) {
    return a.terms_ == b.terms_;
  }
  friend bool operator!=(const OperatorPoly& a, const OperatorPoly& b) { return !(a == b); }

 private:
  static void check_exponent(int e) {
    if (e < 0) throw std::invalid_argument("negative monomial exponent");
    if (e > kMaxExponent) throw std::overflow_error("monomial exponent cap (16) exceeded");
  }

  TermMap terms_;
};

namespace detail {

inline Rational factorial(int n) {
  Rational r(1);
  for (int i = 2; i <= n; ++i) r *= Rational(i);
  return r;
}

inline Rational binomial(int n, int k) {
  if (k < 0 || k > n) return Rational(0);
  Rational r(1);
  for (int i = 0; i < k; ++i) r = r * Rational(n - i) / Rational(i + 1);
  return r;
}

// (-i*hbar)^k
inline RationalComplex neg_i_hbar_pow(const Rational& hbar, int k) {
  RationalComplex r{Rational(1)};
  RationalComplex base{Rational(0), -hbar};
  for (int i = 0; i < k; ++i) r *= base;
  return r;
}

}  // namespace detail

// Normal-ordered product. Reordering a single crossing uses
// p y = y p - i*hbar; for whole monomials,
//   p^b y^a = sum_k k! C(a,k) C(b,k) (-i*hbar)^k y^(a-k) p^(b-k),
// which is the closed form of repeatedly applying the rewrite.
inline OperatorPoly normal_order_mul(const OperatorPoly& a, const OperatorPoly& b,
                                     const Rational& hbar) {
  OperatorPoly result;
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      const RationalComplex cc = ca * cb;
      const int kmax = std::min(ma.p_pow, mb.y_pow);
      for (int k = 0; k <= kmax; ++k) {
        RationalComplex coeff = cc * detail::factorial(k) *
                                detail::binomial(mb.y_pow, k) *
                                detail::binomial(ma.p_pow, k) *
                                detail::neg_i_hbar_pow(hbar, k);
        result.add_term(ma.y_pow + mb.y_pow - k, ma.p_pow + mb.p_pow - k, coeff);
      }
    }
  }
  return result;
}

// Adjoint: (c y^a p^b)^dagger = conj(c) p^b y^a, re-normal-ordered.
// An involution; reverses products.
inline OperatorPoly adjoint(const OperatorPoly& a, const Rational& hbar) {
  OperatorPoly result;
  for (const auto& [mono, c] : a.terms()) {
    const RationalComplex cc = c.conj();
    const int kmax = std::min(mono.y_pow, mono.p_pow);
    for (int k = 0; k <= kmax; ++k) {
      RationalComplex coeff = cc * detail::factorial(k) *
                              detail::binomial(mono.y_pow, k) *
                              detail::binomial(mono.p_pow, k) *
                              detail::neg_i_hbar_pow(hbar, k);
      result.add_term(mono.y_pow - k, mono.p_pow - k, coeff);
    }
  }
  return result;
}

// Conjugation by eta = exp(i*sigma*y^2/hbar). Because [y^2, p] = 2*i*hbar*y
// and all higher commutators vanish, the adjoint action terminates exactly:
// it is the algebra automorphism y -> y, p -> p - 2*sigma*y. No series
// truncation is involved; the result is exact for every polynomial.
inline OperatorPoly gauge_conjugate(const OperatorPoly& a, const Rational& sigma,
                                    const Rational& hbar) {
  const OperatorPoly image_p =
      OperatorPoly::p() + OperatorPoly::monomial(1, 0, -(sigma + sigma));

  int max_p = 0;
  for (const auto& [mono, c] : a.terms()) max_p = std::max(max_p, mono.p_pow);

  // image_p powers, computed once
  std::vector<OperatorPoly> p_pows(static_cast<std::size_t>(max_p) + 1);
  p_pows[0] = OperatorPoly::constant(Rational(1));
  for (int k = 1; k <= max_p; ++k)
    p_pows[k] = normal_order_mul(p_pows[k - 1], image_p, hbar);

  OperatorPoly result;
  for (const auto& [mono, c] : a.terms()) {
    OperatorPoly term = normal_order_mul(OperatorPoly::monomial(mono.y_pow, 0, c),
                                         p_pows[mono.p_pow], hbar);
    result += term;
  }
  return result;
}

// Splits a into ((a + a^dagger)/2, (a - a^dagger)/2); the parts are
// self-adjoint and anti-self-adjoint and sum back to a exactly.
inline std::pair<OperatorPoly, OperatorPoly> split_hermitian(const OperatorPoly& a,
                                                             const Rational& hbar) {
  const OperatorPoly adj = adjoint(a, hbar);
  const RationalComplex half{Rational(1, 2)};
  return {half * (a + adj), half * (a - adj)};
}

// The damped-oscillator Hamiltonian in its three equivalent writings:
//   EQ2: p^2/2m + (m w^2/2) y^2 + (lambda/2) y p          (literal ordering)
//   EQ4: p^2/2m + (m w^2/2) y^2 + (lambda/4)(y p + p y) + i hbar lambda/4
//   EQ5: (p + m lambda y/2)^2/2m + (m/2)(w^2 - lambda^2/4) y^2 + i hbar lambda/4
// EQ4 and EQ5 are assembled from genuine operator products so that the
// three-way equality after normal ordering is a theorem, not a tautology.
inline OperatorPoly build_hamiltonian(const SymbolicParams& params, HamiltonianForm form) {
  params.validate();
  const Rational& m = params.m;
  const Rational& w = params.omega;
  const Rational& lam = params.lambda;
  const Rational& hbar = params.hbar;

  const Rational half(1, 2);
  const Rational quarter(1, 4);
  const Rational inv_2m = half / m;
  const Rational v_coeff = half * m * w * w;

  const OperatorPoly y = OperatorPoly::y();
  const OperatorPoly p = OperatorPoly::p();

  switch (form) {
    case HamiltonianForm::EQ2: {
      OperatorPoly h = OperatorPoly::monomial(0, 2, inv_2m);
      h += OperatorPoly::monomial(2, 0, v_coeff);
      h += OperatorPoly::monomial(1, 1, half * lam);
      return h;
    }
    case HamiltonianForm::EQ4: {
      OperatorPoly h = OperatorPoly::monomial(0, 2, inv_2m);
      h += OperatorPoly::monomial(2, 0, v_coeff);
      OperatorPoly sym = normal_order_mul(y, p, hbar) + normal_order_mul(p, y, hbar);
      h += RationalComplex{quarter * lam} * sym;
      h += OperatorPoly::constant(RationalComplex{Rational(0), quarter * hbar * lam});
      return h;
    }
    case HamiltonianForm::EQ5: {
      OperatorPoly shifted = p + OperatorPoly::monomial(1, 0, half * m * lam);
      OperatorPoly h = RationalComplex{inv_2m} * normal_order_mul(shifted, shifted, hbar);
      h += OperatorPoly::monomial(2, 0, half * m * (w * w - quarter * lam * lam));
      h += OperatorPoly::constant(RationalComplex{Rational(0), quarter * hbar * lam});
      return h;
    }
  }
  throw std::invalid_argument("unknown Hamiltonian form");
}

// Canonical text form; parseable by the operator-expression grammar
// (see parser.hpp), so printing and re-parsing round-trips exactly.
inline std::string to_string(const OperatorPoly& poly) {
  if (poly.is_zero()) return "0";

  auto gens = [](const OperatorPoly::Monomial& m) {
    std::string s;
    if (m.y_pow == 1)
      s += "y";
    else if (m.y_pow > 1)
      s += "y^" + std::to_string(m.y_pow);
    if (m.p_pow >= 1) {
      if (!s.empty()) s += "*";
      s += m.p_pow == 1 ? "p" : "p^" + std::to_string(m.p_pow);
    }
    return s;
  };

  std::string out;
  bool first = true;
  for (const auto& [mono, c] : poly.terms()) {
    const std::string g = gens(mono);
    std::string body;
    bool negative = false;

    if (c.is_real()) {
      negative = c.re.is_negative();
      const Rational mag = c.re.abs();
      if (mag == Rational(1) && !g.empty())
        body = g;
      else
        body = mag.to_string() + (g.empty() ? "" : "*" + g);
    } else if (c.is_imaginary()) {
      negative = c.im.is_negative();
      const Rational mag = c.im.abs();
      body = (mag == Rational(1) ? "i" : mag.to_string() + "*i");
      if (!g.empty()) body += "*" + g;
    } else {
      std::string inner;
      if (c.re.is_negative())
        inner = "0 - " + (-c.re).to_string();
      else
        inner = c.re.to_string();
      if (c.im.is_negative())
        inner += " - " + (-c.im).to_string() + "*i";
      else
        inner += " + " + c.im.to_string() + "*i";
      body = "(" + inner + ")" + (g.empty() ? "" : "*" + g);
    }

    if (first) {
      out += negative ? "0 - " + body : body;
      first = false;
    } else {
      out += negative ? " - " + body : " + " + body;
    }
  }
  return out;
}

}  // namespace dho
