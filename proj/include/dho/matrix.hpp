#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace dho {

using Complex = std::complex<double>;

// Complex product spelled out so optimized builds stay on plain FP ops
// instead of the library's NaN-propagating __muldc3 path.
inline Complex cmul(const Complex& a, const Complex& b) {
  return {a.real() * b.real() - a.imag() * b.imag(),
          a.real() * b.imag() + a.imag() * b.real()};
}

// Smith's robust complex division.
inline Complex cdiv(const Complex& a, const Complex& b) {
  const double br = b.real(), bi = b.imag();
  if (std::abs(br) >= std::abs(bi)) {
    const double t = bi / br;
    const double d = br + bi * t;
    return {(a.real() + a.imag() * t) / d, (a.imag() - a.real() * t) / d};
  }
  const double t = br / bi;
  const double d = br * t + bi;
  return {(a.real() * t + a.imag()) / d, (a.imag() * t - a.real()) / d};
}

// |re| + |im|; the cheap magnitude used for threshold tests.
inline double cabs1(const Complex& z) { return std::abs(z.real()) + std::abs(z.imag()); }

// Dense square complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(int n)
      : n_(n), data_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
    if (n < 0) throw std::invalid_argument("matrix dimension must be non-negative");
  }

  static ComplexMatrix identity(int n) {
    ComplexMatrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int size() const { return n_; }

  Complex& operator()(int i, int j) { return data_[idx(i, j)]; }
  const Complex& operator()(int i, int j) const { return data_[idx(i, j)]; }

  Complex* row(int i) { return data_.data() + static_cast<std::size_t>(i) * n_; }
  const Complex* row(int i) const { return data_.data() + static_cast<std::size_t>(i) * n_; }

  ComplexMatrix adjoint() const {
    ComplexMatrix m(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
  }

  Complex trace() const {
    Complex t = 0.0;
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
  }

  double max_abs() const {
    double m = 0.0;
    for (const Complex& z : data_) m = std::max(m, std::abs(z));
    return m;
  }

  bool all_finite() const {
    for (const Complex& z : data_)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
  }

  std::vector<Complex> apply(const std::vector<Complex>& x) const {
    if (static_cast<int>(x.size()) != n_)
      throw std::invalid_argument("matrix-vector dimension mismatch");
    std::vector<Complex> y(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) {
      const Complex* r = row(i);
      Complex acc = 0.0;
      for (int j = 0; j < n_; ++j) acc += cmul(r[j], x[static_cast<std::size_t>(j)]);
      y[static_cast<std::size_t>(i)] = acc;
    }
    return y;
  }

  friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    check_same(a, b);
    ComplexMatrix m(a.n_);
    for (std::size_t k = 0; k < a.data_.size(); ++k) m.data_[k] = a.data_[k] + b.data_[k];
    return m;
  }
  friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    check_same(a, b);
    ComplexMatrix m(a.n_);
    for (std::size_t k = 0; k < a.data_.size(); ++k) m.data_[k] = a.data_[k] - b.data_[k];
    return m;
  }
  friend ComplexMatrix operator*(const Complex& s, const ComplexMatrix& a) {
    ComplexMatrix m(a.n_);
    for (std::size_t k = 0; k < a.data_.size(); ++k) m.data_[k] = cmul(s, a.data_[k]);
    return m;
  }

  friend ComplexMatrix hermitian_part(const ComplexMatrix& a) {
    ComplexMatrix m(a.n_);
    for (int i = 0; i < a.n_; ++i)
      for (int j = 0; j < a.n_; ++j) m(i, j) = 0.5 * (a(i, j) + std::conj(a(j, i)));
    return m;
  }
  friend ComplexMatrix antihermitian_part(const ComplexMatrix& a) {
    ComplexMatrix m(a.n_);
    for (int i = 0; i < a.n_; ++i)
      for (int j = 0; j < a.n_; ++j) m(i, j) = 0.5 * (a(i, j) - std::conj(a(j, i)));
    return m;
  }

  // Plain O(n^3) product; only used at test/report scale.
  friend ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    check_same(a, b);
    ComplexMatrix m(a.n_);
    for (int i = 0; i < a.n_; ++i) {
      for (int k = 0; k < a.n_; ++k) {
        const Complex aik = a(i, k);
        if (aik == Complex(0.0)) continue;
        const Complex* brow = b.row(k);
        Complex* mrow = m.row(i);
        for (int j = 0; j < a.n_; ++j) mrow[j] += cmul(aik, brow[j]);
      }
    }
    return m;
  }

 private:
  static void check_same(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.n_ != b.n_) throw std::invalid_argument("matrix dimension mismatch");
  }
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(j);
  }

  int n_ = 0;
  std::vector<Complex> data_;
};

}  // namespace dho
