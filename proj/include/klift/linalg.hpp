#pragma once

// Dense linear algebra over an exact field. Graded pieces of finitely
// presented modules are finite dimensional, so every degree-wise question
// (split tests, exactness of a sequence in one degree, cocycle checks) ends up
// here.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "klift/field.hpp"

namespace klift {

template <class K>
struct Matrix {
  using Elem = typename K::Elem;
  std::size_t rows = 0, cols = 0;
  std::vector<Elem> a;

  Matrix() = default;
  Matrix(const K& k, std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, k.zero()) {}

  Elem& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const Elem& at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

// In-place reduced row echelon form; returns pivot columns.
template <class K>
std::vector<std::size_t> rref(const K& k, Matrix<K>& m) {
  std::vector<std::size_t> piv;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
    std::size_t p = r;
    while (p < m.rows && k.is_zero(m.at(p, c))) ++p;
    if (p == m.rows) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols; ++j) std::swap(m.at(p, j), m.at(r, j));
    auto inv = k.inv(m.at(r, c));
    for (std::size_t j = c; j < m.cols; ++j) m.at(r, j) = k.mul(m.at(r, j), inv);
    for (std::size_t i = 0; i < m.rows; ++i) {
      if (i == r || k.is_zero(m.at(i, c))) continue;
      auto f = m.at(i, c);
      for (std::size_t j = c; j < m.cols; ++j) m.at(i, j) = k.sub(m.at(i, j), k.mul(f, m.at(r, j)));
    }
    piv.push_back(c);
    ++r;
  }
  return piv;
}

template <class K>
std::size_t rank(const K& k, Matrix<K> m) {
  return rref(k, m).size();
}

// Basis of {v : m v = 0}.
template <class K>
std::vector<std::vector<typename K::Elem>> nullspace(const K& k, Matrix<K> m) {
  auto piv = rref(k, m);
  std::vector<char> is_piv(m.cols, 0);
  for (auto c : piv) is_piv[c] = 1;
  std::vector<std::vector<typename K::Elem>> out;
  for (std::size_t f = 0; f < m.cols; ++f) {
    if (is_piv[f]) continue;
    std::vector<typename K::Elem> v(m.cols, k.zero());
    v[f] = k.one();
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = k.neg(m.at(r, f));
    out.push_back(std::move(v));
  }
  return out;
}

// One solution of m x = b, or nullopt when inconsistent.
template <class K>
std::optional<std::vector<typename K::Elem>> solve(const K& k, const Matrix<K>& m,
                                                   const std::vector<typename K::Elem>& b) {
  if (b.size() != m.rows) throw std::invalid_argument("solve: dimension mismatch");
  Matrix<K> aug(k, m.rows, m.cols + 1);
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, m.cols) = b[i];
  }
  auto piv = rref(k, aug);
  if (!piv.empty() && piv.back() == m.cols) return std::nullopt;
  std::vector<typename K::Elem> x(m.cols, k.zero());
  for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug.at(r, m.cols);
  return x;
}

template <class K>
Matrix<K> matmul(const K& k, const Matrix<K>& x, const Matrix<K>& y) {
  if (x.cols != y.rows) throw std::invalid_argument("matmul: dimension mismatch");
  Matrix<K> z(k, x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t l = 0; l < x.cols; ++l) {
      if (k.is_zero(x.at(i, l))) continue;
      for (std::size_t j = 0; j < y.cols; ++j) z.at(i, j) = k.add(z.at(i, j), k.mul(x.at(i, l), y.at(l, j)));
    }
  return z;
}

template <class K>
bool is_zero_matrix(const K& k, const Matrix<K>& m) {
  for (auto& x : m.a)
    if (!k.is_zero(x)) return false;
  return true;
}

}  // namespace klift
