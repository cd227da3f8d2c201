#pragma once

// Exact coefficient fields: prime fields F_p (p < 2^31) and the rationals.
//
// A field object carries whatever runtime state the arithmetic needs (the
// modulus for F_p). Elements are plain values; all arithmetic goes through
// the field so that rings over different primes can coexist in one process.

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace klift {

class PrimeField {
 public:
  using Elem = std::uint32_t;

  explicit PrimeField(std::uint32_t p) : p_(p) {
    if (p < 2 || p >= (1u << 31) || !is_prime(p))
      throw std::invalid_argument("characteristic must be a prime below 2^31, got " +
                                  std::to_string(p));
  }

  std::uint32_t characteristic() const { return p_; }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem from_int(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    if (r < 0) r += p_;
    return static_cast<Elem>(r);
  }
  Elem from_ratio(std::int64_t num, std::int64_t den) const {
    if (from_int(den) == 0) throw std::domain_error("division by zero in F_" + std::to_string(p_));
    return div(from_int(num), from_int(den));
  }

  bool is_zero(Elem a) const { return a == 0; }
  bool is_one(Elem a) const { return a == 1; }
  bool equal(Elem a, Elem b) const { return a == b; }

  Elem add(Elem a, Elem b) const {
    std::uint64_t s = std::uint64_t{a} + b;
    return static_cast<Elem>(s >= p_ ? s - p_ : s);
  }
  Elem sub(Elem a, Elem b) const { return a >= b ? a - b : static_cast<Elem>(std::uint64_t{a} + p_ - b); }
  Elem neg(Elem a) const { return a == 0 ? 0 : p_ - a; }
  Elem mul(Elem a, Elem b) const { return static_cast<Elem>((std::uint64_t{a} * b) % p_); }
  Elem inv(Elem a) const {
    if (a == 0) throw std::domain_error("inverse of zero");
    // extended Euclid on (a, p)
    std::int64_t t = 0, new_t = 1, r = p_, new_r = a;
    while (new_r != 0) {
      std::int64_t q = r / new_r;
      std::int64_t tmp = t - q * new_t;
      t = new_t;
      new_t = tmp;
      tmp = r - q * new_r;
      r = new_r;
      new_r = tmp;
    }
    if (t < 0) t += p_;
    return static_cast<Elem>(t);
  }
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

  // Symmetric representative, so -1 prints as "-1" rather than "p-1".
  std::string to_string(Elem a) const {
    if (a > p_ / 2) return "-" + std::to_string(p_ - a);
    return std::to_string(a);
  }
  bool is_negative(Elem a) const { return a > p_ / 2; }

  std::string name() const { return "F" + std::to_string(p_); }

  friend bool operator==(const PrimeField& a, const PrimeField& b) { return a.p_ == b.p_; }

 private:
  static bool is_prime(std::uint32_t n) {
    if (n < 4) return n >= 2;
    if (n % 2 == 0) return false;
    for (std::uint32_t d = 3; std::uint64_t{d} * d <= n; d += 2)
      if (n % d == 0) return false;
    return true;
  }

  std::uint32_t p_;
};

class RationalField {
 public:
  using Elem = mpq_class;

  std::uint32_t characteristic() const { return 0; }

  Elem zero() const { return Elem(0); }
  Elem one() const { return Elem(1); }
  Elem from_int(std::int64_t v) const { return Elem(static_cast<long>(v)); }
  Elem from_ratio(std::int64_t num, std::int64_t den) const {
    if (den == 0) throw std::domain_error("division by zero in QQ");
    Elem r(static_cast<long>(num), static_cast<long>(den));
    r.canonicalize();
    return r;
  }

  bool is_zero(const Elem& a) const { return sgn(a) == 0; }
  bool is_one(const Elem& a) const { return a == 1; }
  bool equal(const Elem& a, const Elem& b) const { return a == b; }

  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem neg(const Elem& a) const { return -a; }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  Elem inv(const Elem& a) const {
    if (sgn(a) == 0) throw std::domain_error("inverse of zero");
    return 1 / a;
  }
  Elem div(const Elem& a, const Elem& b) const { return a / b; }

  std::string to_string(const Elem& a) const { return a.get_str(); }
  bool is_negative(const Elem& a) const { return sgn(a) < 0; }

  std::string name() const { return "QQ"; }

  friend bool operator==(const RationalField&, const RationalField&) { return true; }
};

template <class K>
concept CoefficientField = requires(const K& k, typename K::Elem a, typename K::Elem b) {
  { k.characteristic() } -> std::convertible_to<std::uint32_t>;
  { k.add(a, b) } -> std::same_as<typename K::Elem>;
  { k.mul(a, b) } -> std::same_as<typename K::Elem>;
  { k.inv(a) } -> std::same_as<typename K::Elem>;
  { k.is_zero(a) } -> std::same_as<bool>;
};

}  // namespace klift
