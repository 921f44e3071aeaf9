#ifndef GPDEXT_SCALAR_HPP_
#define GPDEXT_SCALAR_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "context.hpp"
#include "error.hpp"

namespace gpdext {

  using Rational = boost::multiprecision::cpp_rational;

  enum class ScalarKind { integers, rationals, gaussian_rationals, zmod };

  //! Z, Q, Q(i) or Z/m. Every scalar is stored as a pair of rationals; the
  //! domain decides which pairs are legal and how arithmetic reduces.
  struct ScalarDomain {
    ScalarKind kind    = ScalarKind::integers;
    BigInt     modulus = 0;

    static ScalarDomain Z() {
      return {ScalarKind::integers, 0};
    }

    static ScalarDomain Q() {
      return {ScalarKind::rationals, 0};
    }

    static ScalarDomain Qi() {
      return {ScalarKind::gaussian_rationals, 0};
    }

    static ScalarDomain Zmod(BigInt m) {
      if (m < 2) {
        fail(ErrorCode::invalid_input, "modulus must be at least 2");
      }
      return {ScalarKind::zmod, std::move(m)};
    }

    //! "Z", "Q", "Qi" or "Z/m".
    static ScalarDomain parse(std::string const& s) {
      if (s == "Z") {
        return Z();
      }
      if (s == "Q") {
        return Q();
      }
      if (s == "Qi") {
        return Qi();
      }
      if (s.rfind("Z/", 0) == 0) {
        try {
          return Zmod(BigInt(s.substr(2)));
        } catch (std::runtime_error const&) {
        }
      }
      fail(ErrorCode::parse_error, "unknown scalar domain " + s);
    }

    std::string name() const {
      switch (kind) {
        case ScalarKind::integers: return "Z";
        case ScalarKind::rationals: return "Q";
        case ScalarKind::gaussian_rationals: return "Qi";
        case ScalarKind::zmod: return "Z/" + modulus.str();
      }
      return "?";
    }

    bool is_field() const {
      if (kind == ScalarKind::rationals || kind == ScalarKind::gaussian_rationals) {
        return true;
      }
      if (kind != ScalarKind::zmod) {
        return false;
      }
      for (BigInt d = 2; d * d <= modulus; ++d) {
        if (modulus % d == 0) {
          return false;
        }
      }
      return true;
    }

    bool operator==(ScalarDomain const&) const = default;
  };

  struct Scalar {
    Rational re = 0;
    Rational im = 0;

    Scalar() = default;

    Scalar(Rational r, Rational i = 0) : re(std::move(r)), im(std::move(i)) {}

    Scalar(long long r) : re(r), im(0) {}

    bool operator==(Scalar const&) const = default;

    bool operator<(Scalar const& that) const {
      return std::tie(re, im) < std::tie(that.re, that.im);
    }
  };

  namespace scalar {

    inline Scalar reduce(ScalarDomain const& d, Scalar s) {
      if (d.kind == ScalarKind::zmod) {
        BigInt v = boost::multiprecision::numerator(s.re) % d.modulus;
        if (v < 0) {
          v += d.modulus;
        }
        return Scalar(Rational(v));
      }
      return s;
    }

    //! Throws InvalidInput for a value outside the domain.
    inline void check(ScalarDomain const& d, Scalar const& s) {
      bool const integral = boost::multiprecision::denominator(s.re) == 1;
      bool ok = true;
      switch (d.kind) {
        case ScalarKind::integers: ok = integral && s.im == 0; break;
        case ScalarKind::rationals: ok = s.im == 0; break;
        case ScalarKind::gaussian_rationals: break;
        case ScalarKind::zmod:
          ok = integral && s.im == 0 && s.re >= 0 && s.re < Rational(d.modulus);
          break;
      }
      if (!ok) {
        fail(ErrorCode::invalid_input, "scalar outside " + d.name());
      }
    }

    inline Scalar add(ScalarDomain const& d, Scalar const& a, Scalar const& b) {
      return reduce(d, Scalar(a.re + b.re, a.im + b.im));
    }

    inline Scalar neg(ScalarDomain const& d, Scalar const& a) {
      return reduce(d, Scalar(-a.re, -a.im));
    }

    inline Scalar sub(ScalarDomain const& d, Scalar const& a, Scalar const& b) {
      return add(d, a, neg(d, b));
    }

    inline Scalar mul(ScalarDomain const& d, Scalar const& a, Scalar const& b) {
      return reduce(d, Scalar(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re));
    }

    inline Scalar conj(Scalar const& a) {
      return Scalar(a.re, -a.im);
    }

    inline bool is_zero(Scalar const& a) {
      return a.re == 0 && a.im == 0;
    }

    inline std::optional<Scalar> inverse(ScalarDomain const& d, Scalar const& a) {
      if (is_zero(a)) {
        return std::nullopt;
      }
      switch (d.kind) {
        case ScalarKind::integers:
          if (a.re == 1 || a.re == -1) {
            return a;
          }
          return std::nullopt;
        case ScalarKind::rationals: return Scalar(1 / a.re);
        case ScalarKind::gaussian_rationals: {
          Rational const n = a.re * a.re + a.im * a.im;
          return Scalar(a.re / n, -a.im / n);
        }
        case ScalarKind::zmod: {
          BigInt const v = boost::multiprecision::numerator(a.re);
          // extended Euclid
          BigInt r0 = d.modulus, r1 = v, t0 = 0, t1 = 1;
          while (r1 != 0) {
            BigInt const q = r0 / r1;
            BigInt const r2 = r0 - q * r1;
            BigInt const t2 = t0 - q * t1;
            r0 = r1;
            r1 = r2;
            t0 = t1;
            t1 = t2;
          }
          if (r0 != 1) {
            return std::nullopt;
          }
          return reduce(d, Scalar(Rational(t0)));
        }
      }
      return std::nullopt;
    }

    inline std::string format(Rational const& q) {
      return q.str();
    }

    inline std::string format(Scalar const& a) {
      if (a.im == 0) {
        return format(a.re);
      }
      return "(" + format(a.re) + (a.im < 0 ? "" : "+") + format(a.im) + "i)";
    }

  }  // namespace scalar

  //! An exact nonnegative-or-signed real sum of c_d sqrt(d) with d
  //! squarefree. Square roots of distinct squarefree integers are linearly
  //! independent over Q, so the representation is unique and equality is
  //! coefficientwise.
  class RadicalSum {
   public:
    RadicalSum() = default;

    explicit RadicalSum(Rational q) {
      add_term(1, std::move(q));
    }

    //! c sqrt(n) for an integer n >= 0.
    static RadicalSum root(BigInt const& n, Rational const& c = 1) {
      RadicalSum out;
      if (n == 0 || c == 0) {
        return out;
      }
      auto [s, d] = split_square(n);
      out.add_term(d, c * Rational(s));
      return out;
    }

    //! sqrt(q) for a rational q >= 0.
    static RadicalSum root(Rational const& q) {
      BigInt const p = boost::multiprecision::numerator(q);
      BigInt const r = boost::multiprecision::denominator(q);
      return root(p * r, Rational(BigInt(1), r));
    }

    //! |a| for a Gaussian rational.
    static RadicalSum abs(Scalar const& a) {
      return root(Rational(a.re * a.re + a.im * a.im));
    }

    RadicalSum operator+(RadicalSum const& that) const {
      RadicalSum out = *this;
      for (auto const& [d, c] : that._terms) {
        out.add_term(d, c);
      }
      return out;
    }

    RadicalSum operator-(RadicalSum const& that) const {
      RadicalSum out = *this;
      for (auto const& [d, c] : that._terms) {
        out.add_term(d, -c);
      }
      return out;
    }

    RadicalSum operator*(RadicalSum const& that) const {
      RadicalSum out;
      for (auto const& [a, c] : _terms) {
        for (auto const& [b, e] : that._terms) {
          BigInt const g = boost::multiprecision::gcd(a, b);
          // sqrt(a) sqrt(b) = g sqrt(a b / g^2), and ab/g^2 is squarefree.
          out.add_term((a / g) * (b / g), c * e * Rational(g));
        }
      }
      return out;
    }

    bool operator==(RadicalSum const&) const = default;

    bool is_zero() const {
      return _terms.empty();
    }

    //! -1, 0 or 1, decided by refining rational bounds on every root.
    int sign() const {
      if (_terms.empty()) {
        return 0;
      }
      for (unsigned bits = 16;; bits *= 2) {
        BigInt const scale = BigInt(1) << bits;
        Rational     lo = 0, hi = 0;
        for (auto const& [d, c] : _terms) {
          BigInt const   s = boost::multiprecision::sqrt(BigInt(d * scale * scale));
          Rational const a(s, scale), b(s + 1, scale);
          if (c > 0) {
            lo += c * a;
            hi += c * b;
          } else {
            lo += c * b;
            hi += c * a;
          }
        }
        if (lo > 0) {
          return 1;
        }
        if (hi < 0) {
          return -1;
        }
      }
    }

    bool operator<=(RadicalSum const& that) const {
      return (that - *this).sign() >= 0;
    }

    bool operator<(RadicalSum const& that) const {
      return (that - *this).sign() > 0;
    }

    //! Coefficient of sqrt(d), by squarefree d.
    std::map<BigInt, Rational> const& terms() const noexcept {
      return _terms;
    }

    std::string str() const {
      if (_terms.empty()) {
        return "0";
      }
      std::string out;
      for (auto const& [d, c] : _terms) {
        if (!out.empty()) {
          out += c < 0 ? " - " : " + ";
        } else if (c < 0) {
          out += "-";
        }
        Rational const a = c < 0 ? Rational(-c) : c;
        out += a.str();
        if (d != 1) {
          out += "*sqrt(" + d.str() + ")";
        }
      }
      return out;
    }

   private:
    //! n = s^2 d with d squarefree, by trial division.
    static std::pair<BigInt, BigInt> split_square(BigInt n) {
      BigInt s = 1, d = 1;
      for (BigInt p = 2; p * p <= n; ++p) {
        while (n % (p * p) == 0) {
          n /= p * p;
          s *= p;
        }
        if (n % p == 0) {
          n /= p;
          d *= p;
        }
      }
      return {s, d * n};
    }

    void add_term(BigInt const& d, Rational const& c) {
      if (c == 0) {
        return;
      }
      auto [it, fresh] = _terms.emplace(d, c);
      if (!fresh) {
        it->second += c;
        if (it->second == 0) {
          _terms.erase(it);
        }
      }
    }

    std::map<BigInt, Rational> _terms;
  };

}  // namespace gpdext

#endif  // GPDEXT_SCALAR_HPP_
