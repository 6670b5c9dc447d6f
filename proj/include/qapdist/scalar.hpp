#pragma once

// Numeric modes: exact rationals (GMP) and doubles.

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qapdist {

using Rational = mpq_class;
using BigInt = mpz_class;

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr const char* name = "exact";

  static Rational from_ratio(long num, long den = 1) {
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  static Rational from_rational(const Rational& q) { return q; }
  static double to_double(const Rational& x) { return x.get_d(); }
  static int sign(const Rational& x, double /*tol*/ = 0.0) { return sgn(x); }

  static std::string format(const Rational& x) { return x.get_str(); }

  /// Accepts integers ("-3"), fractions ("7/12") and decimals ("-0.125",
  /// "1.5e-2").
  static Rational parse(std::string_view text) {
    std::string s(text);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    std::size_t start = 0;
    while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
    s = s.substr(start);
    if (s.empty()) throw std::invalid_argument("empty number");

    if (s.find('/') != std::string::npos) {
      Rational q;
      if (q.set_str(s, 10) != 0 || q.get_den() == 0)
        throw std::invalid_argument("malformed fraction: " + s);
      q.canonicalize();
      return q;
    }

    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string::npos) {
      try {
        std::size_t used = 0;
        exponent = std::stol(s.substr(e + 1), &used);
        if (used != s.size() - e - 1) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw std::invalid_argument("malformed exponent: " + s);
      }
      s = s.substr(0, e);
    }
    bool negative = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
      negative = s[0] == '-';
      s = s.substr(1);
    }
    std::string digits;
    long scale = 0;
    bool seen_point = false;
    for (char c : s) {
      if (c == '.') {
        if (seen_point) throw std::invalid_argument("malformed decimal: " + std::string(text));
        seen_point = true;
      } else if (c >= '0' && c <= '9') {
        digits.push_back(c);
        if (seen_point) ++scale;
      } else {
        throw std::invalid_argument("malformed decimal: " + std::string(text));
      }
    }
    if (digits.empty()) throw std::invalid_argument("malformed decimal: " + std::string(text));
    BigInt num(digits, 10);
    if (negative) num = -num;
    long power = exponent - scale;
    BigInt ten_pow;
    mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(power < 0 ? -power : power));
    Rational q = power >= 0 ? Rational(num * ten_pow) : Rational(num, ten_pow);
    q.canonicalize();
    return q;
  }
};

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static constexpr const char* name = "float";

  static double from_ratio(long num, long den = 1) {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  static double from_rational(const Rational& q) { return q.get_d(); }
  static double to_double(double x) { return x; }
  static int sign(double x, double tol = 0.0) {
    if (x > tol) return 1;
    if (x < -tol) return -1;
    return 0;
  }

  static std::string format(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
  }

  static double parse(std::string_view text) {
    std::string s(text);
    if (s.find('/') != std::string::npos) return ScalarTraits<Rational>::parse(s).get_d();
    try {
      std::size_t used = 0;
      double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed number: " + s);
    }
  }
};

template <class T>
concept Scalar = requires { ScalarTraits<T>::exact; };

template <Scalar T>
inline constexpr bool is_exact_v = ScalarTraits<T>::exact;

template <Scalar T>
T scalar(long num, long den = 1) {
  return ScalarTraits<T>::from_ratio(num, den);
}

template <Scalar T>
double to_double(const T& x) {
  return ScalarTraits<T>::to_double(x);
}

template <Scalar T>
std::string to_string(const T& x) {
  return ScalarTraits<T>::format(x);
}

template <Scalar T>
T parse_scalar(std::string_view text) {
  return ScalarTraits<T>::parse(text);
}

/// Sign with an absolute dead zone in float mode; exact sign otherwise.
template <Scalar T>
int sign_of(const T& x, double tol = 0.0) {
  return ScalarTraits<T>::sign(x, tol);
}

template <Scalar T>
bool near(const T& a, const T& b, double tol = 0.0) {
  T d = a - b;
  return sign_of<T>(d, tol) == 0;
}

inline BigInt factorial(unsigned long n) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

inline BigInt binomial(unsigned long n, unsigned long k) {
  if (k > n) return 0;
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

inline Rational ratio(const BigInt& num, const BigInt& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

template <Scalar T>
T from_bigint(const BigInt& z) {
  if constexpr (is_exact_v<T>) {
    return Rational(z);
  } else {
    return z.get_d();
  }
}

}  // namespace qapdist
