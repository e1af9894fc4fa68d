#pragma once

#include <cmath>
#include <complex>
#include <sstream>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace lrswap {

using Rational = boost::multiprecision::cpp_rational;
using Complex = std::complex<double>;

// Minimal scalar-ring interface shared by the exact (Rational) and the
// floating (Complex) instantiations of the operator calculus.

inline bool is_zero(const Rational& x) { return x == 0; }
inline bool is_zero(const Complex& x) { return x == Complex(0.0, 0.0); }
inline bool is_zero(double x) { return x == 0.0; }
inline bool is_zero(long long x) { return x == 0; }

inline double magnitude(const Rational& x) {
  return std::abs(static_cast<double>(x));
}
inline double magnitude(const Complex& x) { return std::abs(x); }
inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(long long x) { return std::abs(static_cast<double>(x)); }

inline std::string to_text(const Rational& x) { return x.str(); }
inline std::string to_text(long long x) { return std::to_string(x); }
inline std::string to_text(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}
inline std::string to_text(const Complex& x) {
  std::ostringstream os;
  os.precision(17);
  os << x.real() << (x.imag() < 0 ? "-" : "+") << std::abs(x.imag()) << "i";
  return os.str();
}

inline Rational make_rational(long long num, long long den) {
  return Rational(num) / Rational(den);
}

inline Complex to_complex(const Rational& x) { return Complex(static_cast<double>(x), 0.0); }
inline Complex to_complex(const Complex& x) { return x; }

}  // namespace lrswap
