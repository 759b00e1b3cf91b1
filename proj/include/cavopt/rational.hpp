#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace cavopt {

/// Arbitrary-precision integers and rationals. All encodings emit integer
/// coefficients, but normalization (e.g. the NPP target Σr/2) produces
/// half-integers, so the coefficient type is a full rational.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline std::string to_string(const Rational& q) { return q.str(); }

inline double to_double(const Rational& q) { return q.template convert_to<double>(); }

}  // namespace cavopt
