#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace sublab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }
inline double to_double(const BigInt& z) { return z.convert_to<double>(); }


}  // namespace sublab
