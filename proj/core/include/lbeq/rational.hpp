// Arbitrary-precision integers and rationals used as the coefficient ground
// ring of every symbolic object in this library.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace lbeq {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Accepts "7", "-3/4" and decimal literals like "0.125" (converted exactly).
// Throws std::invalid_argument on anything else.
Rat parse_rational(const std::string& text);

// Canonical text form, "a" or "a/b" with b > 1.
std::string rat_to_string(const Rat& r);

Int int_pow(const Int& base, int exp);

}  // namespace lbeq
