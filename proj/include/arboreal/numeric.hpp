#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

namespace arboreal {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

Int int_pow(const Int& base, unsigned long exp);
Rat rat_pow(const Rat& base, unsigned long exp);

// Parses "3", "-3", "1/2". Throws ParseError on garbage or zero denominator.
Rat parse_rational(const std::string& text);

// Truncated decimal expansion with `digits` fractional digits.
std::string decimal_string(const Rat& value, int digits);

// Solves M x = rhs exactly by Gaussian elimination with partial pivoting
// on nonzero entries. M is square and must be nonsingular.
std::vector<Rat> solve_linear_system(std::vector<std::vector<Rat>> m,
                                     std::vector<Rat> rhs);

} // namespace arboreal
