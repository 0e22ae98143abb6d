#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace svlab {

// Exact rational arithmetic backs everything upstream of the Monte Carlo
// boundary: event endpoints, world probabilities, alpha levels, and the
// acceptance-count ceiling. GMP's mpq_class does the heavy lifting.
using Rational = mpq_class;

// Parses "3/5", "-2", "0.05" (exact decimal), with optional surrounding
// whitespace. Throws Error on anything else, including floats written in
// scientific notation.
Rational rational_from_string(const std::string& text);

// The exact value of the double (every finite double is a dyadic rational).
Rational rational_exact(double x);

// Recovers a small-denominator rational from a double that originated as a
// short decimal or fraction (e.g. a JSON number). Uses continued fractions;
// accepts the first convergent with denominator <= 10^6 that is within
// 1e-9 of x. Throws Error if no such rational exists.
Rational rational_snap(double x);

// Lowest-terms "p/q" (or just "p" for integers).
std::string rational_str(const Rational& q);

double rational_to_double(const Rational& q);

// Smallest integer >= q, as int64. Throws Error on overflow.
std::int64_t rational_ceil(const Rational& q);

}  // namespace svlab
