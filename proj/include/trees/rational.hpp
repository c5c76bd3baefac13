#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace trees {

// Exact arithmetic used for every series coefficient and every count.
// Floating point appears only in the numeric evaluation layer (lower bounds,
// extrapolation, eigenvalues).
using Int = mpz_class;
using Rat = mpq_class;

inline double to_double(const Rat& q) { return q.get_d(); }
inline double to_double(const Int& z) { return z.get_d(); }

inline Rat rat_of(long num, long den = 1) { return Rat(num, den); }

// q must have denominator 1; used when a construction is known to count
// something and a non-integer would mean a logic error.
inline Int integral_part_exact(const Rat& q, const char* what) {
  if (q.get_den() != 1) {
    throw std::logic_error(std::string(what) + ": non-integral value " + q.get_str());
  }
  return q.get_num();
}

inline std::string to_string(const Rat& q) { return q.get_str(); }
inline std::string to_string(const Int& z) { return z.get_str(); }

// Thrown when a requested computation exceeds a configured size cap.
class resource_error : public std::runtime_error {
 public:
  explicit resource_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown on malformed textual input; `position` is the offending token index.
class parse_error : public std::invalid_argument {
 public:
  parse_error(const std::string& msg, int position)
      : std::invalid_argument(msg), position(position) {}
  int position;
};

}  // namespace trees
