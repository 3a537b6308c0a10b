#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace arenkit {

// Region and architecture counts overflow 64 bits quickly (2^rho, binomial sums).
using BigInt = boost::multiprecision::cpp_int;

inline BigInt pow2(unsigned exponent) {
  BigInt one = 1;
  return one << exponent;
}

inline std::string to_string(const BigInt& value) { return value.str(); }

inline BigInt parse_bigint(const std::string& text) { return BigInt(text); }

}  // namespace arenkit
