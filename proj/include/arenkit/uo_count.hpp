#pragma once

#include "arenkit/bigint.hpp"

namespace arenkit {

/// Upper bound sum_{i=0}^{dim} C(num_hyperplanes, i) on the number of regions
/// cut out by `num_hyperplanes` hyperplanes in R^dim (tight in general position).
BigInt region_bound(const BigInt& num_hyperplanes, int dim);

struct UoBound {
  BigInt n_local;        // bound on the number of local linear functions
  BigInt n_hyperplanes;  // pairwise equality hyperplanes counted in the bound
  int n_state = 0;
  BigInt m_est;          // bound on the number of unique-order regions
};

enum class HyperplaneCounting {
  Pairwise,  // C(N, 2): one hyperplane per pair of local functions
  Literal,   // N, as the closed-form statement is printed
};

/// Bound on the unique-order regions of a CPWL function on R^n_state with at
/// most `n_est` local linear functions. Throws Error{InvalidArgument} if n_est < 1.
UoBound estimate_unique_order_count(const BigInt& n_est, int n_state,
                                    HyperplaneCounting counting = HyperplaneCounting::Pairwise);

}  // namespace arenkit
