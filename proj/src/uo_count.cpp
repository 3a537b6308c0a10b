#include "arenkit/uo_count.hpp"

#include "arenkit/error.hpp"

namespace arenkit {

BigInt region_bound(const BigInt& num_hyperplanes, int dim) {
  if (num_hyperplanes < 0) throw Error(Errc::InvalidArgument, "hyperplane count must be >= 0");
  if (dim < 1) throw Error(Errc::InvalidArgument, "dimension must be >= 1");
  BigInt sum = 0;
  BigInt binom = 1;  // C(N, i)
  for (int i = 0; i <= dim; ++i) {
    if (BigInt(i) > num_hyperplanes) break;
    sum += binom;
    binom = binom * (num_hyperplanes - i) / (i + 1);
  }
  return sum;
}

UoBound estimate_unique_order_count(const BigInt& n_est, int n_state, HyperplaneCounting counting) {
  if (n_est < 1) throw Error(Errc::InvalidArgument, "n_est must be at least 1");
  UoBound out;
  out.n_local = n_est;
  out.n_state = n_state;
  out.n_hyperplanes = counting == HyperplaneCounting::Pairwise ? n_est * (n_est - 1) / 2 : n_est;
  out.m_est = region_bound(out.n_hyperplanes, n_state);
  return out;
}

}  // namespace arenkit
