#pragma once

#include <cstdint>
#include <vector>

#include "genjac/error.hpp"

namespace genjac {

// Exact carrier for character values: F_P with P = 1 (mod N) and a
// fixed element zeta of multiplicative order N.  All character sums and
// L-series coefficients live here instead of floating complex numbers.
struct FourierCarrier {
  std::uint64_t P = 0;
  std::uint64_t N = 1;
  std::uint64_t zeta = 1;

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t s = a + b;
    return s >= P ? s - P : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
    return a >= b ? a - b : a + P - b;
  }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    return static_cast<std::uint64_t>(static_cast<__uint128_t>(a) * b % P);
  }
  std::uint64_t pow(std::uint64_t a, std::uint64_t e) const {
    std::uint64_t r = 1;
    a %= P;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  std::uint64_t inv(std::uint64_t a) const {
    if (a % P == 0) throw Error(Errc::division_by_zero, "inverse of zero mod P");
    return pow(a, P - 2);
  }
  // zeta^e with e reduced mod N (e may be any integer residue).
  std::uint64_t root(std::uint64_t e) const { return pow(zeta, e % N); }

  bool operator==(const FourierCarrier& o) const {
    return P == o.P && N == o.N && zeta == o.zeta;
  }
};

namespace detail {

inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace detail

// Smallest prime P = 1 (mod N) with P > bound, together with
// zeta = g^((P-1)/N) for g the least primitive root of F_P.
inline FourierCarrier find_fourier_carrier(std::uint64_t N, std::uint64_t bound) {
  if (N < 1 || bound < 1) throw Error(Errc::invalid_input, "carrier parameters");
  std::uint64_t P = bound / N * N + 1;
  while (P <= bound || !detail::is_prime_u64(P)) P += N;
  FourierCarrier fc;
  fc.P = P;
  fc.N = N;
  auto prime_facs = detail::prime_divisors(P - 1);
  std::uint64_t g = 1;
  for (std::uint64_t cand = 2; cand < P; ++cand) {
    bool primitive = true;
    for (std::uint64_t ell : prime_facs)
      if (fc.pow(cand, (P - 1) / ell) == 1) {
        primitive = false;
        break;
      }
    if (primitive) {
      g = cand;
      break;
    }
  }
  fc.zeta = N == 1 ? 1 : fc.pow(g, (P - 1) / N);
  return fc;
}

// zeta^N = 1 and zeta^{N/l} != 1 for every prime l | N.
inline bool verify_root_order(const FourierCarrier& fc) {
  if (fc.pow(fc.zeta, fc.N) != 1) return false;
  for (std::uint64_t ell : detail::prime_divisors(fc.N))
    if (fc.pow(fc.zeta, fc.N / ell) == 1) return false;
  return true;
}

}  // namespace genjac
