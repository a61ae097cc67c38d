#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "genjac/abelian.hpp"
#include "genjac/error.hpp"
#include "genjac/fourier.hpp"
#include "genjac/genus0.hpp"

namespace genjac {

// A character of the level group, stored as an exponent vector against
// the invariant-factor basis: chi(g_i) = zeta^{(N/n_i) e_i}.
struct Character {
  int r = 1;
  std::vector<std::uint32_t> exps;

  bool trivial() const {
    for (auto e : exps)
      if (e) return false;
    return true;
  }
};

// chi(E) = zeta^t; returns t in Z/N.
inline std::uint64_t chi_exponent(const AbelianStructure& G, const Character& chi, Key E) {
  const auto& a = G.coords(E);
  std::uint64_t t = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::uint64_t step = G.exponent / G.invariant_factors[i];
    t = (t + step * chi.exps[i] % G.exponent * a[i]) % G.exponent;
  }
  return t;
}

inline std::uint64_t chi_value(const AbelianStructure& G, const FourierCarrier& fc,
                               const Character& chi, Key E) {
  return fc.root(chi_exponent(G, chi, E));
}

// All |G| characters in lexicographic exponent order.
inline std::vector<Character> character_group(const AbelianStructure& G, int r = 1) {
  std::vector<Character> out;
  std::vector<std::uint32_t> e(G.invariant_factors.size(), 0);
  while (true) {
    out.push_back({r, e});
    std::size_t i = e.size();
    while (i > 0) {
      --i;
      if (++e[i] < G.invariant_factors[i]) break;
      e[i] = 0;
      if (i == 0) return out;
    }
    if (e.empty()) return out;
  }
}

// Everything needed to compute L-functions of one curve at one level:
// the group, the closed points of U with their Frobenius classes, and
// per-degree class-counts of effective divisors.  Shared by the genus-0
// and elliptic realizations.
struct LevelModel {
  int r = 1;
  std::uint64_t field_size = 0;  // q^r
  int B = 0;
  AbelianStructure G;
  std::vector<std::pair<int, Key>> closed_points;        // (degree, class), infinity included
  std::vector<std::vector<std::uint64_t>> divisor_counts;  // [d][element index]
  FourierCarrier carrier;
};

// Carrier large enough that divisor counts recovered by Fourier
// inversion lift uniquely from F_P to Z.
inline FourierCarrier carrier_for(std::uint64_t exponent, std::uint64_t field_size, int B) {
  __uint128_t bound = 1;
  __uint128_t qd = 1;
  for (int d = 0; d <= B; ++d) {
    bound += static_cast<__uint128_t>(d + 1) * qd;
    qd *= field_size;
  }
  bound *= 2;
  if (bound > static_cast<__uint128_t>(1) << 62)
    throw Error(Errc::budget_exceeded, "carrier bound too large");
  return find_fourier_carrier(exponent, static_cast<std::uint64_t>(bound));
}

inline LevelModel build_genus0_model(const JmLevel& J, int B,
                                     std::uint64_t budget = 1000000) {
  LevelModel m;
  m.r = J.r();
  m.field_size = J.field()->q();
  m.B = B;
  m.G = J.group_structure(budget);
  m.carrier = carrier_for(m.G.exponent, m.field_size, B);

  m.closed_points.emplace_back(1, J.identity());  // infinity, Frob = identity
  for (const Poly& p : J.closed_points(B))
    m.closed_points.emplace_back(p.degree(), J.class_of_poly(p));

  // Effective divisors of degree d on U: a monic affine part of degree
  // j coprime to m plus d-j copies of infinity.  Infinity contributes
  // the identity class, so counts accumulate over affine degrees <= d.
  std::vector<std::vector<std::uint64_t>> affine(B + 1,
                                                 std::vector<std::uint64_t>(m.G.order, 0));
  for (int j = 0; j <= B; ++j) {
    std::uint64_t total = 1;
    for (int i = 0; i < j; ++i) total *= m.field_size;
    for (std::uint64_t code = 0; code < total; ++code) {
      Poly f = Poly::from_monic_index(J.field(), j, code);
      Poly red = f % J.modulus();
      if (!coprime(red, J.modulus())) continue;
      ++affine[j][m.G.index.at(J.class_of_poly(f))];
    }
  }
  m.divisor_counts.assign(B + 1, std::vector<std::uint64_t>(m.G.order, 0));
  for (int d = 0; d <= B; ++d)
    for (int j = 0; j <= d; ++j)
      for (std::size_t i = 0; i < m.G.order; ++i) m.divisor_counts[d][i] += affine[j][i];
  return m;
}

// L-series truncated at order B; coefficients live in F_P.  The
// divisor-sum route additionally records each coefficient as an exact
// integer combination of powers of zeta (for the float magnitude path).
struct LSeries {
  int r = 1;
  Character chi;
  int B = 0;
  FourierCarrier carrier;
  std::vector<std::uint64_t> coeffs;                // a_0..a_B in F_P
  std::vector<std::vector<std::int64_t>> cyclo;     // optional; [d][j] = count of zeta^j
  std::string provenance;
};

// Euler product over closed points of degree <= B:
// prod (1 - chi(Frob_y) T^{deg y})^{-1}.
inline LSeries lfun_euler(const LevelModel& m, const Character& chi) {
  LSeries L;
  L.r = m.r;
  L.chi = chi;
  L.B = m.B;
  L.carrier = m.carrier;
  L.coeffs.assign(m.B + 1, 0);
  L.coeffs[0] = 1;
  L.provenance = "euler";
  const auto& fc = m.carrier;
  for (const auto& [d, cls] : m.closed_points) {
    if (d > m.B) continue;
    std::uint64_t v = chi_value(m.G, fc, chi, cls);
    // multiply by the geometric series of chi(Frob_y) T^d
    for (int i = d; i <= m.B; ++i)
      L.coeffs[i] = fc.add(L.coeffs[i], fc.mul(v, L.coeffs[i - d]));
  }
  return L;
}

// Sum over effective divisors: a_d = sum over classes of
// chi(class) * #(degree-d divisors in that class).
inline LSeries lfun_divisor_sum(const LevelModel& m, const Character& chi) {
  LSeries L;
  L.r = m.r;
  L.chi = chi;
  L.B = m.B;
  L.carrier = m.carrier;
  L.coeffs.assign(m.B + 1, 0);
  L.cyclo.assign(m.B + 1, std::vector<std::int64_t>(m.carrier.N, 0));
  L.provenance = "divisor_sum";
  const auto& fc = m.carrier;
  for (int d = 0; d <= m.B; ++d) {
    for (std::size_t i = 0; i < m.G.order; ++i) {
      std::uint64_t c = m.divisor_counts[d][i];
      if (!c) continue;
      std::uint64_t t = chi_exponent(m.G, chi, m.G.elements[i]);
      L.coeffs[d] = fc.add(L.coeffs[d], fc.mul(c % fc.P, fc.root(t)));
      L.cyclo[d][t] += static_cast<std::int64_t>(c);
    }
  }
  return L;
}

// chi(Frob_y) for a closed point y of U.
inline std::uint64_t frobenius_value(const LevelModel& m, const Character& chi,
                                     const JmLevel& J, const ClosedPoint& y) {
  if (y.infinity) return 1;
  return chi_value(m.G, m.carrier, chi, J.class_of_poly(y.p));
}

// (1 - T) * L, asserted to be a polynomial of degree <= deg m - 1.
struct LPolynomial {
  FourierCarrier carrier;
  std::vector<std::uint64_t> coeffs;             // degree <= deg m - 1
  std::vector<std::vector<std::int64_t>> cyclo;  // same, as zeta-combinations (may be empty)
};

inline LPolynomial polynomial_part(const LSeries& L, const Genus0Spec& spec) {
  if (L.chi.trivial())
    throw Error(Errc::trivial_character, "polynomial part requires a nontrivial character");
  const int degm = spec.modulus().degree();
  if (L.B < degm)
    throw Error(Errc::invalid_input, "series bound below deg m");
  const auto& fc = L.carrier;
  std::vector<std::uint64_t> prod(L.B + 1, 0);
  for (int i = 0; i <= L.B; ++i) {
    prod[i] = L.coeffs[i];
    if (i > 0) prod[i] = fc.sub(prod[i], L.coeffs[i - 1]);
  }
  for (int i = degm; i <= L.B; ++i)
    if (prod[i] != 0)
      throw Error(Errc::degree_bound_violation,
                  "(1-T)L has a nonzero coefficient beyond deg m - 1");
  LPolynomial out;
  out.carrier = fc;
  out.coeffs.assign(prod.begin(), prod.begin() + degm);
  while (out.coeffs.size() > 1 && out.coeffs.back() == 0) out.coeffs.pop_back();
  if (!L.cyclo.empty()) {
    out.cyclo.resize(out.coeffs.size());
    for (std::size_t i = 0; i < out.coeffs.size(); ++i) {
      out.cyclo[i] = L.cyclo[i];
      if (i > 0)
        for (std::size_t j = 0; j < out.cyclo[i].size(); ++j)
          out.cyclo[i][j] -= L.cyclo[i - 1][j];
    }
  }
  return out;
}

namespace detail {

inline std::vector<std::complex<double>> durand_kerner(
    std::vector<std::complex<double>> coeffs) {
  while (coeffs.size() > 1 && std::abs(coeffs.back()) < 1e-12) coeffs.pop_back();
  const int n = static_cast<int>(coeffs.size()) - 1;
  std::vector<std::complex<double>> roots(n);
  if (n == 0) return roots;
  for (auto& c : coeffs) c /= coeffs.back();
  std::complex<double> seed(0.4, 0.9);
  std::complex<double> x(1.0, 0.0);
  for (int i = 0; i < n; ++i) {
    x *= seed;
    roots[i] = x;
  }
  for (int iter = 0; iter < 500; ++iter) {
    double delta = 0;
    for (int i = 0; i < n; ++i) {
      std::complex<double> p(0, 0);
      for (int j = n; j >= 0; --j) p = p * roots[i] + coeffs[j];
      std::complex<double> denom(1, 0);
      for (int j = 0; j < n; ++j)
        if (j != i) denom *= roots[i] - roots[j];
      std::complex<double> step = p / denom;
      roots[i] -= step;
      delta = std::max(delta, std::abs(step));
    }
    if (delta < 1e-13) return roots;
  }
  throw Error(Errc::numerical_failure, "root finding did not converge");
}

}  // namespace detail

// Magnitudes of the inverse roots of the polynomial part, via the
// complex lift zeta -> e^{2 pi i / N}.  Sorted ascending.
inline std::vector<double> weil_magnitudes(const LPolynomial& P) {
  if (P.cyclo.empty())
    throw Error(Errc::invalid_input, "magnitudes require exact cyclotomic coefficients");
  const std::uint64_t N = P.carrier.N;
  std::vector<std::complex<double>> coeffs;
  for (const auto& counts : P.cyclo) {
    std::complex<double> c(0, 0);
    for (std::uint64_t j = 0; j < N; ++j) {
      if (!counts[j]) continue;
      double ang = 2.0 * M_PI * static_cast<double>(j) / static_cast<double>(N);
      c += static_cast<double>(counts[j]) * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    coeffs.push_back(c);
  }
  auto roots = detail::durand_kerner(std::move(coeffs));
  std::vector<double> mags;
  for (const auto& root : roots) {
    double a = std::abs(root);
    if (a < 1e-12) throw Error(Errc::numerical_failure, "zero root");
    mags.push_back(1.0 / a);
  }
  std::sort(mags.begin(), mags.end());
  return mags;
}

}  // namespace genjac
