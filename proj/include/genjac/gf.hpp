#pragma once

#include <cstdint>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "genjac/error.hpp"

namespace genjac {

// Elements of F_{p^k} are stored as integer codes sum c_i p^i with
// (c_0,...,c_{k-1}) the coordinates against the power basis of the
// defining polynomial.  Codes are dense in [0, q).
using Elem = std::uint32_t;

namespace detail {

inline bool fp_poly_irreducible(std::uint32_t p, const std::vector<std::uint32_t>& f,
                                const std::vector<std::vector<std::uint32_t>>& smaller_irr);

// Monic polynomial over F_p from its code (coefficients base p, degree d).
inline std::vector<std::uint32_t> fp_poly_from_code(std::uint32_t p, int d, std::uint64_t code) {
  std::vector<std::uint32_t> f(d + 1);
  for (int i = 0; i < d; ++i) {
    f[i] = static_cast<std::uint32_t>(code % p);
    code /= p;
  }
  f[d] = 1;
  return f;
}

inline std::vector<std::uint32_t> fp_poly_mod(std::uint32_t p, std::vector<std::uint32_t> a,
                                              const std::vector<std::uint32_t>& b) {
  // b monic
  while (a.size() >= b.size()) {
    std::uint32_t lead = a.back();
    std::size_t shift = a.size() - b.size();
    if (lead != 0) {
      for (std::size_t i = 0; i < b.size(); ++i) {
        std::uint64_t v = a[shift + i] + static_cast<std::uint64_t>(p - 1) * lead % p * b[i];
        a[shift + i] = static_cast<std::uint32_t>(v % p);
      }
    }
    a.pop_back();
  }
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

inline bool fp_poly_irreducible(std::uint32_t p, const std::vector<std::uint32_t>& f,
                                const std::vector<std::vector<std::uint32_t>>& smaller_irr) {
  for (const auto& g : smaller_irr) {
    if ((g.size() - 1) * 2 > (f.size() - 1)) break;
    if (fp_poly_mod(p, f, g).empty()) return false;
  }
  return true;
}

}  // namespace detail

// Immutable context for F_q = F_{p^k}.  All arithmetic goes through
// exp/log tables built at construction; a full addition table is kept
// when q is small.
class FieldCtx {
 public:
  FieldCtx(std::uint32_t p, std::uint32_t k) : p_(p), k_(k) {
    if (p < 2 || k < 1) throw Error(Errc::invalid_input, "field parameters");
    q_ = 1;
    for (std::uint32_t i = 0; i < k; ++i) {
      q_ *= p;
      if (q_ > (1u << 16)) throw Error(Errc::invalid_input, "q exceeds 2^16");
    }
    if (!is_prime(p)) throw Error(Errc::invalid_input, "p not prime");
    pick_defining_poly();
    build_tables();
  }

  std::uint32_t p() const { return p_; }
  std::uint32_t k() const { return k_; }
  std::uint32_t q() const { return q_; }
  const std::vector<std::uint32_t>& defining_poly() const { return defining_; }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }

  // Canonical image of an integer (the prime subfield).
  Elem from_int(std::int64_t n) const {
    std::int64_t r = n % static_cast<std::int64_t>(p_);
    if (r < 0) r += p_;
    return static_cast<Elem>(r);
  }

  Elem from_coeffs(const std::vector<std::uint32_t>& c) const {
    if (c.size() > k_) throw Error(Errc::invalid_input, "too many coordinates");
    Elem e = 0;
    for (std::size_t i = c.size(); i-- > 0;) e = e * p_ + c[i] % p_;
    return e;
  }

  std::vector<std::uint32_t> coeffs(Elem a) const {
    std::vector<std::uint32_t> c(k_);
    for (std::uint32_t i = 0; i < k_; ++i) {
      c[i] = a % p_;
      a /= p_;
    }
    return c;
  }

  Elem add(Elem a, Elem b) const {
    if (!add_table_.empty()) return add_table_[a * q_ + b];
    return add_slow(a, b);
  }

  Elem neg(Elem a) const { return neg_table_[a]; }
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }

  Elem mul(Elem a, Elem b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[(log_[a] + log_[b]) % (q_ - 1)];
  }

  Elem inv(Elem a) const {
    if (a == 0) throw Error(Errc::division_by_zero, "inverse of zero");
    return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
  }

  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

  Elem pow(Elem a, std::int64_t n) const {
    if (a == 0) {
      if (n < 0) throw Error(Errc::division_by_zero, "inverse of zero");
      return n == 0 ? 1 : 0;
    }
    std::int64_t e = n % static_cast<std::int64_t>(q_ - 1);
    if (e < 0) e += q_ - 1;
    return exp_[static_cast<std::uint64_t>(log_[a]) * e % (q_ - 1)];
  }

  // a -> a^p, the absolute Frobenius.
  Elem frobenius(Elem a) const { return pow(a, p_); }

  std::uint32_t mult_order(Elem a) const {
    if (a == 0) throw Error(Errc::invalid_input, "order of zero");
    std::uint32_t n = q_ - 1;
    std::uint32_t d = std::gcd(n, log_[a] == 0 ? n : log_[a]);
    return n / d;
  }

  // Multiplicative generator chosen as the element of smallest code.
  Elem generator() const { return gen_; }

  // True when a lies in the prime subfield.
  bool in_prime_field(Elem a) const { return a < p_; }

  std::string to_string(Elem a) const {
    if (k_ == 1) return std::to_string(a);
    std::string s = "[";
    auto c = coeffs(a);
    for (std::uint32_t i = 0; i < k_; ++i) {
      if (i) s += ",";
      s += std::to_string(c[i]);
    }
    return s + "]";
  }

  static bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
      if (n % d == 0) return false;
    return true;
  }

 private:
  Elem add_slow(Elem a, Elem b) const {
    Elem r = 0, mult = 1;
    for (std::uint32_t i = 0; i < k_; ++i) {
      r += (a % p_ + b % p_) % p_ * mult;
      a /= p_;
      b /= p_;
      mult *= p_;
    }
    return r;
  }

  // Product by direct polynomial multiplication mod the defining poly;
  // only used while the log tables are being built.
  Elem mul_raw(Elem a, Elem b) const {
    std::vector<std::uint32_t> prod(2 * k_ - 1, 0);
    auto ca = coeffs(a), cb = coeffs(b);
    for (std::uint32_t i = 0; i < k_; ++i)
      for (std::uint32_t j = 0; j < k_; ++j)
        prod[i + j] = (prod[i + j] + static_cast<std::uint64_t>(ca[i]) * cb[j]) % p_;
    for (std::size_t d = prod.size(); d-- > k_;) {
      std::uint32_t lead = prod[d];
      if (lead) {
        prod[d] = 0;
        for (std::uint32_t i = 0; i < k_; ++i)
          prod[d - k_ + i] =
              (prod[d - k_ + i] + static_cast<std::uint64_t>(p_ - defining_[i]) % p_ * lead) % p_;
      }
    }
    std::vector<std::uint32_t> c(prod.begin(), prod.begin() + k_);
    return from_coeffs(c);
  }

  void pick_defining_poly() {
    defining_.assign(k_ + 1, 0);
    if (k_ == 1) {
      defining_ = {0, 1};  // x, unused
      return;
    }
    // Smallest code wins; irreducibility by trial division.
    std::vector<std::vector<std::uint32_t>> irr;
    for (std::uint32_t d = 1; d <= k_ / 2; ++d) {
      std::uint64_t count = 1;
      for (std::uint32_t i = 0; i < d; ++i) count *= p_;
      for (std::uint64_t code = 0; code < count; ++code) {
        auto f = detail::fp_poly_from_code(p_, d, code);
        if (detail::fp_poly_irreducible(p_, f, irr)) irr.push_back(f);
      }
    }
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < k_; ++i) count *= p_;
    for (std::uint64_t code = 0; code < count; ++code) {
      auto f = detail::fp_poly_from_code(p_, k_, code);
      if (f[0] == 0) continue;
      if (detail::fp_poly_irreducible(p_, f, irr)) {
        defining_ = f;
        return;
      }
    }
    throw Error(Errc::numerical_failure, "no irreducible polynomial found");
  }

  void build_tables() {
    neg_table_.resize(q_);
    for (Elem a = 0; a < q_; ++a) {
      Elem r = 0, mult = 1, x = a;
      for (std::uint32_t i = 0; i < k_; ++i) {
        r += (p_ - x % p_) % p_ * mult;
        x /= p_;
        mult *= p_;
      }
      neg_table_[a] = r;
    }
    if (static_cast<std::uint64_t>(q_) * q_ <= (1u << 22)) {
      add_table_.resize(static_cast<std::size_t>(q_) * q_);
      for (Elem a = 0; a < q_; ++a)
        for (Elem b = 0; b < q_; ++b) add_table_[a * q_ + b] = add_slow(a, b);
    }
    exp_.resize(q_ - 1);
    log_.assign(q_, 0);
    for (Elem g = 1; g < q_; ++g) {
      Elem x = 1;
      std::uint32_t n = 0;
      bool primitive = true;
      do {
        exp_[n] = x;
        x = mul_raw(x, g);
        ++n;
        if (x == 1 && n < q_ - 1) {
          primitive = false;
          break;
        }
      } while (n < q_ - 1);
      if (primitive && x == 1) {
        gen_ = g;
        for (std::uint32_t i = 0; i < q_ - 1; ++i) log_[exp_[i]] = i;
        return;
      }
    }
    throw Error(Errc::numerical_failure, "no multiplicative generator found");
  }

  std::uint32_t p_, k_, q_;
  std::vector<std::uint32_t> defining_;  // monic, degree k
  std::vector<Elem> exp_, neg_table_, add_table_;
  std::vector<std::uint32_t> log_;
  Elem gen_ = 1;
};

using FieldCtxPtr = std::shared_ptr<const FieldCtx>;

inline FieldCtxPtr make_field(std::uint32_t p, std::uint32_t k = 1) {
  return std::make_shared<const FieldCtx>(p, k);
}

}  // namespace genjac
