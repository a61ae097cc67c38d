#pragma once

#include <cctype>
#include <cstdint>
#include <string>
#include <vector>

#include "genjac/error.hpp"
#include "genjac/gf.hpp"
#include "genjac/poly.hpp"

namespace genjac {

// Polynomial text syntax: `x^3 + 2*x + 1`.  Coefficients are decimal
// integers reduced mod p; extension-field coefficients are written
// `[c0,c1,...]`.
inline Poly parse_poly(const FieldCtxPtr& ctx, const std::string& text) {
  std::vector<Elem> coeffs;
  auto bump = [&](std::size_t deg, Elem c) {
    if (coeffs.size() <= deg) coeffs.resize(deg + 1, 0);
    coeffs[deg] = ctx->add(coeffs[deg], c);
  };

  std::size_t i = 0;
  const std::size_t n = text.size();
  auto skip_ws = [&] { while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i; };
  auto parse_err = [&](const std::string& what) {
    return Error(Errc::parse_error, what + " at position " + std::to_string(i) + " in '" + text + "'");
  };

  skip_ws();
  if (i == n) throw parse_err("empty polynomial");
  bool negate = false;
  while (i < n) {
    skip_ws();
    if (i < n && (text[i] == '+' || text[i] == '-')) {
      // leading sign of the first term
      negate = text[i] == '-';
      ++i;
      skip_ws();
    }
    // term: [coefficient] [* ] [x [^ exp]]
    bool have_coeff = false;
    Elem c = 1;
    if (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) {
      std::uint64_t v = 0;
      while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) {
        v = v * 10 + (text[i] - '0');
        ++i;
      }
      c = ctx->from_int(static_cast<std::int64_t>(v % ctx->p()));
      have_coeff = true;
    } else if (i < n && text[i] == '[') {
      ++i;
      std::vector<std::uint32_t> cc;
      while (true) {
        skip_ws();
        if (i >= n) throw parse_err("unterminated coefficient list");
        if (text[i] == ']') { ++i; break; }
        bool cneg = false;
        if (text[i] == '-') { cneg = true; ++i; }
        if (i >= n || !std::isdigit(static_cast<unsigned char>(text[i])))
          throw parse_err("expected digit in coefficient list");
        std::uint64_t v = 0;
        while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) {
          v = v * 10 + (text[i] - '0');
          ++i;
        }
        std::uint32_t r = static_cast<std::uint32_t>(v % ctx->p());
        cc.push_back(cneg ? (ctx->p() - r) % ctx->p() : r);
        skip_ws();
        if (i < n && text[i] == ',') ++i;
      }
      c = ctx->from_coeffs(cc);
      have_coeff = true;
    }
    skip_ws();
    if (i < n && text[i] == '*') { ++i; skip_ws(); }
    std::size_t deg = 0;
    if (i < n && (text[i] == 'x' || text[i] == 'y')) {
      ++i;
      deg = 1;
      skip_ws();
      if (i < n && text[i] == '^') {
        ++i;
        skip_ws();
        if (i >= n || !std::isdigit(static_cast<unsigned char>(text[i])))
          throw parse_err("expected exponent");
        std::uint64_t e = 0;
        while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) {
          e = e * 10 + (text[i] - '0');
          ++i;
        }
        deg = static_cast<std::size_t>(e);
      }
    } else if (!have_coeff) {
      throw parse_err("expected term");
    }
    bump(deg, negate ? ctx->neg(c) : c);
    negate = false;
    skip_ws();
    if (i < n) {
      if (text[i] == '+') { ++i; }
      else if (text[i] == '-') { negate = true; ++i; }
      else throw parse_err("expected '+' or '-'");
      skip_ws();
      if (i >= n) throw parse_err("dangling operator");
    } else {
      break;
    }
  }
  return Poly(ctx, std::move(coeffs));
}

}  // namespace genjac
