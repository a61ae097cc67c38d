#pragma once

#include <cctype>
#include <cstdint>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "genjac/elliptic.hpp"
#include "genjac/error.hpp"
#include "genjac/genus0.hpp"
#include "genjac/parse.hpp"
#include "genjac/reconstruction.hpp"

namespace genjac {

// ---------------------------------------------------------------------------
// Curve specification files: plain key = value lines.
//
//   q = 3                      q = 5
//   curve = genus0             curve = elliptic
//   modulus = x^3              a = 1
//   basepoint = inf            b = 0
//                              modulus_points = (0,0);(2,0)
//                              basepoint = inf
// ---------------------------------------------------------------------------

struct CurveSpec {
  std::variant<Genus0SpecPtr, EllipticSpecPtr> spec;

  bool is_genus0() const { return std::holds_alternative<Genus0SpecPtr>(spec); }
  const Genus0SpecPtr& genus0() const {
    if (!is_genus0()) throw Error(Errc::invalid_input, "not a genus-0 spec");
    return std::get<Genus0SpecPtr>(spec);
  }
  const EllipticSpecPtr& elliptic() const {
    if (is_genus0()) throw Error(Errc::invalid_input, "not an elliptic spec");
    return std::get<EllipticSpecPtr>(spec);
  }
  std::uint32_t q() const {
    return is_genus0() ? genus0()->q() : elliptic()->q();
  }
  std::string tag() const {
    return is_genus0() ? genus0()->tag() : elliptic()->tag();
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

[[noreturn]] inline void parse_fail(int line, const std::string& msg) {
  throw Error(Errc::parse_error, "line " + std::to_string(line) + ": " + msg);
}

inline std::uint64_t parse_u64(const std::string& s, int line, const std::string& what) {
  if (s.empty()) parse_fail(line, what + " is empty");
  std::uint64_t v = 0;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      parse_fail(line, what + " is not a nonnegative integer: '" + s + "'");
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return v;
}

// key = value lines with line numbers; '#' starts a comment line
inline std::vector<std::pair<std::string, std::pair<std::string, int>>> parse_kv(
    const std::string& text) {
  std::vector<std::pair<std::string, std::pair<std::string, int>>> out;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) parse_fail(lineno, "expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) parse_fail(lineno, "empty key");
    out.emplace_back(key, std::make_pair(value, lineno));
  }
  return out;
}

inline ECPoint parse_ec_point(const std::string& s, int line) {
  std::string t = trim(s);
  if (t.size() < 5 || t.front() != '(' || t.back() != ')')
    parse_fail(line, "expected a point '(x,y)', got '" + t + "'");
  auto comma = t.find(',');
  if (comma == std::string::npos) parse_fail(line, "expected '(x,y)'");
  std::uint64_t x = parse_u64(trim(t.substr(1, comma - 1)), line, "x-coordinate");
  std::uint64_t y = parse_u64(trim(t.substr(comma + 1, t.size() - comma - 2)), line,
                              "y-coordinate");
  return ECPoint::affine(static_cast<Elem>(x), static_cast<Elem>(y));
}

}  // namespace detail

inline CurveSpec parse_spec(const std::string& text) {
  auto kv = detail::parse_kv(text);
  std::map<std::string, std::pair<std::string, int>> fields;
  for (const auto& [k, vl] : kv) {
    if (!fields.emplace(k, vl).second)
      detail::parse_fail(vl.second, "duplicate key '" + k + "'");
  }
  auto need = [&](const std::string& k) -> const std::pair<std::string, int>& {
    auto it = fields.find(k);
    if (it == fields.end())
      throw Error(Errc::parse_error, "missing required key '" + k + "'");
    return it->second;
  };
  auto taken = [&](const std::string& k) { fields.erase(k); };

  const auto& [qs, qline] = need("q");
  std::uint64_t q = detail::parse_u64(qs, qline, "q");
  if (q < 2) detail::parse_fail(qline, "q must be at least 2");
  const auto& [curve, cline] = need("curve");

  if (auto it = fields.find("basepoint"); it != fields.end()) {
    if (it->second.first != "inf")
      detail::parse_fail(it->second.second, "basepoint must be 'inf'");
  }

  CurveSpec out;
  if (curve == "genus0") {
    auto F = make_field(static_cast<std::uint32_t>(q));
    const auto& [mtext, mline] = need("modulus");
    Poly m = [&] {
      try {
        return parse_poly(F, mtext);
      } catch (const Error& e) {
        detail::parse_fail(mline, e.what());
      }
    }();
    out.spec = make_genus0(m);  // enforces deg m >= 3 (HypothesisViolated)
    taken("q"), taken("curve"), taken("modulus"), taken("basepoint");
  } else if (curve == "elliptic") {
    auto F = make_field(static_cast<std::uint32_t>(q));
    const auto& [as, aline] = need("a");
    const auto& [bs, bline] = need("b");
    Elem a = static_cast<Elem>(detail::parse_u64(as, aline, "a") % q);
    Elem b = static_cast<Elem>(detail::parse_u64(bs, bline, "b") % q);
    const auto& [pts, pline] = need("modulus_points");
    std::vector<ECPoint> modulus;
    std::istringstream ps(pts);
    std::string tok;
    while (std::getline(ps, tok, ';')) {
      tok = detail::trim(tok);
      if (tok.empty()) continue;
      modulus.push_back(detail::parse_ec_point(tok, pline));
    }
    out.spec = make_elliptic(make_curve(F, a, b), std::move(modulus));
    taken("q"), taken("curve"), taken("a"), taken("b"), taken("modulus_points"),
        taken("basepoint");
  } else {
    detail::parse_fail(cline, "curve must be 'genus0' or 'elliptic'");
  }
  if (!fields.empty()) {
    const auto& [k, vl] = *fields.begin();
    detail::parse_fail(vl.second, "unknown key '" + k + "'");
  }
  return out;
}

inline std::string emit_spec(const CurveSpec& cs) {
  std::ostringstream out;
  out << "q = " << cs.q() << "\n";
  if (cs.is_genus0()) {
    out << "curve = genus0\n";
    out << "modulus = " << cs.genus0()->modulus().to_string() << "\n";
  } else {
    const auto& e = cs.elliptic();
    out << "curve = elliptic\n";
    out << "a = " << e->curve()->a() << "\n";
    out << "b = " << e->curve()->b() << "\n";
    out << "modulus_points = ";
    for (std::size_t i = 0; i < e->modulus().size(); ++i) {
      if (i) out << ";";
      out << "(" << e->modulus()[i].x << "," << e->modulus()[i].y << ")";
    }
    out << "\n";
  }
  out << "basepoint = inf\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// L-bundle files: a line-based, diff-able artifact.  Groups travel as
// their coordinate tables (offset -> key), which reconstructs every
// group operation without re-running the certifying walk; series travel
// as carrier coefficients.  Exact cyclotomic data is recomputable and
// not serialized.
// ---------------------------------------------------------------------------

namespace detail {

inline void write_u64s(std::ostream& out, const std::vector<std::uint64_t>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? " " : "") << v[i];
  out << "\n";
}

struct LineReader {
  std::istream& in;
  int lineno = 0;

  bool next(std::string& line) {
    std::string raw;
    while (std::getline(in, raw)) {
      ++lineno;
      line = trim(raw);
      if (!line.empty() && line[0] != '#') return true;
    }
    return false;
  }

  std::string expect(const std::string& key) {
    std::string line;
    if (!next(line)) parse_fail(lineno, "unexpected end of file, wanted '" + key + "'");
    auto eq = line.find('=');
    if (eq == std::string::npos || trim(line.substr(0, eq)) != key)
      parse_fail(lineno, "expected '" + key + " = ...', got '" + line + "'");
    return trim(line.substr(eq + 1));
  }

  std::uint64_t expect_u64(const std::string& key) {
    return parse_u64(expect(key), lineno, key);
  }

  std::vector<std::uint64_t> expect_u64s(const std::string& key, std::size_t n) {
    std::istringstream vs(expect(key));
    std::vector<std::uint64_t> out;
    std::uint64_t v;
    while (vs >> v) out.push_back(v);
    if (out.size() != n)
      parse_fail(lineno, key + ": expected " + std::to_string(n) + " values, got " +
                             std::to_string(out.size()));
    return out;
  }
};

// Rebuild an AbelianStructure from invariants and the coordinate table.
inline AbelianStructure restore_group(const std::vector<std::uint64_t>& invariants,
                                      const std::vector<Key>& by_coords, int line) {
  AbelianStructure G;
  G.invariant_factors = invariants;
  G.order = 1;
  for (auto f : invariants) {
    if (f < 2) parse_fail(line, "invariant factors must be at least 2");
    G.order *= f;
    G.exponent = G.exponent / std::gcd(G.exponent, f) * f;
  }
  if (by_coords.size() != G.order)
    parse_fail(line, "coordinate table size does not match the group order");
  G.by_coords = by_coords;
  G.identity = by_coords.empty() ? 0 : by_coords[0];
  G.elements = by_coords;
  std::sort(G.elements.begin(), G.elements.end());
  if (std::adjacent_find(G.elements.begin(), G.elements.end()) != G.elements.end())
    parse_fail(line, "coordinate table has duplicate keys");
  for (std::size_t i = 0; i < G.elements.size(); ++i) G.index.emplace(G.elements[i], i);
  G.dlog.assign(G.order, {});
  const std::size_t k = invariants.size();
  std::vector<std::uint32_t> a(k, 0);
  for (std::uint64_t off = 0; off < G.order; ++off) {
    std::uint64_t rest = off;
    for (std::size_t i = k; i-- > 0;) {
      a[i] = static_cast<std::uint32_t>(rest % invariants[i]);
      rest /= invariants[i];
    }
    G.dlog[G.index.at(by_coords[off])] = a;
  }
  G.generators.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::fill(a.begin(), a.end(), 0);
    a[i] = 1;
    G.generators[i] = G.from_coords(a);
  }
  return G;
}

}  // namespace detail

inline void write_lbundle(std::ostream& out, const LBundle& b) {
  out << "genjac-lbundle 1\n";
  out << "tag = " << b.tag << "\n";
  out << "q = " << b.q << "\n";
  out << "modulus = " << b.modulus << "\n";
  out << "levels = " << b.levels.size() << "\n";
  out << "psi_levels = " << b.psi.size() << "\n";
  for (const auto& lev : b.levels) {
    out << "level = " << lev.r << "\n";
    out << "field_size = " << lev.field_size << "\n";
    out << "B = " << lev.B << "\n";
    out << "invariants = ";
    detail::write_u64s(out, lev.G.invariant_factors);
    out << "coords = ";
    detail::write_u64s(out, lev.G.by_coords);
    out << "carrier = " << lev.carrier.P << " " << lev.carrier.N << " "
        << lev.carrier.zeta << "\n";
    out << "series = " << lev.series.size() << "\n";
    for (const auto& L : lev.series) {
      out << "chi = ";
      for (std::size_t i = 0; i < L.chi.exps.size(); ++i)
        out << (i ? " " : "") << L.chi.exps[i];
      out << "\n";
      out << "coeffs = ";
      detail::write_u64s(out, L.coeffs);
    }
  }
  for (std::size_t i = 0; i < b.psi.size(); ++i) {
    out << "psi = " << (i + 1) << " " << b.psi[i].size() << "\n";
    for (const auto& [a, c] : b.psi[i]) out << a << " " << c << "\n";
  }
}

inline LBundle read_lbundle(std::istream& in) {
  detail::LineReader rd{in};
  std::string head;
  if (!rd.next(head) || head != "genjac-lbundle 1")
    detail::parse_fail(rd.lineno, "not a genjac-lbundle file");
  LBundle b;
  b.tag = rd.expect("tag");
  b.q = static_cast<std::uint32_t>(rd.expect_u64("q"));
  b.modulus = rd.expect("modulus");
  std::uint64_t nlevels = rd.expect_u64("levels");
  std::uint64_t npsi = rd.expect_u64("psi_levels");
  for (std::uint64_t li = 0; li < nlevels; ++li) {
    BundleLevel lev;
    lev.r = static_cast<int>(rd.expect_u64("level"));
    if (lev.r != static_cast<int>(li) + 1)
      detail::parse_fail(rd.lineno, "levels must appear in order 1..R");
    lev.field_size = rd.expect_u64("field_size");
    lev.B = static_cast<int>(rd.expect_u64("B"));
    std::istringstream is(rd.expect("invariants"));
    std::vector<std::uint64_t> invariants;
    std::uint64_t v;
    while (is >> v) invariants.push_back(v);
    std::uint64_t order = 1;
    for (auto f : invariants) order *= f;
    auto coords = rd.expect_u64s("coords", order);
    lev.G = detail::restore_group(invariants, coords, rd.lineno);
    auto car = rd.expect_u64s("carrier", 3);
    lev.carrier = FourierCarrier{car[0], car[1], car[2]};
    std::uint64_t nseries = rd.expect_u64("series");
    for (std::uint64_t si = 0; si < nseries; ++si) {
      LSeries L;
      L.r = lev.r;
      L.B = lev.B;
      L.carrier = lev.carrier;
      L.provenance = "bundle";
      auto exps = rd.expect_u64s("chi", invariants.size());
      L.chi.r = lev.r;
      for (auto e : exps) L.chi.exps.push_back(static_cast<std::uint32_t>(e));
      L.coeffs = rd.expect_u64s("coeffs", static_cast<std::size_t>(lev.B) + 1);
      lev.series.push_back(std::move(L));
    }
    b.levels.push_back(std::move(lev));
  }
  for (std::uint64_t pi = 0; pi < npsi; ++pi) {
    auto hdr = rd.expect_u64s("psi", 2);
    if (hdr[0] != pi + 1)
      detail::parse_fail(rd.lineno, "psi tables must appear in order 1..R");
    PsiTable t;
    std::string line;
    for (std::uint64_t i = 0; i < hdr[1]; ++i) {
      if (!rd.next(line)) detail::parse_fail(rd.lineno, "truncated psi table");
      std::istringstream ps(line);
      Key a, c;
      if (!(ps >> a >> c)) detail::parse_fail(rd.lineno, "expected 'key key'");
      t.emplace_back(a, c);
    }
    b.psi.push_back(std::move(t));
  }
  return b;
}

}  // namespace genjac
