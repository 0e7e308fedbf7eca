#pragma once

#include <qpsurf/verify.hpp>

#include <fstream>
#include <set>
#include <sstream>
#include <string>

namespace qpsurf::testing {

inline std::string data_path(const std::string& name) { return std::string(QPSURF_DATA_DIR) + "/" + name; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Triangulation load_data(const std::string& name, const std::map<std::string, Rational>& scalars = {}) {
  Triangulation t = load_triangulation(slurp(data_path(name)));
  return scalars.empty() ? t : t.with_scalars(scalars);
}

inline ArcCurve load_arc(const Triangulation& t, const std::string& name) {
  return parse_arc(t, slurp(data_path(name)));
}

// Twice-punctured hexagon with x_p = 2, x_q = 3.
inline Triangulation hexagon() { return load_data("hexagon2.tri", {{"p", Rational(2)}, {"q", Rational(3)}}); }

inline const std::vector<std::string>& corpus() {
  static const std::vector<std::string> files{"hexagon2.tri", "punctured_hexagon.tri", "punctured_square.tri",
                                              "annulus.tri", "torus.tri"};
  return files;
}

struct BundledArc {
  std::string tri, arc;
  std::map<std::string, Rational> scalars;
};

// Every bundled arc with the triangulation it lives on.
inline const std::vector<BundledArc>& bundled_arcs() {
  static const std::vector<BundledArc> all{
      {"hexagon2.tri", "hexagonnice.arc", {{"p", Rational(2)}, {"q", Rational(3)}}},
      {"hexagon2.tri", "monogon.arc", {{"p", Rational(2)}, {"q", Rational(3)}}},
      {"punctured_hexagon.tri", "d6.arc", {}},
      {"punctured_square.tri", "square.arc", {{"P", Rational(5)}}},
      {"punctured_square.tri", "square_loop.arc", {}},
      {"torus.tri", "torus.arc", {}},
      {"annulus.tri", "annulus.arc", {{"P", Rational(-2)}}},
  };
  return all;
}

// Quiver from "u->v" pairs, arrows named a0, a1, ...
inline Quiver small_quiver(const std::vector<std::string>& vertices,
                           const std::vector<std::pair<std::string, std::string>>& arrows) {
  Quiver q;
  for (const auto& v : vertices) q.add_vertex(v);
  for (std::size_t k = 0; k < arrows.size(); ++k) q.add_arrow("a" + std::to_string(k), arrows[k].first, arrows[k].second);
  return q;
}

// Carries mu_j(mu_j(r)) back to the original QP. Arrows at j come back as
// a**, with a** -> -a when a enters j. An arrow that the first reduction
// removed comes back as a composite with the same ends, up to the scalar
// that carries the potential onto the original. Gives nothing when the
// potentials cannot be matched this way.
inline std::optional<DecoratedRep> undo_double_star(const DecoratedRep& twice, const QP& original, std::size_t j) {
  const Quiver& q = twice.quiver();
  const Quiver& oq = original.q();
  if (q.num_arrows() != oq.num_arrows()) return std::nullopt;
  std::vector<std::string> src(oq.num_arrows());
  std::vector<std::size_t> loose;
  std::set<std::string> used;
  for (std::size_t a = 0; a < oq.num_arrows(); ++a) {
    const auto& ar = oq.arrow(a);
    std::string id = ar.tail == j || ar.head == j ? ar.id + "**" : ar.id;
    if (q.has_arrow(id)) {
      src[a] = id;
      used.insert(id);
    } else {
      loose.push_back(a);
    }
  }
  for (std::size_t a : loose) {
    for (const auto& b : q.arrows()) {
      if (used.count(b.id) || b.id.front() != '[') continue;
      if (b.tail != oq.arrow(a).tail || b.head != oq.arrow(a).head) continue;
      src[a] = b.id;
      used.insert(b.id);
      break;
    }
    if (src[a].empty()) return std::nullopt;
  }

  const std::size_t n = original.truncation();
  std::vector<Rational> scale(oq.num_arrows(), Rational(1));
  for (std::size_t a = 0; a < oq.num_arrows(); ++a)
    if (oq.arrow(a).head == j) scale[a] = -1;
  auto carry = [&] {
    Substitution phi(twice.qp().quiver, original.quiver, n);
    for (std::size_t a = 0; a < oq.num_arrows(); ++a) phi.set(src[a], PathElement::arrow(original.quiver, n, a) * scale[a]);
    PathElement moved(twice.qp().quiver, n);
    for (const auto& [p, c] : twice.qp().potential.terms()) moved.add(p, c);
    return Potential(substitute(phi, moved));
  };
  auto by_cycle = [&](const Potential& s) {
    std::map<std::vector<std::size_t>, Rational> out;
    for (const auto& [p, c] : s.terms()) out[cyclic_normal_form(oq, p.arrows)] += c;
    return out;
  };
  // Each removed arrow sits in one original term with no other removed arrow.
  auto moved = by_cycle(carry());
  for (std::size_t a : loose) {
    std::optional<Rational> lambda;
    for (const auto& [cyc, c] : by_cycle(original.potential)) {
      auto hits = [&](std::size_t x) { return std::count(cyc.begin(), cyc.end(), x); };
      bool alone = hits(a) == 1;
      for (std::size_t b : loose)
        if (b != a && hits(b)) alone = false;
      auto it = moved.find(cyc);
      if (!alone || it == moved.end() || it->second == 0) continue;
      lambda = c / it->second;
      break;
    }
    if (!lambda) return std::nullopt;
    scale[a] = *lambda;
  }
  if (!cyclically_equivalent(carry(), original.potential)) return std::nullopt;
  std::vector<Matrix> maps;
  for (std::size_t a = 0; a < oq.num_arrows(); ++a) maps.push_back(twice.map(src[a]) * (1 / scale[a]));
  return DecoratedRep(original, twice.dims(), maps, twice.decs());
}

}  // namespace qpsurf::testing
