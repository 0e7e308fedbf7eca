#pragma once

#include <qpsurf/qp.hpp>
#include <qpsurf/rational.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qpsurf {

// Digit runs compare as numbers, so j2 < j10.
inline bool natural_less(const std::string& a, const std::string& b) {
  std::size_t i = 0, k = 0;
  while (i < a.size() && k < b.size()) {
    bool da = std::isdigit(static_cast<unsigned char>(a[i])), db = std::isdigit(static_cast<unsigned char>(b[k]));
    if (da && db) {
      std::size_t ie = i, ke = k;
      while (ie < a.size() && std::isdigit(static_cast<unsigned char>(a[ie]))) ++ie;
      while (ke < b.size() && std::isdigit(static_cast<unsigned char>(b[ke]))) ++ke;
      std::string x = a.substr(i, ie - i), y = b.substr(k, ke - k);
      x.erase(0, std::min(x.find_first_not_of('0'), x.size()));
      y.erase(0, std::min(y.find_first_not_of('0'), y.size()));
      if (x.size() != y.size()) return x.size() < y.size();
      if (x != y) return x < y;
      i = ie;
      k = ke;
    } else {
      if (a[i] != b[k]) return a[i] < b[k];
      ++i;
      ++k;
    }
  }
  if ((a.size() - i) != (b.size() - k)) return a.size() - i < b.size() - k;
  return a < b;
}

struct Triangle {
  std::string name;
  std::array<std::string, 3> sides;    // clockwise
  std::array<std::string, 3> corners;  // corner c sits between sides c and c+1
  int line = 0;
};

struct SlotRef {
  std::size_t tri = 0;
  int slot = 0;
  friend auto operator<=>(const SlotRef&, const SlotRef&) = default;
};

struct CornerRef {
  std::size_t tri = 0;
  int corner = 0;
  friend auto operator<=>(const CornerRef&, const CornerRef&) = default;
};

inline int mod3(int k) { return ((k % 3) + 3) % 3; }

class TriangulationError : public std::invalid_argument {
 public:
  explicit TriangulationError(const std::vector<std::string>& errors)
      : std::invalid_argument(join(errors)), errors_(errors) {}
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& e : v) s += (s.empty() ? "" : "\n") + e;
    return s;
  }
  std::vector<std::string> errors_;
};

class Triangulation {
 public:
  Triangulation(std::vector<Triangle> tris, std::vector<std::string> boundary,
                std::map<std::string, Rational> scalars = {}, std::map<std::string, int> scalar_lines = {})
      : tris_(std::move(tris)), boundary_(std::move(boundary)), scalars_(std::move(scalars)) {
    build(scalar_lines);
  }

  const std::vector<Triangle>& triangles() const { return tris_; }
  const Triangle& triangle(std::size_t t) const { return tris_.at(t); }
  std::size_t triangle_index(const std::string& name) const {
    for (std::size_t t = 0; t < tris_.size(); ++t)
      if (tris_[t].name == name) return t;
    throw std::out_of_range("unknown triangle '" + name + "'");
  }
  const std::string& side(SlotRef s) const { return tris_.at(s.tri).sides.at(s.slot); }
  const std::string& corner(CornerRef c) const { return tris_.at(c.tri).corners.at(c.corner); }

  const std::vector<std::string>& arcs() const { return arcs_; }
  const std::vector<std::string>& boundary() const { return boundary_; }
  bool is_arc(const std::string& s) const { return slots_.count(s) && !boundary_set_.count(s); }
  bool is_boundary(const std::string& s) const { return boundary_set_.count(s) != 0; }
  const std::vector<SlotRef>& slots(const std::string& side) const {
    auto it = slots_.find(side);
    if (it == slots_.end()) throw std::out_of_range("unknown side '" + side + "'");
    return it->second;
  }
  std::optional<SlotRef> across(SlotRef s) const {
    const auto& v = slots(side(s));
    if (v.size() != 2) return std::nullopt;
    return v[0] == s ? v[1] : v[0];
  }
  // The two marked points joined by a side, as (corner s-1, corner s) of its first slot.
  std::pair<std::string, std::string> endpoints(const std::string& side_label) const {
    SlotRef s = slots(side_label).front();
    return {tris_[s.tri].corners[mod3(s.slot - 1)], tris_[s.tri].corners[s.slot]};
  }

  const std::vector<std::string>& marked_points() const { return points_; }
  const std::vector<std::string>& punctures() const { return punctures_; }
  bool is_puncture(const std::string& p) const {
    return std::find(punctures_.begin(), punctures_.end(), p) != punctures_.end();
  }
  // Corners around a marked point in walk order; for a puncture this is the closed fan.
  const std::vector<CornerRef>& fan(const std::string& p) const {
    auto it = fans_.find(p);
    if (it == fans_.end()) throw std::out_of_range("unknown marked point '" + p + "'");
    return it->second;
  }
  // Number of arc ends at p, counted with multiplicity.
  std::size_t valence(const std::string& p) const {
    std::size_t n = fan(p).size();
    return is_puncture(p) ? n : n + 1 - boundary_ends(p);
  }
  // Next corner in the fan walk: cross side c+1 and take the corner after it.
  std::optional<CornerRef> fan_next(CornerRef c) const {
    auto o = across({c.tri, mod3(c.corner + 1)});
    if (!o) return std::nullopt;
    return CornerRef{o->tri, o->slot};
  }
  std::optional<CornerRef> fan_prev(CornerRef c) const {
    auto o = across({c.tri, c.corner});
    if (!o) return std::nullopt;
    return CornerRef{o->tri, mod3(o->slot - 1)};
  }

  Rational scalar(const std::string& p) const {
    auto it = scalars_.find(p);
    return it == scalars_.end() ? Rational(1) : it->second;
  }
  const std::map<std::string, Rational>& scalars() const { return scalars_; }
  Triangulation with_scalars(const std::map<std::string, Rational>& extra) const {
    std::map<std::string, Rational> s = scalars_;
    for (const auto& [p, v] : extra) {
      if (!is_puncture(p)) throw std::invalid_argument("scalar for '" + p + "', which is not a puncture");
      if (v == 0) throw std::invalid_argument("scalar for '" + p + "' must be nonzero");
      s[p] = v;
    }
    return Triangulation(tris_, boundary_, s);
  }

  const std::vector<std::string>& warnings() const { return warnings_; }
  int euler_characteristic() const {
    return static_cast<int>(points_.size()) - static_cast<int>(arcs_.size() + boundary_.size()) +
           static_cast<int>(tris_.size());
  }
  int boundary_components() const { return boundary_components_; }
  int genus() const { return (2 - euler_characteristic() - boundary_components_) / 2; }

 private:
  std::size_t boundary_ends(const std::string& p) const {
    std::size_t n = 0;
    for (const auto& b : boundary_) {
      auto [u, v] = endpoints(b);
      n += (u == p) + (v == p);
    }
    return n;
  }

  void build(const std::map<std::string, int>& scalar_lines) {
    std::vector<std::string> errors;
    auto at = [](int line) { return line > 0 ? "line " + std::to_string(line) + ": " : std::string(); };
    if (tris_.empty()) throw TriangulationError({"triangulation has no triangles"});
    std::set<std::string> names;
    for (std::size_t t = 0; t < tris_.size(); ++t) {
      const Triangle& tr = tris_[t];
      if (!names.insert(tr.name).second) errors.push_back(at(tr.line) + "duplicate triangle '" + tr.name + "'");
      for (int s = 0; s < 3; ++s) {
        for (int r = 0; r < s; ++r)
          if (tr.sides[r] == tr.sides[s])
            errors.push_back(at(tr.line) + "self-folded triangle '" + tr.name + "': side '" + tr.sides[s] +
                             "' repeats");
        slots_[tr.sides[s]].push_back({t, s});
      }
    }
    for (const auto& b : boundary_) {
      if (!boundary_set_.insert(b).second) errors.push_back("boundary side '" + b + "' listed twice");
      if (!slots_.count(b)) errors.push_back("boundary side '" + b + "' is not a side of any triangle");
    }
    for (const auto& [label, v] : slots_) {
      int line = tris_[v.back().tri].line;
      if (boundary_set_.count(label)) {
        if (v.size() != 1)
          errors.push_back(at(line) + "boundary side '" + label + "' occurs in " + std::to_string(v.size()) +
                           " triangle slots");
        continue;
      }
      if (v.size() == 1) {
        errors.push_back(at(line) + "missing gluing partner for side '" + label + "'");
        continue;
      }
      if (v.size() > 2) {
        errors.push_back(at(line) + "side '" + label + "' occurs in " + std::to_string(v.size()) + " slots");
        continue;
      }
      const Triangle& a = tris_[v[0].tri];
      const Triangle& b = tris_[v[1].tri];
      if (a.corners[v[0].slot] != b.corners[mod3(v[1].slot - 1)] ||
          a.corners[mod3(v[0].slot - 1)] != b.corners[v[1].slot])
        errors.push_back(at(line) + "inconsistent gluing along '" + label + "': endpoints " +
                         a.corners[mod3(v[0].slot - 1)] + "," + a.corners[v[0].slot] + " vs " +
                         b.corners[mod3(v[1].slot - 1)] + "," + b.corners[v[1].slot]);
      arcs_.push_back(label);
    }
    if (!errors.empty()) throw TriangulationError(errors);
    std::sort(arcs_.begin(), arcs_.end(), natural_less);
    build_fans(errors);
    for (const auto& [p, v] : scalars_) {
      int line = scalar_lines.count(p) ? scalar_lines.at(p) : 0;
      if (!is_puncture(p)) errors.push_back(at(line) + "scalar given for '" + p + "', which is not a puncture");
      if (v == 0) errors.push_back(at(line) + "scalar for '" + p + "' must be nonzero");
    }
    if (!errors.empty()) throw TriangulationError(errors);
    classify();
  }

  void build_fans(std::vector<std::string>& errors) {
    std::map<std::string, std::vector<CornerRef>> by_label;
    for (std::size_t t = 0; t < tris_.size(); ++t)
      for (int c = 0; c < 3; ++c) by_label[tris_[t].corners[c]].push_back({t, c});
    for (const auto& [p, corners] : by_label) {
      points_.push_back(p);
      // A boundary point's walk starts at the corner whose side c is boundary.
      std::optional<CornerRef> start;
      for (const auto& c : corners)
        if (!across({c.tri, c.corner})) {
          if (start) {
            errors.push_back("marked point '" + p + "' labels more than one point");
            start.reset();
            break;
          }
          start = c;
        }
      bool puncture = true;
      for (const auto& c : corners)
        if (!across({c.tri, c.corner}) || !across({c.tri, mod3(c.corner + 1)})) puncture = false;
      std::vector<CornerRef> walk;
      CornerRef cur = corners.front();
      if (!puncture && start) cur = *start;
      for (std::size_t guard = 0; guard <= corners.size(); ++guard) {
        walk.push_back(cur);
        auto nx = fan_next(cur);
        if (!nx || (puncture && *nx == walk.front())) break;
        cur = *nx;
      }
      std::set<CornerRef> seen(walk.begin(), walk.end());
      if (seen.size() != walk.size() || walk.size() != corners.size()) {
        errors.push_back("fan around '" + p + "' does not close over its " + std::to_string(corners.size()) +
                         " corners (label shared by distinct points, or inconsistent gluing)");
        continue;
      }
      if (puncture) punctures_.push_back(p);
      fans_[p] = std::move(walk);
    }
    std::sort(points_.begin(), points_.end(), natural_less);
    std::sort(punctures_.begin(), punctures_.end(), natural_less);
  }

  void classify() {
    std::map<std::string, std::string> parent;
    auto find = [&](std::string x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto& b : boundary_) {
      auto [u, v] = endpoints(b);
      if (!parent.count(u)) parent[u] = u;
      if (!parent.count(v)) parent[v] = v;
      parent[find(u)] = find(v);
    }
    std::set<std::string> roots;
    for (const auto& [x, _] : parent) roots.insert(find(x));
    boundary_components_ = static_cast<int>(roots.size());
    const int b = boundary_components_, g = genus();
    const std::size_t np = punctures_.size(), nb = points_.size() - np;
    if (b == 0 && g == 0 && np < 5) warnings_.push_back("sphere with fewer than five punctures");
    if (b == 1 && g == 0 && np == 0 && nb <= 3) warnings_.push_back("unpunctured monogon, digon or triangle");
    if (b == 1 && g == 0 && np == 1 && nb == 1) warnings_.push_back("once-punctured monogon");
  }

  std::vector<Triangle> tris_;
  std::vector<std::string> boundary_;
  std::map<std::string, Rational> scalars_;
  std::set<std::string> boundary_set_;
  std::map<std::string, std::vector<SlotRef>> slots_;
  std::vector<std::string> arcs_, points_, punctures_;
  std::map<std::string, std::vector<CornerRef>> fans_;
  std::vector<std::string> warnings_;
  int boundary_components_ = 0;
};

inline Triangulation load_triangulation(const std::string& text) {
  std::vector<Triangle> tris;
  std::vector<std::string> boundary;
  std::map<std::string, Rational> scalars;
  std::map<std::string, int> scalar_lines;
  std::vector<std::string> errors;
  std::istringstream is(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    std::string t = trim(raw.substr(0, raw.find('#')));
    if (t.empty()) continue;
    auto fail = [&](const std::string& why) { errors.push_back("line " + std::to_string(lineno) + ": " + why); };
    if (t.rfind("triangle ", 0) == 0) {
      std::size_t colon = t.find(':');
      if (colon == std::string::npos) {
        fail("expected 'triangle <name>: <side>@<corner> x3'");
        continue;
      }
      Triangle tr;
      tr.name = trim(t.substr(9, colon - 9));
      tr.line = lineno;
      auto parts = split_ws(t.substr(colon + 1));
      if (tr.name.empty() || tr.name.find_first_of(" \t") != std::string::npos || parts.size() != 3) {
        fail("expected 'triangle <name>: <side>@<corner> x3'");
        continue;
      }
      bool ok = true;
      for (int k = 0; k < 3; ++k) {
        std::size_t at = parts[k].find('@');
        if (at == std::string::npos || at == 0 || at + 1 == parts[k].size()) {
          fail("bad side token '" + parts[k] + "'");
          ok = false;
          break;
        }
        tr.sides[k] = parts[k].substr(0, at);
        tr.corners[k] = parts[k].substr(at + 1);
      }
      if (ok) tris.push_back(std::move(tr));
    } else if (t.rfind("boundary:", 0) == 0) {
      for (const auto& s : split_ws(t.substr(9))) boundary.push_back(s);
    } else if (t.rfind("scalar ", 0) == 0) {
      std::string rest = trim(t.substr(7));
      std::size_t eq = rest.find('=');
      if (eq == std::string::npos) {
        fail("expected 'scalar <puncture>=<p>/<q>'");
        continue;
      }
      std::string p = trim(rest.substr(0, eq));
      try {
        scalars[p] = parse_rational(rest.substr(eq + 1));
        scalar_lines[p] = lineno;
      } catch (const std::invalid_argument& e) {
        fail(e.what());
      }
    } else {
      fail("unrecognized line '" + t + "'");
    }
  }
  if (!errors.empty()) throw TriangulationError(errors);
  return Triangulation(std::move(tris), std::move(boundary), std::move(scalars), std::move(scalar_lines));
}

inline std::string save_triangulation(const Triangulation& t) {
  std::ostringstream os;
  for (const auto& tr : t.triangles()) {
    os << "triangle " << tr.name << ":";
    for (int k = 0; k < 3; ++k) os << ' ' << tr.sides[k] << '@' << tr.corners[k];
    os << '\n';
  }
  if (!t.boundary().empty()) {
    os << "boundary:";
    for (const auto& b : t.boundary()) os << ' ' << b;
    os << '\n';
  }
  for (const auto& [p, v] : t.scalars())
    if (v != 1) os << "scalar " << p << '=' << v.get_str() << '\n';
  return os.str();
}

// Same triangles up to names and rotation, same boundary and scalars.
inline bool same_combinatorics(const Triangulation& a, const Triangulation& b) {
  auto canon = [](const Triangulation& t) {
    std::multiset<std::vector<std::string>> out;
    for (const auto& tr : t.triangles()) {
      std::vector<std::string> best;
      for (int r = 0; r < 3; ++r) {
        std::vector<std::string> v;
        for (int k = 0; k < 3; ++k) {
          v.push_back(tr.sides[mod3(r + k)]);
          v.push_back(tr.corners[mod3(r + k)]);
        }
        if (best.empty() || v < best) best = v;
      }
      out.insert(best);
    }
    return out;
  };
  std::set<std::string> ba(a.boundary().begin(), a.boundary().end()), bb(b.boundary().begin(), b.boundary().end());
  auto nontrivial = [](const Triangulation& t) {
    std::map<std::string, Rational> m;
    for (const auto& [p, v] : t.scalars())
      if (v != 1) m[p] = v;
    return m;
  };
  return canon(a) == canon(b) && ba == bb && nontrivial(a) == nontrivial(b);
}

inline std::string corner_arrow_id(const Triangle& tr, int c) {
  return tr.name + ":" + tr.sides[c] + "->" + tr.sides[mod3(c + 1)];
}

// Arrow at corner c of a triangle, when both of its sides are arcs.
inline std::optional<std::string> corner_arrow(const Triangulation& t, CornerRef c) {
  const Triangle& tr = t.triangle(c.tri);
  if (!t.is_arc(tr.sides[c.corner]) || !t.is_arc(tr.sides[mod3(c.corner + 1)])) return std::nullopt;
  return corner_arrow_id(tr, c.corner);
}

inline Quiver unreduced_quiver(const Triangulation& t) {
  Quiver q;
  for (const auto& a : t.arcs()) q.add_vertex(a);
  for (std::size_t k = 0; k < t.triangles().size(); ++k) {
    const Triangle& tr = t.triangle(k);
    for (int c = 0; c < 3; ++c)
      if (auto id = corner_arrow(t, {k, c})) q.add_arrow(*id, tr.sides[c], tr.sides[mod3(c + 1)]);
  }
  return q;
}

inline Quiver reduced_quiver(const Triangulation& t) {
  return delete_two_cycles(unreduced_quiver(t), [](std::size_t, std::size_t) { return true; });
}

inline QP unreduced_qp(const Triangulation& t, std::size_t truncation = kDefaultTruncation) {
  QuiverPtr q = share(unreduced_quiver(t));
  for (const auto& p : t.punctures()) truncation = std::max(truncation, t.fan(p).size());
  PathElement s(q, truncation);
  for (std::size_t k = 0; k < t.triangles().size(); ++k) {
    const Triangle& tr = t.triangle(k);
    if (!t.is_arc(tr.sides[0]) || !t.is_arc(tr.sides[1]) || !t.is_arc(tr.sides[2])) continue;
    s.add(Path::of({q->arrow_index(corner_arrow_id(tr, 2)), q->arrow_index(corner_arrow_id(tr, 1)),
                    q->arrow_index(corner_arrow_id(tr, 0))}),
          1);
  }
  for (const auto& p : t.punctures()) {
    std::vector<std::size_t> cyc;
    for (const auto& c : t.fan(p)) cyc.push_back(q->arrow_index(corner_arrow(t, c).value()));
    std::reverse(cyc.begin(), cyc.end());
    if (!is_cycle(*q, cyc)) throw std::logic_error("fan around '" + p + "' does not give a cycle");
    s.add(Path::of(std::move(cyc)), t.scalar(p));
  }
  return QP(q, Potential(s));
}

inline Potential unreduced_potential(const Triangulation& t, std::size_t truncation = kDefaultTruncation) {
  return unreduced_qp(t, truncation).potential;
}

inline QP surface_qp(const Triangulation& t, std::size_t truncation = kDefaultTruncation) {
  QP u = unreduced_qp(t, truncation);
  Reduction red = split_reduce(u.potential);
  return QP(red.reduced_quiver, red.reduced_potential);
}

// The quadrilateral around the flipped arc j. With j rotated to slot 0,
// tri1 = [j, a, b] with corners [x, w, y] and tri2 = [j, c, d] with corners
// [y, z, x]. Arrow roles are ids in the unreduced quiver of the old
// triangulation, absent when a boundary side is involved.
struct FlipQuad {
  std::string tri1, tri2;
  std::string a, b, c, d;
  std::string w, x, y, z;
  std::optional<std::string> alpha, beta, gamma, delta, epsilon, eta;
};

struct FlipResult {
  Triangulation sigma;
  std::string old_arc, new_arc;
  FlipQuad quad;
};

inline FlipResult flip(const Triangulation& t, const std::string& j, const std::string& new_label = "") {
  if (!t.is_arc(j)) throw std::invalid_argument("'" + j + "' is not an arc");
  const std::string k = new_label.empty() ? j : new_label;
  if (k != j && (t.is_arc(k) || t.is_boundary(k))) throw std::invalid_argument("label '" + k + "' already in use");
  const auto& sl = t.slots(j);
  auto rotated = [&](SlotRef s) {
    const Triangle& tr = t.triangle(s.tri);
    Triangle r = tr;
    for (int m = 0; m < 3; ++m) {
      r.sides[m] = tr.sides[mod3(s.slot + m)];
      r.corners[m] = tr.corners[mod3(s.slot + m)];
    }
    return r;
  };
  Triangle t1 = rotated(sl[0]), t2 = rotated(sl[1]);
  FlipQuad f;
  f.tri1 = t1.name;
  f.tri2 = t2.name;
  f.a = t1.sides[1];
  f.b = t1.sides[2];
  f.c = t2.sides[1];
  f.d = t2.sides[2];
  f.x = t1.corners[0];
  f.w = t1.corners[1];
  f.y = t1.corners[2];
  f.z = t2.corners[1];
  if (f.b == f.c || f.d == f.a)
    throw std::invalid_argument("flipping '" + j + "' would create a self-folded triangle");
  auto role = [&](const Triangle& tr, int c) -> std::optional<std::string> {
    if (!t.is_arc(tr.sides[c]) || !t.is_arc(tr.sides[mod3(c + 1)])) return std::nullopt;
    return corner_arrow_id(tr, c);
  };
  f.beta = role(t1, 0);
  f.alpha = role(t1, 1);
  f.gamma = role(t1, 2);
  f.epsilon = role(t2, 0);
  f.delta = role(t2, 1);
  f.eta = role(t2, 2);

  std::vector<Triangle> tris = t.triangles();
  Triangle& n1 = tris[sl[0].tri];
  Triangle& n2 = tris[sl[1].tri];
  n1.sides = {f.b, f.c, k};
  n1.corners = {f.y, f.z, f.w};
  n2.sides = {f.d, f.a, k};
  n2.corners = {f.x, f.w, f.z};
  n1.line = n2.line = 0;
  return {Triangulation(std::move(tris), t.boundary(), t.scalars()), j, k, f};
}

// Ids in the mutated quiver of the old triangulation paired with ids of
// the new triangulation's quiver, as read off the quadrilateral.
inline std::map<std::string, std::string> flip_correspondence(const FlipResult& f) {
  const FlipQuad& q = f.quad;
  const std::string& k = f.new_arc;
  std::map<std::string, std::string> m;
  if (q.epsilon && q.gamma) m[composite_id(*q.epsilon, *q.gamma)] = q.tri1 + ":" + q.b + "->" + q.c;
  if (q.beta && q.eta) m[composite_id(*q.beta, *q.eta)] = q.tri2 + ":" + q.d + "->" + q.a;
  if (q.beta) m[star_id(*q.beta)] = q.tri2 + ":" + q.a + "->" + k;
  if (q.gamma) m[star_id(*q.gamma)] = q.tri1 + ":" + k + "->" + q.b;
  if (q.epsilon) m[star_id(*q.epsilon)] = q.tri1 + ":" + q.c + "->" + k;
  if (q.eta) m[star_id(*q.eta)] = q.tri2 + ":" + k + "->" + q.d;
  return m;
}

// Arrows whose maps change sign when a mutated representation is carried
// over to the flipped triangulation.
inline std::vector<std::string> flip_twist_arrows(const FlipResult& f) {
  std::vector<std::string> out;
  if (f.quad.beta) out.push_back(star_id(*f.quad.beta));
  if (f.quad.eta) out.push_back(star_id(*f.quad.eta));
  return out;
}

struct ArrowMatch {
  std::map<std::string, std::string> ids;  // source arrow id -> target arrow id
  std::size_t by_role = 0, by_id = 0, by_endpoints = 0;
  std::vector<std::string> unmatched_source, unmatched_target;
  bool complete() const { return unmatched_source.empty() && unmatched_target.empty(); }
};

// Matches arrows of a mutated quiver against the flipped triangulation's
// quiver: first by role, then by id, then any free arrow with the same
// endpoints (vertex j renamed to the new arc).
inline ArrowMatch match_flip_arrows(const FlipResult& f, const Quiver& mutated, const Quiver& target) {
  ArrowMatch m;
  auto corr = flip_correspondence(f);
  auto vname = [&](std::size_t v) {
    const std::string& s = mutated.vertex_id(v);
    return s == f.old_arc ? f.new_arc : s;
  };
  std::vector<bool> used(target.num_arrows(), false);
  std::vector<std::size_t> pending;
  auto fits = [&](const Arrow& a, const std::string& id) {
    if (!target.has_arrow(id)) return false;
    std::size_t x = target.arrow_index(id);
    const Arrow& b = target.arrow(x);
    return !used[x] && target.vertex_id(b.tail) == vname(a.tail) && target.vertex_id(b.head) == vname(a.head);
  };
  for (std::size_t i = 0; i < mutated.num_arrows(); ++i) {
    const Arrow& a = mutated.arrow(i);
    auto it = corr.find(a.id);
    if (it != corr.end() && fits(a, it->second)) {
      used[target.arrow_index(it->second)] = true;
      m.ids[a.id] = it->second;
      ++m.by_role;
    } else if (it == corr.end() && fits(a, a.id)) {
      used[target.arrow_index(a.id)] = true;
      m.ids[a.id] = a.id;
      ++m.by_id;
    } else {
      pending.push_back(i);
    }
  }
  for (std::size_t i : pending) {
    const Arrow& a = mutated.arrow(i);
    bool found = false;
    for (std::size_t x = 0; x < target.num_arrows() && !found; ++x)
      if (fits(a, target.arrow(x).id)) {
        used[x] = true;
        m.ids[a.id] = target.arrow(x).id;
        ++m.by_endpoints;
        found = true;
      }
    if (!found) m.unmatched_source.push_back(a.id);
  }
  for (std::size_t x = 0; x < target.num_arrows(); ++x)
    if (!used[x]) m.unmatched_target.push_back(target.arrow(x).id);
  return m;
}

// Glues a fan around a new puncture onto every boundary component, so the
// result has empty boundary and contains all arcs and triangles of t.
inline Triangulation cap_boundary(const Triangulation& t, const std::string& prefix = "cap") {
  std::vector<Triangle> tris = t.triangles();
  std::set<std::string> used;
  for (const auto& tr : tris) {
    used.insert(tr.name);
    for (int k = 0; k < 3; ++k) {
      used.insert(tr.sides[k]);
      used.insert(tr.corners[k]);
    }
  }
  auto fresh = [&](const std::string& want) {
    std::string s = want;
    for (int n = 2; used.count(s); ++n) s = want + "_" + std::to_string(n);
    used.insert(s);
    return s;
  };
  // Boundary sides keyed by their first endpoint (corner s-1 of the slot).
  std::map<std::string, std::string> from;
  for (const auto& b : t.boundary()) from[t.endpoints(b).first] = b;
  std::set<std::string> done;
  int comp = 0;
  for (const auto& b0 : t.boundary()) {
    if (done.count(b0)) continue;
    std::vector<std::string> cycle;
    for (std::string b = b0; !done.count(b); b = from.at(t.endpoints(b).second)) {
      done.insert(b);
      cycle.push_back(b);
    }
    if (cycle.size() < 2)
      throw std::invalid_argument("boundary component with one marked point cannot be capped by a fan");
    const std::string hub = fresh(prefix + std::to_string(++comp));
    std::map<std::string, std::string> spoke;
    for (const auto& b : cycle) spoke[t.endpoints(b).first] = fresh(hub + "." + t.endpoints(b).first);
    for (const auto& b : cycle) {
      auto [u, v] = t.endpoints(b);
      Triangle tr;
      tr.name = fresh(hub + "." + b);
      tr.sides = {b, spoke.at(u), spoke.at(v)};
      tr.corners = {u, hub, v};
      tris.push_back(tr);
    }
  }
  return Triangulation(std::move(tris), {}, t.scalars());
}

}  // namespace qpsurf
