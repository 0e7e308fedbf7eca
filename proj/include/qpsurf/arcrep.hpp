#pragma once

#include <qpsurf/rep.hpp>
#include <qpsurf/repmut.hpp>
#include <qpsurf/surface.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qpsurf {

// One elementary piece of a curve inside a triangle. The first piece
// leaves a corner (in = -1) and the last one reaches a corner (out = -1);
// a corner and the slot it faces satisfy corner = slot + 1 (mod 3).
struct ArcSegment {
  std::size_t tri = 0;
  int in = -1;
  int out = -1;
  friend bool operator==(const ArcSegment&, const ArcSegment&) = default;
};

struct ArcCurve {
  std::string name = "i";
  std::optional<std::string> along;  // the curve is this arc of the triangulation
  std::vector<ArcSegment> segs;
  std::optional<std::string> monogon;  // enclosed puncture of a monogon loop
  std::optional<std::size_t> truncate;
  bool open_end = false;  // stops on a crossing instead of a marked point

  bool is_trivial() const { return along.has_value(); }
};

inline int facing_slot(int corner) { return mod3(corner + 2); }
inline int facing_corner(int slot) { return mod3(slot + 1); }

inline void validate_arc(const Triangulation& t, const ArcCurve& c) {
  auto fail = [&](const std::string& why) { throw std::invalid_argument("arc '" + c.name + "': " + why); };
  if (c.along) {
    if (!t.is_arc(*c.along)) fail("'" + *c.along + "' is not an arc of the triangulation");
    return;
  }
  if (c.segs.size() < 2) fail("needs a start and an end");
  for (std::size_t k = 0; k < c.segs.size(); ++k) {
    const ArcSegment& s = c.segs[k];
    if (s.tri >= t.triangles().size()) fail("segment " + std::to_string(k) + " names no triangle");
    bool first = k == 0, last = k + 1 == c.segs.size();
    if ((s.in < 0) != first) fail("segment " + std::to_string(k) + ": only the first piece may start at a corner");
    if ((s.out < 0) != (last && !c.open_end))
      fail("segment " + std::to_string(k) + ": only the last piece may end at a corner");
    if (s.in >= 3 || s.out >= 3) fail("segment " + std::to_string(k) + ": slot out of range");
    if (s.in >= 0 && s.in == s.out) fail("segment " + std::to_string(k) + " leaves through the side it entered");
    if (!last || c.open_end) {
      auto o = t.across({s.tri, s.out});
      if (!o) fail("segment " + std::to_string(k) + " leaves through a boundary side");
      if (!last && !(o->tri == c.segs[k + 1].tri && o->slot == c.segs[k + 1].in))
        fail("segments " + std::to_string(k) + " and " + std::to_string(k + 1) + " do not glue");
    }
  }
}

inline std::size_t crossing_count(const ArcCurve& c) {
  if (c.along) return 0;
  return c.open_end ? c.segs.size() : c.segs.size() - 1;
}

// Crossing k is where piece k leaves its triangle.
inline std::vector<std::string> crossing_arcs(const Triangulation& t, const ArcCurve& c) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < crossing_count(c); ++k) out.push_back(t.side({c.segs[k].tri, c.segs[k].out}));
  return out;
}

// Crossing positions on arc j, in traversal order; this order is the basis of M_j.
inline std::vector<std::size_t> crossings(const Triangulation& t, const ArcCurve& c, const std::string& j) {
  std::vector<std::size_t> out;
  auto arcs = crossing_arcs(t, c);
  for (std::size_t k = 0; k < arcs.size(); ++k)
    if (arcs[k] == j) out.push_back(k);
  return out;
}

inline ArcCurve reversed(const ArcCurve& c) {
  if (c.open_end) throw std::invalid_argument("cannot reverse a truncated curve");
  ArcCurve r = c;
  r.segs.assign(c.segs.rbegin(), c.segs.rend());
  for (auto& s : r.segs) std::swap(s.in, s.out);
  return r;
}

namespace detail {

inline int slot_in(const Triangle& tr, const std::string& side) {
  for (int k = 0; k < 3; ++k)
    if (tr.sides[k] == side) return k;
  return -1;
}

inline std::size_t parse_index(const std::string& s, const std::string& what) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), ::isdigit)) throw std::invalid_argument("bad " + what + " '" + s + "'");
  return std::stoul(s);
}

inline int parse_slot(const Triangle& tr, const std::string& s) {
  if (!s.empty() && s[0] == '#') {
    std::size_t k = parse_index(s.substr(1), "slot index");
    if (k > 2) throw std::invalid_argument("slot index out of range: " + s);
    return static_cast<int>(k);
  }
  int k = slot_in(tr, s);
  if (k < 0) throw std::invalid_argument("'" + s + "' is not a side of triangle '" + tr.name + "'");
  return k;
}

// "T@label" or "T#index"
inline std::pair<std::size_t, int> parse_corner(const Triangulation& t, const std::string& s) {
  std::size_t at = s.find_first_of("@#");
  if (at == std::string::npos || at == 0) throw std::invalid_argument("bad corner '" + s + "'");
  std::size_t tri = t.triangle_index(s.substr(0, at));
  const Triangle& tr = t.triangle(tri);
  std::string key = s.substr(at + 1);
  if (s[at] == '#') {
    std::size_t k = parse_index(key, "corner index");
    if (k > 2) throw std::invalid_argument("corner index out of range: " + s);
    return {tri, static_cast<int>(k)};
  }
  int found = -1;
  for (int k = 0; k < 3; ++k)
    if (tr.corners[k] == key) {
      if (found >= 0) throw std::invalid_argument("corner '" + s + "' is ambiguous; use " + tr.name + "#<index>");
      found = k;
    }
  if (found < 0) throw std::invalid_argument("triangle '" + tr.name + "' has no corner '" + key + "'");
  return {tri, found};
}

}  // namespace detail

// Arc file: "arc <name>: start T@c ; seg T <in> <out> ; ... ; end T@c", or
// "arc <name>: along <arc>", plus an optional "monogon puncture=<p> [truncate=<k>]".
// Lines that do not start with a keyword continue the previous arc line.
inline ArcCurve parse_arc(const Triangulation& t, const std::string& text) {
  ArcCurve c;
  std::string body;
  bool have_arc = false;
  std::istringstream is(text);
  std::string raw;
  int lineno = 0, arc_line = 0;
  auto fail = [&](int line, const std::string& why) {
    throw std::invalid_argument("line " + std::to_string(line) + ": " + why);
  };
  while (std::getline(is, raw)) {
    ++lineno;
    std::string ln = trim(raw.substr(0, raw.find('#') == 0 ? 0 : raw.size()));
    if (ln.empty()) continue;
    if (ln.rfind("arc ", 0) == 0) {
      if (have_arc) fail(lineno, "only one arc per file");
      std::size_t colon = ln.find(':');
      if (colon == std::string::npos) fail(lineno, "expected 'arc <name>: ...'");
      c.name = trim(ln.substr(4, colon - 4));
      body = ln.substr(colon + 1);
      have_arc = true;
      arc_line = lineno;
    } else if (ln.rfind("monogon", 0) == 0) {
      for (const auto& kv : split_ws(ln.substr(7))) {
        std::size_t eq = kv.find('=');
        std::string key = kv.substr(0, eq), val = eq == std::string::npos ? "" : kv.substr(eq + 1);
        if (key == "puncture" && !val.empty()) {
          c.monogon = val;
        } else if (key == "truncate" && !val.empty()) {
          try {
            c.truncate = detail::parse_index(val, "truncation index");
          } catch (const std::invalid_argument& e) {
            fail(lineno, e.what());
          }
        } else {
          fail(lineno, "unknown monogon option '" + kv + "'");
        }
      }
      if (!c.monogon) fail(lineno, "monogon line needs puncture=<p>");
    } else if (have_arc) {
      body += " " + ln;
    } else {
      fail(lineno, "unrecognized line '" + ln + "'");
    }
  }
  if (!have_arc) throw std::invalid_argument("no arc line");
  try {
    std::vector<std::string> items;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ';'))
      if (!trim(item).empty()) items.push_back(trim(item));
    for (std::size_t k = 0; k < items.size(); ++k) {
      auto w = split_ws(items[k]);
      if (w[0] == "along" && w.size() == 2 && items.size() == 1) {
        c.along = w[1];
      } else if (w[0] == "start" && w.size() == 2 && k == 0) {
        auto [tri, corner] = detail::parse_corner(t, w[1]);
        c.segs.push_back({tri, -1, facing_slot(corner)});
      } else if (w[0] == "end" && w.size() == 2 && k + 1 == items.size()) {
        auto [tri, corner] = detail::parse_corner(t, w[1]);
        c.segs.push_back({tri, facing_slot(corner), -1});
      } else if (w[0] == "seg" && w.size() == 4) {
        std::size_t tri = t.triangle_index(w[1]);
        const Triangle& tr = t.triangle(tri);
        c.segs.push_back({tri, detail::parse_slot(tr, w[2]), detail::parse_slot(tr, w[3])});
      } else {
        throw std::invalid_argument("bad item '" + items[k] + "'");
      }
    }
    validate_arc(t, c);
  } catch (const std::out_of_range& e) {
    fail(arc_line, e.what());
  } catch (const std::invalid_argument& e) {
    fail(arc_line, e.what());
  }
  if (c.along && c.monogon) fail(arc_line, "an arc of the triangulation is not a monogon loop");
  return c;
}

inline std::string save_arc(const Triangulation& t, const ArcCurve& c) {
  std::ostringstream os;
  os << "arc " << c.name << ":";
  if (c.along) {
    os << " along " << *c.along << '\n';
  } else {
    for (std::size_t k = 0; k < c.segs.size(); ++k) {
      const ArcSegment& s = c.segs[k];
      const Triangle& tr = t.triangle(s.tri);
      if (k) os << " ;";
      if (s.in < 0) {
        os << " start " << tr.name << '#' << facing_corner(s.out);
      } else if (s.out < 0) {
        os << " end " << tr.name << '#' << facing_corner(s.in);
      } else {
        os << " seg " << tr.name << ' ' << tr.sides[s.in] << ' ' << tr.sides[s.out];
      }
    }
    os << '\n';
  }
  if (c.monogon) {
    os << "monogon puncture=" << *c.monogon;
    if (c.truncate) os << " truncate=" << *c.truncate;
    os << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Detours

struct Detour {
  std::size_t order = 1;
  std::size_t from = 0, to = 0;  // crossings joined on the detour's arc
  std::size_t begin = 0;         // b(d)
  std::size_t tri = 0;
  std::string arc, puncture;
  int dir = 1;  // direction along the curve in which the wrap is traversed
};

namespace detail {

struct Piece {
  std::size_t tri;
  int enter, exit;
};

class CurveWalker {
 public:
  CurveWalker(const Triangulation& t, const ArcCurve& c) : t_(t), c_(c), arcs_(crossing_arcs(t, c)) {}

  long size() const { return static_cast<long>(arcs_.size()); }
  const std::string& arc(long u) const { return arcs_.at(u); }

  // The piece between crossings u and u + dir, read in that direction.
  std::optional<Piece> piece(long u, int dir) const {
    long v = u + dir;
    if (u < 0 || v < 0 || u >= size() || v >= size()) return std::nullopt;
    const ArcSegment& s = c_.segs[std::max(u, v)];
    return dir > 0 ? Piece{s.tri, s.in, s.out} : Piece{s.tri, s.out, s.in};
  }

  // `count` pieces from crossing u in direction dir, each cutting the next
  // corner of the fan after `from` counterclockwise. Returns the last corner.
  std::optional<CornerRef> follow_fan(long u, int dir, CornerRef from, std::size_t count) const {
    CornerRef cur = from;
    for (std::size_t i = 0; i < count; ++i) {
      auto nx = t_.fan_next(cur);
      auto pc = piece(u + dir * static_cast<long>(i), dir);
      if (!nx || !pc) return std::nullopt;
      if (pc->tri != nx->tri || pc->enter != nx->corner || pc->exit != mod3(nx->corner + 1)) return std::nullopt;
      cur = *nx;
    }
    return cur;
  }

  // Closing piece: from the corner after `last` back into tri, leaving through jslot.
  bool closes(long u, int dir, CornerRef last, std::size_t tri, int c, int jslot) const {
    auto nx = t_.fan_next(last);
    auto pc = piece(u, dir);
    return nx && pc && *nx == CornerRef{tri, c} && pc->tri == tri && pc->enter == c && pc->exit == jslot;
  }

 private:
  const Triangulation& t_;
  const ArcCurve& c_;
  std::vector<std::string> arcs_;
};

}  // namespace detail

inline std::vector<Detour> find_detours(const Triangulation& t, const ArcCurve& c) {
  std::vector<Detour> all;
  if (c.along) return all;
  detail::CurveWalker w(t, c);
  const long m = w.size();
  std::vector<Detour> level;
  for (long t1 = 0; t1 < m; ++t1) {
    for (int dir : {1, -1}) {
      auto p0 = w.piece(t1, dir);
      if (!p0) continue;
      const int jslot = p0->enter, cc = facing_corner(jslot);
      const std::string& p = t.corner({p0->tri, cc});
      if (!t.is_puncture(p) || p0->exit != mod3(jslot + 2)) continue;
      const long l = static_cast<long>(t.valence(p));
      const long t2 = t1 + dir * (l + 1);
      if (t2 < 0 || t2 >= m || w.arc(t2) != w.arc(t1)) continue;
      auto last = w.follow_fan(t1 + dir, dir, {p0->tri, cc}, static_cast<std::size_t>(l - 1));
      if (!last || !w.closes(t1 + dir * l, dir, *last, p0->tri, cc, jslot)) continue;
      level.push_back({1, static_cast<std::size_t>(t1), static_cast<std::size_t>(t2),
                       static_cast<std::size_t>(t1 + dir), p0->tri, w.arc(t1), p, dir});
    }
  }
  for (std::size_t n = 1; !level.empty() && n <= static_cast<std::size_t>(m); ++n) {
    all.insert(all.end(), level.begin(), level.end());
    std::vector<Detour> next;
    for (const Detour& d : level) {
      const long b = static_cast<long>(d.begin), e = static_cast<long>(d.to);
      // The piece at b on the far side of the arc through b from d's triangle.
      std::optional<detail::Piece> first;
      long q1 = -1;
      for (int s : {1, -1}) {
        auto pc = w.piece(b + s, -s);
        if (pc && pc->tri != d.tri) {
          first = pc;
          q1 = b + s;
        }
      }
      if (!first) continue;
      const int jslot = first->enter, cc = facing_corner(jslot);
      const std::string& p = t.corner({first->tri, cc});
      if (!t.is_puncture(p) || first->exit != mod3(jslot + 2)) continue;
      const long l = static_cast<long>(t.valence(p));
      if (l < 2) continue;
      // d itself plays the corner after cc in the fan.
      auto virt = t.fan_next({first->tri, cc});
      const Triangle& dn = t.triangle(d.tri);
      if (!virt || virt->tri != d.tri || dn.sides[virt->corner] != w.arc(b) ||
          dn.sides[mod3(virt->corner + 1)] != d.arc)
        continue;
      const long t2 = e + d.dir * (l - 1);
      if (t2 < 0 || t2 >= m || w.arc(t2) != w.arc(q1)) continue;
      auto last = w.follow_fan(e, d.dir, *virt, static_cast<std::size_t>(l - 2));
      if (!last || !w.closes(e + d.dir * (l - 2), d.dir, *last, first->tri, cc, jslot)) continue;
      next.push_back({n + 1, static_cast<std::size_t>(q1), static_cast<std::size_t>(t2), d.begin, first->tri,
                      w.arc(q1), p, d.dir});
    }
    level = std::move(next);
  }
  return all;
}

inline Rational detour_entry(const Triangulation& t, const ArcCurve& c, const Detour& d) {
  const std::string& k = crossing_arcs(t, c).at(d.begin);
  auto [u, v] = t.endpoints(k);
  const std::string& q = u == d.puncture ? v : u;
  Rational val = rational_pow(t.scalar(d.puncture), static_cast<unsigned>((d.order + 1) / 2));
  if (d.order / 2 > 0) val *= rational_pow(t.scalar(q), static_cast<unsigned>(d.order / 2));
  return d.order % 2 ? -val : val;
}

inline Matrix detour_matrix(const Triangulation& t, const ArcCurve& c, const std::vector<Detour>& detours,
                            const std::string& j, std::size_t tri) {
  auto xs = crossings(t, c, j);
  Matrix d = Matrix::identity(xs.size());
  auto pos = [&](std::size_t k) { return std::find(xs.begin(), xs.end(), k) - xs.begin(); };
  for (const Detour& det : detours)
    if (det.arc == j && det.tri == tri) d(pos(det.to), pos(det.from)) = detour_entry(t, c, det);
  return d;
}

inline Matrix detour_matrix(const Triangulation& t, const ArcCurve& c, const std::string& j, std::size_t tri) {
  return detour_matrix(t, c, find_detours(t, c), j, tri);
}

// Triangle and corner of each arrow of the unreduced quiver.
inline std::map<std::string, CornerRef> arrow_corners(const Triangulation& t) {
  std::map<std::string, CornerRef> out;
  for (std::size_t k = 0; k < t.triangles().size(); ++k)
    for (int c = 0; c < 3; ++c)
      if (auto id = corner_arrow(t, {k, c})) out[*id] = {k, c};
  return out;
}

// Identity entries for each piece that cuts the corner of an arrow.
inline std::vector<Matrix> segment_maps(const Triangulation& t, const ArcCurve& c, const Quiver& q) {
  auto arcs = crossing_arcs(t, c);
  std::vector<std::size_t> pos(arcs.size());
  std::map<std::string, std::size_t> seen;
  for (std::size_t k = 0; k < arcs.size(); ++k) pos[k] = seen[arcs[k]]++;
  auto dim = [&](const std::string& v) { return seen.count(v) ? seen.at(v) : std::size_t{0}; };
  std::vector<Matrix> maps;
  for (const auto& a : q.arrows()) maps.emplace_back(dim(q.vertex_id(a.head)), dim(q.vertex_id(a.tail)));
  if (c.along) return maps;
  for (std::size_t k = 1; k < crossing_count(c); ++k) {
    const ArcSegment& s = c.segs[k];
    const Triangle& tr = t.triangle(s.tri);
    // Corner c carries the arrow s_c -> s_{c+1}.
    const bool forward = s.out == mod3(s.in + 1);
    const int corner = forward ? s.in : s.out;
    const std::size_t tail = forward ? k - 1 : k, head = forward ? k : k - 1;
    std::string id = corner_arrow_id(tr, corner);
    if (!q.has_arrow(id)) continue;
    maps[q.arrow_index(id)](pos[head], pos[tail]) = 1;
  }
  return maps;
}

inline std::vector<std::size_t> crossing_dims(const Triangulation& t, const ArcCurve& c, const Quiver& q) {
  std::vector<std::size_t> dims;
  for (const auto& v : q.vertices()) dims.push_back(crossings(t, c, v).size());
  return dims;
}

// m(tau, i) on the unreduced QP.
inline DecoratedRep segment_representation(const Triangulation& t, const ArcCurve& c) {
  QP u = unreduced_qp(t);
  return DecoratedRep(u, crossing_dims(t, c, u.q()), segment_maps(t, c, u.q()),
                      std::vector<std::size_t>(u.q().num_vertices(), 0));
}

// ---------------------------------------------------------------------------
// Monogon loops

struct MonogonCut {
  ArcCurve iota;                // the curve to build from (the loop itself when no cut applies)
  bool truncated = false;       // false when the connecting arc lies in the triangulation
  bool reversed = false;        // loop reoriented to run clockwise around the puncture
  std::size_t t_point = 0;      // last crossing of iota
  std::string i_prime;          // arc carrying t_point
  std::vector<std::size_t> fan; // crossings around the puncture before t_point
};

inline MonogonCut monogon_truncate(const Triangulation& t, const ArcCurve& c) {
  if (!c.monogon) throw std::invalid_argument("arc '" + c.name + "' is not flagged as a monogon loop");
  const std::string& p = *c.monogon;
  if (!t.is_puncture(p)) throw std::invalid_argument("monogon puncture '" + p + "' is not a puncture");
  if (c.along || c.open_end) throw std::invalid_argument("monogon loop must be a full curve");
  const ArcSegment& s0 = c.segs.front();
  const ArcSegment& s1 = c.segs.back();
  const std::string base = t.corner({s0.tri, facing_corner(s0.out)});
  if (t.corner({s1.tri, facing_corner(s1.in)}) != base)
    throw std::invalid_argument("monogon arc '" + c.name + "' is not a loop");
  MonogonCut cut;
  // An uncrossed arc from the base point to p can only be the connecting arc.
  for (const auto& a : t.arcs()) {
    auto [u, v] = t.endpoints(a);
    if (((u == base && v == p) || (u == p && v == base)) && crossings(t, c, a).empty()) {
      cut.iota = c;
      return cut;
    }
  }
  auto p_corner_cuts = [&](const ArcCurve& cur, bool clockwise) {
    std::vector<bool> out(cur.segs.size(), false);
    for (std::size_t k = 1; k < crossing_count(cur); ++k) {
      const ArcSegment& s = cur.segs[k];
      const bool fwd = s.out == mod3(s.in + 1);
      if (t.corner({s.tri, fwd ? s.in : s.out}) == p && fwd != clockwise) out[k] = true;
    }
    return out;
  };
  auto cw = p_corner_cuts(c, true), ccw = p_corner_cuts(c, false);
  bool any_cw = std::count(cw.begin(), cw.end(), true) > 0, any_ccw = std::count(ccw.begin(), ccw.end(), true) > 0;
  if (any_cw && any_ccw) throw std::invalid_argument("monogon loop turns both ways around '" + p + "'");
  ArcCurve cur = c;
  if (any_ccw) {
    cur = reversed(c);
    cut.reversed = true;
    cw = p_corner_cuts(cur, true);
  }
  const std::size_t m = crossing_count(cur);
  const std::size_t l = t.valence(p);
  std::optional<std::size_t> tp;
  if (c.truncate) {
    tp = cut.reversed ? m - 1 - *c.truncate : *c.truncate;
    if (*tp >= m) throw std::invalid_argument("truncation index out of range");
    for (std::size_t k = *tp >= l ? *tp - l : 0; k < *tp; ++k) cut.fan.push_back(k);
  } else {
    for (std::size_t k = 1; k < m && !tp; ++k) {
      if (!cw[k] || cw[k - 1]) continue;
      std::size_t run = 0;
      while (k + run < m && cw[k + run]) ++run;
      if (run + 1 < l) continue;
      // The run's first l - 1 pieces join the l crossings of the fan.
      for (std::size_t x = k - 1; x < k - 1 + l; ++x) cut.fan.push_back(x);
      if (k - 1 + l < m) tp = k - 1 + l;
    }
    if (!tp) throw std::invalid_argument("no complete turn around '" + p + "' found on monogon loop '" + c.name + "'");
  }
  cut.truncated = true;
  cut.t_point = *tp;
  cut.iota = cur;
  cut.iota.segs.resize(*tp + 1);
  cut.iota.open_end = true;
  cut.iota.monogon.reset();
  cut.iota.truncate.reset();
  cut.i_prime = t.side({cur.segs[*tp].tri, cur.segs[*tp].out});
  validate_arc(t, cut.iota);
  return cut;
}

// ---------------------------------------------------------------------------
// The arc representation M(tau, i) on (Q(tau), S(tau)).

struct ArcRepresentation {
  DecoratedRep rep;
  ArcCurve curve;  // curve the crossings were read from (iota for a cut loop)
  std::vector<Detour> detours;
  std::optional<MonogonCut> cut;
};

inline ArcRepresentation arc_representation_detailed(const Triangulation& t, const ArcCurve& c,
                                                     const std::optional<QP>& target = std::nullopt) {
  QP qp = target ? *target : surface_qp(t);
  if (c.along) {
    if (!t.is_arc(*c.along)) throw std::invalid_argument("'" + *c.along + "' is not an arc");
    return {negative_simple(qp, *c.along), c, {}, std::nullopt};
  }
  std::optional<MonogonCut> cut;
  ArcCurve curve = c;
  if (c.monogon) {
    cut = monogon_truncate(t, c);
    curve = cut->iota;
  }
  const Quiver& q = qp.q();
  QP u = unreduced_qp(t);
  auto seg = segment_maps(t, curve, u.q());
  auto dims = crossing_dims(t, curve, q);
  auto detours = find_detours(t, curve);
  auto corners = arrow_corners(t);
  std::optional<std::size_t> ip;
  std::size_t drop = 0;
  if (cut && cut->truncated) {
    ip = q.vertex(cut->i_prime);
    auto xs = crossings(t, curve, cut->i_prime);
    drop = std::find(xs.begin(), xs.end(), cut->t_point) - xs.begin();
  }
  // Projection away from the coordinate of t, and the matching inclusion.
  auto pi = [&](std::size_t n) {
    Matrix m(n - 1, n);
    for (std::size_t r = 0, k = 0; k < n; ++k)
      if (k != drop) m(r++, k) = 1;
    return m;
  };
  std::vector<Matrix> maps;
  for (const auto& a : q.arrows()) {
    auto it = corners.find(a.id);
    if (it == corners.end()) throw std::logic_error("arrow '" + a.id + "' is not a corner of any triangle");
    Matrix m = detour_matrix(t, curve, detours, q.vertex_id(a.head), it->second.tri) *
               seg[u.q().arrow_index(a.id)];
    if (ip && a.head == *ip) m = pi(m.rows()) * m;
    if (ip && a.tail == *ip) m = m * pi(m.cols()).transpose();
    maps.push_back(std::move(m));
  }
  if (ip) dims[*ip] -= 1;
  DecoratedRep rep(qp, dims, maps, std::vector<std::size_t>(q.num_vertices(), 0));
  return {std::move(rep), curve, std::move(detours), cut};
}

inline DecoratedRep arc_representation(const Triangulation& t, const ArcCurve& c) {
  return arc_representation_detailed(t, c).rep;
}

// g_j = dim ker c_j - dim M_j + dim V_j
inline std::vector<long> g_vector(const DecoratedRep& r) {
  auto bad = relation_violations(r);
  if (!bad.empty()) throw std::invalid_argument("relations fail: " + bad.front());
  std::vector<long> g;
  for (std::size_t j = 0; j < r.quiver().num_vertices(); ++j) {
    MutationWorkspace w = mutation_workspace(r, j);
    long ker = static_cast<long>(w.dim_out) - static_cast<long>(rank(w.C));
    g.push_back(ker - static_cast<long>(r.dim(j)) + static_cast<long>(r.dec(j)));
  }
  return g;
}

// ---------------------------------------------------------------------------
// Carrying a curve across a flip.

namespace detail {

// Places in the flipped quadrilateral, named by their role.
enum class Spot { a, b, c, d, j, w, x, y, z };

}  // namespace detail

inline ArcCurve transport_arc(const Triangulation& t, const ArcCurve& c, const FlipResult& f) {
  using detail::Spot;
  const Triangulation& s = f.sigma;
  const FlipQuad& q = f.quad;
  ArcCurve out = c;
  out.truncate.reset();
  if (c.along) {
    if (*c.along != f.old_arc) return out;
    // The old diagonal joins y to x: it now crosses the new one once.
    out.along.reset();
    std::size_t n1 = s.triangle_index(q.tri1), n2 = s.triangle_index(q.tri2);
    out.segs = {{n1, -1, 2}, {n2, 2, -1}};
    validate_arc(s, out);
    return out;
  }
  if (c.open_end) throw std::invalid_argument("cannot carry a truncated curve across a flip");
  const std::size_t t1 = t.triangle_index(q.tri1), t2 = t.triangle_index(q.tri2);
  const auto& jsl = t.slots(f.old_arc);
  const int s1 = jsl[0].tri == t1 ? jsl[0].slot : jsl[1].slot;
  const int s2 = jsl[0].tri == t1 ? jsl[1].slot : jsl[0].slot;
  auto side_spot = [&](std::size_t tri, int slot) {
    if (tri == t1) return std::array{Spot::j, Spot::a, Spot::b}[mod3(slot - s1)];
    return std::array{Spot::j, Spot::c, Spot::d}[mod3(slot - s2)];
  };
  auto corner_spot = [&](std::size_t tri, int corner) {
    if (tri == t1) return std::array{Spot::x, Spot::w, Spot::y}[mod3(corner - s1)];
    return std::array{Spot::y, Spot::z, Spot::x}[mod3(corner - s2)];
  };
  // New triangles: tri1 = [b, c, k] with corners [y, z, w], tri2 = [d, a, k] with corners [x, w, z].
  const std::size_t n1 = t1, n2 = t2;
  struct Place {
    std::size_t tri;
    int slot;  // slot faced or passed through
    bool corner;
  };
  auto places = [&](Spot sp) -> std::vector<Place> {
    switch (sp) {
      case Spot::b: return {{n1, 0, false}};
      case Spot::c: return {{n1, 1, false}};
      case Spot::d: return {{n2, 0, false}};
      case Spot::a: return {{n2, 1, false}};
      case Spot::y: return {{n1, facing_slot(0), true}};
      case Spot::x: return {{n2, facing_slot(0), true}};
      case Spot::z: return {{n1, facing_slot(1), true}, {n2, facing_slot(2), true}};
      case Spot::w: return {{n1, facing_slot(2), true}, {n2, facing_slot(1), true}};
      default: throw std::logic_error("diagonal is not a place");
    }
  };
  // A single piece between two places of one triangle: two distinct sides,
  // or a corner and the side it faces.
  auto single = [](const Place& from, const Place& to) -> std::optional<ArcSegment> {
    if (from.tri != to.tri || (from.corner && to.corner)) return std::nullopt;
    if ((from.slot == to.slot) != (from.corner || to.corner)) return std::nullopt;
    return ArcSegment{from.tri, from.corner ? -1 : from.slot, to.corner ? -1 : to.slot};
  };
  auto reroute = [&](Spot from, Spot to) -> std::vector<ArcSegment> {
    for (const auto& pf : places(from))
      for (const auto& pt : places(to))
        if (auto sg = single(pf, pt)) return {*sg};
    for (const auto& pf : places(from))
      for (const auto& pt : places(to)) {
        if (pf.tri == pt.tri) continue;
        auto a = single(pf, {pf.tri, 2, false});
        auto b = single({pt.tri, 2, false}, pt);
        if (a && b) return {*a, *b};
      }
    throw std::invalid_argument("curve '" + c.name + "' is not minimal inside the flipped quadrilateral");
  };

  std::vector<ArcSegment> segs;
  for (std::size_t k = 0; k < c.segs.size();) {
    const ArcSegment& sg = c.segs[k];
    if (sg.tri != t1 && sg.tri != t2) {
      segs.push_back(sg);
      ++k;
      continue;
    }
    std::size_t e = k;
    while (sg.tri == t1 || sg.tri == t2) {
      const ArcSegment& cur = c.segs[e];
      if (cur.out >= 0 && side_spot(cur.tri, cur.out) == Spot::j) {
        ++e;
        continue;
      }
      break;
    }
    const ArcSegment& first = c.segs[k];
    const ArcSegment& last = c.segs[e];
    Spot from = first.in < 0 ? corner_spot(first.tri, facing_corner(first.out)) : side_spot(first.tri, first.in);
    Spot to = last.out < 0 ? corner_spot(last.tri, facing_corner(last.in)) : side_spot(last.tri, last.out);
    if ((from == Spot::w && to == Spot::z) || (from == Spot::z && to == Spot::w)) {
      if (k != 0 || e + 1 != c.segs.size()) throw std::logic_error("curve runs along the new diagonal mid-way");
      out.segs.clear();
      out.along = f.new_arc;
      return out;
    }
    for (const auto& piece : reroute(from, to)) segs.push_back(piece);
    k = e + 1;
  }
  out.segs = std::move(segs);
  validate_arc(s, out);
  return out;
}

}  // namespace qpsurf
