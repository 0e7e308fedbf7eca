#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace qpsurf {

struct Arrow {
  std::string id;
  std::size_t tail = 0;
  std::size_t head = 0;
};

class Quiver {
 public:
  std::size_t add_vertex(const std::string& id) {
    if (id.empty() || id.find_first_of(" \t:") != std::string::npos)
      throw std::invalid_argument("bad vertex id '" + id + "'");
    if (vertex_index_.count(id)) throw std::invalid_argument("duplicate vertex '" + id + "'");
    vertex_index_.emplace(id, vertices_.size());
    vertices_.push_back(id);
    return vertices_.size() - 1;
  }

  std::size_t add_arrow(const std::string& id, std::size_t tail, std::size_t head) {
    if (id.empty() || id.find_first_of(" \t") != std::string::npos || id.find(": ") != std::string::npos)
      throw std::invalid_argument("bad arrow id '" + id + "'");
    if (arrow_index_.count(id)) throw std::invalid_argument("duplicate arrow '" + id + "'");
    if (tail >= vertices_.size() || head >= vertices_.size())
      throw std::invalid_argument("arrow '" + id + "' has an undeclared endpoint");
    arrow_index_.emplace(id, arrows_.size());
    arrows_.push_back({id, tail, head});
    return arrows_.size() - 1;
  }

  std::size_t add_arrow(const std::string& id, const std::string& tail, const std::string& head) {
    return add_arrow(id, vertex(tail), vertex(head));
  }

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_arrows() const { return arrows_.size(); }
  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::vector<Arrow>& arrows() const { return arrows_; }
  const std::string& vertex_id(std::size_t v) const { return vertices_.at(v); }
  const Arrow& arrow(std::size_t a) const { return arrows_.at(a); }

  bool has_vertex(const std::string& id) const { return vertex_index_.count(id) != 0; }
  bool has_arrow(const std::string& id) const { return arrow_index_.count(id) != 0; }

  std::size_t vertex(const std::string& id) const {
    auto it = vertex_index_.find(id);
    if (it == vertex_index_.end()) throw std::invalid_argument("unknown vertex '" + id + "'");
    return it->second;
  }

  std::size_t arrow_index(const std::string& id) const {
    auto it = arrow_index_.find(id);
    if (it == arrow_index_.end()) throw std::invalid_argument("unknown arrow '" + id + "'");
    return it->second;
  }

  std::vector<std::size_t> arrows_into(std::size_t v) const {
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < arrows_.size(); ++a)
      if (arrows_[a].head == v) out.push_back(a);
    return out;
  }

  std::vector<std::size_t> arrows_out_of(std::size_t v) const {
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < arrows_.size(); ++a)
      if (arrows_[a].tail == v) out.push_back(a);
    return out;
  }

  // Labeled equality: same vertex ids and same (id, tail, head) triples,
  // regardless of insertion order.
  friend bool operator==(const Quiver& a, const Quiver& b) {
    if (a.num_vertices() != b.num_vertices() || a.num_arrows() != b.num_arrows()) return false;
    std::set<std::string> va(a.vertices_.begin(), a.vertices_.end());
    std::set<std::string> vb(b.vertices_.begin(), b.vertices_.end());
    if (va != vb) return false;
    return a.arrow_triples() == b.arrow_triples();
  }

  std::set<std::tuple<std::string, std::string, std::string>> arrow_triples() const {
    std::set<std::tuple<std::string, std::string, std::string>> s;
    for (const auto& ar : arrows_) s.emplace(ar.id, vertices_[ar.tail], vertices_[ar.head]);
    return s;
  }

 private:
  std::vector<std::string> vertices_;
  std::vector<Arrow> arrows_;
  std::unordered_map<std::string, std::size_t> vertex_index_;
  std::unordered_map<std::string, std::size_t> arrow_index_;
};

// A j-hook: `outer` leaves j, `inner` enters j, and the composite is
// outer after inner.
struct Hook {
  std::size_t outer;
  std::size_t inner;
};

inline std::string star_id(const std::string& a) { return a + "*"; }
inline std::string composite_id(const std::string& outer, const std::string& inner) {
  return "[" + outer + "." + inner + "]";
}

// Ordered by incoming arrow, then outgoing arrow, both in arrow order.
inline std::vector<Hook> hooks(const Quiver& q, std::size_t j) {
  std::vector<Hook> out;
  for (std::size_t b : q.arrows_into(j))
    for (std::size_t a : q.arrows_out_of(j)) out.push_back({a, b});
  return out;
}

inline std::vector<Hook> hooks(const Quiver& q, const std::string& j) { return hooks(q, q.vertex(j)); }

inline bool has_two_cycle_at(const Quiver& q, std::size_t j) {
  for (std::size_t a : q.arrows_out_of(j))
    for (std::size_t b : q.arrows_into(j))
      if (q.arrow(a).head == q.arrow(b).tail) return true;
  return false;
}

inline void require_mutable_at(const Quiver& q, std::size_t j) {
  for (std::size_t a : q.arrows_out_of(j))
    if (q.arrow(a).head == j) throw std::invalid_argument("loop at vertex '" + q.vertex_id(j) + "'");
  if (has_two_cycle_at(q, j)) throw std::invalid_argument("2-cycle at vertex '" + q.vertex_id(j) + "'");
}

inline bool is_two_acyclic(const Quiver& q) {
  for (const auto& a : q.arrows())
    for (const auto& b : q.arrows())
      if (a.tail == b.head && a.head == b.tail && a.tail != a.head) return false;
  return true;
}

// Steps 1 and 2 of mutation: composites for every hook, then reverse
// the arrows at j. Composites are appended after the original arrows.
inline Quiver premutate_quiver(const Quiver& q, std::size_t j) {
  require_mutable_at(q, j);
  Quiver p;
  for (const auto& v : q.vertices()) p.add_vertex(v);
  for (const auto& a : q.arrows()) {
    if (a.tail == j || a.head == j)
      p.add_arrow(star_id(a.id), a.head, a.tail);
    else
      p.add_arrow(a.id, a.tail, a.head);
  }
  for (const Hook& h : hooks(q, j))
    p.add_arrow(composite_id(q.arrow(h.outer).id, q.arrow(h.inner).id), q.arrow(h.inner).tail,
                q.arrow(h.outer).head);
  return p;
}

inline Quiver premutate_quiver(const Quiver& q, const std::string& j) { return premutate_quiver(q, q.vertex(j)); }

inline Quiver remove_arrows(const Quiver& q, const std::vector<bool>& drop) {
  Quiver r;
  for (const auto& v : q.vertices()) r.add_vertex(v);
  for (std::size_t a = 0; a < q.num_arrows(); ++a)
    if (!drop[a]) r.add_arrow(q.arrow(a).id, q.arrow(a).tail, q.arrow(a).head);
  return r;
}

// Repeatedly removes the first 2-cycle found scanning arrows in order
// (first arrow by index, partner by index) among eligible vertex pairs.
inline Quiver delete_two_cycles(const Quiver& q,
                                const std::function<bool(std::size_t, std::size_t)>& eligible) {
  std::vector<bool> drop(q.num_arrows(), false);
  for (;;) {
    bool found = false;
    for (std::size_t x = 0; x < q.num_arrows() && !found; ++x) {
      if (drop[x]) continue;
      const Arrow& ax = q.arrow(x);
      if (ax.tail == ax.head || !eligible(ax.tail, ax.head)) continue;
      for (std::size_t y = x + 1; y < q.num_arrows(); ++y) {
        if (drop[y]) continue;
        const Arrow& ay = q.arrow(y);
        if (ay.tail == ax.head && ay.head == ax.tail) {
          drop[x] = drop[y] = true;
          found = true;
          break;
        }
      }
    }
    if (!found) break;
  }
  return remove_arrows(q, drop);
}

inline Quiver mutate_quiver(const Quiver& q, std::size_t j) {
  Quiver p = premutate_quiver(q, j);
  // Only pairs joined by a new composite can carry a 2-cycle created here.
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = q.num_arrows(); a < p.num_arrows(); ++a) {
    auto [t, h] = std::minmax(p.arrow(a).tail, p.arrow(a).head);
    pairs.emplace(t, h);
  }
  return delete_two_cycles(p, [&](std::size_t u, std::size_t v) {
    return pairs.count(std::minmax(u, v)) != 0;
  });
}

inline Quiver mutate_quiver(const Quiver& q, const std::string& j) { return mutate_quiver(q, q.vertex(j)); }

inline Quiver restrict_quiver(const Quiver& q, const std::vector<std::string>& keep) {
  std::vector<bool> in(q.num_vertices(), false);
  for (const auto& v : keep) in[q.vertex(v)] = true;
  std::vector<bool> drop(q.num_arrows(), false);
  for (std::size_t a = 0; a < q.num_arrows(); ++a) drop[a] = !(in[q.arrow(a).tail] && in[q.arrow(a).head]);
  return remove_arrows(q, drop);
}

// Number of arrows u -> v for each ordered pair, keyed by vertex ids.
inline std::map<std::pair<std::string, std::string>, int> arrow_multiplicities(const Quiver& q) {
  std::map<std::pair<std::string, std::string>, int> m;
  for (const auto& a : q.arrows()) ++m[{q.vertex_id(a.tail), q.vertex_id(a.head)}];
  return m;
}

inline std::string to_text(const Quiver& q) {
  std::ostringstream os;
  os << "vertices:";
  for (const auto& v : q.vertices()) os << ' ' << v;
  os << '\n';
  for (const auto& a : q.arrows())
    os << "arrow " << a.id << ": " << q.vertex_id(a.tail) << " -> " << q.vertex_id(a.head) << '\n';
  return os.str();
}

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream is{std::string(s)};
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

// Reads "vertices:" and "arrow" lines; other lines are left to the caller
// and reported through `rest` when given.
inline Quiver parse_quiver(const std::string& text, std::vector<std::string>* rest = nullptr) {
  Quiver q;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto fail = [&](const std::string& why) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": " + why);
    };
    try {
      if (t.rfind("vertices:", 0) == 0) {
        for (const auto& v : split_ws(t.substr(9))) q.add_vertex(v);
      } else if (t.rfind("arrow ", 0) == 0) {
        std::size_t colon = t.find(": ", 6);
        if (colon == std::string::npos) fail("expected 'arrow <id>: <tail> -> <head>'");
        std::string id = trim(t.substr(6, colon - 6));
        auto ends = split_ws(t.substr(colon + 2));
        if (ends.size() != 3 || ends[1] != "->") fail("expected 'arrow <id>: <tail> -> <head>'");
        q.add_arrow(id, ends[0], ends[2]);
      } else if (rest) {
        rest->push_back(t);
      } else {
        fail("unrecognized line '" + t + "'");
      }
    } catch (const std::invalid_argument& e) {
      std::string msg = e.what();
      if (msg.rfind("line ", 0) == 0) throw;
      fail(msg);
    }
  }
  return q;
}

}  // namespace qpsurf
