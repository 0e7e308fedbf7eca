#pragma once

#include <qpsurf/quiver.hpp>
#include <qpsurf/rational.hpp>

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace qpsurf {

// A path a1 a2 ... ad written in function order: t(a_k) = h(a_{k+1}).
// The empty path at `vertex` is the idempotent e_vertex.
struct Path {
  std::vector<std::size_t> arrows;
  std::size_t vertex = 0;  // only meaningful when arrows is empty

  static Path trivial(std::size_t v) { return Path{{}, v}; }
  static Path of(std::vector<std::size_t> arrows) { return Path{std::move(arrows), 0}; }

  std::size_t length() const { return arrows.size(); }

  friend bool operator==(const Path&, const Path&) = default;
  friend auto operator<=>(const Path& a, const Path& b) {
    if (a.arrows.size() != b.arrows.size()) return a.arrows.size() <=> b.arrows.size();
    if (auto c = a.arrows <=> b.arrows; c != 0) return c;
    return a.vertex <=> b.vertex;
  }
};

inline std::size_t path_head(const Quiver& q, const Path& p) {
  return p.arrows.empty() ? p.vertex : q.arrow(p.arrows.front()).head;
}

inline std::size_t path_tail(const Quiver& q, const Path& p) {
  return p.arrows.empty() ? p.vertex : q.arrow(p.arrows.back()).tail;
}

inline bool is_composable(const Quiver& q, const std::vector<std::size_t>& arrows) {
  for (std::size_t k = 0; k + 1 < arrows.size(); ++k)
    if (q.arrow(arrows[k]).tail != q.arrow(arrows[k + 1]).head) return false;
  return true;
}

inline std::string path_to_string(const Quiver& q, const Path& p) {
  if (p.arrows.empty()) return "e(" + q.vertex_id(p.vertex) + ")";
  std::string s;
  for (std::size_t k = 0; k < p.arrows.size(); ++k) s += (k ? " " : "") + q.arrow(p.arrows[k]).id;
  return s;
}

using QuiverPtr = std::shared_ptr<const Quiver>;

inline QuiverPtr share(Quiver q) { return std::make_shared<const Quiver>(std::move(q)); }

// Same vertices and arrows in the same order, so indices agree.
inline bool same_layout(const Quiver& a, const Quiver& b) {
  if (&a == &b) return true;
  if (a.vertices() != b.vertices() || a.num_arrows() != b.num_arrows()) return false;
  for (std::size_t k = 0; k < a.num_arrows(); ++k) {
    const Arrow& x = a.arrow(k);
    const Arrow& y = b.arrow(k);
    if (x.id != y.id || x.tail != y.tail || x.head != y.head) return false;
  }
  return true;
}

// Finite linear combination of paths; terms longer than the truncation
// degree are dropped on every operation.
class PathElement {
 public:
  PathElement(QuiverPtr q, std::size_t truncation) : q_(std::move(q)), n_(truncation) {
    if (!q_) throw std::invalid_argument("path element needs a quiver");
  }

  static PathElement idempotent(QuiverPtr q, std::size_t n, std::size_t v) {
    PathElement e(std::move(q), n);
    e.add(Path::trivial(v), 1);
    return e;
  }

  static PathElement arrow(QuiverPtr q, std::size_t n, std::size_t a) {
    PathElement e(std::move(q), n);
    e.add(Path::of({a}), 1);
    return e;
  }

  static PathElement path(QuiverPtr q, std::size_t n, std::vector<std::size_t> arrows, const Rational& c = 1) {
    PathElement e(std::move(q), n);
    e.add(Path::of(std::move(arrows)), c);
    return e;
  }

  const Quiver& quiver() const { return *q_; }
  const QuiverPtr& quiver_ptr() const { return q_; }
  std::size_t truncation() const { return n_; }
  const std::map<Path, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add(const Path& p, const Rational& c) {
    if (c == 0 || p.length() > n_) return;
    if (!is_composable(*q_, p.arrows)) throw std::invalid_argument("path is not composable: " + path_to_string(*q_, p));
    auto [it, inserted] = terms_.emplace(p, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  PathElement& operator+=(const PathElement& o) {
    check_compatible(o);
    for (const auto& [p, c] : o.terms_) add(p, c);
    return *this;
  }
  PathElement& operator-=(const PathElement& o) {
    check_compatible(o);
    for (const auto& [p, c] : o.terms_) add(p, -c);
    return *this;
  }
  PathElement& operator*=(const Rational& s) {
    if (s == 0) {
      terms_.clear();
    } else {
      for (auto& [p, c] : terms_) c *= s;
    }
    return *this;
  }
  friend PathElement operator+(PathElement a, const PathElement& b) { return a += b; }
  friend PathElement operator-(PathElement a, const PathElement& b) { return a -= b; }
  friend PathElement operator*(PathElement a, const Rational& s) { return a *= s; }
  friend PathElement operator*(const Rational& s, PathElement a) { return a *= s; }

  friend bool operator==(const PathElement& a, const PathElement& b) {
    return same_layout(*a.q_, *b.q_) && a.terms_ == b.terms_;
  }

  std::optional<std::size_t> min_degree() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.begin()->first.length();
  }

  std::size_t max_degree() const { return terms_.empty() ? 0 : terms_.rbegin()->first.length(); }

  PathElement degree_part(std::size_t d) const {
    PathElement r(q_, n_);
    for (const auto& [p, c] : terms_)
      if (p.length() == d) r.terms_.emplace(p, c);
    return r;
  }

  PathElement with_truncation(std::size_t n) const {
    PathElement r(q_, n);
    for (const auto& [p, c] : terms_) r.add(p, c);
    return r;
  }

  // Head and tail vertices shared by all terms, if they agree.
  std::optional<std::pair<std::size_t, std::size_t>> endpoints() const {
    std::optional<std::pair<std::size_t, std::size_t>> ends;
    for (const auto& [p, c] : terms_) {
      std::pair<std::size_t, std::size_t> e{path_head(*q_, p), path_tail(*q_, p)};
      if (ends && *ends != e) return std::nullopt;
      ends = e;
    }
    return ends;
  }

  void check_compatible(const PathElement& o) const {
    if (!same_layout(*q_, *o.q_)) throw std::invalid_argument("path elements live on different quivers");
    if (n_ != o.n_) throw std::invalid_argument("path elements have different truncation degrees");
  }

 private:
  QuiverPtr q_;
  std::size_t n_;
  std::map<Path, Rational> terms_;
};

inline PathElement multiply(const PathElement& u, const PathElement& v) {
  u.check_compatible(v);
  const Quiver& q = u.quiver();
  PathElement r(u.quiver_ptr(), u.truncation());
  for (const auto& [p1, c1] : u.terms()) {
    std::size_t t = path_tail(q, p1);
    for (const auto& [p2, c2] : v.terms()) {
      if (p1.length() + p2.length() > u.truncation()) break;  // terms sorted by length
      if (path_head(q, p2) != t) continue;
      if (p1.arrows.empty()) {
        r.add(p2, c1 * c2);
      } else if (p2.arrows.empty()) {
        r.add(p1, c1 * c2);
      } else {
        std::vector<std::size_t> arr = p1.arrows;
        arr.insert(arr.end(), p2.arrows.begin(), p2.arrows.end());
        r.add(Path::of(std::move(arr)), c1 * c2);
      }
    }
  }
  return r;
}

inline PathElement operator*(const PathElement& u, const PathElement& v) { return multiply(u, v); }

inline std::string to_text(const PathElement& e) {
  if (e.is_zero()) return "0\n";
  std::ostringstream os;
  for (const auto& [p, c] : e.terms()) os << c.get_str() << " * " << path_to_string(e.quiver(), p) << '\n';
  return os.str();
}

// One term per line: "<rational> * <arrow> <arrow> ..." or "<rational> * e(<vertex>)".
inline PathElement parse_path_element(const QuiverPtr& q, std::size_t n, const std::string& text) {
  PathElement e(q, n);
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t == "0") continue;
    std::size_t star = t.find(" * ");
    if (star == std::string::npos) throw std::invalid_argument("expected '<rational> * <path>': " + t);
    Rational c = parse_rational(t.substr(0, star));
    auto words = split_ws(t.substr(star + 3));
    if (words.size() == 1 && words[0].rfind("e(", 0) == 0 && words[0].back() == ')') {
      e.add(Path::trivial(q->vertex(words[0].substr(2, words[0].size() - 3))), c);
      continue;
    }
    std::vector<std::size_t> arr;
    for (const auto& w : words) arr.push_back(q->arrow_index(w));
    if (arr.empty()) throw std::invalid_argument("empty path: " + t);
    if (arr.size() > n) throw std::invalid_argument("term longer than truncation degree: " + t);
    e.add(Path::of(std::move(arr)), c);
  }
  return e;
}

// ---------------------------------------------------------------------------
// Potentials

inline std::vector<std::string> id_sequence(const Quiver& q, const std::vector<std::size_t>& arrows) {
  std::vector<std::string> ids;
  ids.reserve(arrows.size());
  for (auto a : arrows) ids.push_back(q.arrow(a).id);
  return ids;
}

inline std::vector<std::size_t> rotate_cycle(const std::vector<std::size_t>& c, std::size_t k) {
  std::vector<std::size_t> r(c.begin() + static_cast<std::ptrdiff_t>(k), c.end());
  r.insert(r.end(), c.begin(), c.begin() + static_cast<std::ptrdiff_t>(k));
  return r;
}

inline bool is_cycle(const Quiver& q, const std::vector<std::size_t>& arrows) {
  return !arrows.empty() && is_composable(q, arrows) && q.arrow(arrows.front()).head == q.arrow(arrows.back()).tail;
}

// Least rotation by arrow-id sequence.
inline std::vector<std::size_t> cyclic_normal_form(const Quiver& q, const std::vector<std::size_t>& c) {
  std::vector<std::size_t> best = c;
  auto best_ids = id_sequence(q, c);
  for (std::size_t k = 1; k < c.size(); ++k) {
    auto r = rotate_cycle(c, k);
    auto ids = id_sequence(q, r);
    if (ids < best_ids) {
      best = std::move(r);
      best_ids = std::move(ids);
    }
  }
  return best;
}

class Potential {
 public:
  Potential(QuiverPtr q, std::size_t truncation) : e_(std::move(q), truncation) {}

  explicit Potential(const PathElement& e) : e_(e.quiver_ptr(), e.truncation()) {
    for (const auto& [p, c] : e.terms()) {
      if (!is_cycle(e.quiver(), p.arrows))
        throw std::invalid_argument("potential term is not a cycle of positive length: " +
                                    path_to_string(e.quiver(), p));
      e_.add(Path::of(cyclic_normal_form(e.quiver(), p.arrows)), c);
    }
  }

  const PathElement& element() const { return e_; }
  const Quiver& quiver() const { return e_.quiver(); }
  const QuiverPtr& quiver_ptr() const { return e_.quiver_ptr(); }
  std::size_t truncation() const { return e_.truncation(); }
  const std::map<Path, Rational>& terms() const { return e_.terms(); }
  bool is_zero() const { return e_.is_zero(); }

  Potential& operator+=(const Potential& o) {
    e_ += o.e_;
    return *this;
  }
  friend Potential operator+(Potential a, const Potential& b) { return a += b; }
  friend Potential operator-(Potential a, const Potential& b) {
    a.e_ -= b.e_;
    return a;
  }

  // Terms sorted by degree, then by arrow-id sequence; used for printing.
  std::vector<std::pair<Path, Rational>> sorted_terms() const {
    std::vector<std::pair<Path, Rational>> v(terms().begin(), terms().end());
    std::sort(v.begin(), v.end(), [&](const auto& x, const auto& y) {
      if (x.first.length() != y.first.length()) return x.first.length() < y.first.length();
      return id_sequence(quiver(), x.first.arrows) < id_sequence(quiver(), y.first.arrows);
    });
    return v;
  }

 private:
  PathElement e_;
};

inline bool cyclically_equivalent(const Potential& a, const Potential& b) {
  if (!same_layout(a.quiver(), b.quiver())) throw std::invalid_argument("potentials live on different quivers");
  return a.terms() == b.terms();
}

inline std::string to_text(const Potential& s) {
  if (s.is_zero()) return "0\n";
  std::ostringstream os;
  for (const auto& [p, c] : s.sorted_terms()) os << c.get_str() << " * " << path_to_string(s.quiver(), p) << '\n';
  return os.str();
}

inline Potential parse_potential(const QuiverPtr& q, std::size_t n, const std::string& text) {
  return Potential(parse_path_element(q, n, text));
}

inline PathElement cyclic_derivative(const Potential& s, std::size_t a) {
  const Quiver& q = s.quiver();
  if (a >= q.num_arrows()) throw std::invalid_argument("unknown arrow index");
  PathElement d(s.quiver_ptr(), s.truncation());
  for (const auto& [p, c] : s.terms()) {
    const auto& w = p.arrows;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] != a) continue;
      if (w.size() == 1) {
        d.add(Path::trivial(q.arrow(a).tail), c);
        continue;
      }
      std::vector<std::size_t> rest(w.begin() + static_cast<std::ptrdiff_t>(i) + 1, w.end());
      rest.insert(rest.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
      d.add(Path::of(std::move(rest)), c);
    }
  }
  return d;
}

inline PathElement cyclic_derivative(const Potential& s, const std::string& a) {
  return cyclic_derivative(s, s.quiver().arrow_index(a));
}

// ---------------------------------------------------------------------------
// Substitutions: algebra maps fixing idempotents, given on arrows.

class Substitution {
 public:
  Substitution(QuiverPtr source, QuiverPtr target, std::size_t truncation)
      : src_(std::move(source)), dst_(std::move(target)), n_(truncation) {
    for (const auto& v : src_->vertices()) vmap_.push_back(dst_->vertex(v));
    for (std::size_t a = 0; a < src_->num_arrows(); ++a) images_.emplace_back(dst_, n_);
  }

  // Arrows sharing an id map to each other; the rest map to zero.
  static Substitution by_id(QuiverPtr source, QuiverPtr target, std::size_t truncation) {
    Substitution s(std::move(source), std::move(target), truncation);
    for (std::size_t a = 0; a < s.src_->num_arrows(); ++a) {
      const std::string& id = s.src_->arrow(a).id;
      if (s.dst_->has_arrow(id)) s.set(a, PathElement::arrow(s.dst_, truncation, s.dst_->arrow_index(id)));
    }
    return s;
  }

  static Substitution identity(QuiverPtr q, std::size_t truncation) { return by_id(q, q, truncation); }

  void set(std::size_t a, PathElement image) {
    if (image.truncation() != n_) image = image.with_truncation(n_);
    if (!same_layout(image.quiver(), *dst_)) throw std::invalid_argument("substitution image on wrong quiver");
    if (!image.is_zero()) {
      auto ends = image.endpoints();
      const Arrow& ar = src_->arrow(a);
      if (!ends || ends->first != vmap_[ar.head] || ends->second != vmap_[ar.tail])
        throw std::invalid_argument("substitution image of '" + ar.id + "' has wrong endpoints");
    }
    images_[a] = std::move(image);
  }

  void set(const std::string& a, PathElement image) { set(src_->arrow_index(a), std::move(image)); }

  const PathElement& image(std::size_t a) const { return images_.at(a); }
  const QuiverPtr& source() const { return src_; }
  const QuiverPtr& target() const { return dst_; }
  std::size_t truncation() const { return n_; }
  std::size_t map_vertex(std::size_t v) const { return vmap_.at(v); }

 private:
  QuiverPtr src_, dst_;
  std::size_t n_;
  std::vector<std::size_t> vmap_;
  std::vector<PathElement> images_;
};

inline PathElement substitute(const Substitution& phi, const PathElement& u) {
  if (!same_layout(u.quiver(), *phi.source())) throw std::invalid_argument("substitution applied on wrong quiver");
  PathElement r(phi.target(), phi.truncation());
  for (const auto& [p, c] : u.terms()) {
    if (p.arrows.empty()) {
      r.add(Path::trivial(phi.map_vertex(p.vertex)), c);
      continue;
    }
    PathElement acc = phi.image(p.arrows.front());
    for (std::size_t k = 1; k < p.arrows.size() && !acc.is_zero(); ++k) acc = acc * phi.image(p.arrows[k]);
    acc *= c;
    r += acc;
  }
  return r;
}

inline Potential substitute(const Substitution& phi, const Potential& s) { return Potential(substitute(phi, s.element())); }

// a -> psi(phi(a))
inline Substitution compose(const Substitution& psi, const Substitution& phi) {
  Substitution r(phi.source(), psi.target(), psi.truncation());
  for (std::size_t a = 0; a < phi.source()->num_arrows(); ++a) r.set(a, substitute(psi, phi.image(a)));
  return r;
}

// ---------------------------------------------------------------------------
// Splitting off the trivial part when the quadratic terms are disjoint
// 2-cycles.

struct Reduction {
  QuiverPtr reduced_quiver;
  Potential reduced_potential;
  Potential trivial_part;          // on the input quiver
  Substitution phi;                // input quiver -> input quiver
  std::vector<std::size_t> deleted;
  std::vector<std::size_t> kept;   // input index of each reduced arrow
};

namespace detail {

struct QuadraticTerm {
  std::size_t u, v;  // written u v
  Rational c;
};

inline bool contains_arrow(const Path& p, std::size_t a) {
  return std::find(p.arrows.begin(), p.arrows.end(), a) != p.arrows.end();
}

}  // namespace detail

inline Reduction split_reduce(const Potential& s) {
  const QuiverPtr& qp = s.quiver_ptr();
  const Quiver& q = *qp;
  const std::size_t n = s.truncation();

  std::vector<detail::QuadraticTerm> quad;
  std::vector<int> owner(q.num_arrows(), -1);
  for (const auto& [p, c] : s.terms()) {
    if (p.length() == 1) throw std::invalid_argument("general splitting required (potential has a loop term)");
    if (p.length() != 2) continue;
    std::size_t u = p.arrows[0], v = p.arrows[1];
    if (u == v || owner[u] >= 0 || owner[v] >= 0) throw std::invalid_argument("general splitting required");
    owner[u] = owner[v] = static_cast<int>(quad.size());
    quad.push_back({u, v, c});
  }

  Substitution phi = Substitution::identity(qp, n);
  PathElement cur = s.element();
  auto is_quad = [&](const Path& p, const detail::QuadraticTerm& t) {
    return p.length() == 2 && ((p.arrows[0] == t.u && p.arrows[1] == t.v) || (p.arrows[0] == t.v && p.arrows[1] == t.u));
  };
  auto apply = [&](std::size_t arrow, const PathElement& replacement) {
    Substitution step = Substitution::identity(qp, n);
    step.set(arrow, replacement);
    cur = Potential(substitute(step, cur)).element();
    Substitution next(qp, qp, n);
    for (std::size_t a = 0; a < q.num_arrows(); ++a) next.set(a, substitute(step, phi.image(a)));
    phi = std::move(next);
  };

  // Each pass pushes every offending term up by at least one degree.
  const std::size_t max_rounds = 2 * (n + 2);
  std::size_t round = 0;
  for (;; ++round) {
    if (round > max_rounds) throw std::runtime_error("splitting did not converge within the truncation degree");
    bool changed = false;
    for (const auto& t : quad) {
      PathElement a(qp, n);  // terms u w contribute w
      for (const auto& [p, c] : cur.terms()) {
        if (is_quad(p, t) || !detail::contains_arrow(p, t.u)) continue;
        std::size_t k = std::find(p.arrows.begin(), p.arrows.end(), t.u) - p.arrows.begin();
        auto r = rotate_cycle(p.arrows, k);
        a.add(Path::of(std::vector<std::size_t>(r.begin() + 1, r.end())), c);
      }
      if (!a.is_zero()) {
        apply(t.v, PathElement::arrow(qp, n, t.v) - a * Rational(1 / t.c));
        changed = true;
      }
      PathElement b(qp, n);  // terms w v contribute w
      for (const auto& [p, c] : cur.terms()) {
        if (is_quad(p, t) || !detail::contains_arrow(p, t.v)) continue;
        std::size_t k = std::find(p.arrows.begin(), p.arrows.end(), t.v) - p.arrows.begin();
        auto r = rotate_cycle(p.arrows, (k + 1) % p.arrows.size());
        b.add(Path::of(std::vector<std::size_t>(r.begin(), r.end() - 1)), c);
      }
      if (!b.is_zero()) {
        apply(t.u, PathElement::arrow(qp, n, t.u) - b * Rational(1 / t.c));
        changed = true;
      }
    }
    if (!changed) break;
  }

  std::vector<bool> drop(q.num_arrows(), false);
  for (const auto& t : quad) drop[t.u] = drop[t.v] = true;
  Reduction red{share(remove_arrows(q, drop)), Potential(qp, n), Potential(qp, n), phi, {}, {}};
  for (std::size_t a = 0; a < q.num_arrows(); ++a) (drop[a] ? red.deleted : red.kept).push_back(a);

  PathElement triv(qp, n), rest(red.reduced_quiver, n);
  std::vector<std::size_t> new_index(q.num_arrows(), 0);
  for (std::size_t k = 0; k < red.kept.size(); ++k) new_index[red.kept[k]] = k;
  for (const auto& [p, c] : cur.terms()) {
    bool quadratic = owner[p.arrows[0]] >= 0 && p.length() == 2 && is_quad(p, quad[owner[p.arrows[0]]]);
    if (quadratic) {
      triv.add(p, c);
      continue;
    }
    std::vector<std::size_t> arr;
    for (auto a : p.arrows) {
      if (drop[a]) throw std::logic_error("reduced potential still involves a deleted arrow");
      arr.push_back(new_index[a]);
    }
    rest.add(Path::of(std::move(arr)), c);
  }
  red.trivial_part = Potential(triv);
  red.reduced_potential = Potential(rest);
  return red;
}

}  // namespace qpsurf
