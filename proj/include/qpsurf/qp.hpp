#pragma once

#include <qpsurf/jacobian.hpp>
#include <qpsurf/pathalg.hpp>
#include <qpsurf/quiver.hpp>

#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace qpsurf {

inline constexpr std::size_t kDefaultTruncation = 16;

struct QP {
  QuiverPtr quiver;
  Potential potential;

  QP(QuiverPtr q, Potential s) : quiver(std::move(q)), potential(std::move(s)) {
    if (!same_layout(*quiver, potential.quiver())) throw std::invalid_argument("potential lives on a different quiver");
  }

  static QP zero(Quiver q, std::size_t truncation = kDefaultTruncation) {
    QuiverPtr p = share(std::move(q));
    return QP(p, Potential(p, truncation));
  }

  const Quiver& q() const { return *quiver; }
  std::size_t truncation() const { return potential.truncation(); }
};

// Potential [S] on the premutated quiver: each term is rotated so it does
// not begin at j, then every j-hook inside it becomes a composite arrow.
inline Potential bracket_potential(const QP& p, std::size_t j, const QuiverPtr& premutated) {
  const Quiver& q = p.q();
  const Quiver& pq = *premutated;
  PathElement out(premutated, p.truncation());
  for (const auto& [path, c] : p.potential.terms()) {
    const auto& w = path.arrows;
    std::size_t start = w.size();
    for (std::size_t k = 0; k < w.size(); ++k)
      if (q.arrow(w[k]).head != j) {
        start = k;
        break;
      }
    if (start == w.size()) throw std::invalid_argument("potential term lies entirely at vertex " + q.vertex_id(j));
    auto r = rotate_cycle(w, start);
    std::vector<std::size_t> nw;
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (k + 1 < r.size() && q.arrow(r[k]).tail == j) {
        nw.push_back(pq.arrow_index(composite_id(q.arrow(r[k]).id, q.arrow(r[k + 1]).id)));
        ++k;
      } else {
        if (q.arrow(r[k]).tail == j || q.arrow(r[k]).head == j)
          throw std::logic_error("unpaired arrow at j in potential term");
        nw.push_back(pq.arrow_index(q.arrow(r[k]).id));
      }
    }
    out.add(Path::of(std::move(nw)), c);
  }
  return Potential(out);
}

inline QP premutate_qp(const QP& p, std::size_t j) {
  QuiverPtr pq = share(premutate_quiver(p.q(), j));
  Potential s = bracket_potential(p, j, pq);
  PathElement delta(pq, p.truncation());
  for (const Hook& h : hooks(p.q(), j)) {
    const std::string& a = p.q().arrow(h.outer).id;
    const std::string& b = p.q().arrow(h.inner).id;
    delta.add(Path::of({pq->arrow_index(star_id(b)), pq->arrow_index(star_id(a)), pq->arrow_index(composite_id(a, b))}),
              1);
  }
  return QP(pq, s + Potential(delta));
}

inline QP premutate_qp(const QP& p, const std::string& j) { return premutate_qp(p, p.q().vertex(j)); }

struct QPMutation {
  QP premutated;
  Reduction reduction;
  QP result;
};

inline QPMutation mutate_qp_detailed(const QP& p, std::size_t j) {
  QP pre = premutate_qp(p, j);
  Reduction red = split_reduce(pre.potential);
  QP res(red.reduced_quiver, red.reduced_potential);
  return {pre, red, res};
}

inline QP mutate_qp(const QP& p, std::size_t j) { return mutate_qp_detailed(p, j).result; }
inline QP mutate_qp(const QP& p, const std::string& j) { return mutate_qp(p, p.q().vertex(j)); }

inline QP restrict_qp(const QP& p, const std::vector<std::string>& keep) {
  QuiverPtr rq = share(restrict_quiver(p.q(), keep));
  Substitution rho = Substitution::by_id(p.quiver, rq, p.truncation());
  return QP(rq, substitute(rho, p.potential));
}

inline QP direct_sum_qp(const QP& a, const QP& b) {
  if (a.q().vertices() != b.q().vertices()) throw std::invalid_argument("direct sum needs identical vertex lists");
  Quiver q;
  for (const auto& v : a.q().vertices()) q.add_vertex(v);
  for (const auto& ar : a.q().arrows()) q.add_arrow(ar.id, ar.tail, ar.head);
  for (const auto& ar : b.q().arrows()) {
    if (q.has_arrow(ar.id)) throw std::invalid_argument("arrow id clash in direct sum: '" + ar.id + "'");
    q.add_arrow(ar.id, ar.tail, ar.head);
  }
  QuiverPtr qp = share(std::move(q));
  std::size_t n = std::max(a.truncation(), b.truncation());
  Potential s(substitute(Substitution::by_id(a.quiver, qp, n), a.potential.element().with_truncation(n)));
  Potential t(substitute(Substitution::by_id(b.quiver, qp, n), b.potential.element().with_truncation(n)));
  return QP(qp, s + t);
}

struct RigidityReport {
  bool rigid = true;
  std::size_t bound = 0;
  std::size_t truncation = 0;
  std::size_t cycles_checked = 0;
  std::optional<Path> failing_cycle;
};

// Every cycle of length <= bound lies in J(S) + [A, A], both truncated at
// the QP's truncation degree.
inline RigidityReport is_rigid_truncated(const QP& p, std::size_t bound) {
  RigidityReport rep;
  rep.bound = std::min(bound, p.truncation());
  rep.truncation = p.truncation();
  TruncatedJacobianIdeal ideal(p.potential);
  for (const Path& c : ideal.cycles_up_to(rep.bound)) {
    ++rep.cycles_checked;
    PathElement e(p.quiver, p.truncation());
    e.add(c, 1);
    if (!ideal.contains_modulo_commutators(e)) {
      rep.rigid = false;
      rep.failing_cycle = c;
      break;
    }
  }
  return rep;
}

inline std::string to_text(const QP& p) {
  std::ostringstream os;
  os << to_text(p.q());
  os << "potential:\n" << to_text(p.potential);
  return os.str();
}

// QP file: quiver lines, then "potential:" followed by term lines.
inline QP parse_qp(const std::string& text, std::size_t truncation = kDefaultTruncation) {
  std::size_t at = text.find("potential:");
  std::string quiver_part = at == std::string::npos ? text : text.substr(0, at);
  QuiverPtr q = share(parse_quiver(quiver_part));
  if (at == std::string::npos) return QP(q, Potential(q, truncation));
  return QP(q, parse_potential(q, truncation, text.substr(at + 10)));
}

}  // namespace qpsurf
