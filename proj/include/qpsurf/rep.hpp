#pragma once

#include <qpsurf/matrix.hpp>
#include <qpsurf/qp.hpp>

#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace qpsurf {

class DecoratedRep {
 public:
  DecoratedRep(QP qp, std::vector<std::size_t> dims, std::vector<Matrix> maps, std::vector<std::size_t> dec)
      : qp_(std::move(qp)), dims_(std::move(dims)), maps_(std::move(maps)), dec_(std::move(dec)) {
    const Quiver& q = qp_.q();
    if (dims_.size() != q.num_vertices() || dec_.size() != q.num_vertices())
      throw std::invalid_argument("representation needs one dimension per vertex");
    if (maps_.size() != q.num_arrows()) throw std::invalid_argument("representation needs one matrix per arrow");
    for (std::size_t a = 0; a < q.num_arrows(); ++a) {
      const Arrow& ar = q.arrow(a);
      if (maps_[a].rows() != dims_[ar.head] || maps_[a].cols() != dims_[ar.tail])
        throw std::invalid_argument("matrix of arrow '" + ar.id + "' has shape " + maps_[a].shape() + ", expected " +
                                    std::to_string(dims_[ar.head]) + "x" + std::to_string(dims_[ar.tail]));
    }
  }

  static DecoratedRep zero(const QP& qp) {
    const Quiver& q = qp.q();
    std::vector<Matrix> maps;
    for (std::size_t a = 0; a < q.num_arrows(); ++a) maps.emplace_back(0, 0);
    return DecoratedRep(qp, std::vector<std::size_t>(q.num_vertices(), 0), std::move(maps),
                        std::vector<std::size_t>(q.num_vertices(), 0));
  }

  const QP& qp() const { return qp_; }
  const Quiver& quiver() const { return qp_.q(); }
  std::size_t dim(std::size_t v) const { return dims_.at(v); }
  std::size_t dim(const std::string& v) const { return dims_.at(quiver().vertex(v)); }
  std::size_t dec(std::size_t v) const { return dec_.at(v); }
  std::size_t dec(const std::string& v) const { return dec_.at(quiver().vertex(v)); }
  const Matrix& map(std::size_t a) const { return maps_.at(a); }
  const Matrix& map(const std::string& a) const { return maps_.at(quiver().arrow_index(a)); }
  const std::vector<std::size_t>& dims() const { return dims_; }
  const std::vector<std::size_t>& decs() const { return dec_; }
  const std::vector<Matrix>& maps() const { return maps_; }

  std::size_t total_dim() const { return std::accumulate(dims_.begin(), dims_.end(), std::size_t{0}); }

  std::vector<std::size_t> offsets() const {
    std::vector<std::size_t> off(dims_.size(), 0);
    for (std::size_t v = 1; v < dims_.size(); ++v) off[v] = off[v - 1] + dims_[v - 1];
    return off;
  }

 private:
  QP qp_;
  std::vector<std::size_t> dims_;
  std::vector<Matrix> maps_;
  std::vector<std::size_t> dec_;
};

// Action of the homogeneous part of u from M_tail to M_head.
inline Matrix act_between(const PathElement& u, const DecoratedRep& r, std::size_t tail, std::size_t head) {
  const Quiver& q = r.quiver();
  if (!same_layout(u.quiver(), q)) throw std::invalid_argument("element lives on a different quiver");
  Matrix out(r.dim(head), r.dim(tail));
  for (const auto& [p, c] : u.terms()) {
    if (path_head(q, p) != head || path_tail(q, p) != tail) continue;
    if (p.arrows.empty()) {
      out += Matrix::identity(r.dim(head)) * c;
      continue;
    }
    Matrix m = r.map(p.arrows.back());
    for (std::size_t k = p.arrows.size() - 1; k-- > 0;) m = r.map(p.arrows[k]) * m;
    out += m * c;
  }
  return out;
}

// Action on the total space, vertices stacked in vertex order.
inline Matrix act(const PathElement& u, const DecoratedRep& r) {
  const Quiver& q = r.quiver();
  auto off = r.offsets();
  Matrix out(r.total_dim(), r.total_dim());
  for (std::size_t h = 0; h < q.num_vertices(); ++h)
    for (std::size_t t = 0; t < q.num_vertices(); ++t) {
      Matrix b = act_between(u, r, t, h);
      if (!b.empty()) out.set_block(off[h], off[t], out.block(off[h], off[t], b.rows(), b.cols()) + b);
    }
  return out;
}

// Arrows a whose cyclic derivative does not act as zero.
inline std::vector<std::string> relation_violations(const DecoratedRep& r) {
  std::vector<std::string> bad;
  const Quiver& q = r.quiver();
  for (std::size_t a = 0; a < q.num_arrows(); ++a) {
    PathElement d = cyclic_derivative(r.qp().potential, a);
    if (!act_between(d, r, q.arrow(a).head, q.arrow(a).tail).is_zero()) bad.push_back(q.arrow(a).id);
  }
  return bad;
}

inline bool check_relations(const DecoratedRep& r) { return relation_violations(r).empty(); }

// Smallest r such that every path of length r acts as zero.
inline std::optional<std::size_t> check_nilpotent(const DecoratedRep& r) {
  const Quiver& q = r.quiver();
  std::vector<Matrix> span(q.num_vertices());
  for (std::size_t v = 0; v < q.num_vertices(); ++v) span[v] = Matrix::identity(r.dim(v));
  std::size_t limit = 1 + r.total_dim();
  for (std::size_t len = 1; len <= limit; ++len) {
    std::vector<std::vector<Matrix>> parts(q.num_vertices());
    for (std::size_t a = 0; a < q.num_arrows(); ++a) {
      const Arrow& ar = q.arrow(a);
      if (span[ar.tail].cols() == 0) continue;
      parts[ar.head].push_back(r.map(a) * span[ar.tail]);
    }
    bool zero = true;
    for (std::size_t v = 0; v < q.num_vertices(); ++v) {
      span[v] = parts[v].empty() ? Matrix(r.dim(v), 0) : column_space_basis(hstack(parts[v], r.dim(v)));
      if (span[v].cols() > 0) zero = false;
    }
    if (zero) return len;
  }
  return std::nullopt;
}

namespace detail {

// Least subspace system containing `seed` and closed under the arrows
// (paths of length >= 0 applied to seed).
inline std::vector<Matrix> forward_closure(const DecoratedRep& r, std::vector<Matrix> span) {
  const Quiver& q = r.quiver();
  for (bool grew = true; grew;) {
    grew = false;
    for (std::size_t a = 0; a < q.num_arrows(); ++a) {
      const Arrow& ar = q.arrow(a);
      if (span[ar.tail].cols() == 0) continue;
      Matrix img = r.map(a) * span[ar.tail];
      Matrix both = column_space_basis(hstack({span[ar.head], img}, r.dim(ar.head)));
      if (both.cols() > span[ar.head].cols()) {
        span[ar.head] = both;
        grew = true;
      }
    }
  }
  return span;
}

inline std::vector<bool> vertex_mask(const Quiver& q, const std::vector<std::string>& keep) {
  std::vector<bool> in(q.num_vertices(), false);
  for (const auto& v : keep) in[q.vertex(v)] = true;
  return in;
}

}  // namespace detail

// Paths that pass through a vertex outside I act as zero between I-vertices.
inline bool is_path_restrictable(const DecoratedRep& r, const std::vector<std::string>& keep) {
  if (!check_nilpotent(r)) throw std::invalid_argument("representation is not nilpotent");
  const Quiver& q = r.quiver();
  auto in = detail::vertex_mask(q, keep);
  // Images of paths of length >= 1 that start in I.
  std::vector<Matrix> start(q.num_vertices());
  for (std::size_t v = 0; v < q.num_vertices(); ++v) start[v] = Matrix(r.dim(v), 0);
  for (std::size_t a = 0; a < q.num_arrows(); ++a) {
    const Arrow& ar = q.arrow(a);
    if (!in[ar.tail] || r.dim(ar.tail) == 0) continue;
    start[ar.head] = column_space_basis(hstack({start[ar.head], r.map(a)}, r.dim(ar.head)));
  }
  std::vector<Matrix> reach = detail::forward_closure(r, start);
  for (std::size_t k = 0; k < q.num_vertices(); ++k) {
    if (in[k] || reach[k].cols() == 0) continue;
    std::vector<Matrix> seed(q.num_vertices());
    for (std::size_t v = 0; v < q.num_vertices(); ++v) seed[v] = Matrix(r.dim(v), 0);
    for (std::size_t a = 0; a < q.num_arrows(); ++a) {
      const Arrow& ar = q.arrow(a);
      if (ar.tail != k) continue;
      seed[ar.head] = column_space_basis(hstack({seed[ar.head], r.map(a) * reach[k]}, r.dim(ar.head)));
    }
    auto out = detail::forward_closure(r, seed);
    for (std::size_t i = 0; i < q.num_vertices(); ++i)
      if (in[i] && out[i].cols() > 0) return false;
  }
  return true;
}

inline DecoratedRep restrict_rep(const DecoratedRep& r, const std::vector<std::string>& keep) {
  if (!is_path_restrictable(r, keep)) throw std::invalid_argument("representation is not path-restrictable to I");
  QP rq = restrict_qp(r.qp(), keep);
  auto in = detail::vertex_mask(r.quiver(), keep);
  std::vector<std::size_t> dims(r.dims().size(), 0);
  for (std::size_t v = 0; v < dims.size(); ++v)
    if (in[v]) dims[v] = r.dim(v);
  std::vector<Matrix> maps;
  for (const auto& ar : rq.q().arrows()) maps.push_back(r.map(ar.id));
  return DecoratedRep(rq, dims, maps, r.decs());
}

inline DecoratedRep direct_sum(const DecoratedRep& a, const DecoratedRep& b) {
  if (!same_layout(a.quiver(), b.quiver())) throw std::invalid_argument("direct sum of representations of different QPs");
  std::vector<std::size_t> dims, dec;
  for (std::size_t v = 0; v < a.dims().size(); ++v) {
    dims.push_back(a.dim(v) + b.dim(v));
    dec.push_back(a.dec(v) + b.dec(v));
  }
  std::vector<Matrix> maps;
  for (std::size_t k = 0; k < a.maps().size(); ++k) maps.push_back(block_diagonal(a.map(k), b.map(k)));
  return DecoratedRep(a.qp(), dims, maps, dec);
}

inline DecoratedRep negative_simple(const QP& qp, std::size_t i) {
  DecoratedRep z = DecoratedRep::zero(qp);
  std::vector<std::size_t> dec(qp.q().num_vertices(), 0);
  dec.at(i) = 1;
  return DecoratedRep(qp, z.dims(), z.maps(), dec);
}

inline DecoratedRep negative_simple(const QP& qp, const std::string& i) { return negative_simple(qp, qp.q().vertex(i)); }

// ---------------------------------------------------------------------------
// Isomorphism testing through the intertwiner space.

enum class IsoVerdict { isomorphic, not_isomorphic, undetermined };

inline const char* to_string(IsoVerdict v) {
  switch (v) {
    case IsoVerdict::isomorphic: return "isomorphic";
    case IsoVerdict::not_isomorphic: return "not isomorphic";
    case IsoVerdict::undetermined: return "undetermined";
  }
  return "?";
}

struct IsoResult {
  IsoVerdict verdict = IsoVerdict::undetermined;
  std::string reason;
  std::size_t hom_dim = 0;
  std::vector<std::vector<Matrix>> hom_basis;  // per basis element, one matrix per vertex
  std::vector<Matrix> witness;                 // an invertible intertwiner when found

  explicit operator bool() const { return verdict == IsoVerdict::isomorphic; }
};

inline constexpr std::uint64_t kDefaultIsoSeed = 0x5EED;

// Basis of {(psi_v) : psi_h(a) M_a = M'_a psi_t(a)}.
inline std::vector<std::vector<Matrix>> hom_space(const DecoratedRep& r1, const DecoratedRep& r2) {
  const Quiver& q = r1.quiver();
  std::vector<std::size_t> off(q.num_vertices() + 1, 0);
  for (std::size_t v = 0; v < q.num_vertices(); ++v) off[v + 1] = off[v] + r2.dim(v) * r1.dim(v);
  std::size_t nvars = off.back();
  auto var = [&](std::size_t v, std::size_t i, std::size_t k) { return off[v] + i * r1.dim(v) + k; };
  std::size_t neq = 0;
  for (const auto& ar : q.arrows()) neq += r2.dim(ar.head) * r1.dim(ar.tail);
  Matrix sys(neq, nvars);
  std::size_t row = 0;
  for (std::size_t a = 0; a < q.num_arrows(); ++a) {
    const Arrow& ar = q.arrow(a);
    const Matrix& m1 = r1.map(a);
    const Matrix& m2 = r2.map(a);
    // entry (i, k) of psi_h M1 - M2 psi_t
    for (std::size_t i = 0; i < r2.dim(ar.head); ++i)
      for (std::size_t k = 0; k < r1.dim(ar.tail); ++k, ++row) {
        for (std::size_t l = 0; l < r1.dim(ar.head); ++l)
          if (m1(l, k) != 0) sys(row, var(ar.head, i, l)) += m1(l, k);
        for (std::size_t l = 0; l < r2.dim(ar.tail); ++l)
          if (m2(i, l) != 0) sys(row, var(ar.tail, l, k)) -= m2(i, l);
      }
  }
  Matrix ker = kernel_basis(sys);
  std::vector<std::vector<Matrix>> basis;
  for (std::size_t c = 0; c < ker.cols(); ++c) {
    std::vector<Matrix> psi;
    for (std::size_t v = 0; v < q.num_vertices(); ++v) {
      Matrix m(r2.dim(v), r1.dim(v));
      for (std::size_t i = 0; i < r2.dim(v); ++i)
        for (std::size_t k = 0; k < r1.dim(v); ++k) m(i, k) = ker(var(v, i, k), c);
      psi.push_back(std::move(m));
    }
    basis.push_back(std::move(psi));
  }
  return basis;
}

inline IsoResult is_isomorphic(const DecoratedRep& r1, const DecoratedRep& r2, std::uint64_t seed = kDefaultIsoSeed) {
  if (!same_layout(r1.quiver(), r2.quiver())) throw std::invalid_argument("isomorphism test across different quivers");
  const Quiver& q = r1.quiver();
  IsoResult res;
  for (std::size_t v = 0; v < q.num_vertices(); ++v) {
    if (r1.dim(v) != r2.dim(v) || r1.dec(v) != r2.dec(v)) {
      res.verdict = IsoVerdict::not_isomorphic;
      res.reason = "dimension or decoration differs at vertex " + q.vertex_id(v);
      return res;
    }
  }
  res.hom_basis = hom_space(r1, r2);
  res.hom_dim = res.hom_basis.size();
  auto invertible_everywhere = [&](const std::vector<Matrix>& psi) {
    for (const auto& m : psi)
      if (!is_invertible(m)) return false;
    return true;
  };
  if (r1.total_dim() == 0) {
    res.verdict = IsoVerdict::isomorphic;
    res.reason = "both module parts are zero";
    for (std::size_t v = 0; v < q.num_vertices(); ++v) res.witness.emplace_back(0, 0);
    return res;
  }
  if (res.hom_basis.empty()) {
    res.verdict = IsoVerdict::not_isomorphic;
    res.reason = "no nonzero homomorphisms";
    return res;
  }
  for (const auto& psi : res.hom_basis)
    if (invertible_everywhere(psi)) {
      res.verdict = IsoVerdict::isomorphic;
      res.reason = "basis element is invertible";
      res.witness = psi;
      return res;
    }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coef(-7, 7);
  for (int trial = 0; trial < 64; ++trial) {
    std::vector<Matrix> psi;
    for (std::size_t v = 0; v < q.num_vertices(); ++v) psi.emplace_back(r2.dim(v), r1.dim(v));
    for (const auto& b : res.hom_basis) {
      Rational c = coef(rng);
      for (std::size_t v = 0; v < q.num_vertices(); ++v) psi[v] += b[v] * c;
    }
    if (invertible_everywhere(psi)) {
      res.verdict = IsoVerdict::isomorphic;
      res.reason = "random combination is invertible";
      res.witness = psi;
      return res;
    }
  }
  // Certificates that no element can be invertible.
  for (std::size_t v = 0; v < q.num_vertices(); ++v) {
    if (r1.dim(v) == 0) continue;
    std::vector<Matrix> cols, rows;
    for (const auto& b : res.hom_basis) {
      cols.push_back(b[v]);
      rows.push_back(b[v].transpose());
    }
    if (rank(hstack(cols, r2.dim(v))) < r2.dim(v) || rank(hstack(rows, r1.dim(v))) < r1.dim(v)) {
      res.verdict = IsoVerdict::not_isomorphic;
      res.reason = "no homomorphism is surjective at vertex " + q.vertex_id(v);
      return res;
    }
  }
  std::size_t end1 = hom_space(r1, r1).size();
  std::size_t end2 = hom_space(r2, r2).size();
  if (end1 != res.hom_dim || end2 != res.hom_dim) {
    res.verdict = IsoVerdict::not_isomorphic;
    res.reason = "dim Hom(M,M)=" + std::to_string(end1) + ", dim Hom(M,N)=" + std::to_string(res.hom_dim) +
                 ", dim Hom(N,N)=" + std::to_string(end2);
    return res;
  }
  res.verdict = IsoVerdict::undetermined;
  res.reason = "no invertible intertwiner found in 64 samples";
  return res;
}

// ---------------------------------------------------------------------------
// The hook derivatives d_[ab]([S]) read back on Q, where the composite
// [ab] acts as the product ab.

struct HookData {
  std::size_t j;
  QuiverPtr premutated;
  Potential bracket;
  Substitution unbracket;  // premutated quiver -> original quiver
  std::vector<Hook> hooks;
};

inline HookData hook_data(const QP& p, std::size_t j) {
  QuiverPtr pq = share(premutate_quiver(p.q(), j));
  Potential br = bracket_potential(p, j, pq);
  Substitution un(pq, p.quiver, p.truncation());
  const Quiver& q = p.q();
  for (std::size_t a = 0; a < q.num_arrows(); ++a) {
    const Arrow& ar = q.arrow(a);
    if (ar.tail != j && ar.head != j) un.set(pq->arrow_index(ar.id), PathElement::arrow(p.quiver, p.truncation(), a));
  }
  auto hk = hooks(q, j);
  for (const Hook& h : hk)
    un.set(composite_id(q.arrow(h.outer).id, q.arrow(h.inner).id),
           PathElement::path(p.quiver, p.truncation(), {h.outer, h.inner}));
  return HookData{j, pq, br, un, hk};
}

// Action of d_[outer.inner]([S]) : M_h(outer) -> M_t(inner).
inline Matrix hook_derivative_action(const DecoratedRep& r, const HookData& hd, const Hook& h) {
  const Quiver& q = r.quiver();
  std::size_t c = hd.premutated->arrow_index(composite_id(q.arrow(h.outer).id, q.arrow(h.inner).id));
  PathElement d = substitute(hd.unbracket, cyclic_derivative(hd.bracket, c));
  return act_between(d, r, q.arrow(h.outer).head, q.arrow(h.inner).tail);
}

inline std::string boundary_arrow_id(const Quiver& q, const Hook& h) {
  return "alpha" + composite_id(q.arrow(h.outer).id, q.arrow(h.inner).id);
}

inline Quiver boundary_quiver(const QP& p, std::size_t j) {
  const Quiver& q = p.q();
  require_mutable_at(q, j);
  std::vector<bool> used(q.num_vertices(), false);
  used[j] = true;
  for (const auto& ar : q.arrows())
    if (ar.tail == j || ar.head == j) used[ar.tail] = used[ar.head] = true;
  Quiver b;
  for (std::size_t v = 0; v < q.num_vertices(); ++v)
    if (used[v]) b.add_vertex(q.vertex_id(v));
  for (const auto& ar : q.arrows())
    if (ar.tail == j || ar.head == j) b.add_arrow(ar.id, q.vertex_id(ar.tail), q.vertex_id(ar.head));
  for (const Hook& h : hooks(q, j))
    b.add_arrow(boundary_arrow_id(q, h), q.vertex_id(q.arrow(h.outer).head), q.vertex_id(q.arrow(h.inner).tail));
  return b;
}

inline DecoratedRep boundary_rep(const DecoratedRep& r, std::size_t j) {
  const QP& p = r.qp();
  const Quiver& q = p.q();
  QP bqp = QP::zero(boundary_quiver(p, j), p.truncation());
  const Quiver& b = bqp.q();
  HookData hd = hook_data(p, j);
  std::vector<std::size_t> dims, dec;
  for (const auto& v : b.vertices()) {
    dims.push_back(r.dim(v));
    dec.push_back(r.dec(v));
  }
  std::vector<Matrix> maps;
  for (const auto& ar : q.arrows())
    if (ar.tail == j || ar.head == j) maps.push_back(r.map(ar.id));
  for (const Hook& h : hd.hooks) maps.push_back(hook_derivative_action(r, hd, h));
  return DecoratedRep(bqp, dims, maps, dec);
}

struct BoundaryComponent {
  std::vector<std::vector<std::size_t>> coords;  // per vertex, coordinates of the summand
  DecoratedRep rep;
};

// Splits along the coordinate basis: coordinates joined by a nonzero
// matrix entry land in the same summand.
inline std::vector<BoundaryComponent> decompose_boundary(const DecoratedRep& b) {
  const Quiver& q = b.quiver();
  auto off = b.offsets();
  std::size_t n = b.total_dim();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t a = 0; a < q.num_arrows(); ++a) {
    const Arrow& ar = q.arrow(a);
    const Matrix& m = b.map(a);
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t k = 0; k < m.cols(); ++k)
        if (m(i, k) != 0) {
          std::size_t x = find(off[ar.head] + i), y = find(off[ar.tail] + k);
          if (x != y) parent[std::max(x, y)] = std::min(x, y);
        }
  }
  std::vector<std::size_t> vertex_of(n), local(n);
  for (std::size_t v = 0; v < q.num_vertices(); ++v)
    for (std::size_t i = 0; i < b.dim(v); ++i) {
      vertex_of[off[v] + i] = v;
      local[off[v] + i] = i;
    }
  std::vector<std::size_t> roots;
  std::vector<std::vector<std::vector<std::size_t>>> comp_coords;
  std::vector<std::size_t> comp_of_root(n, SIZE_MAX);
  for (std::size_t x = 0; x < n; ++x) {
    std::size_t r = find(x);
    if (comp_of_root[r] == SIZE_MAX) {
      comp_of_root[r] = comp_coords.size();
      comp_coords.emplace_back(q.num_vertices());
    }
    comp_coords[comp_of_root[r]][vertex_of[x]].push_back(local[x]);
  }
  std::vector<BoundaryComponent> out;
  for (auto& coords : comp_coords) {
    std::vector<std::size_t> dims;
    for (const auto& c : coords) dims.push_back(c.size());
    std::vector<Matrix> maps;
    for (std::size_t a = 0; a < q.num_arrows(); ++a) {
      const Arrow& ar = q.arrow(a);
      maps.push_back(b.map(a).select_rows(coords[ar.head]).select_cols(coords[ar.tail]));
    }
    out.push_back({coords, DecoratedRep(b.qp(), dims, maps, std::vector<std::size_t>(q.num_vertices(), 0))});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Text format: "dim <v> = <n>", "map <a> = [[...]]", "dec <v> = <n>".

inline std::string to_text(const DecoratedRep& r) {
  const Quiver& q = r.quiver();
  std::ostringstream os;
  for (std::size_t v = 0; v < q.num_vertices(); ++v) os << "dim " << q.vertex_id(v) << " = " << r.dim(v) << '\n';
  for (std::size_t a = 0; a < q.num_arrows(); ++a) os << "map " << q.arrow(a).id << " = " << to_string(r.map(a)) << '\n';
  for (std::size_t v = 0; v < q.num_vertices(); ++v)
    if (r.dec(v)) os << "dec " << q.vertex_id(v) << " = " << r.dec(v) << '\n';
  return os.str();
}

inline DecoratedRep parse_rep(const QP& qp, const std::string& text) {
  const Quiver& q = qp.q();
  std::vector<std::size_t> dims(q.num_vertices(), 0), dec(q.num_vertices(), 0);
  std::vector<std::optional<std::string>> raw(q.num_arrows());
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t eq = t.find('=');
    auto words = split_ws(t.substr(0, eq == std::string::npos ? 0 : eq));
    if (eq == std::string::npos || words.size() != 2)
      throw std::invalid_argument("line " + std::to_string(lineno) + ": expected '<kind> <name> = <value>'");
    std::string value = trim(t.substr(eq + 1));
    if (words[0] == "dim") {
      dims[q.vertex(words[1])] = std::stoul(value);
    } else if (words[0] == "dec") {
      dec[q.vertex(words[1])] = std::stoul(value);
    } else if (words[0] == "map") {
      raw[q.arrow_index(words[1])] = value;
    } else {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": unknown entry '" + words[0] + "'");
    }
  }
  std::vector<Matrix> maps;
  for (std::size_t a = 0; a < q.num_arrows(); ++a) {
    const Arrow& ar = q.arrow(a);
    maps.push_back(raw[a] ? parse_matrix(*raw[a], dims[ar.head], dims[ar.tail]) : Matrix(dims[ar.head], dims[ar.tail]));
  }
  return DecoratedRep(qp, dims, maps, dec);
}

}  // namespace qpsurf
