#pragma once

#include <qpsurf/rep.hpp>

#include <stdexcept>
#include <vector>

namespace qpsurf {

// The maps a: M_in -> M_j, b: M_j -> M_out, c: M_out -> M_in at a vertex,
// and the choices made to build the premutated space at j.
struct MutationWorkspace {
  std::size_t j = 0;
  std::vector<std::size_t> ins;   // arrows ending at j
  std::vector<std::size_t> outs;  // arrows starting at j
  std::size_t dim_in = 0, dim_out = 0;
  Matrix A, B, C;
  Matrix ker_c;        // basis of ker c inside M_out
  Matrix retraction;   // r: M_out -> ker c (coordinates), r * ker_c = 1
  Matrix projection;   // p: ker c -> ker c / im b (coordinates)
  Matrix im_c;         // i: basis of im c inside M_in
  Matrix section;      // i s: ker a / im c -> M_in
  Matrix c_coords;     // c written in the basis im_c
  std::size_t dec_j = 0;
  std::size_t new_dec = 0;
  std::size_t d_kerc_imb = 0, d_imc = 0, d_kera_imc = 0;

  std::size_t new_dim() const { return d_kerc_imb + d_imc + d_kera_imc + dec_j; }

  // Column block k of the new maps a_k*: M_j' -> M_t(a_k), stacked as rows.
  Matrix a_bar() const {
    return hstack({Matrix(dim_in, d_kerc_imb), im_c, section, Matrix(dim_in, dec_j)}, dim_in);
  }
  // (-p r; -c; 0; 0): M_out -> M_j'
  Matrix b_bar() const {
    return vstack({-(projection * retraction), -c_coords, Matrix(d_kera_imc, dim_out), Matrix(dec_j, dim_out)},
                  dim_out);
  }
};

namespace detail {

inline void fill_choices(MutationWorkspace& w, PivotRule rule) {
  if (!(w.A * w.C).is_zero()) throw std::invalid_argument("relations fail: a c != 0 at the mutation vertex");
  if (!(w.C * w.B).is_zero()) throw std::invalid_argument("relations fail: c b != 0 at the mutation vertex");
  w.ker_c = kernel_basis(w.C, rule);
  const std::size_t k = w.ker_c.cols();
  auto y = solve(w.ker_c, w.B);
  if (!y) throw std::logic_error("im b not inside ker c");
  w.projection = quotient_by(*y, k, rule).projection;
  w.d_kerc_imb = w.projection.rows();
  Matrix full = extend_to_basis(w.ker_c, w.dim_out, rule);
  w.retraction = inverse(full).value().block(0, 0, k, w.dim_out);
  w.im_c = column_space_basis(w.C, rule);
  w.d_imc = w.im_c.cols();
  w.c_coords = solve(w.im_c, w.C).value();
  Matrix ker_a = kernel_basis(w.A, rule);
  auto z = solve(ker_a, w.C);
  if (!z) throw std::logic_error("im c not inside ker a");
  QuotientMaps q2 = quotient_by(*z, ker_a.cols(), rule);
  w.section = ker_a * q2.lift;
  w.d_kera_imc = w.section.cols();
  Matrix ker_b = kernel_basis(w.B, rule);
  w.new_dec = ker_b.cols() - intersection_dim(ker_b, w.A);
}

}  // namespace detail

inline MutationWorkspace mutation_workspace(const DecoratedRep& r, std::size_t j, PivotRule rule = PivotRule::leftmost) {
  const Quiver& q = r.quiver();
  require_mutable_at(q, j);
  MutationWorkspace w;
  w.j = j;
  w.ins = q.arrows_into(j);
  w.outs = q.arrows_out_of(j);
  w.dec_j = r.dec(j);
  std::vector<Matrix> a_parts, b_parts;
  for (auto a : w.ins) {
    a_parts.push_back(r.map(a));
    w.dim_in += r.dim(q.arrow(a).tail);
  }
  for (auto b : w.outs) {
    b_parts.push_back(r.map(b));
    w.dim_out += r.dim(q.arrow(b).head);
  }
  w.A = hstack(a_parts, r.dim(j));
  w.B = vstack(b_parts, r.dim(j));
  w.C = Matrix(w.dim_in, w.dim_out);
  HookData hd = hook_data(r.qp(), j);
  std::size_t row = 0;
  for (auto a : w.ins) {
    std::size_t col = 0;
    for (auto b : w.outs) {
      Matrix blk = hook_derivative_action(r, hd, Hook{b, a});
      w.C.set_block(row, col, blk);
      col += blk.cols();
    }
    row += r.dim(q.arrow(a).tail);
  }
  detail::fill_choices(w, rule);
  return w;
}

namespace detail {

// Premutated representation from the new maps at j.
inline DecoratedRep assemble_premutation(const DecoratedRep& r, std::size_t j, const Matrix& a_bar, const Matrix& b_bar,
                                         std::size_t new_dim, std::size_t new_dec, const QP& pre) {
  const Quiver& q = r.quiver();
  std::vector<std::size_t> dims = r.dims(), dec = r.decs();
  dims[j] = new_dim;
  dec[j] = new_dec;
  std::vector<Matrix> maps;
  std::size_t in_off = 0, out_off = 0;
  std::vector<std::size_t> in_at(q.num_arrows(), 0), out_at(q.num_arrows(), 0);
  for (auto a : q.arrows_into(j)) {
    in_at[a] = in_off;
    in_off += r.dim(q.arrow(a).tail);
  }
  for (auto b : q.arrows_out_of(j)) {
    out_at[b] = out_off;
    out_off += r.dim(q.arrow(b).head);
  }
  for (std::size_t a = 0; a < q.num_arrows(); ++a) {
    const Arrow& ar = q.arrow(a);
    if (ar.head == j) {
      maps.push_back(a_bar.block(in_at[a], 0, r.dim(ar.tail), new_dim));
    } else if (ar.tail == j) {
      maps.push_back(b_bar.block(0, out_at[a], new_dim, r.dim(ar.head)));
    } else {
      maps.push_back(r.map(a));
    }
  }
  for (const Hook& h : hooks(q, j)) maps.push_back(r.map(h.outer) * r.map(h.inner));
  return DecoratedRep(pre, dims, maps, dec);
}

inline DecoratedRep reduce_rep(const DecoratedRep& pre_rep, const QPMutation& mut) {
  std::vector<Matrix> maps;
  for (auto a : mut.reduction.kept) maps.push_back(pre_rep.map(a));
  return DecoratedRep(mut.result, pre_rep.dims(), maps, pre_rep.decs());
}

}  // namespace detail

inline DecoratedRep premutate_rep(const DecoratedRep& r, std::size_t j, PivotRule rule = PivotRule::leftmost) {
  MutationWorkspace w = mutation_workspace(r, j, rule);
  QP pre = premutate_qp(r.qp(), j);
  return detail::assemble_premutation(r, j, w.a_bar(), w.b_bar(), w.new_dim(), w.new_dec, pre);
}

inline DecoratedRep mutate_rep(const DecoratedRep& r, std::size_t j, PivotRule rule = PivotRule::leftmost) {
  MutationWorkspace w = mutation_workspace(r, j, rule);
  QPMutation mut = mutate_qp_detailed(r.qp(), j);
  DecoratedRep pre = detail::assemble_premutation(r, j, w.a_bar(), w.b_bar(), w.new_dim(), w.new_dec, mut.premutated);
  return detail::reduce_rep(pre, mut);
}

inline DecoratedRep mutate_rep(const DecoratedRep& r, const std::string& j, PivotRule rule = PivotRule::leftmost) {
  return mutate_rep(r, r.quiver().vertex(j), rule);
}

// Same linear algebra run separately on each coordinate summand of the
// boundary representation, then reassembled.
inline DecoratedRep mutate_rep_via_boundary(const DecoratedRep& r, std::size_t j) {
  const Quiver& q = r.quiver();
  require_mutable_at(q, j);
  DecoratedRep bd = boundary_rep(r, j);
  const Quiver& bq = bd.quiver();
  auto comps = decompose_boundary(bd);
  auto ins = q.arrows_into(j);
  auto outs = q.arrows_out_of(j);
  auto hk = hooks(q, j);

  std::size_t dim_in = 0, dim_out = 0;
  std::vector<std::size_t> in_at, out_at;
  for (auto a : ins) {
    in_at.push_back(dim_in);
    dim_in += r.dim(q.arrow(a).tail);
  }
  for (auto b : outs) {
    out_at.push_back(dim_out);
    dim_out += r.dim(q.arrow(b).head);
  }

  struct Piece {
    Matrix a_bar, b_bar;
    std::vector<std::size_t> in_rows, out_cols;  // global coordinates
    std::size_t dim = 0;
  };
  std::vector<Piece> pieces;
  std::size_t new_dec = 0, total = 0;
  const std::size_t bj = bq.vertex(q.vertex_id(j));
  for (const auto& comp : comps) {
    const DecoratedRep& n = comp.rep;
    MutationWorkspace w;
    w.j = j;
    w.dec_j = 0;
    Piece piece;
    std::vector<Matrix> a_parts, b_parts;
    std::vector<std::size_t> in_local, out_local;
    for (std::size_t k = 0; k < ins.size(); ++k) {
      const Arrow& ar = q.arrow(ins[k]);
      std::size_t bt = bq.vertex(q.vertex_id(ar.tail));
      a_parts.push_back(n.map(ar.id));
      for (auto c : comp.coords[bt]) piece.in_rows.push_back(in_at[k] + c);
      in_local.push_back(w.dim_in);
      w.dim_in += n.dim(bt);
    }
    for (std::size_t l = 0; l < outs.size(); ++l) {
      const Arrow& ar = q.arrow(outs[l]);
      std::size_t bh = bq.vertex(q.vertex_id(ar.head));
      b_parts.push_back(n.map(ar.id));
      for (auto c : comp.coords[bh]) piece.out_cols.push_back(out_at[l] + c);
      out_local.push_back(w.dim_out);
      w.dim_out += n.dim(bh);
    }
    w.A = hstack(a_parts, n.dim(bj));
    w.B = vstack(b_parts, n.dim(bj));
    w.C = Matrix(w.dim_in, w.dim_out);
    for (const Hook& h : hk) {
      std::size_t k = std::find(ins.begin(), ins.end(), h.inner) - ins.begin();
      std::size_t l = std::find(outs.begin(), outs.end(), h.outer) - outs.begin();
      w.C.set_block(in_local[k], out_local[l], n.map(boundary_arrow_id(q, h)));
    }
    detail::fill_choices(w, PivotRule::leftmost);
    piece.a_bar = w.a_bar();
    piece.b_bar = w.b_bar();
    piece.dim = w.new_dim();
    new_dec += w.new_dec;
    total += piece.dim;
    pieces.push_back(std::move(piece));
  }
  std::size_t new_dim = total + r.dec(j);
  Matrix a_bar(dim_in, new_dim), b_bar(new_dim, dim_out);
  std::size_t col = 0;
  for (const auto& pc : pieces) {
    for (std::size_t i = 0; i < pc.in_rows.size(); ++i)
      for (std::size_t c = 0; c < pc.dim; ++c) a_bar(pc.in_rows[i], col + c) = pc.a_bar(i, c);
    for (std::size_t c = 0; c < pc.dim; ++c)
      for (std::size_t i = 0; i < pc.out_cols.size(); ++i) b_bar(col + c, pc.out_cols[i]) = pc.b_bar(c, i);
    col += pc.dim;
  }
  QPMutation mut = mutate_qp_detailed(r.qp(), j);
  DecoratedRep pre = detail::assemble_premutation(r, j, a_bar, b_bar, new_dim, new_dec, mut.premutated);
  return detail::reduce_rep(pre, mut);
}

}  // namespace qpsurf
