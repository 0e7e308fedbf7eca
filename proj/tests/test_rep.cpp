#include "catch_amalgamated.hpp"

#include "support.hpp"

using namespace qpsurf;
using namespace qpsurf::testing;

namespace {

QP cyclic_triangle(bool with_potential) {
  return parse_qp(std::string("vertices: 1 2 3\narrow a: 1 -> 2\narrow b: 2 -> 3\narrow c: 3 -> 1\n") +
                  (with_potential ? "potential:\n1 * c b a\n" : ""));
}

DecoratedRep line_rep(const QP& p) {
  // 1 -> 2 -> 3 with c acting by zero; satisfies the relations of cba
  return parse_rep(p, "dim 1 = 1\ndim 2 = 1\ndim 3 = 1\nmap a = [[1]]\nmap b = [[0]]\nmap c = [[0]]\n");
}

DecoratedRep hexagon_rep() {
  Triangulation t = hexagon();
  return arc_representation(t, load_arc(t, "hexagonnice.arc"));
}

}  // namespace

TEST_CASE("shape mismatches are rejected") {
  QP p = cyclic_triangle(true);
  CHECK_THROWS(DecoratedRep(p, {1, 1, 1}, {Matrix(1, 1), Matrix(1, 1)}, {0, 0, 0}));
  CHECK_THROWS(DecoratedRep(p, {1, 1, 1}, {Matrix(2, 1), Matrix(1, 1), Matrix(1, 1)}, {0, 0, 0}));
  CHECK_THROWS(parse_rep(p, "dim 1 = 1\ndim 2 = 1\nmap a = [[1,2]]\n"));
}

TEST_CASE("actions of idempotents and paths") {
  QP p = cyclic_triangle(true);
  DecoratedRep r = parse_rep(p, "dim 1 = 2\ndim 2 = 1\ndim 3 = 1\nmap a = [[1,2]]\nmap b = [[3]]\nmap c = [[0],[0]]\n");
  auto e1 = PathElement::idempotent(p.quiver, p.truncation(), 0);
  CHECK(act_between(e1, r, 0, 0).is_identity());
  auto ba = parse_path_element(p.quiver, p.truncation(), "1 * b a");
  CHECK(act_between(ba, r, 0, 2) == Matrix{{3, 6}});
  CHECK(act_between(parse_path_element(p.quiver, p.truncation(), "1 * c b a"), r, 0, 0).is_zero());
}

TEST_CASE("relations and nilpotency") {
  QP p = cyclic_triangle(true);
  DecoratedRep zero = DecoratedRep::zero(p);
  CHECK(check_relations(zero));
  CHECK(check_nilpotent(zero) == std::optional<std::size_t>(1));
  CHECK(check_relations(line_rep(p)));
  CHECK(check_nilpotent(line_rep(p)));

  DecoratedRep bad = parse_rep(p, "dim 1 = 1\ndim 2 = 1\ndim 3 = 1\nmap a = [[1]]\nmap b = [[1]]\n");
  CHECK_FALSE(check_relations(bad));
  CHECK_FALSE(relation_violations(bad).empty());

  // every arrow the identity and no potential: relations hold but the
  // module is not nilpotent
  QP free = cyclic_triangle(false);
  DecoratedRep loop = parse_rep(free, "dim 1 = 1\ndim 2 = 1\ndim 3 = 1\nmap a = [[1]]\nmap b = [[1]]\nmap c = [[1]]\n");
  CHECK(check_relations(loop));
  CHECK_FALSE(check_nilpotent(loop));
}

TEST_CASE("hexagon arc representation") {
  DecoratedRep r = hexagon_rep();
  CHECK(r.map("T1:j2->j1") == Matrix{{1}, {-2}, {0}});
  CHECK(check_relations(r));
  CHECK(check_nilpotent(r));
  std::vector<std::string> all(r.quiver().vertices());
  CHECK(is_path_restrictable(r, all));
  // Every cycle at j1 runs through T1:j5->j2 or T2:j9->j6, both zero, so the
  // rep is {j1}-path-restrictable; mutating at j1 still fails to commute with
  // restricting to {j1}: the decorations come out different.
  CHECK(is_path_restrictable(r, {"j1"}));
  std::size_t j1 = r.quiver().vertex("j1");
  DecoratedRep mu_then_res = restrict_rep(mutate_rep(r, j1), {"j1"});
  DecoratedRep res_then_mu = mutate_rep(restrict_rep(r, {"j1"}), j1);
  CHECK(mu_then_res.dec("j1") == 0);
  CHECK(res_then_mu.dec("j1") == 3);
}

TEST_CASE("restriction") {
  DecoratedRep r = hexagon_rep();
  std::vector<std::string> all(r.quiver().vertices());
  DecoratedRep same = restrict_rep(r, all);
  CHECK(same.maps() == r.maps());

  // Restrict to the vertices carrying no part of the arc; nothing can pass through.
  std::vector<std::string> idle;
  for (const auto& v : all)
    if (r.dim(v) == 0) idle.push_back(v);
  REQUIRE(is_path_restrictable(r, idle));
  DecoratedRep small = restrict_rep(r, idle);
  CHECK(small.total_dim() == 0);
  CHECK(check_relations(small));

  QP p = cyclic_triangle(true);
  DecoratedRep l = line_rep(p);
  REQUIRE(is_path_restrictable(l, {"1", "2"}));
  DecoratedRep l12 = restrict_rep(l, {"1", "2"});
  CHECK(l12.dim("3") == 0);
  CHECK(check_relations(l12));
  CHECK(l12.map("a") == Matrix{{1}});
  DecoratedRep l2 = restrict_rep(l12, {"2"});
  CHECK(is_isomorphic(l2, restrict_rep(l, {"2"})));

  DecoratedRep sum = direct_sum(l, l);
  REQUIRE(is_path_restrictable(sum, {"1", "2"}));
  CHECK(is_isomorphic(restrict_rep(sum, {"1", "2"}), direct_sum(l12, l12)));
}

TEST_CASE("direct sums and negative simples") {
  QP p = cyclic_triangle(true);
  DecoratedRep l = line_rep(p);
  DecoratedRep z = DecoratedRep::zero(p);
  CHECK(direct_sum(l, z).maps() == l.maps());
  DecoratedRep ll = direct_sum(l, l);
  CHECK(ll.dims() == std::vector<std::size_t>{2, 2, 2});
  CHECK(check_relations(ll));

  DecoratedRep s = negative_simple(p, "2");
  CHECK(s.total_dim() == 0);
  CHECK(s.decs() == std::vector<std::size_t>{0, 1, 0});
  CHECK(check_relations(s));
  CHECK(check_nilpotent(s) == std::optional<std::size_t>(1));
  CHECK(direct_sum(s, s).dec("2") == 2);
}

TEST_CASE("isomorphism testing") {
  QP p = cyclic_triangle(true);
  DecoratedRep l = line_rep(p);
  CHECK(is_isomorphic(l, l).verdict == IsoVerdict::isomorphic);
  CHECK(is_isomorphic(negative_simple(p, "1"), negative_simple(p, "1")));
  CHECK(is_isomorphic(negative_simple(p, "1"), negative_simple(p, "2")).verdict == IsoVerdict::not_isomorphic);

  // a base change at every vertex
  DecoratedRep r = parse_rep(p, "dim 1 = 2\ndim 2 = 2\ndim 3 = 1\nmap a = [[1,0],[0,0]]\nmap b = [[0,1]]\n");
  Matrix g1{{1, 1}, {0, 1}}, g2{{2, 0}, {1, 1}}, g3{{5}};
  DecoratedRep conj(p, r.dims(),
                    {g2 * r.map("a") * *inverse(g1), g3 * r.map("b") * *inverse(g2), Matrix(2, 1)}, r.decs());
  IsoResult res = is_isomorphic(r, conj);
  CHECK(res.verdict == IsoVerdict::isomorphic);
  REQUIRE(res.witness.size() == 3);

  DecoratedRep other = parse_rep(p, "dim 1 = 2\ndim 2 = 2\ndim 3 = 1\nmap a = [[1,0],[0,1]]\nmap b = [[0,0]]\n");
  CHECK(is_isomorphic(r, other).verdict == IsoVerdict::not_isomorphic);
}

TEST_CASE("boundary quiver and representation") {
  QP a2 = QP::zero(small_quiver({"1", "2"}, {{"1", "2"}}));
  Quiver b = boundary_quiver(a2, a2.q().vertex("2"));
  CHECK(b.num_arrows() == 1);

  QP iso = QP::zero(small_quiver({"1", "2", "3"}, {{"1", "2"}}));
  CHECK(boundary_quiver(iso, iso.q().vertex("3")).num_arrows() == 0);

  QP p = cyclic_triangle(true);
  Quiver bt = boundary_quiver(p, 1);
  CHECK(bt.num_arrows() == 3);
  CHECK(bt.has_arrow("alpha[b.a]"));
  DecoratedRep bz = boundary_rep(DecoratedRep::zero(p), 1);
  CHECK(bz.total_dim() == 0);

  // d_[b.a]([S]) = c, so alpha[b.a] acts as c
  DecoratedRep r = parse_rep(p, "dim 1 = 1\ndim 2 = 0\ndim 3 = 1\nmap c = [[7]]\n");
  DecoratedRep br = boundary_rep(r, 1);
  CHECK(br.map("alpha[b.a]") == Matrix{{7}});

  QP free = cyclic_triangle(false);
  DecoratedRep rf = parse_rep(free, "dim 1 = 1\ndim 2 = 0\ndim 3 = 1\nmap c = [[7]]\n");
  CHECK(boundary_rep(rf, 1).map("alpha[b.a]").is_zero());
}

TEST_CASE("boundary decomposition reproduces the boundary representation") {
  DecoratedRep r = hexagon_rep();
  const Quiver& q = r.quiver();
  for (std::size_t j = 0; j < q.num_vertices(); ++j) {
    if (has_two_cycle_at(q, j)) continue;
    DecoratedRep b = boundary_rep(r, j);
    auto comps = decompose_boundary(b);
    std::size_t total = 0;
    std::vector<Matrix> rebuilt;
    for (std::size_t a = 0; a < b.quiver().num_arrows(); ++a) {
      const Arrow& ar = b.quiver().arrow(a);
      rebuilt.emplace_back(b.dim(ar.head), b.dim(ar.tail));
    }
    for (const auto& c : comps) {
      total += c.rep.total_dim();
      for (std::size_t a = 0; a < b.quiver().num_arrows(); ++a) {
        const Arrow& ar = b.quiver().arrow(a);
        const auto& rows = c.coords[ar.head];
        const auto& cols = c.coords[ar.tail];
        for (std::size_t i = 0; i < rows.size(); ++i)
          for (std::size_t k = 0; k < cols.size(); ++k) rebuilt[a](rows[i], cols[k]) += c.rep.map(a)(i, k);
      }
    }
    CHECK(total == b.total_dim());
    CHECK(rebuilt == b.maps());
  }

  QP p = cyclic_triangle(false);
  DecoratedRep zeros = parse_rep(p, "dim 1 = 2\ndim 2 = 1\ndim 3 = 1\n");
  CHECK(decompose_boundary(zeros).size() == 4);
  DecoratedRep chain = parse_rep(p, "dim 1 = 1\ndim 2 = 1\ndim 3 = 1\nmap a = [[1]]\nmap b = [[1]]\n");
  CHECK(decompose_boundary(chain).size() == 1);
}

TEST_CASE("representation text round trip") {
  DecoratedRep r = hexagon_rep();
  DecoratedRep back = parse_rep(r.qp(), to_text(r));
  CHECK(back.dims() == r.dims());
  CHECK(back.maps() == r.maps());
  CHECK(back.decs() == r.decs());
}
