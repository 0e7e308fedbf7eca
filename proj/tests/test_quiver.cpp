#include "catch_amalgamated.hpp"

#include "support.hpp"

using namespace qpsurf;
using qpsurf::testing::small_quiver;

namespace {

Quiver triangle() {
  Quiver q;
  for (auto v : {"1", "2", "3"}) q.add_vertex(v);
  q.add_arrow("a", "1", "2");
  q.add_arrow("b", "2", "3");
  q.add_arrow("c", "3", "1");
  return q;
}

// Skew-symmetric exchange matrix: b[u][v] = #(u->v) - #(v->u).
using Exchange = std::vector<std::vector<int>>;

Exchange exchange(const Quiver& q) {
  Exchange b(q.num_vertices(), std::vector<int>(q.num_vertices(), 0));
  for (const auto& a : q.arrows()) {
    ++b[a.tail][a.head];
    --b[a.head][a.tail];
  }
  return b;
}

// Matrix mutation rule, used as an oracle independent of arrow bookkeeping.
Exchange mutate_exchange(const Exchange& b, std::size_t j) {
  Exchange r = b;
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (i == j || k == j) {
        r[i][k] = -b[i][k];
      } else {
        int s = b[i][j] > 0 ? 1 : (b[i][j] < 0 ? -1 : 0);
        r[i][k] = b[i][k] + s * std::max(b[i][j] * b[j][k], 0);
      }
    }
  return r;
}

Quiver from_exchange(const Exchange& b) {
  Quiver q;
  for (std::size_t v = 0; v < b.size(); ++v) q.add_vertex("v" + std::to_string(v));
  int n = 0;
  for (std::size_t u = 0; u < b.size(); ++u)
    for (std::size_t v = 0; v < b.size(); ++v)
      for (int k = 0; k < b[u][v]; ++k) q.add_arrow("a" + std::to_string(n++), u, v);
  return q;
}

// All skew-symmetric matrices on `nv` vertices with total arrow count <= max_arrows.
void enumerate(std::size_t nv, int max_arrows, const std::function<void(const Exchange&)>& visit) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t u = 0; u < nv; ++u)
    for (std::size_t v = u + 1; v < nv; ++v) pairs.emplace_back(u, v);
  Exchange b(nv, std::vector<int>(nv, 0));
  std::function<void(std::size_t, int)> rec = [&](std::size_t k, int left) {
    if (k == pairs.size()) {
      visit(b);
      return;
    }
    auto [u, v] = pairs[k];
    for (int m = -left; m <= left; ++m) {
      b[u][v] = m;
      b[v][u] = -m;
      rec(k + 1, left - std::abs(m));
    }
    b[u][v] = b[v][u] = 0;
  };
  rec(0, max_arrows);
}

}  // namespace

TEST_CASE("quiver construction rejects bad ids") {
  Quiver q;
  q.add_vertex("1");
  CHECK_THROWS(q.add_vertex("1"));
  CHECK_THROWS(q.add_arrow("a", "1", "2"));
  q.add_vertex("2");
  q.add_arrow("a", "1", "2");
  CHECK_THROWS(q.add_arrow("a", "2", "1"));
  CHECK_THROWS(q.vertex("3"));
}

TEST_CASE("hooks follow function-style composition") {
  Quiver t = triangle();
  auto h = hooks(t, "2");
  REQUIRE(h.size() == 1);
  CHECK(t.arrow(h[0].outer).id == "b");
  CHECK(t.arrow(h[0].inner).id == "a");
  CHECK(hooks(small_quiver({"1", "2"}, {{"1", "2"}}), "2").empty());
  CHECK_THROWS(hooks(t, "9"));
}

TEST_CASE("premutation of the oriented triangle at 2") {
  Quiver p = premutate_quiver(triangle(), "2");
  std::set<std::tuple<std::string, std::string, std::string>> want{
      {"c", "3", "1"}, {"a*", "2", "1"}, {"b*", "3", "2"}, {"[b.a]", "1", "3"}};
  CHECK(p.arrow_triples() == want);
}

TEST_CASE("mutation of A2 reverses the arrow") {
  Quiver q;
  q.add_vertex("1");
  q.add_vertex("2");
  q.add_arrow("a", "1", "2");
  Quiver m = mutate_quiver(q, "2");
  REQUIRE(m.num_arrows() == 1);
  CHECK(m.arrow(0).id == "a*");
  CHECK(m.vertex_id(m.arrow(0).tail) == "2");
}

TEST_CASE("mutation refuses a 2-cycle at the vertex") {
  Quiver q = small_quiver({"1", "2"}, {{"1", "2"}, {"2", "1"}});
  CHECK_FALSE(is_two_acyclic(q));
  CHECK_THROWS(premutate_quiver(q, "1"));
  CHECK_THROWS(mutate_quiver(q, "2"));
}

TEST_CASE("mutation of the triangle cancels the new 2-cycle") {
  Quiver m = mutate_quiver(triangle(), "2");
  CHECK(is_two_acyclic(m));
  CHECK(m.num_arrows() == 2);
  CHECK(m.has_arrow("a*"));
  CHECK(m.has_arrow("b*"));
}

TEST_CASE("restriction keeps arrows inside the subset and all vertices") {
  Quiver t = triangle();
  Quiver r = restrict_quiver(t, {"1", "2"});
  CHECK(r.num_vertices() == 3);
  REQUIRE(r.num_arrows() == 1);
  CHECK(r.arrow(0).id == "a");
  CHECK(restrict_quiver(t, {"1", "2", "3"}) == t);
  CHECK_THROWS(restrict_quiver(t, {"7"}));
  Quiver twice = restrict_quiver(restrict_quiver(t, {"1", "2"}), {"2", "3"});
  CHECK(twice == restrict_quiver(t, {"2"}));
}

TEST_CASE("text round trip") {
  Quiver t = triangle();
  CHECK(parse_quiver(to_text(t)) == t);
  CHECK_THROWS_WITH(parse_quiver("vertices: 1 2\narrow a 1 -> 2\n"), Catch::Matchers::ContainsSubstring("line 2"));
}

TEST_CASE("mutation agrees with matrix mutation and is an involution on small quivers") {
  std::size_t checked = 0;
  for (std::size_t nv : {2u, 3u, 4u}) {
    enumerate(nv, nv == 4 ? 5 : 6, [&](const Exchange& b) {
      Quiver q = from_exchange(b);
      for (std::size_t j = 0; j < nv; ++j) {
        Quiver m = mutate_quiver(q, j);
        REQUIRE(is_two_acyclic(m));
        REQUIRE(exchange(m) == mutate_exchange(b, j));
        REQUIRE(exchange(mutate_quiver(m, j)) == b);
        ++checked;
      }
    });
  }
  CHECK(checked > 10000);
}

TEST_CASE("double stars and composites survive a second mutation by name") {
  Quiver q = small_quiver({"1", "2", "3"}, {{"1", "2"}, {"2", "3"}});
  Quiver m = mutate_quiver(mutate_quiver(q, "2"), "2");
  CHECK(m.has_arrow("a0**"));
  CHECK(m.has_arrow("a1**"));
  CHECK(m.num_arrows() == 2);
}
