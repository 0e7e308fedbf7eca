#include <qpsurf/verify.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace qpsurf;

namespace {

struct Options {
  std::size_t truncation = kDefaultTruncation;
  std::string scalars;
  std::string seed = "5EED";
  std::string format = "text";
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, Rational> parse_scalars(const std::string& text) {
  std::map<std::string, Rational> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    item = trim(item);
    if (item.empty()) continue;
    std::size_t eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("bad scalar '" + item + "', expected p=value");
    out[trim(item.substr(0, eq))] = parse_rational(trim(item.substr(eq + 1)));
  }
  return out;
}

Triangulation load(const Options& o, const std::string& path) {
  Triangulation t = load_triangulation(slurp(path));
  if (!o.scalars.empty()) t = t.with_scalars(parse_scalars(o.scalars));
  for (const auto& w : t.warnings()) std::cerr << "warning: " << w << '\n';
  return t;
}

std::uint64_t parse_seed(const std::string& s) {
  std::size_t used = 0;
  std::uint64_t v = std::stoull(s, &used, 16);
  if (used != s.size()) throw std::invalid_argument("bad seed '" + s + "'");
  return v;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!trim(item).empty()) out.push_back(trim(item));
  return out;
}

std::string join(const std::vector<long>& g) {
  std::string s;
  for (auto x : g) s += (s.empty() ? "" : " ") + std::to_string(x);
  return s;
}

int emit(const Options& o, const VerificationReport& r) {
  std::cout << (o.format == "machine" ? to_machine(r) : to_text(r));
  return r.exit_code();
}

int cmd_surface_qp(const Options& o, const std::string& tri) {
  Triangulation t = load(o, tri);
  QP full = unreduced_qp(t, o.truncation);
  QP red = surface_qp(t, o.truncation);
  if (o.format == "machine") {
    std::cout << "arcs=" << t.arcs().size() << "\npunctures=" << t.punctures().size() << "\ngenus=" << t.genus()
              << "\nboundary_components=" << t.boundary_components() << "\narrows=" << red.q().num_arrows()
              << "\nterms=" << red.potential.terms().size() << '\n';
    return 0;
  }
  std::cout << "genus " << t.genus() << ", " << t.boundary_components() << " boundary components, "
            << t.punctures().size() << " punctures, " << t.arcs().size() << " arcs\n";
  std::cout << "== unreduced\n" << to_text(full) << "== reduced\n" << to_text(red);
  return 0;
}

int cmd_flip(const Options& o, const std::string& tri, const std::string& j, const std::string& label,
             const std::string& out_path) {
  Triangulation t = load(o, tri);
  FlipResult f = flip(t, j, label);
  Quiver mutated = mutate_quiver(reduced_quiver(t), j);
  Quiver target = reduced_quiver(f.sigma);
  ArrowMatch m = match_flip_arrows(f, mutated, target);
  VerificationReport r;
  std::string tri_text = save_triangulation(f.sigma);
  if (out_path.empty()) {
    r.artifacts.emplace_back("flipped triangulation", tri_text);
  } else {
    std::ofstream(out_path) << tri_text;
  }
  r.add("reduced quiver equals mutated quiver", m.complete(),
        std::to_string(m.ids.size()) + " arrows matched, " + std::to_string(m.by_endpoints) + " by endpoints only",
        m.complete() ? "" : to_text(mutated) + "--\n" + to_text(target));
  return emit(o, r);
}

int cmd_arc_rep(const Options& o, const std::string& tri, const std::string& arc) {
  Triangulation t = load(o, tri);
  ArcCurve c = parse_arc(t, slurp(arc));
  ArcRepresentation a = arc_representation_detailed(t, c, surface_qp(t, o.truncation));
  VerificationReport r;
  std::ostringstream det;
  for (const auto& d : a.detours)
    det << "order " << d.order << " on " << d.arc << ": crossing " << d.from << " -> " << d.to << " in "
        << t.triangle(d.tri).name << " around " << d.puncture << '\n';
  if (!a.detours.empty()) r.artifacts.emplace_back("detours", det.str());
  if (a.cut && a.cut->truncated)
    r.artifacts.emplace_back("truncation", "t = crossing " + std::to_string(a.cut->t_point) + " on " +
                                               a.cut->i_prime + (a.cut->reversed ? " (loop reversed)" : ""));
  r.artifacts.emplace_back("representation", to_text(a.rep));
  auto bad = relation_violations(a.rep);
  r.add("relations", bad.empty(), std::to_string(bad.size()) + " cyclic derivatives act nonzero",
        bad.empty() ? "" : "first: d/d " + bad.front());
  auto nil = check_nilpotent(a.rep);
  r.add("nilpotent", nil.has_value(), nil ? "paths of length " + std::to_string(*nil) + " act as zero" : "");
  return emit(o, r);
}

int cmd_verify_flip(const Options& o, const std::string& tri, const std::string& arc, const std::string& j,
                    bool no_twist) {
  Triangulation t = load(o, tri);
  ArcCurve c = parse_arc(t, slurp(arc));
  VerifyOptions vo;
  vo.seed = parse_seed(o.seed);
  vo.twist = !no_twist;
  vo.truncation = o.truncation;
  return emit(o, verify_flip(t, c, j, vo).report);
}

int cmd_mutation_chain(const Options& o, const std::string& tri, const std::string& arc, const std::string& chain,
                       const std::string& expect) {
  Triangulation t = load(o, tri);
  ArcCurve c = parse_arc(t, slurp(arc));
  DecoratedRep cur = arc_representation_detailed(t, c, surface_qp(t, o.truncation)).rep;
  VerificationReport r;
  for (const auto& v : split_list(chain)) {
    cur = mutate_rep(cur, v);
    r.add("mutate at " + v, CheckStatus::info, dims_text(cur));
  }
  r.artifacts.emplace_back("final QP", to_text(cur.qp()));
  r.artifacts.emplace_back("final representation", to_text(cur));
  if (!expect.empty()) {
    IsoResult iso = is_isomorphic(cur, negative_simple(cur.qp(), expect), parse_seed(o.seed));
    CheckStatus st = iso.verdict == IsoVerdict::isomorphic       ? CheckStatus::pass
                     : iso.verdict == IsoVerdict::not_isomorphic ? CheckStatus::fail
                                                                 : CheckStatus::undetermined;
    r.add("negative simple at " + expect, st, iso.reason, st == CheckStatus::undetermined ? hom_dump(iso) : "");
  }
  return emit(o, r);
}

int cmd_jacobian(const Options& o, const std::string& tri, std::size_t vanish) {
  Triangulation t = load(o, tri);
  QP qp = surface_qp(t, o.truncation);
  TruncatedJacobianIdeal ideal(qp.potential, o.truncation);
  VerificationReport r;
  if (vanish > o.truncation) throw std::invalid_argument("--vanish-length exceeds --truncate");
  auto paths = ideal.paths_of_length(vanish);
  std::size_t inside = 0;
  std::string first_out;
  for (const auto& p : paths) {
    if (ideal.contains_path(p)) {
      ++inside;
    } else if (first_out.empty()) {
      first_out = path_to_string(qp.q(), p);
    }
  }
  r.add("paths of length " + std::to_string(vanish) + " vanish", inside == paths.size(),
        std::to_string(inside) + " of " + std::to_string(paths.size()) + " in the ideal (truncation " +
            std::to_string(o.truncation) + ")",
        first_out.empty() ? "" : "survives: " + first_out);
  auto bound = ideal.nilpotency_bound();
  r.add("nilpotency bound", CheckStatus::info, bound ? std::to_string(*bound) : "none up to the truncation");
  return emit(o, r);
}

int cmd_gvector(const Options& o, const std::string& tri, const std::string& arc) {
  Triangulation t = load(o, tri);
  ArcCurve c = parse_arc(t, slurp(arc));
  DecoratedRep rep = arc_representation_detailed(t, c, surface_qp(t, o.truncation)).rep;
  auto g = g_vector(rep);
  const Quiver& q = rep.quiver();
  for (std::size_t v = 0; v < q.num_vertices(); ++v) {
    if (o.format == "machine") {
      std::cout << "g." << q.vertex_id(v) << '=' << g[v] << '\n';
    } else {
      std::cout << q.vertex_id(v) << ' ' << g[v] << '\n';
    }
  }
  if (o.format != "machine") std::cout << "g = (" << join(g) << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quivers with potentials and arc representations of triangulated surfaces"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--truncate", o.truncation, "degree at which path algebra elements are cut off")
      ->check(CLI::PositiveNumber);
  app.add_option("--scalars", o.scalars, "puncture scalars, e.g. p=2,q=-1/3");
  app.add_option("--seed", o.seed, "hex seed for isomorphism sampling");
  app.add_option("--format", o.format, "text or machine")->check(CLI::IsMember({"text", "machine"}));

  std::string tri, arc, j, label, out, chain, expect;
  std::size_t vanish = 0;
  bool no_twist = false;

  auto* s_qp = app.add_subcommand("surface-qp", "print Q(tau) with unreduced and reduced potentials");
  s_qp->add_option("triangulation", tri)->required();

  auto* s_flip = app.add_subcommand("flip", "flip an arc and compare with quiver mutation");
  s_flip->add_option("triangulation", tri)->required();
  s_flip->add_option("arc", j)->required();
  s_flip->add_option("--label", label, "label of the new arc (default: reuse the old one)");
  s_flip->add_option("-o,--output", out, "write the flipped triangulation here");

  auto* s_rep = app.add_subcommand("arc-rep", "arc representation and its relation check");
  s_rep->add_option("triangulation", tri)->required();
  s_rep->add_option("arcfile", arc)->required();

  auto* s_ver = app.add_subcommand("verify-flip", "compare mutation of M(tau) with M(sigma) after a flip");
  s_ver->add_option("triangulation", tri)->required();
  s_ver->add_option("arcfile", arc)->required();
  s_ver->add_option("arc", j)->required();
  s_ver->add_flag("--no-twist", no_twist, "do not negate the reversed arrows");

  auto* s_chain = app.add_subcommand("mutation-chain", "mutate an arc representation along a vertex list");
  s_chain->add_option("triangulation", tri)->required();
  s_chain->add_option("arcfile", arc)->required();
  s_chain->add_option("vertices", chain, "comma separated, applied left to right");
  s_chain->add_option("--expect-negative-simple", expect, "compare the result with this negative simple");

  auto* s_jac = app.add_subcommand("jacobian", "test that all paths of a given length lie in the Jacobian ideal");
  s_jac->add_option("triangulation", tri)->required();
  s_jac->add_option("--vanish-length", vanish)->required();

  auto* s_g = app.add_subcommand("gvector", "g-vector of an arc");
  s_g->add_option("triangulation", tri)->required();
  s_g->add_option("arcfile", arc)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*s_qp) return cmd_surface_qp(o, tri);
    if (*s_flip) return cmd_flip(o, tri, j, label, out);
    if (*s_rep) return cmd_arc_rep(o, tri, arc);
    if (*s_ver) return cmd_verify_flip(o, tri, arc, j, no_twist);
    if (*s_chain) return cmd_mutation_chain(o, tri, arc, chain, expect);
    if (*s_jac) return cmd_jacobian(o, tri, vanish);
    if (*s_g) return cmd_gvector(o, tri, arc);
  } catch (const TriangulationError& e) {
    for (const auto& msg : e.errors()) std::cerr << "error: " << msg << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
