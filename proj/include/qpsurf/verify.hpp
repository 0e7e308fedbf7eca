#pragma once

#include <qpsurf/arcrep.hpp>
#include <qpsurf/repmut.hpp>

#include <sstream>
#include <string>
#include <vector>

namespace qpsurf {

enum class CheckStatus { pass, fail, undetermined, info };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::undetermined: return "undetermined";
    case CheckStatus::info: return "info";
  }
  return "?";
}

struct Check {
  std::string name;
  CheckStatus status = CheckStatus::info;
  std::string details;
  std::string payload;  // counterexample or dump printed under the check
};

struct VerificationReport {
  std::vector<Check> checks;
  std::vector<std::pair<std::string, std::string>> artifacts;

  void add(std::string name, CheckStatus s, std::string details = "", std::string payload = "") {
    checks.push_back({std::move(name), s, std::move(details), std::move(payload)});
  }
  void add(std::string name, bool ok, std::string details = "", std::string payload = "") {
    add(std::move(name), ok ? CheckStatus::pass : CheckStatus::fail, std::move(details), std::move(payload));
  }
  bool any(CheckStatus s) const {
    return std::any_of(checks.begin(), checks.end(), [&](const Check& c) { return c.status == s; });
  }
  bool passed() const { return !any(CheckStatus::fail) && !any(CheckStatus::undetermined); }

  // 0 all passed, 1 a check failed, 2 nothing failed but something is undetermined
  int exit_code() const {
    if (any(CheckStatus::fail)) return 1;
    return any(CheckStatus::undetermined) ? 2 : 0;
  }
};

inline std::string to_text(const VerificationReport& r, bool with_artifacts = true) {
  std::ostringstream os;
  if (with_artifacts)
    for (const auto& [name, body] : r.artifacts) os << "== " << name << '\n' << body << (body.ends_with('\n') ? "" : "\n");
  for (const auto& c : r.checks) {
    os << '[' << to_string(c.status) << "] " << c.name;
    if (!c.details.empty()) os << ": " << c.details;
    os << '\n';
    if (!c.payload.empty()) {
      std::istringstream is(c.payload);
      for (std::string ln; std::getline(is, ln);) os << "    " << ln << '\n';
    }
  }
  os << "result: " << (r.passed() ? "pass" : r.any(CheckStatus::fail) ? "fail" : "undetermined") << '\n';
  return os.str();
}

inline std::string machine_key(const std::string& name) {
  std::string k;
  for (char c : name) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      k += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!k.empty() && k.back() != '_') {
      k += '_';
    }
  }
  while (!k.empty() && k.back() == '_') k.pop_back();
  return k;
}

inline std::string to_machine(const VerificationReport& r) {
  std::ostringstream os;
  for (const auto& c : r.checks) {
    os << "check." << machine_key(c.name) << '=' << to_string(c.status) << '\n';
    if (!c.details.empty()) os << "detail." << machine_key(c.name) << '=' << c.details << '\n';
  }
  os << "result=" << (r.passed() ? "pass" : r.any(CheckStatus::fail) ? "fail" : "undetermined") << '\n';
  return os.str();
}

inline std::string dims_text(const DecoratedRep& r) {
  std::ostringstream os;
  const Quiver& q = r.quiver();
  for (std::size_t v = 0; v < q.num_vertices(); ++v) {
    if (v) os << ' ';
    os << q.vertex_id(v) << '=' << r.dim(v);
    if (r.dec(v)) os << '+' << r.dec(v);
  }
  return os.str();
}

// Ranks of the maps along every path of length <= 2, keyed by arrow ids;
// a cheap invariant that must agree between isomorphic representations.
inline std::map<std::string, std::size_t> path_ranks(const DecoratedRep& r) {
  std::map<std::string, std::size_t> out;
  const Quiver& q = r.quiver();
  for (std::size_t a = 0; a < q.num_arrows(); ++a) {
    out[q.arrow(a).id] = rank(r.map(a));
    for (auto b : q.arrows_out_of(q.arrow(a).head))
      out[q.arrow(b).id + "." + q.arrow(a).id] = rank(r.map(b) * r.map(a));
  }
  return out;
}

inline std::string hom_dump(const IsoResult& iso) {
  std::ostringstream os;
  os << "dim Hom = " << iso.hom_dim << '\n';
  for (std::size_t k = 0; k < iso.hom_basis.size(); ++k) {
    os << "basis " << k << ':';
    for (const auto& m : iso.hom_basis[k]) os << ' ' << to_string(m);
    os << '\n';
  }
  return os.str();
}

// Copy of q with vertex `from` called `to`; arrow order and ids are kept.
inline Quiver rename_vertex(const Quiver& q, const std::string& from, const std::string& to) {
  Quiver r;
  for (const auto& v : q.vertices()) r.add_vertex(v == from ? to : v);
  for (const auto& a : q.arrows()) r.add_arrow(a.id, a.tail, a.head);
  return r;
}

// Carries a representation of mu_j(Q(tau)) onto (Q(sigma), S(sigma)) using
// the arrow matching; twisted arrows change sign.
inline DecoratedRep transfer_rep(const DecoratedRep& mu, const FlipResult& f, const QP& target, const ArrowMatch& m,
                                 bool twist) {
  const Quiver& tq = target.q();
  const Quiver& mq = mu.quiver();
  auto name = [&](const std::string& v) { return v == f.old_arc ? f.new_arc : v; };
  std::vector<std::size_t> dims(tq.num_vertices()), dec(tq.num_vertices());
  for (std::size_t v = 0; v < mq.num_vertices(); ++v) {
    std::size_t w = tq.vertex(name(mq.vertex_id(v)));
    dims[w] = mu.dim(v);
    dec[w] = mu.dec(v);
  }
  auto tw = flip_twist_arrows(f);
  std::vector<Matrix> maps(tq.num_arrows());
  for (std::size_t x = 0; x < tq.num_arrows(); ++x) maps[x] = Matrix(dims[tq.arrow(x).head], dims[tq.arrow(x).tail]);
  for (std::size_t a = 0; a < mq.num_arrows(); ++a) {
    const std::string& id = mq.arrow(a).id;
    auto it = m.ids.find(id);
    if (it == m.ids.end()) {
      if (!mu.map(a).is_zero()) throw std::logic_error("unmatched arrow '" + id + "' acts nontrivially");
      continue;
    }
    Matrix mat = mu.map(a);
    if (twist && std::find(tw.begin(), tw.end(), id) != tw.end()) mat = -mat;
    maps[tq.arrow_index(it->second)] = mat;
  }
  return DecoratedRep(target, dims, maps, dec);
}

// mu_j(S(tau)) pushed along the matching (twist applied) onto Q(sigma).
inline Potential transfer_potential(const QP& mutated, const FlipResult& f, const QP& target, const ArrowMatch& m,
                                    bool twist) {
  QuiverPtr renamed = share(rename_vertex(mutated.q(), f.old_arc, f.new_arc));
  PathElement moved(renamed, target.truncation());
  for (const auto& [p, c] : mutated.potential.terms()) moved.add(p, c);
  Substitution phi(renamed, target.quiver, target.truncation());
  auto tw = flip_twist_arrows(f);
  for (const auto& [src, dst] : m.ids) {
    Rational sign = twist && std::find(tw.begin(), tw.end(), src) != tw.end() ? -1 : 1;
    phi.set(src, PathElement::arrow(target.quiver, target.truncation(), target.q().arrow_index(dst)) * sign);
  }
  return Potential(substitute(phi, moved));
}

struct FlipVerification {
  FlipResult flip;
  ArcCurve curve_sigma;
  std::optional<DecoratedRep> rep_tau, rep_sigma, mutated, transferred;
  std::optional<IsoResult> iso;
  std::vector<long> g_sigma, g_mutated;
  VerificationReport report;
};

struct VerifyOptions {
  std::uint64_t seed = kDefaultIsoSeed;
  bool twist = true;
  std::string new_label;
  std::size_t truncation = kDefaultTruncation;
};

inline FlipVerification verify_flip(const Triangulation& t, const ArcCurve& curve, const std::string& j,
                                    const VerifyOptions& opt = {}) {
  FlipVerification out{flip(t, j, opt.new_label), {}, {}, {}, {}, {}, {}, {}, {}, {}};
  VerificationReport& rep = out.report;
  const FlipResult& f = out.flip;

  ArcRepresentation at = arc_representation_detailed(t, curve, surface_qp(t, opt.truncation));
  out.rep_tau = at.rep;
  auto bad = relation_violations(*out.rep_tau);
  rep.add("relations of M(tau)", bad.empty(), std::to_string(bad.size()) + " violated",
          bad.empty() ? "" : bad.front());
  rep.artifacts.emplace_back("M(tau)", to_text(*out.rep_tau));

  out.curve_sigma = transport_arc(t, curve, f);
  rep.artifacts.emplace_back("curve in sigma", save_arc(f.sigma, out.curve_sigma));
  out.rep_sigma = arc_representation_detailed(f.sigma, out.curve_sigma, surface_qp(f.sigma, opt.truncation)).rep;
  bad = relation_violations(*out.rep_sigma);
  rep.add("relations of M(sigma)", bad.empty(), std::to_string(bad.size()) + " violated",
          bad.empty() ? "" : bad.front());
  rep.artifacts.emplace_back("M(sigma)", to_text(*out.rep_sigma));

  const QP& target = out.rep_sigma->qp();
  out.mutated = mutate_rep(*out.rep_tau, j);
  const QP& mqp = out.mutated->qp();
  ArrowMatch match = match_flip_arrows(f, mqp.q(), target.q());
  rep.add("arrow matching", match.complete(),
          std::to_string(match.by_role) + " by role, " + std::to_string(match.by_id) + " by id, " +
              std::to_string(match.by_endpoints) + " by endpoints",
          match.complete() ? "" : "unmatched mutated arrows: " + std::to_string(match.unmatched_source.size()));
  if (!match.complete()) return out;

  for (bool twist : {opt.twist, !opt.twist}) {
    Potential moved = transfer_potential(mqp, f, target, match, twist);
    bool same = cyclically_equivalent(moved, target.potential);
    // Equality is stronger than the right-equivalence the flip guarantees,
    // so a mismatch is only reported.
    CheckStatus st = same && twist == opt.twist ? CheckStatus::pass : CheckStatus::info;
    rep.add(std::string("potential equality ") + (twist ? "with" : "without") + " twist", st,
            same ? "cyclically equal" : "differs", same ? "" : to_text(moved));
  }

  out.transferred = transfer_rep(*out.mutated, f, target, match, opt.twist);
  rep.artifacts.emplace_back("mu_j M(tau) on Q(sigma)", to_text(*out.transferred));
  const bool dims_ok = out.transferred->dims() == out.rep_sigma->dims() && out.transferred->decs() == out.rep_sigma->decs();
  rep.add("dimension vectors", dims_ok, dims_text(*out.transferred) + " vs " + dims_text(*out.rep_sigma));

  auto r1 = path_ranks(*out.transferred), r2 = path_ranks(*out.rep_sigma);
  std::string first_diff;
  for (const auto& [k, v] : r1)
    if (r2.at(k) != v && first_diff.empty()) first_diff = k + ": " + std::to_string(v) + " vs " + std::to_string(r2.at(k));
  rep.add("path ranks", first_diff.empty(), std::to_string(r1.size()) + " paths compared", first_diff);

  out.iso = is_isomorphic(*out.transferred, *out.rep_sigma, opt.seed);
  CheckStatus st = out.iso->verdict == IsoVerdict::isomorphic       ? CheckStatus::pass
                   : out.iso->verdict == IsoVerdict::not_isomorphic ? CheckStatus::fail
                                                                     : CheckStatus::undetermined;
  rep.add("mu_j M(tau) isomorphic to M(sigma)", st, out.iso->reason,
          st == CheckStatus::pass ? "" : hom_dump(*out.iso));

  if (!check_relations(*out.rep_sigma) || !check_relations(*out.transferred)) {
    rep.add("g-vector agrees", CheckStatus::fail, "relations fail, g-vector undefined");
    return out;
  }
  out.g_sigma = g_vector(*out.rep_sigma);
  out.g_mutated = g_vector(*out.transferred);
  auto gtext = [](const std::vector<long>& g) {
    std::string s;
    for (auto x : g) s += (s.empty() ? "" : " ") + std::to_string(x);
    return s;
  };
  rep.add("g-vector agrees", out.g_sigma == out.g_mutated, gtext(out.g_sigma) + " vs " + gtext(out.g_mutated));
  return out;
}

}  // namespace qpsurf
