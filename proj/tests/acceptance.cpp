// Prints one PASS/FAIL line per acceptance criterion; exits nonzero on any failure.
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "support.hpp"

using namespace mark3d;
using support::load_marked;
using support::since;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

bool is_a_move(MoveKind k) { return k != MoveKind::BaPlus && k != MoveKind::BaMinus; }

bool kinds_within(const Certificate& c, std::initializer_list<MoveKind> kinds) {
  for (const auto& mv : c.moves)
    if (std::find(kinds.begin(), kinds.end(), mv.kind) == kinds.end()) return false;
  return true;
}

// All outputs of enumerated moves on the corpus, shared by criteria 1 and 2.
std::vector<MarkedTriangulation> g_outputs;

Outcome moves_criterion() {
  Outcome o;
  const auto start = Clock::now();
  const auto corpus = support::small_corpus();
  long moves = 0;
  for (const auto& [name, m] : corpus) {
    if (m.size() > 4) o.fail(name + " has more than four tetrahedra");
    const Signature s = signature(m);
    const Homology h = homology_h1(m.tri());
    const auto links = link_multiset(m.tri());
    for (const auto& mv : enumerate_moves(m)) {
      ++moves;
      const std::string where = name + " " + mv.encode();
      ApplyResult r;
      try {
        r = apply_move(m, mv);
        if (apply_move(r.result, r.record.inverse).record.after != s) o.fail(where + ": inverse does not restore");
      } catch (const Error& e) {
        o.fail(where + ": " + e.what());
        continue;
      }
      g_outputs.push_back(r.result);
      if (r.result.marked_count() != m.marked_count()) o.fail(where + ": marked count changed");
      auto after = link_multiset(r.result.tri());
      if (is_a_move(mv.kind)) {
        if (homology_h1(r.result.tri()) != h) o.fail(where + ": H1 changed");
        if (after != links) o.fail(where + ": links changed");
      } else {
        auto more = after, fewer = links;
        if (mv.kind == MoveKind::BaMinus) std::swap(more, fewer);
        fewer.push_back(LinkSurface{2, true});
        std::sort(fewer.begin(), fewer.end());
        if (fewer != more) o.fail(where + ": links not changed by one sphere");
      }
    }
  }
  const double t = since(start);
  if (corpus.size() < 10) o.fail("fewer than ten inputs");
  if (t > 30) o.fail("took longer than 30 s");
  if (o.pass) o.detail = std::to_string(corpus.size()) + " inputs, " + std::to_string(moves) + " moves";
  return o;
}

Outcome counts_criterion() {
  Outcome o;
  const auto start = Clock::now();
  std::vector<MarkedTriangulation> all;
  for (const auto& [name, m] : support::small_corpus()) all.push_back(m);
  all.insert(all.end(), g_outputs.begin(), g_outputs.end());
  for (const auto& m : all) {
    const Triangulation& t = m.tri();
    const int n = t.size();
    int val = 0, chi = 0;
    for (const auto& e : t.skeleton().edges) val += e.valence();
    for (const auto& v : t.skeleton().vertices) chi += v.link.euler;
    if (static_cast<int>(t.skeleton().triangles.size()) != 2 * n) o.fail("#triangles != 2n");
    if (val != 6 * n) o.fail("valence sum != 6n");
    try {
      const SpineStats s = spine_stats(t);
      if (2 * (s.spine_vertices - s.spine_edges + s.spine_regions) != chi) o.fail("V-E+R != sum chi / 2");
    } catch (const Error& e) {
      o.fail(e.what());
    }
  }
  if (since(start) > 5) o.fail("took longer than 5 s");
  if (o.pass) o.detail = std::to_string(all.size()) + " triangulations";
  return o;
}

Outcome decomposition_criterion() {
  Outcome o;
  const auto start = Clock::now();
  int nv = 0, nl = 0, nc = 0;
  for (const auto& [name, m] : support::small_corpus()) {
    if (m.size() < 2 || m.size() > 3) continue;
    auto check = [&](MoveKind kind, auto decompose, int& count) {
      for (const auto& mv : enumerate_moves(m, {kind})) {
        const std::string where = name + " " + mv.encode();
        try {
          const Certificate c = decompose(m, mv);
          if (c.end != apply_move(m, mv).record.after) o.fail(where + ": end signature differs");
          if (!c.verify(m)) o.fail(where + ": certificate does not replay");
          if (kind == MoveKind::VaPlus && (c.moves.size() != 4 || !kinds_within(c, {MoveKind::MPaPlus, MoveKind::MPaMinus})))
            o.fail(where + ": not four mp moves");
          if (kind != MoveKind::VaPlus && !kinds_within(c, {MoveKind::VaPlus, MoveKind::MPaPlus, MoveKind::MPaMinus}))
            o.fail(where + ": moves other than va+/mpa");
        } catch (const Error& e) {
          o.fail(where + ": " + e.what());
        }
        ++count;
      }
    };
    check(MoveKind::VaPlus, decompose_v, nv);
    check(MoveKind::LaPlus, decompose_l, nl);
    check(MoveKind::CaPlus, decompose_c, nc);
  }
  if (since(start) > 60) o.fail("took longer than 60 s");
  if (o.pass)
    o.detail = "va+ " + std::to_string(nv) + ", la+ " + std::to_string(nl) + ", ca+ " + std::to_string(nc);
  return o;
}

Outcome desingularize_criterion() {
  Outcome o;
  const Triangulation f8 = load_marked("fig8.tri").tri();
  const std::vector<std::pair<std::string, MarkedTriangulation>> inputs{
      {"one tetrahedron", load_marked("one_tet_l41.tri")},
      {"marked loop", MarkedTriangulation(f8, {0})},
      {"two marked edges sharing endpoints", MarkedTriangulation(f8, {0, 1})}};
  std::ostringstream sizes;
  for (const auto& [name, m] : inputs) {
    const auto start = Clock::now();
    try {
      const DesingularizeResult r = desingularize(m);
      const PostconditionReport rep = check_desingularized(r.result);
      if (!singularity_report(r.result).only_allowed() || !rep.allowed_singularities)
        o.fail(name + ": disallowed singularity");
      if (!rep.marked_stars || !rep.loop_cones) o.fail(name + ": star check failed");
      if (!rep.disjoint_stars) o.fail(name + ": stars not disjoint");
      if (!r.certificate.verify(m)) o.fail(name + ": certificate does not replay");
      if (!kinds_within(r.certificate, {MoveKind::BaPlus, MoveKind::BaMinus, MoveKind::VaPlus, MoveKind::VaMinus,
                                        MoveKind::MPaPlus, MoveKind::MPaMinus}))
        o.fail(name + ": moves other than ba/va/mpa");
      sizes << " " << r.result.size();
    } catch (const Error& e) {
      o.fail(name + ": " + e.what());
    }
    if (since(start) > 120) o.fail(name + ": took longer than 2 min");
  }
  if (o.pass) o.detail = "3 inputs, result sizes" + sizes.str();
  return o;
}

// Random admissible va/mpa moves (at least `steps`), then greedy reduction back to at most three tetrahedra.
std::optional<MarkedTriangulation> scramble(MarkedTriangulation m, std::mt19937& rng, int steps) {
  const std::vector<MoveKind> kinds{MoveKind::MPaPlus, MoveKind::VaPlus, MoveKind::MPaMinus, MoveKind::VaMinus};
  for (int s = 0, guard = 0; s < steps && guard < 1000; ++guard) {
    const auto mv = enumerate_moves(m, kinds);
    if (mv.empty()) break;
    const MoveInstance& pick = mv[rng() % mv.size()];
    if (m.size() + tet_delta(pick.kind) > 6) continue;
    m = apply_move(m, pick, ApplyOptions{false}).result;
    ++s;
  }
  for (int guard = 0; m.size() > 3 && guard < 100; ++guard) {
    const auto down = enumerate_moves(m, {MoveKind::VaMinus, MoveKind::MPaMinus});
    if (down.empty()) break;
    m = apply_move(m, down[rng() % down.size()], ApplyOptions{false}).result;
  }
  if (m.size() < 2 || m.size() > 3) return std::nullopt;
  return m;
}

bool one_move_apart(const MarkedTriangulation& a, const Signature& b) {
  for (const auto& mv : enumerate_moves(a, {MoveKind::MPaPlus, MoveKind::MPaMinus, MoveKind::VaPlus, MoveKind::VaMinus}))
    if (apply_move(a, mv).record.after == b) return true;
  return false;
}

// Per base manifold: scrambled candidates, then the first pair no single move joins.
std::vector<std::pair<MarkedTriangulation, MarkedTriangulation>> search_pairs() {
  std::mt19937 rng(20261015);
  std::vector<std::pair<MarkedTriangulation, MarkedTriangulation>> pairs;
  for (auto f : {"one_tet_s3.tri", "one_tet_l41.tri", "l41_knot.tri", "fig8_marked.tri", "m003.tri"}) {
    const MarkedTriangulation base = support::load(f).as_marked();
    std::map<Signature, MarkedTriangulation> found;
    if (base.size() >= 2) found.emplace(signature(base), base);
    for (int attempt = 0; attempt < 60; ++attempt)
      if (const auto b = scramble(base, rng, 4 + attempt % 5)) found.emplace(signature(*b), *b);
    std::optional<std::pair<MarkedTriangulation, MarkedTriangulation>> pick;
    for (auto x = found.begin(); x != found.end() && !pick; ++x)
      for (auto y = std::next(x); y != found.end() && !pick; ++y)
        if (!one_move_apart(x->second, y->first)) pick = {x->second, y->second};
    if (!pick && found.size() >= 2) pick = {found.begin()->second, std::next(found.begin())->second};
    if (pick) pairs.push_back(*pick);
  }
  return pairs;
}

std::vector<std::pair<MarkedTriangulation, MarkedTriangulation>> g_pairs;

Outcome connect_criterion() {
  Outcome o;
  g_pairs = search_pairs();
  if (g_pairs.size() < 3) o.fail("fewer than three pairs");
  std::ostringstream lens;
  for (const auto& [a, b] : g_pairs) {
    const auto start = Clock::now();
    SearchBudget budget;
    budget.max_tets = 7;
    const auto c = connect(a, b, budget);
    if (!c) {
      o.fail("no va/mpa certificate for a " + std::to_string(a.size()) + "/" + std::to_string(b.size()) + " pair");
    } else {
      if (!c->verify(a) || c->end != signature(b)) o.fail("va/mpa certificate does not replay");
      if (!kinds_within(*c, {MoveKind::VaPlus, MoveKind::VaMinus, MoveKind::MPaPlus, MoveKind::MPaMinus}))
        o.fail("moves other than va/mpa");
      lens << " " << c->moves.size();
    }
    if (a.size() >= 2 && b.size() >= 2) {
      const auto p = connect(a, b, budget, true);
      if (!p) {
        o.fail("no mpa-only certificate");
      } else {
        if (!p->verify(a) || p->end != signature(b)) o.fail("mpa-only certificate does not replay");
        if (!kinds_within(*p, {MoveKind::MPaPlus, MoveKind::MPaMinus})) o.fail("mpa-only certificate uses va");
        lens << "/" << p->moves.size();
      }
    }
    if (since(start) > 300) o.fail("a pair took longer than 5 min");
  }
  if (o.pass) o.detail = std::to_string(g_pairs.size()) + " pairs, certificate lengths" + lens.str();
  return o;
}

Outcome dominate_criterion() {
  Outcome o;
  if (g_pairs.size() < 3) o.fail("fewer than three pairs");
  std::ostringstream sizes;
  for (const auto& [a, b] : g_pairs) {
    const auto start = Clock::now();
    SearchBudget budget;
    budget.max_tets = 8;
    try {
      const auto d = dominate(a, b, budget);
      if (!d) {
        o.fail("no dominator found");
        continue;
      }
      if (!d->from_a.verify(a) || !d->from_b.verify(b)) o.fail("certificate does not replay");
      if (d->from_a.end != d->dominator || d->from_b.end != d->dominator) o.fail("certificates end apart");
      if (!kinds_within(d->from_a, {MoveKind::LaPlus, MoveKind::MPaPlus}) ||
          !kinds_within(d->from_b, {MoveKind::LaPlus, MoveKind::MPaPlus}))
        o.fail("non-positive move in a dominating certificate");
      sizes << " " << replay(a, d->from_a.moves, false).final.size();
    } catch (const Error& e) {
      o.fail(e.what());
    }
    if (since(start) > 600) o.fail("a pair took longer than 10 min");
  }
  if (o.pass) o.detail = std::to_string(g_pairs.size()) + " pairs, dominator sizes" + sizes.str();
  return o;
}

Outcome oracle_criterion() {
  Outcome o;
  std::vector<std::pair<std::string, MarkedTriangulation>> starts;
  for (auto f : {"one_tet_s3.tri", "one_tet_l41.tri", "one_tet_l51.tri", "fig8.tri", "fig8_marked.tri", "m003.tri"})
    starts.push_back({f, load_marked(f)});
  starts.push_back({"s3 marked", MarkedTriangulation(load_marked("s3.tri").tri(), {0})});
  starts.push_back({"l41 knot", support::load("l41_knot.tri").as_marked()});
  std::size_t nodes = 0, edges = 0;
  for (const auto& [name, m] : starts) {
    const support::BruteGraph brute = support::brute_graph(m, 3);
    const support::BruteGraph engine = support::engine_graph(m, 3);
    if (brute.nodes != engine.nodes) o.fail(name + ": node sets differ");
    if (brute.edges != engine.edges) o.fail(name + ": edge multisets differ");
    nodes += brute.nodes.size();
    edges += brute.edges.size();
  }
  if (o.pass) o.detail = std::to_string(starts.size()) + " graphs, " + std::to_string(nodes) + " nodes, " +
                         std::to_string(edges) + " edges";
  return o;
}

Outcome applications_criterion() {
  Outcome o;
  const auto start = Clock::now();
  int trips = 0;
  std::vector<MarkedTriangulation> inputs;
  for (auto f : {"fig8.tri", "fig8_marked.tri", "m003.tri", "s3.tri", "one_tet_l41.tri"}) inputs.push_back(load_marked(f));
  inputs.push_back(MarkedTriangulation(load_marked("m003.tri").tri(), {1}));
  for (const auto& m : inputs) {
    try {
      const PartiallyTruncated p = marked_to_ptt(m);
      const MarkedWithIdeal back = ptt_to_marked(p);
      if (!(back.marked == m) || !(marked_to_ptt(back.marked, {}, nullptr, back.ideal) == p))
        o.fail("ptt round trip differs");
      ++trips;
    } catch (const Error& e) {
      o.fail(e.what());
    }
  }
  int bmoves = 0;
  for (auto f : {"s3_square.tri", "l41_knot.tri"}) {
    const DistinguishedTriangulation d = to_distinguished(support::load(f));
    for (int e : d.link_edges)
      for (int tet = 0; tet < d.tri.size(); ++tet) {
        try {
          const DistinguishedTriangulation up = distinguished_b_move(d, e, tet);
          check_hamiltonian(up.tri, up.link_edges);
          if (signature(distinguished_b_move_inverse(up, up.tri.size() - 4, 0)) != signature(d))
            o.fail("b-move inverse does not restore");
          ++bmoves;
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::Inapplicable) o.fail(e.what());
        }
      }
  }
  const DistinguishedTriangulation d = to_distinguished(support::load("s3_square.tri"));
  const MarkedTriangulation dm = d.as_marked();
  const MarkedTriangulation moved = apply_move(dm, enumerate_moves(dm, {MoveKind::MPaPlus}).front()).result;
  const DistinguishedTriangulation e{moved.tri(), moved.marked()};
  const auto c = distinguished_connect(d, e, SearchBudget{});
  if (!c || signature(replay_distinguished(d, c->steps)) != signature(e)) o.fail("distinguished connect failed");
  if (trips < 5) o.fail("fewer than five round trips");
  if (bmoves == 0) o.fail("no b-move applied");
  if (since(start) > 30) o.fail("took longer than 30 s");
  if (o.pass)
    o.detail = std::to_string(trips) + " round trips, " + std::to_string(bmoves) + " b-moves, connect in " +
               std::to_string(c->steps.size()) + " steps";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"moves: inverses, invariants, marked count", moves_criterion},
      {"count identities", counts_criterion},
      {"decompositions of va+, la+, ca+", decomposition_criterion},
      {"desingularization postconditions", desingularize_criterion},
      {"connect within 7 tetrahedra", connect_criterion},
      {"dominate within 8 tetrahedra", dominate_criterion},
      {"move graph against brute force", oracle_criterion},
      {"distinguished and partially truncated", applications_criterion},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(e.what());
    }
    std::printf("criterion %zu %s: %s (%s) [%.1f s]\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL",
                o.detail.c_str(), since(start));
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
