#include <doctest.h>

#include "support.hpp"

using namespace mark3d;
using support::load_marked;

namespace {

bool only_kinds(const Certificate& c, std::initializer_list<MoveKind> kinds) {
  for (const auto& mv : c.moves)
    if (std::find(kinds.begin(), kinds.end(), mv.kind) == kinds.end()) return false;
  return true;
}

}  // namespace

TEST_CASE("va+ is three mp+ and one mp-") {
  const MarkedTriangulation m = load_marked("fig8_marked.tri");
  for (const auto& mv : enumerate_moves(m, {MoveKind::VaPlus})) {
    CAPTURE(mv.encode());
    const Certificate c = decompose_v(m, mv);
    REQUIRE(c.moves.size() == 4);
    int plus = 0;
    for (const auto& x : c.moves) plus += x.kind == MoveKind::MPaPlus;
    CHECK(plus == 3);
    CHECK(c.moves.back().kind == MoveKind::MPaMinus);
    CHECK(c.end == apply_move(m, mv).record.after);
    CHECK(c.verify(m));
  }
}

TEST_CASE("va+ on one tetrahedron has no mp decomposition") {
  const MarkedTriangulation m = load_marked("one_tet_s3.tri");
  CHECK_THROWS_AS(decompose_v(m, {MoveKind::VaPlus, {0, 0}}), Error);
}

TEST_CASE("la+ decomposes into va+ and mp moves") {
  for (auto f : {"fig8.tri", "fig8_marked.tri"}) {
    const MarkedTriangulation m = load_marked(f);
    for (const auto& mv : enumerate_moves(m, {MoveKind::LaPlus})) {
      CAPTURE(mv.encode());
      const Certificate c = decompose_l(m, mv);
      CHECK(c.moves.front().kind == MoveKind::VaPlus);
      CHECK(only_kinds(c, {MoveKind::VaPlus, MoveKind::MPaPlus, MoveKind::MPaMinus}));
      CHECK(c.end == apply_move(m, mv).record.after);
      CHECK(c.verify(m));
    }
  }
}

TEST_CASE("ca+ decomposes into va+ and four mp moves") {
  const MarkedTriangulation m = load_marked("fig8_marked.tri");
  for (const auto& mv : enumerate_moves(m, {MoveKind::CaPlus})) {
    CAPTURE(mv.encode());
    const Certificate c = decompose_c(m, mv);
    CHECK(c.moves.size() == 5);
    CHECK(c.moves.front().kind == MoveKind::VaPlus);
    CHECK(c.end == apply_move(m, mv).record.after);
    CHECK(c.verify(m));
  }
}

TEST_CASE("removing the arch of a ca+ ball gives the ba+ result") {
  const MarkedTriangulation m = load_marked("fig8.tri");
  for (const auto& mv : enumerate_moves(m, {MoveKind::CaPlus})) {
    const ApplyResult r = apply_move(m, mv);
    std::vector<int> ball;
    for (int t = r.first_new; t < r.result.size(); ++t) ball.push_back(t);
    const auto removed = remove_arch(r.result, ball);
    REQUIRE(removed.has_value());
    CHECK(signature(*removed) == apply_move(m, {MoveKind::BaPlus, {mv.site[0]}}).record.after);
  }
}

TEST_CASE("edge subdivision adds one tetrahedron per unit of valence") {
  const MarkedTriangulation s3 = load_marked("s3.tri");
  const MarkedTriangulation big = apply_move(s3, {MoveKind::BaPlus, {0}}).result;
  int tested = 0;
  for (const auto& e : big.skeleton().edges) {
    std::set<int> star;
    for (const auto& c : e.cycle) star.insert(c.tet);
    if (star.size() != e.cycle.size()) continue;
    const Subdivision s = subdivide_edge(big, e.id);
    CHECK(s.result.size() == big.size() + e.valence());
    CHECK(s.moves.size() == static_cast<std::size_t>(e.valence()));
    CHECK(s.result.skeleton().vertices.size() == big.skeleton().vertices.size() + 1);
    CHECK(subdivide_edge_certificate(big, e.id).verify(big));
    ++tested;
  }
  CHECK(tested > 0);
}

TEST_CASE("marked edges are not subdivided") {
  const MarkedTriangulation m(load_marked("s3.tri").tri(), {0});
  try {
    subdivide_edge(m, 0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MarkedEdge);
  }
}

TEST_CASE("desingularizing one tetrahedron") {
  const MarkedTriangulation m = load_marked("one_tet_l41.tri");
  const DesingularizeResult r = desingularize(m);
  const PostconditionReport rep = check_desingularized(r.result);
  for (const auto& p : rep.problems) MESSAGE(p);
  CHECK(rep.ok());
  CHECK(singularity_report(r.result).only_allowed());
  CHECK(r.certificate.verify(m));
  CHECK(only_kinds(r.certificate, {MoveKind::BaPlus, MoveKind::BaMinus, MoveKind::VaPlus, MoveKind::VaMinus,
                                   MoveKind::MPaPlus, MoveKind::MPaMinus}));
  CHECK(homology_h1(r.result.tri()) == homology_h1(m.tri()));
}

TEST_CASE("singularity report on the figure-eight") {
  const SingularityReport rep = singularity_report(load_marked("fig8.tri"));
  CHECK_FALSE(rep.empty());
  CHECK_FALSE(rep.only_allowed());
}

TEST_CASE("connect two triangulations one move apart") {
  const MarkedTriangulation a = load_marked("fig8_marked.tri");
  const MarkedTriangulation b = apply_move(a, {MoveKind::MPaPlus, {0, 0}}).result;
  const auto c = connect(a, b, SearchBudget{});
  REQUIRE(c.has_value());
  CHECK(c->verify(a));
  CHECK(c->end == signature(b));
  const auto same = connect(a, a, SearchBudget{});
  REQUIRE(same.has_value());
  CHECK(same->moves.empty());
}

TEST_CASE("dominate refuses different manifolds") {
  try {
    dominate(load_marked("fig8.tri"), load_marked("m003.tri"), SearchBudget{});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvariantMismatch);
  }
}

TEST_CASE("dominate two triangulations one move apart") {
  const MarkedTriangulation a = load_marked("fig8.tri");
  const MarkedTriangulation b = apply_move(a, {MoveKind::MPaPlus, {0, 0}}).result;
  SearchBudget budget;
  budget.max_tets = 8;
  const auto d = dominate(a, b, budget);
  REQUIRE(d.has_value());
  CHECK(d->from_a.verify(a));
  CHECK(d->from_b.verify(b));
  CHECK(d->from_a.end == d->dominator);
  CHECK(d->from_b.end == d->dominator);
  CHECK(only_kinds(d->from_a, {MoveKind::LaPlus, MoveKind::MPaPlus}));
  CHECK(only_kinds(d->from_b, {MoveKind::LaPlus, MoveKind::MPaPlus}));
}

TEST_CASE("move graph is closed under inverses") {
  const MoveGraph g = move_graph(load_marked("one_tet_l41.tri"), 3, {std::begin(kAllKinds), std::end(kAllKinds)});
  CHECK_FALSE(g.truncated);
  CHECK(std::is_sorted(g.nodes.begin(), g.nodes.end()));
  std::multiset<std::pair<int, int>> fwd, rev;
  for (const auto& e : g.edges) {
    fwd.insert({e.from, e.to});
    rev.insert({e.to, e.from});
  }
  // Every move has an inverse move; multiplicities can differ, reachability cannot.
  for (const auto& [x, y] : fwd) CHECK(rev.count({x, y}) > 0);
}
