#include <doctest.h>

#include "support.hpp"

using namespace mark3d;
using support::load_marked;

TEST_CASE("va+ is admissible at every tetrahedron in three ways") {
  for (const auto& [name, m] : support::small_corpus()) {
    CAPTURE(name);
    CHECK(enumerate_moves(m, {MoveKind::VaPlus}).size() == static_cast<std::size_t>(3 * m.size()));
  }
}

TEST_CASE("mp- is not admissible on a marked valence-three edge") {
  const MarkedTriangulation base = load_marked("fig8.tri");
  const MarkedTriangulation up = apply_move(base, {MoveKind::MPaPlus, {0, 0}}).result;
  int tested = 0;
  for (const auto& e : up.skeleton().edges) {
    if (e.valence() != 3) continue;
    const MarkedTriangulation m(up.tri(), {e.id});
    const auto admissible = enumerate_moves(m, {MoveKind::MPaMinus});
    for (const auto& mv : admissible) CHECK(m.skeleton().edge_of[mv.site[0]][mv.site[1]] != e.id);
    const Corner c = e.cycle[0];
    CHECK_THROWS_AS(apply_move(m, {MoveKind::MPaMinus, {c.tet, edge_index(c.a, c.b)}}), Error);
    // Unmarked, the same edge is admissible.
    CHECK_NOTHROW(apply_move(up, {MoveKind::MPaMinus, {c.tet, edge_index(c.a, c.b)}}));
    ++tested;
  }
  CHECK(tested >= 1);
}

TEST_CASE("every enumerated move is inverted by its recorded inverse") {
  for (const auto& [name, m] : support::small_corpus()) {
    if (m.size() > 3) continue;
    CAPTURE(name);
    const Signature s = signature(m);
    for (const auto& mv : enumerate_moves(m)) {
      CAPTURE(mv.encode());
      const ApplyResult r = apply_move(m, mv);
      CHECK(r.record.before == s);
      CHECK(r.result.size() == m.size() + tet_delta(mv.kind));
      CHECK(r.record.inverse.kind == inverse_kind(mv.kind));
      CHECK(invert(r.record) == r.record.inverse);
      const ApplyResult back = apply_move(r.result, r.record.inverse);
      CHECK(back.record.after == s);
      CHECK(r.result.marked_count() == m.marked_count());
    }
  }
}

TEST_CASE("positive moves are tagged as such") {
  for (MoveKind k : kAllKinds) {
    CHECK(is_positive(k) == (tet_delta(k) > 0));
    CHECK(tet_delta(inverse_kind(k)) == -tet_delta(k));
    CHECK(parse_kind(to_string(k)) == k);
  }
}

TEST_CASE("move encoding round trip") {
  const MoveInstance mv{MoveKind::LaPlus, {0, 3, 1, 4, 2}};
  CHECK(mv.encode() == "la+:0,3,1,4,2");
  CHECK(MoveInstance::decode(mv.encode()) == mv);
  try {
    MoveInstance::decode("zz+:1");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SyntaxError);
  }
}

TEST_CASE("inadmissible sites raise typed errors") {
  const MarkedTriangulation m = load_marked("one_tet_s3.tri");
  CHECK_THROWS_AS(apply_move(m, {MoveKind::MPaPlus, {5, 0}}), Error);
  CHECK_THROWS_AS(apply_move(m, {MoveKind::VaMinus, {0, 0}}), Error);
  CHECK_THROWS_AS(apply_move(m, {MoveKind::VaPlus, {0, 3}}), Error);
}

TEST_CASE("replay names the failing step") {
  const MarkedTriangulation m = load_marked("fig8.tri");
  try {
    replay(m, {{MoveKind::VaPlus, {0, 0}}, {MoveKind::BaMinus, {0, 0}}});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("step 1") != std::string::npos);
  }
}

TEST_CASE("links and homology survive every a-move") {
  for (const auto& [name, m] : support::small_corpus()) {
    if (m.size() > 3) continue;
    CAPTURE(name);
    const Homology h = homology_h1(m.tri());
    const auto links = link_multiset(m.tri());
    for (const auto& mv : enumerate_moves(m)) {
      const MarkedTriangulation r = apply_move(m, mv).result;
      CHECK(homology_h1(r.tri()) == h);
      auto after = link_multiset(r.tri());
      if (mv.kind == MoveKind::BaPlus || mv.kind == MoveKind::BaMinus) {
        auto more = after, fewer = links;
        if (mv.kind == MoveKind::BaMinus) std::swap(more, fewer);
        fewer.push_back(LinkSurface{2, true});
        std::sort(fewer.begin(), fewer.end());
        CHECK(fewer == more);
      } else {
        CHECK(after == links);
      }
    }
  }
}

TEST_CASE("ca+ has twelve variants") { CHECK(ca_variants().size() == 12); }
