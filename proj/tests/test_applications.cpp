#include <doctest.h>

#include "support.hpp"

using namespace mark3d;
using support::load;

namespace {

DistinguishedTriangulation square() { return to_distinguished(load("s3_square.tri")); }

}  // namespace

TEST_CASE("hamiltonian link check") {
  const DistinguishedTriangulation d = square();
  CHECK(d.components().size() == 1);
  CHECK(d.link_edges.size() == 4);
  try {
    check_hamiltonian(d.tri, {});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::GermCountViolation);
  }
  try {
    check_hamiltonian(d.tri, {d.link_edges[0], d.link_edges[1], d.link_edges[2]});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::GermCountViolation);
  }
}

TEST_CASE("a knot in a one-tetrahedron lens space") {
  const DistinguishedTriangulation d = to_distinguished(load("l41_knot.tri"));
  CHECK(d.components().size() == 1);
  CHECK(d.tri.skeleton().vertices.size() == 1);
}

TEST_CASE("b-moves keep the link hamiltonian and invert") {
  const DistinguishedTriangulation d = square();
  const Signature s = signature(d);
  int done = 0;
  for (int e : d.link_edges)
    for (int tet = 0; tet < d.tri.size(); ++tet) {
      const DistinguishedTriangulation up = distinguished_b_move(d, e, tet);
      CHECK_NOTHROW(check_hamiltonian(up.tri, up.link_edges));
      CHECK(up.tri.size() == d.tri.size() + 3);
      CHECK(up.link_edges.size() == d.link_edges.size() + 1);
      CHECK(up.components().size() == d.components().size());
      const DistinguishedTriangulation back = distinguished_b_move_inverse(up, up.tri.size() - 4, 0);
      CHECK(signature(back) == s);
      ++done;
    }
  CHECK(done == 8);
}

TEST_CASE("b+ needs the link edge inside the tetrahedron") {
  const DistinguishedTriangulation d = to_distinguished(load("l41_knot.tri"));
  CHECK_THROWS_AS(distinguished_b_move(d, d.link_edges[0], 3), Error);
}

TEST_CASE("connecting distinguished triangulations") {
  const DistinguishedTriangulation d = square();
  const MarkedTriangulation m = d.as_marked();
  int done = 0;
  for (const auto& mv : enumerate_moves(m, {MoveKind::MPaPlus})) {
    const MarkedTriangulation r = apply_move(m, mv).result;
    const DistinguishedTriangulation e{r.tri(), r.marked()};
    const auto c = distinguished_connect(d, e, SearchBudget{});
    REQUIRE(c.has_value());
    CHECK(signature(replay_distinguished(d, c->steps)) == signature(e));
    ++done;
  }
  CHECK(done > 0);
  const DistinguishedTriangulation bigger = distinguished_b_move(d, d.link_edges[0], 0);
  const auto c = distinguished_connect(bigger, d, SearchBudget{});
  REQUIRE(c.has_value());
  CHECK(c->steps.back().kind == DistinguishedStep::Kind::BMinus);
  CHECK(signature(replay_distinguished(bigger, c->steps)) == signature(d));
}

TEST_CASE("partially truncated round trip") {
  for (auto f : {"fig8.tri", "fig8_marked.tri", "m003.tri"}) {
    CAPTURE(f);
    const MarkedTriangulation m = support::load_marked(f);
    std::vector<std::string> warnings;
    const PartiallyTruncated p = marked_to_ptt(m, {}, &warnings);
    CHECK(p.zero == m.marked());
    const MarkedWithIdeal back = ptt_to_marked(p);
    CHECK(back.marked == m);
    CHECK(marked_to_ptt(back.marked, {}, nullptr, back.ideal) == p);
  }
}

TEST_CASE("ideal vertices need torus links and no zero edges") {
  const MarkedTriangulation f8 = support::load_marked("fig8_marked.tri");
  CHECK(default_ideal(f8).empty());
  CHECK(default_ideal(support::load_marked("fig8.tri")).size() == 1);
  try {
    check_ptt(f8.tri(), {0}, f8.marked());
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ValidationError);
  }
  try {
    check_ptt(support::load_marked("s3.tri").tri(), {0}, {});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ValidationError);
  }
}

TEST_CASE("sphere links warn, or fail in strict mode") {
  const MarkedTriangulation s3 = support::load_marked("s3.tri");
  std::vector<std::string> warnings;
  marked_to_ptt(s3, {}, &warnings);
  CHECK_FALSE(warnings.empty());
  try {
    marked_to_ptt(s3, {true});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SphereBoundary);
  }
}
