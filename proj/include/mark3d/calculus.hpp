#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mark3d/moves.hpp"

namespace mark3d {

struct SearchBudget {
  int max_tets = 7;
  long max_states = 200000;
  int max_depth = 64;
  double max_seconds = 300.0;
};

struct Certificate {
  Signature start;
  Signature end;
  std::vector<MoveInstance> moves;
  std::vector<Signature> steps;  // signature after each move (may be empty)

  // Replays from `from` and checks every recorded signature.
  bool verify(const MarkedTriangulation& from) const;
};

// Replays `moves` from `start`; per-step signatures are optional.
Certificate make_certificate(const MarkedTriangulation& start, const std::vector<MoveInstance>& moves,
                             bool with_steps = true);

// V = three mp+ and one mp- (needs two tetrahedra).
Certificate decompose_v(const MarkedTriangulation& m, const MoveInstance& va_plus);
// L = va+ followed by mp pairs that slide the lune endpoint.
Certificate decompose_l(const MarkedTriangulation& m, const MoveInstance& la_plus);
// C = va+ and four mp moves inside the ball.
Certificate decompose_c(const MarkedTriangulation& m, const MoveInstance& ca_plus);

// Removes the arch tetrahedron (folded along a valence-1 edge) among `tets`
// and closes the gap; on a ca+ output this gives the ba+ output.
std::optional<MarkedTriangulation> remove_arch(const MarkedTriangulation& m, const std::vector<int>& tets);

// Splits an unmarked edge class by a new vertex with one ba+ and mp moves.
struct Subdivision {
  MarkedTriangulation result;
  std::vector<MoveInstance> moves;
  int new_vertex_tet = -1;  // a tetrahedron containing the new vertex
};
Subdivision subdivide_edge(const MarkedTriangulation& m, int edge_class);
Certificate subdivide_edge_certificate(const MarkedTriangulation& m, int edge_class);

struct DesingularizeOptions {
  int max_iterations = 100000;
  bool with_step_signatures = false;
};

struct DesingularizeResult {
  MarkedTriangulation result;
  Certificate certificate;
};

DesingularizeResult desingularize(const MarkedTriangulation& m, DesingularizeOptions opt = {});

// Programmatic check of the desingularization postconditions.
struct PostconditionReport {
  bool allowed_singularities = true;  // only loop / parallel marked / loop-star findings
  bool marked_stars = true;           // 3-tetrahedron stars of marked edges
  bool loop_cones = true;             // cone pattern around marked loops
  bool disjoint_stars = true;         // neighbourhoods of marked edges are separated
  std::vector<std::string> problems;
  bool ok() const { return allowed_singularities && marked_stars && loop_cones && disjoint_stars; }
};
PostconditionReport check_desingularized(const MarkedTriangulation& m);

// Bidirectional search over Va/MPa moves. With mpa_only, only MPa moves are used.
std::optional<Certificate> connect(const MarkedTriangulation& a, const MarkedTriangulation& b,
                                   const SearchBudget& budget, bool mpa_only = false);

struct Domination {
  Signature dominator;
  Certificate from_a;
  Certificate from_b;
};

// Common positive (la+/mpa+) successor. Throws Error(InvariantMismatch).
std::optional<Domination> dominate(const MarkedTriangulation& a, const MarkedTriangulation& b,
                                   const SearchBudget& budget);

// Every triangulation reachable from `start` through admissible moves of the
// given kinds without exceeding max_tets; nodes are sorted by signature.
struct MoveGraph {
  struct Edge {
    int from;
    int to;
    MoveInstance move;
  };
  std::vector<Signature> nodes;
  std::vector<MarkedTriangulation> reps;
  std::vector<Edge> edges;
  bool truncated = false;  // stopped at max_nodes
};
MoveGraph move_graph(const MarkedTriangulation& start, int max_tets, const std::vector<MoveKind>& kinds,
                     long max_nodes = 100000);

}  // namespace mark3d
