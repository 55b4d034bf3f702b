#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mark3d/calculus.hpp"

namespace mark3d {

// A closed triangulation with a Hamiltonian set of link edges: every vertex is
// an endpoint of exactly two germs of link edges.
struct DistinguishedTriangulation {
  Triangulation tri;
  std::vector<int> link_edges;  // sorted edge-class ids

  // The same gluings with the link edges read as marked edges.
  MarkedTriangulation as_marked() const { return MarkedTriangulation(tri, link_edges); }
  std::vector<std::vector<int>> components() const;  // link cycles as vertex classes
};

// Throws NotClosed or GermCountViolation.
DistinguishedTriangulation check_hamiltonian(const Triangulation& tri, std::vector<int> link_edges);

// Admissible b-move: ba+ on `tet`, with the link edge `edge_class` (an edge of
// `tet`) replaced by the two edges joining its ends to the new vertex.
DistinguishedTriangulation distinguished_b_move(const DistinguishedTriangulation& d, int edge_class, int tet);
// Inverse: removes the vertex at label `vertex` of `tet`, whose star is a 1-to-4 pattern.
DistinguishedTriangulation distinguished_b_move_inverse(const DistinguishedTriangulation& d, int tet, int vertex);

struct DistinguishedStep {
  enum class Kind { BPlus, BMinus, MP } kind = Kind::MP;
  std::vector<int> site;  // b+: {edge class, tet}; b-: {tet, vertex}
  MoveInstance mp;        // for MP steps
  std::string encode() const;
};

struct DistinguishedCertificate {
  Signature start;
  Signature end;
  std::vector<DistinguishedStep> steps;
};

// Throws the error of the failing step.
DistinguishedTriangulation replay_distinguished(const DistinguishedTriangulation& d,
                                                const std::vector<DistinguishedStep>& steps);
Signature signature(const DistinguishedTriangulation& d);

// B-moves equalize the vertex counts, then an mpa-only search joins the two.
std::optional<DistinguishedCertificate> distinguished_connect(const DistinguishedTriangulation& a,
                                                              const DistinguishedTriangulation& b,
                                                              const SearchBudget& budget);

// (T, I, Z): ideal vertices I and length-zero edges Z, kept per class.
struct PartiallyTruncated {
  Triangulation tri;
  std::vector<int> ideal;  // sorted vertex-class ids
  std::vector<int> zero;   // sorted edge-class ids
  bool operator==(const PartiallyTruncated&) const = default;
};

// Throws ValidationError when an ideal vertex has a non-torus link or a zero edge ends at one.
PartiallyTruncated check_ptt(const Triangulation& tri, std::vector<int> ideal, std::vector<int> zero);

// The vertex classes that marked_to_ptt reads as ideal: torus links with no marked edge ending there.
std::vector<int> default_ideal(const MarkedTriangulation& m);

struct MarkedWithIdeal {
  MarkedTriangulation marked;
  std::vector<int> ideal;
};
MarkedWithIdeal ptt_to_marked(const PartiallyTruncated& p);

struct PttOptions {
  bool strict = false;  // sphere links become an error instead of a warning
};
// Z = marked; I from `ideal` when given, else default_ideal. Throws SphereBoundary in strict mode.
PartiallyTruncated marked_to_ptt(const MarkedTriangulation& m, PttOptions opt = {},
                                 std::vector<std::string>* warnings = nullptr,
                                 const std::optional<std::vector<int>>& ideal = std::nullopt);

}  // namespace mark3d
