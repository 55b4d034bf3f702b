#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "mark3d/triangulation.hpp"

namespace mark3d {

// Canonical byte string of a marked triangulation up to isomorphism.
struct Signature {
  std::string bytes;

  std::string hex() const;
  static Signature from_hex(const std::string& hex);
  auto operator<=>(const Signature&) const = default;
  bool operator==(const Signature&) const = default;
};

struct SignatureHash {
  std::size_t operator()(const Signature& s) const { return std::hash<std::string>{}(s.bytes); }
};

Signature signature(const MarkedTriangulation& m);
Signature signature(const Triangulation& tri);

// The relabeling realizing the signature: order[i] is the original tetrahedron
// placed at position i and labels[i] maps its original vertex labels to new ones.
struct CanonicalLabeling {
  std::vector<int> order;
  std::vector<Perm4> labels;
};
CanonicalLabeling canonical_labeling(const MarkedTriangulation& m);

// A mark-preserving isomorphism: tetrahedron t of the source goes to tets[t],
// with vertex labels mapped by labels[t].
struct Isomorphism {
  std::vector<int> tets;
  std::vector<Perm4> labels;
};

// Extends the assignment root_a -> (root_b, perm) to a full isomorphism if possible.
std::optional<Isomorphism> extend_isomorphism(const MarkedTriangulation& a, const MarkedTriangulation& b, int root_a,
                                              int root_b, Perm4 perm);
// Any isomorphism a -> b (tries every image of tetrahedron 0).
std::optional<Isomorphism> find_isomorphism(const MarkedTriangulation& a, const MarkedTriangulation& b);

// Applies a relabeling: tetrahedron t goes to position pos[t] with labels relabel[t].
MarkedTriangulation relabel(const MarkedTriangulation& m, const std::vector<int>& pos,
                            const std::vector<Perm4>& relabel);

}  // namespace mark3d
