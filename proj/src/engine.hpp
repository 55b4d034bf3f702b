#pragma once

// Low-level rewriting of gluing tables. Faces may be free (tet == -1), which
// lets the same constructions run on small local patches.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "mark3d/triangulation.hpp"

namespace mark3d::engine {

struct Work {
  GluingTable table;
  std::vector<std::uint8_t> masks;
  std::vector<std::uint8_t> tags;

  int size() const { return static_cast<int>(table.size()); }
};

Work from_marked(const MarkedTriangulation& m);
MarkedTriangulation to_marked(const Work& w);

// A face of a freshly created tetrahedron: glued inside the new patch, or
// taking over the gluing of a face (tet, face) of a removed tetrahedron.
// For external slots `perm` maps the new labels to the removed tetrahedron's labels.
struct Slot {
  bool external = false;
  int tet = -1;
  int face = -1;
  Perm4 perm;
};

struct FreshTet {
  std::array<Slot, 4> faces;
};

inline Slot internal(int tet, int face, Perm4 perm) { return Slot{false, tet, face, perm}; }
inline Slot external(int tet, int face, Perm4 perm) { return Slot{true, tet, face, perm}; }

struct Rewrite {
  std::vector<int> old_to_new;  // -1 for removed tetrahedra
  int first_new = 0;            // new tetrahedra occupy [first_new, size)
};

// Removes `removed` and appends `fresh`; the new tetrahedra are placed last in order.
Rewrite replace_ball(Work& w, std::vector<int> removed, const std::vector<FreshTet>& fresh);

// Walk around an edge; nullopt if a free face is met.
Corner next_corner(const Work& w, const Corner& c);
std::optional<std::vector<Corner>> walk_edge(const Work& w, const Corner& start);
Corner corner_for(int tet, int a, int b);

// Individual constructions. Preconditions are checked by the caller.
Rewrite mp_plus(Work& w, int tet, int face);
Rewrite mp_minus(Work& w, const std::vector<Corner>& cycle);
Rewrite va_plus(Work& w, int tet, int k);
Rewrite va_minus(Work& w, int p, int k);
Rewrite ba_plus(Work& w, int tet);
Rewrite ba_minus(Work& w, int tet, int v);
Rewrite la_plus(Work& w, const std::vector<Corner>& cycle, int i, int j);
Rewrite la_minus(Work& w, const Corner& d);

// Standard labels -> tetrahedron labels for the Va site choice k.
Perm4 va_frame(int k);

// Data describing a Va- site, if the pattern is present.
struct VaSite {
  int t, p, q;
  Perm4 rho_t, rho_q;
};
std::optional<VaSite> va_minus_site(const Work& w, int p, int k);

struct BaSite {
  std::array<int, 4> tets;  // indexed by label of the first corner
  std::array<Perm4, 4> frames;
};
std::optional<BaSite> ba_minus_site(const Work& w, int tet, int v);

// A ball pattern with boundary identified with the faces of one tetrahedron.
struct Pattern {
  int size = 0;
  std::vector<std::array<Gluing, 4>> inner;  // tet == -1 marks a boundary face
  // boundary[t][f]: (face of the reference tetrahedron, labels t -> reference labels)
  std::vector<std::array<std::pair<int, Perm4>, 4>> boundary;
};

struct PatternMatch {
  std::vector<int> tets;       // pattern tet -> tetrahedron
  std::vector<Perm4> frames;   // pattern labels -> tetrahedron labels
};

std::optional<PatternMatch> match_pattern(const Work& w, const Pattern& pat, int anchor, Perm4 frame);
Rewrite contract_pattern(Work& w, const Pattern& pat, const PatternMatch& match);
Rewrite expand_pattern(Work& w, const Pattern& pat, int tet, Perm4 frame);

}  // namespace mark3d::engine
