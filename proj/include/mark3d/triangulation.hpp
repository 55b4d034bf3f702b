#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "mark3d/error.hpp"
#include "mark3d/perm.hpp"

namespace mark3d {

// Face f of `tet` is glued to face perm[f] of the target; vertex i maps to perm[i].
struct Gluing {
  int tet = -1;
  Perm4 perm;
  bool operator==(const Gluing& o) const { return tet == o.tet && perm == o.perm; }
};

using GluingTable = std::vector<std::array<Gluing, 4>>;

struct GluingEntry {
  int tet;
  int face;
  int target;
  Perm4 perm;
};

// A wedge of an edge class: tetrahedron `tet` with edge (a,b); the walk around
// the edge leaves through face x and entered through face y.
struct Corner {
  int tet;
  std::uint8_t a, b, x, y;
  bool operator==(const Corner& o) const {
    return tet == o.tet && a == o.a && b == o.b && x == o.x && y == o.y;
  }
};

struct EdgeClass {
  int id = 0;
  std::vector<Corner> cycle;
  int v0 = 0, v1 = 0;
  bool is_loop = false;
  int valence() const { return static_cast<int>(cycle.size()); }
};

struct LinkSurface {
  int euler = 0;
  bool orientable = true;
  bool is_sphere() const { return euler == 2; }
  bool is_torus() const { return euler == 0 && orientable; }
  bool operator==(const LinkSurface& o) const { return euler == o.euler && orientable == o.orientable; }
  bool operator<(const LinkSurface& o) const {
    return euler != o.euler ? euler < o.euler : orientable < o.orientable;
  }
};

struct VertexClass {
  int id = 0;
  std::vector<std::pair<int, int>> members;  // (tet, vertex)
  LinkSurface link;
};

struct TriangleClass {
  int id = 0;
  std::array<std::pair<int, int>, 2> sides;  // (tet, face), sides[0] < sides[1]
};

struct Skeleton {
  std::vector<EdgeClass> edges;
  std::vector<VertexClass> vertices;
  std::vector<TriangleClass> triangles;
  std::vector<std::array<int, 6>> edge_of;
  std::vector<std::array<int, 4>> vertex_of;
  std::vector<std::array<int, 4>> triangle_of;
};

class Triangulation {
 public:
  Triangulation() = default;

  // Validating constructors; throw mark3d::Error.
  static Triangulation build(int n_tets, const std::vector<GluingEntry>& entries);
  static Triangulation from_table(GluingTable table);

  int size() const { return static_cast<int>(table_.size()); }
  const Gluing& adj(int tet, int face) const { return table_[tet][face]; }
  const GluingTable& table() const { return table_; }
  const Skeleton& skeleton() const { return *skel_; }

  bool operator==(const Triangulation& o) const { return table_ == o.table_; }

 private:
  GluingTable table_;
  std::shared_ptr<const Skeleton> skel_;
};

// Structural checks shared by build and the move engine (no skeleton needed).
void check_table(const GluingTable& table);
Skeleton compute_skeleton(const GluingTable& table);

// Canonical corner cycle of the edge class containing (tet, edge).
std::vector<Corner> edge_cycle(const Triangulation& tri, int edge_class);

LinkSurface vertex_link(const Triangulation& tri, int vertex_class);

// A triangulation with a set of marked edge classes. Marks are stored per
// tetrahedron edge and kept closed under the edge-class relation.
class MarkedTriangulation {
 public:
  MarkedTriangulation() = default;
  explicit MarkedTriangulation(Triangulation tri);
  MarkedTriangulation(Triangulation tri, const std::vector<int>& marked_classes);

  // Marks every edge class containing a flagged tetrahedron edge.
  static MarkedTriangulation from_masks(Triangulation tri, std::vector<std::uint8_t> edge_masks,
                                        std::vector<std::uint8_t> vertex_tags = {});

  const Triangulation& tri() const { return tri_; }
  int size() const { return tri_.size(); }
  const Skeleton& skeleton() const { return tri_.skeleton(); }

  std::vector<int> marked() const;
  bool is_marked(int edge_class) const;
  int marked_count() const;
  std::uint8_t edge_mask(int tet) const { return masks_[tet]; }
  const std::vector<std::uint8_t>& edge_masks() const { return masks_; }

  // Auxiliary per-corner vertex tags carried through moves (not part of identity).
  std::uint8_t vertex_tags(int tet) const { return vtags_[tet]; }
  const std::vector<std::uint8_t>& vertex_tag_masks() const { return vtags_; }
  bool vertex_tagged(int vertex_class) const;
  MarkedTriangulation with_all_vertices_tagged() const;

  bool operator==(const MarkedTriangulation& o) const {
    return tri_ == o.tri_ && masks_ == o.masks_;
  }

 private:
  Triangulation tri_;
  std::vector<std::uint8_t> masks_;
  std::vector<std::uint8_t> vtags_;
};

}  // namespace mark3d
