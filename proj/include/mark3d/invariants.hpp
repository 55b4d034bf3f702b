#pragma once

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "mark3d/triangulation.hpp"

namespace mark3d {

struct SpineStats {
  int spine_vertices = 0;
  int spine_edges = 0;
  int spine_regions = 0;
  int euler = 0;
};

// Throws EulerMismatch if V - E + R differs from half the summed link characteristics.
SpineStats spine_stats(const Triangulation& tri);

// H_1 as rank plus invariant factors (each > 1, ascending, each dividing the next).
struct Homology {
  int rank = 0;
  std::vector<boost::multiprecision::cpp_int> torsion;
  std::string str() const;
  bool operator==(const Homology& o) const { return rank == o.rank && torsion == o.torsion; }
};

// Computed on the dual cell structure (the spine), which is homotopy equivalent to M.
Homology homology_h1(const Triangulation& tri);

// "sphere", "torus", "genus 2", "Klein bottle", "nonorientable chi=-1", ...
std::string describe(const LinkSurface& s);

// Sorted multiset of vertex-link surfaces.
std::vector<LinkSurface> link_multiset(const Triangulation& tri);

enum class SingularityType {
  SelfAdjacentTriangle,
  SelfAdjacentEdges,
  MultipleAdjacencyTriangle,
  MultipleAdjacencyEdges,
  SelfAdjacentVertices,
  MultipleAdjacencyVertices,
};

const char* to_string(SingularityType t);

struct SingularityFinding {
  SingularityType type;
  std::vector<int> tets;
  std::vector<int> edges;       // witnessing edge classes
  bool witness_marked = false;  // every witnessing edge is marked
  bool allowed = false;         // residual type permitted next to marked edges
};

struct SingularityReport {
  std::vector<SingularityFinding> findings;
  bool empty() const { return findings.empty(); }
  bool only_allowed() const;
};

SingularityReport singularity_report(const MarkedTriangulation& m);

// Tetrahedra containing the given edge class (its closed star), sorted, unique.
std::vector<int> star_tets(const Triangulation& tri, int edge_class);

}  // namespace mark3d
