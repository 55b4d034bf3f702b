#pragma once

#include <utility>
#include <vector>

#include "engine.hpp"
#include "mark3d/moves.hpp"

namespace mark3d {

// One positive C-move variant: the 5-tetrahedron ball replacing a tetrahedron,
// its interior edges (pattern tet, edge) and the V + MP macro producing it.
struct CaEntry {
  engine::Pattern pattern;
  std::vector<std::pair<int, int>> interior_edges;
  CaVariant macro;
};

const std::vector<CaEntry>& ca_catalog();

}  // namespace mark3d
