#include "mark3d/invariants.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace mark3d {

using boost::multiprecision::cpp_int;

SpineStats spine_stats(const Triangulation& tri) {
  const Skeleton& sk = tri.skeleton();
  SpineStats s;
  s.spine_vertices = tri.size();
  s.spine_edges = static_cast<int>(sk.triangles.size());
  s.spine_regions = static_cast<int>(sk.edges.size());
  s.euler = s.spine_vertices - s.spine_edges + s.spine_regions;
  int twice = 0;
  for (const auto& v : sk.vertices) twice += v.link.euler;
  if (twice != 2 * s.euler)
    throw Error(ErrorKind::EulerMismatch, "V - E + R = " + std::to_string(s.euler) +
                                              " but link characteristics sum to " + std::to_string(twice));
  return s;
}

namespace {

using Matrix = std::vector<std::vector<cpp_int>>;

cpp_int abs_val(const cpp_int& x) { return x < 0 ? cpp_int(-x) : x; }

// Diagonal of an equivalent diagonal matrix (nonzero entries only).
std::vector<cpp_int> diagonalize(Matrix a) {
  std::vector<cpp_int> diag;
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  std::size_t k = 0;
  while (k < rows && k < cols) {
    // Pivot: smallest nonzero absolute value in the trailing block.
    std::size_t pr = rows, pc = cols;
    cpp_int best = 0;
    for (std::size_t i = k; i < rows; ++i)
      for (std::size_t j = k; j < cols; ++j)
        if (a[i][j] != 0 && (best == 0 || abs_val(a[i][j]) < best)) {
          best = abs_val(a[i][j]);
          pr = i;
          pc = j;
        }
    if (pr == rows) break;
    std::swap(a[k], a[pr]);
    for (auto& row : a) std::swap(row[k], row[pc]);
    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = k + 1; i < rows; ++i) {
        if (a[i][k] == 0) continue;
        cpp_int q = a[i][k] / a[k][k];
        for (std::size_t j = k; j < cols; ++j) a[i][j] -= q * a[k][j];
        if (a[i][k] != 0) {
          std::swap(a[k], a[i]);
          clean = false;
        }
      }
      for (std::size_t j = k + 1; j < cols; ++j) {
        if (a[k][j] == 0) continue;
        cpp_int q = a[k][j] / a[k][k];
        for (std::size_t i = k; i < rows; ++i) a[i][j] -= q * a[i][k];
        if (a[k][j] != 0) {
          for (auto& row : a) std::swap(row[k], row[j]);
          clean = false;
        }
      }
    }
    diag.push_back(abs_val(a[k][k]));
    ++k;
  }
  return diag;
}

}  // namespace

std::string Homology::str() const {
  std::string s;
  if (rank > 0) s = rank == 1 ? "Z" : "Z^" + std::to_string(rank);
  for (const auto& t : torsion) {
    if (!s.empty()) s += " + ";
    s += "Z/" + t.str();
  }
  return s.empty() ? "0" : s;
}

Homology homology_h1(const Triangulation& tri) {
  const Skeleton& sk = tri.skeleton();
  const int n = tri.size();
  const std::size_t n_tri = sk.triangles.size();
  Matrix d2(n_tri, std::vector<cpp_int>(sk.edges.size(), 0));
  for (const auto& ec : sk.edges) {
    for (const Corner& c : ec.cycle) {
      const int tau = sk.triangle_of[c.tet][c.x];
      const auto& side0 = sk.triangles[tau].sides[0];
      d2[tau][ec.id] += (side0.first == c.tet && side0.second == c.x) ? 1 : -1;
    }
  }
  std::vector<cpp_int> diag = diagonalize(d2);
  // Spine is connected, so rank(d1) = n - 1 and rank(ker d1) = 2n - (n - 1).
  Homology h;
  h.rank = static_cast<int>(n_tri) - (n - 1) - static_cast<int>(diag.size());
  std::vector<cpp_int> tors;
  for (auto& d : diag)
    if (d > 1) tors.push_back(d);
  // Normalize to invariant factors.
  for (std::size_t i = 0; i < tors.size(); ++i)
    for (std::size_t j = i + 1; j < tors.size(); ++j) {
      cpp_int g = boost::multiprecision::gcd(tors[i], tors[j]);
      cpp_int l = tors[i] / g * tors[j];
      tors[i] = g;
      tors[j] = l;
    }
  for (auto& t : tors)
    if (t > 1) h.torsion.push_back(t);
  std::sort(h.torsion.begin(), h.torsion.end());
  return h;
}

std::string describe(const LinkSurface& s) {
  if (s.orientable) {
    if (s.euler == 2) return "sphere";
    if (s.euler == 0) return "torus";
    if (s.euler < 0 && s.euler % 2 == 0) return "genus " + std::to_string(1 - s.euler / 2);
  } else {
    if (s.euler == 1) return "projective plane";
    if (s.euler == 0) return "Klein bottle";
  }
  return std::string(s.orientable ? "orientable" : "nonorientable") + " chi=" + std::to_string(s.euler);
}

std::vector<LinkSurface> link_multiset(const Triangulation& tri) {
  std::vector<LinkSurface> out;
  for (const auto& v : tri.skeleton().vertices) out.push_back(v.link);
  std::sort(out.begin(), out.end());
  return out;
}

const char* to_string(SingularityType t) {
  switch (t) {
    case SingularityType::SelfAdjacentTriangle: return "self-adjacent-tet-along-triangle";
    case SingularityType::SelfAdjacentEdges: return "self-adjacent-tet-along-edges";
    case SingularityType::MultipleAdjacencyTriangle: return "multiple-adjacency-along-triangle";
    case SingularityType::MultipleAdjacencyEdges: return "multiple-adjacency-along-edges";
    case SingularityType::SelfAdjacentVertices: return "self-adjacency-along-vertices";
    case SingularityType::MultipleAdjacencyVertices: return "multiple-adjacency-along-vertices";
  }
  return "unknown";
}

bool SingularityReport::only_allowed() const {
  return std::all_of(findings.begin(), findings.end(), [](const SingularityFinding& f) { return f.allowed; });
}

std::vector<int> star_tets(const Triangulation& tri, int edge_class) {
  std::vector<int> out;
  for (const Corner& c : tri.skeleton().edges.at(edge_class).cycle) out.push_back(c.tet);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SingularityReport singularity_report(const MarkedTriangulation& m) {
  const Triangulation& tri = m.tri();
  const Skeleton& sk = tri.skeleton();
  const int n = tri.size();
  SingularityReport rep;

  // Edge classes lying in the closed star of some marked loop.
  std::vector<int> loop_owner(sk.edges.size(), -1);
  std::vector<std::set<int>> loop_star_tets;
  for (int id : m.marked()) {
    if (!sk.edges[id].is_loop) continue;
    std::set<int> tets;
    for (int t : star_tets(tri, id)) {
      tets.insert(t);
      for (int e = 0; e < 6; ++e) loop_owner[sk.edge_of[t][e]] = id;
    }
    loop_star_tets.push_back(tets);
  }
  auto in_same_loop_star = [&](int t1, int t2) {
    for (const auto& s : loop_star_tets)
      if (s.count(t1) && s.count(t2)) return true;
    return false;
  };

  for (int t = 0; t < n; ++t) {
    for (int f = 0; f < 4; ++f)
      for (int g = f + 1; g < 4; ++g)
        if (sk.triangle_of[t][f] == sk.triangle_of[t][g])
          rep.findings.push_back({SingularityType::SelfAdjacentTriangle, {t}, {}, false, false});
    std::map<int, int> count;
    for (int e = 0; e < 6; ++e) ++count[sk.edge_of[t][e]];
    for (auto [id, c] : count)
      if (c > 1)
        rep.findings.push_back({SingularityType::SelfAdjacentEdges, {t}, {id}, m.is_marked(id), false});
    std::set<int> loops;
    for (int e = 0; e < 6; ++e)
      if (sk.edges[sk.edge_of[t][e]].is_loop) loops.insert(sk.edge_of[t][e]);
    for (int id : loops) {
      bool mk = m.is_marked(id);
      rep.findings.push_back({SingularityType::SelfAdjacentVertices, {t}, {id}, mk, mk});
    }
  }

  // Pairs of distinct tetrahedra: shared triangles and shared edges.
  std::map<std::pair<int, int>, std::set<int>> shared_tri, shared_edge;
  for (const auto& tc : sk.triangles) {
    int a = tc.sides[0].first, b = tc.sides[1].first;
    if (a != b) shared_tri[{std::min(a, b), std::max(a, b)}].insert(tc.id);
  }
  for (const auto& ec : sk.edges) {
    std::vector<int> tets = star_tets(tri, ec.id);
    for (std::size_t i = 0; i < tets.size(); ++i)
      for (std::size_t j = i + 1; j < tets.size(); ++j) shared_edge[{tets[i], tets[j]}].insert(ec.id);
  }
  for (const auto& [pr, tris] : shared_tri)
    if (tris.size() > 1)
      rep.findings.push_back({SingularityType::MultipleAdjacencyTriangle, {pr.first, pr.second}, {}, false, false});
  for (const auto& [pr, edges] : shared_edge) {
    if (edges.size() <= 1) continue;
    bool ok = false;
    auto it = shared_tri.find(pr);
    if (it != shared_tri.end() && it->second.size() == 1) {
      const auto& side = sk.triangles[*it->second.begin()].sides[0];
      std::set<int> te;
      for (int v = 0; v < 4; ++v)
        for (int w = v + 1; w < 4; ++w)
          if (v != side.second && w != side.second) te.insert(sk.edge_of[side.first][edge_index(v, w)]);
      ok = te == edges;
    }
    if (ok) continue;
    std::vector<int> ev(edges.begin(), edges.end());
    bool mk = std::all_of(ev.begin(), ev.end(), [&](int id) { return m.is_marked(id); });
    rep.findings.push_back({SingularityType::MultipleAdjacencyEdges, {pr.first, pr.second}, ev, mk,
                            in_same_loop_star(pr.first, pr.second)});
  }

  // Distinct edge classes with the same endpoints.
  std::map<std::pair<int, int>, std::vector<int>> by_ends;
  for (const auto& ec : sk.edges) by_ends[{std::min(ec.v0, ec.v1), std::max(ec.v0, ec.v1)}].push_back(ec.id);
  for (const auto& [ends, ids] : by_ends) {
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (std::size_t j = i + 1; j < ids.size(); ++j) {
        int e1 = ids[i], e2 = ids[j];
        bool both_marked = m.is_marked(e1) && m.is_marked(e2);
        bool in_loop_star = loop_owner[e1] >= 0 && loop_owner[e1] == loop_owner[e2];
        std::vector<int> tets{sk.edges[e1].cycle.front().tet, sk.edges[e2].cycle.front().tet};
        rep.findings.push_back({SingularityType::MultipleAdjacencyVertices, tets, {e1, e2}, both_marked,
                                both_marked || in_loop_star});
      }
  }
  return rep;
}

}  // namespace mark3d
