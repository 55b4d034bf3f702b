// Shared corpus and brute-force oracles for the tests and the acceptance runner.
#pragma once

#include <algorithm>
#include <chrono>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "mark3d/applications.hpp"
#include "mark3d/calculus.hpp"
#include "mark3d/invariants.hpp"
#include "mark3d/io.hpp"

#ifndef MARK3D_DATA_DIR
#define MARK3D_DATA_DIR "tests/data"
#endif

namespace support {

using namespace mark3d;

inline TriFile load(const std::string& name) { return read_tri(std::string(MARK3D_DATA_DIR) + "/" + name); }
inline MarkedTriangulation load_marked(const std::string& name) { return load(name).as_marked(); }

inline double since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

// Valid inputs with at most four tetrahedra, marked and unmarked.
inline std::vector<std::pair<std::string, MarkedTriangulation>> small_corpus() {
  std::vector<std::pair<std::string, MarkedTriangulation>> c;
  for (const char* f : {"one_tet_s3.tri", "one_tet_l41.tri", "one_tet_l51.tri", "fig8.tri", "fig8_marked.tri",
                        "m003.tri", "s3.tri"})
    c.push_back({f, load_marked(f)});
  const MarkedTriangulation m003 = load_marked("m003.tri"), s3 = load_marked("s3.tri");
  c.push_back({"m003 marked", MarkedTriangulation(m003.tri(), {1})});
  c.push_back({"s3 marked", MarkedTriangulation(s3.tri(), {0})});
  c.push_back({"s3 two marked", MarkedTriangulation(s3.tri(), {0, 5})});
  const MarkedTriangulation f8 = load_marked("fig8_marked.tri");
  c.push_back({"fig8 marked after mpa+", apply_move(f8, {MoveKind::MPaPlus, {0, 0}}).result});
  c.push_back({"one-tet s3 after ba+", apply_move(load_marked("one_tet_s3.tri"), {MoveKind::BaPlus, {0}}).result});
  return c;
}

// ---------------------------------------------------------------------------
// Naive oracles. These use only the raw gluing table.

// Edge classes by union-find over face gluings; returns the class of (tet, edge) as its smallest member.
inline std::vector<std::array<int, 6>> naive_edge_classes(const Triangulation& tri) {
  const int n = tri.size();
  std::vector<int> parent(6 * n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int t = 0; t < n; ++t)
    for (int f = 0; f < 4; ++f) {
      const Gluing& g = tri.adj(t, f);
      for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) {
          if (a == f || b == f) continue;
          const int x = find(6 * t + edge_index(a, b)), y = find(6 * g.tet + edge_index(g.perm[a], g.perm[b]));
          parent[std::max(x, y)] = std::min(x, y);
        }
    }
  std::vector<std::array<int, 6>> out(n);
  for (int t = 0; t < n; ++t)
    for (int e = 0; e < 6; ++e) out[t][e] = find(6 * t + e);
  return out;
}

inline int naive_vertex_count(const Triangulation& tri) {
  const int n = tri.size();
  std::vector<int> parent(4 * n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int t = 0; t < n; ++t)
    for (int f = 0; f < 4; ++f)
      for (int v = 0; v < 4; ++v)
        if (v != f) parent[find(4 * t + v)] = find(4 * tri.adj(t, f).tet + tri.adj(t, f).perm[v]);
  int count = 0;
  for (int x = 0; x < 4 * n; ++x) count += find(x) == x;
  return count;
}

// Euler characteristic of each vertex link, keyed by a representative
// 4*tet+vertex of the vertex class.
inline std::map<int, int> naive_link_euler(const Triangulation& tri) {
  const int n = tri.size();
  std::vector<int> parent(4 * n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int t = 0; t < n; ++t)
    for (int f = 0; f < 4; ++f)
      for (int v = 0; v < 4; ++v)
        if (v != f) parent[find(4 * t + v)] = find(4 * tri.adj(t, f).tet + tri.adj(t, f).perm[v]);
  std::map<int, int> faces;
  for (int t = 0; t < n; ++t)
    for (int v = 0; v < 4; ++v) faces[find(4 * t + v)] += 1;
  // Ends of each edge class: orient every corner and union the ends through gluings.
  std::vector<int> endp(12 * n);
  std::iota(endp.begin(), endp.end(), 0);
  auto fe = [&](int x) {
    while (endp[x] != x) x = endp[x] = endp[endp[x]];
    return x;
  };
  auto slot = [](int t, int a, int b) { return 12 * t + 3 * a + (b - (b > a)); };
  for (int t = 0; t < n; ++t)
    for (int f = 0; f < 4; ++f) {
      const Gluing& g = tri.adj(t, f);
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          if (a != b && a != f && b != f) endp[fe(slot(t, a, b))] = fe(slot(g.tet, g.perm[a], g.perm[b]));
    }
  std::map<int, std::set<int>> verts;
  for (int t = 0; t < n; ++t)
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        if (a != b) verts[find(4 * t + a)].insert(fe(slot(t, a, b)));
  std::map<int, int> chi;
  // F corner triangles, 3F/2 edges, one vertex per edge end.
  for (auto& [root, f] : faces) chi[root] = static_cast<int>(verts[root].size()) - 3 * f / 2 + f;
  return chi;
}

// Canonical form by exhaustive relabeling: every tetrahedron order and every
// vertex relabeling of every tetrahedron; the smallest encoding wins.
inline std::vector<int> naive_canon(const MarkedTriangulation& m) {
  const int n = m.size();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<int> best;
  std::vector<int> lab(n, 0);
  std::vector<int> pos(n);
  do {
    for (int i = 0; i < n; ++i) pos[order[i]] = i;
    std::fill(lab.begin(), lab.end(), 0);
    for (;;) {
      std::vector<int> code;
      code.reserve(n * 10);
      for (int i = 0; i < n; ++i) {
        const int t = order[i];
        const Perm4 lt = Perm4::from_index(lab[t]);
        const Perm4 inv = lt.inverse();
        for (int nf = 0; nf < 4; ++nf) {
          const int f = inv[nf];
          const Gluing& g = m.tri().adj(t, f);
          const Perm4 p = Perm4::from_index(lab[g.tet]) * g.perm * inv;
          code.push_back(pos[g.tet]);
          code.push_back(p.index());
        }
        int mask = 0;
        for (int e = 0; e < 6; ++e)
          if (m.edge_mask(t) >> e & 1) mask |= 1 << edge_index(lt[kEdgeVertices[e][0]], lt[kEdgeVertices[e][1]]);
        code.push_back(mask);
      }
      if (best.empty() || code < best) best = code;
      int k = 0;
      while (k < n && ++lab[k] == 24) lab[k++] = 0;
      if (k == n) break;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  best.insert(best.begin(), n);
  return best;
}

// Independent 2-3 rewrite across the triangle of face `f` of `t`. New tet i
// carries labels (apex of t, apex across, the two triangle vertices other than
// the i-th). Returns nothing when both sides lie in one tetrahedron.
inline std::optional<MarkedTriangulation> naive_two_three(const MarkedTriangulation& m, int t, int f) {
  const Triangulation& tri = m.tri();
  const int n = tri.size();
  const Gluing across = tri.adj(t, f);
  if (across.tet == t) return std::nullopt;
  const int A = t, B = across.tet;
  std::vector<int> tv;
  for (int v = 0; v < 4; ++v)
    if (v != f) tv.push_back(v);
  // phiA[i], phiB[i]: new labels of tet i -> old labels in A and in B (label 1 / 0 have no image there).
  std::vector<int> keep;
  for (int x = 0; x < n; ++x)
    if (x != A && x != B) keep.push_back(x);
  const int base = static_cast<int>(keep.size());
  std::vector<int> pos(n, -1);
  for (int i = 0; i < base; ++i) pos[keep[i]] = i;
  std::array<std::array<int, 4>, 3> inA{}, inB{};
  for (int i = 0; i < 3; ++i) {
    const int j = tv[(i + 1) % 3], k = tv[(i + 2) % 3];
    const int lo = std::min(j, k), hi = std::max(j, k);
    inA[i] = {f, tv[i], lo, hi};  // label 1 stands for the vertex of A opposite this new face
    inB[i] = {across.perm[tv[i]], across.perm[f], across.perm[lo], across.perm[hi]};
  }
  // Old external face (tet, face) -> (new tet, new face, map new labels -> old labels).
  struct Slot {
    int tet, face;
    Perm4 phi;
  };
  std::map<std::pair<int, int>, Slot> slot;
  for (int x : keep)
    for (int g = 0; g < 4; ++g) slot[{x, g}] = {pos[x], g, Perm4()};
  for (int i = 0; i < 3; ++i) {
    slot[{A, tv[i]}] = {base + i, 1, Perm4(inA[i][0], inA[i][1], inA[i][2], inA[i][3])};
    slot[{B, across.perm[tv[i]]}] = {base + i, 0, Perm4(inB[i][0], inB[i][1], inB[i][2], inB[i][3])};
  }
  GluingTable table(base + 3);
  for (const auto& [old, s] : slot) {
    const Gluing& g = tri.adj(old.first, old.second);
    const Slot& d = slot.at({g.tet, g.perm[old.second]});
    table[s.tet][s.face] = {d.tet, d.phi.inverse() * g.perm * s.phi};
  }
  // Internal faces: tet i face 2 or 3 is the triangle (a, b, w) shared with the tet missing w.
  for (int i = 0; i < 3; ++i)
    for (int face = 2; face < 4; ++face) {
      const int w = inA[i][face == 2 ? 3 : 2];  // the triangle vertex kept
      const int other = std::find(tv.begin(), tv.end(), inA[i][face]) - tv.begin();
      const int oface = inA[other][2] == w ? 3 : 2;
      const int w_here = face == 2 ? 3 : 2, w_there = oface == 2 ? 3 : 2;
      int img[4];
      img[0] = 0;
      img[1] = 1;
      img[w_here] = w_there;
      img[face] = oface;
      table[base + i][face] = {base + other, Perm4(img[0], img[1], img[2], img[3])};
    }
  std::vector<std::uint8_t> masks(base + 3, 0);
  for (int x : keep) masks[pos[x]] = m.edge_mask(x);
  for (int i = 0; i < 3; ++i)
    for (int e = 0; e < 6; ++e) {
      const int a = kEdgeVertices[e][0], b = kEdgeVertices[e][1];
      if (a == 0 && b == 1) continue;
      bool marked;
      if (a != 0 && b != 0 && (a == 1 || b == 1)) {
        marked = m.edge_mask(B) >> edge_index(inB[i][a], inB[i][b]) & 1;
      } else {
        marked = m.edge_mask(A) >> edge_index(inA[i][a], inA[i][b]) & 1;
      }
      if (marked) masks[base + i] |= 1 << e;
    }
  return MarkedTriangulation::from_masks(Triangulation::from_table(table), masks);
}

struct BruteGraph {
  std::set<std::vector<int>> nodes;
  std::multiset<std::tuple<std::vector<int>, std::vector<int>, int>> edges;  // (from, to, kind)
};

// Every raw site tuple of every kind is tried; admissible ones are deduplicated
// by a naive key of the region they act on.
inline BruteGraph brute_graph(const MarkedTriangulation& start, int max_tets) {
  BruteGraph g;
  std::vector<MarkedTriangulation> queue{start};
  g.nodes.insert(naive_canon(start));
  for (std::size_t at = 0; at < queue.size(); ++at) {
    const MarkedTriangulation m = queue[at];
    const std::vector<int> from = naive_canon(m);
    const int n = m.size();
    const auto cls = naive_edge_classes(m.tri());
    for (MoveKind kind : kAllKinds) {
      if (n + tet_delta(kind) > max_tets || n + tet_delta(kind) < 1) continue;
      std::vector<std::vector<int>> sites;
      auto range = [&](std::vector<int> bounds) {
        std::vector<int> cur(bounds.size(), 0);
        for (;;) {
          sites.push_back(cur);
          std::size_t k = 0;
          while (k < cur.size() && ++cur[k] == bounds[k]) cur[k++] = 0;
          if (k == cur.size()) break;
        }
      };
      switch (kind) {
        case MoveKind::MPaPlus: range({n, 4}); break;
        case MoveKind::MPaMinus:
        case MoveKind::LaMinus: range({n, 6}); break;
        case MoveKind::VaPlus:
        case MoveKind::VaMinus: range({n, 3}); break;
        case MoveKind::LaPlus: range({n, 6, 6 * n, 6 * n, 3}); break;
        case MoveKind::CaPlus: range({n, 12}); break;
        case MoveKind::CaMinus: range({12, n, 24}); break;
        case MoveKind::BaPlus: range({n}); break;
        case MoveKind::BaMinus: range({n, 4}); break;
      }
      std::set<std::vector<int>> keys;
      for (const auto& site : sites) {
        if (kind == MoveKind::LaPlus && site[2] >= site[3]) continue;
        ApplyResult r;
        try {
          if (kind == MoveKind::MPaPlus) {
            auto two_three = naive_two_three(m, site[0], site[1]);
            if (!two_three) continue;
            r.result = *two_three;
          } else {
            r = apply_move(m, {kind, site}, ApplyOptions{false});
          }
        } catch (const Error&) {
          continue;
        }
        std::vector<int> key;
        switch (kind) {
          case MoveKind::MPaPlus: {
            const Gluing& gl = m.tri().adj(site[0], site[1]);
            key = {std::min(site[0] * 4 + site[1], gl.tet * 4 + gl.perm[site[1]]),
                   std::max(site[0] * 4 + site[1], gl.tet * 4 + gl.perm[site[1]])};
            break;
          }
          case MoveKind::MPaMinus:
          case MoveKind::LaMinus: key = {cls[site[0]][site[1]]}; break;
          case MoveKind::LaPlus: key = {cls[site[0]][site[1]], site[2], site[3], site[4]}; break;
          case MoveKind::VaMinus:
          case MoveKind::CaMinus:
          case MoveKind::BaMinus:
            for (int t = 0; t < n; ++t)
              if (r.old_to_new[t] < 0) key.push_back(t);
            break;
          default: key = site; break;
        }
        if (!keys.insert(key).second) continue;
        const std::vector<int> to = naive_canon(r.result);
        g.edges.insert({from, to, static_cast<int>(kind)});
        if (g.nodes.insert(to).second) queue.push_back(r.result);
      }
    }
  }
  return g;
}

// The engine's graph translated into naive canonical forms.
inline BruteGraph engine_graph(const MarkedTriangulation& start, int max_tets) {
  const MoveGraph mg = move_graph(start, max_tets, {std::begin(kAllKinds), std::end(kAllKinds)});
  BruteGraph g;
  std::vector<std::vector<int>> canon;
  for (const auto& rep : mg.reps) {
    canon.push_back(naive_canon(rep));
    g.nodes.insert(canon.back());
  }
  for (const auto& e : mg.edges) g.edges.insert({canon[e.from], canon[e.to], static_cast<int>(e.move.kind)});
  return g;
}

// ---------------------------------------------------------------------------
// Pairs of distinct small triangulations of one manifold, reached by random
// admissible moves and reduced again.

inline std::vector<MarkedTriangulation> same_manifold_small(const MarkedTriangulation& a, unsigned seed, int count) {
  std::map<Signature, MarkedTriangulation> seen{{signature(a), a}};
  std::vector<MarkedTriangulation> frontier{a};
  const std::vector<MoveKind> kinds{MoveKind::MPaPlus, MoveKind::MPaMinus, MoveKind::VaPlus, MoveKind::VaMinus};
  for (int depth = 0; depth < 4; ++depth) {
    std::vector<MarkedTriangulation> next;
    for (const auto& m : frontier)
      for (const auto& mv : enumerate_moves(m, kinds)) {
        if (m.size() + tet_delta(mv.kind) > 5) continue;
        try {
          ApplyResult r = apply_move(m, mv);
          if (seen.emplace(r.record.after, r.result).second) next.push_back(r.result);
        } catch (const Error&) {
        }
      }
    frontier = next;
  }
  std::vector<MarkedTriangulation> small;
  for (auto& [s, m] : seen)
    if (m.size() >= 2 && m.size() <= 3 && s != signature(a)) small.push_back(m);
  std::vector<MarkedTriangulation> out;
  for (int k = 0; k < count && !small.empty(); ++k) out.push_back(small[(seed + 7u * k) % small.size()]);
  return out;
}

}  // namespace support
