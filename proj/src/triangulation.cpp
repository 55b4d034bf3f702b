#include "mark3d/triangulation.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace mark3d {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::DanglingFace: return "DanglingFace";
    case ErrorKind::NonInvolutive: return "NonInvolutive";
    case ErrorKind::SelfFace: return "SelfFace";
    case ErrorKind::BadPermutation: return "BadPermutation";
    case ErrorKind::InvalidEdge: return "InvalidEdge";
    case ErrorKind::Disconnected: return "Disconnected";
    case ErrorKind::NotASurface: return "NotASurface";
    case ErrorKind::EulerMismatch: return "EulerMismatch";
    case ErrorKind::NotAdmissible: return "NotAdmissible";
    case ErrorKind::StandardnessLost: return "StandardnessLost";
    case ErrorKind::Inapplicable: return "Inapplicable";
    case ErrorKind::MarkedEdge: return "MarkedEdge";
    case ErrorKind::ValenceTooSmall: return "ValenceTooSmall";
    case ErrorKind::InvariantMismatch: return "InvariantMismatch";
    case ErrorKind::NotClosed: return "NotClosed";
    case ErrorKind::GermCountViolation: return "GermCountViolation";
    case ErrorKind::NotInLink: return "NotInLink";
    case ErrorKind::SphereBoundary: return "SphereBoundary";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::AmbiguousMode: return "AmbiguousMode";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::PhaseLimit: return "PhaseLimit";
  }
  return "Unknown";
}

namespace {

std::string face_name(int t, int f) {
  return "(" + std::to_string(t) + "," + std::to_string(f) + ")";
}

int find_root(std::vector<int>& parent, int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

void check_table(const GluingTable& table) {
  const int n = static_cast<int>(table.size());
  if (n < 1) throw Error(ErrorKind::DanglingFace, "no tetrahedra");
  for (int t = 0; t < n; ++t) {
    for (int f = 0; f < 4; ++f) {
      const Gluing& g = table[t][f];
      if (g.tet < 0) throw Error(ErrorKind::DanglingFace, "face " + face_name(t, f) + " is unglued");
      if (g.tet >= n)
        throw Error(ErrorKind::BadPermutation, "face " + face_name(t, f) + " targets missing tetrahedron");
      const int f2 = g.perm[f];
      if (g.tet == t && f2 == f)
        throw Error(ErrorKind::SelfFace, "face " + face_name(t, f) + " glued to itself");
      const Gluing& back = table[g.tet][f2];
      if (back.tet != t || back.perm != g.perm.inverse())
        throw Error(ErrorKind::NonInvolutive,
                    "gluing of " + face_name(t, f) + " is not matched by " + face_name(g.tet, f2));
    }
  }
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  for (int t = 0; t < n; ++t)
    for (int f = 0; f < 4; ++f) parent[find_root(parent, t)] = find_root(parent, table[t][f].tet);
  for (int t = 1; t < n; ++t)
    if (find_root(parent, t) != find_root(parent, 0))
      throw Error(ErrorKind::Disconnected, "tetrahedron " + std::to_string(t) + " not connected to 0");
}

Skeleton compute_skeleton(const GluingTable& table) {
  const int n = static_cast<int>(table.size());
  Skeleton sk;
  sk.edge_of.assign(n, {-1, -1, -1, -1, -1, -1});
  sk.vertex_of.assign(n, {-1, -1, -1, -1});
  sk.triangle_of.assign(n, {-1, -1, -1, -1});

  // Triangles.
  for (int t = 0; t < n; ++t) {
    for (int f = 0; f < 4; ++f) {
      if (sk.triangle_of[t][f] >= 0) continue;
      const Gluing& g = table[t][f];
      TriangleClass tc;
      tc.id = static_cast<int>(sk.triangles.size());
      tc.sides = {std::make_pair(t, f), std::make_pair(g.tet, g.perm[f])};
      sk.triangle_of[t][f] = tc.id;
      sk.triangle_of[g.tet][g.perm[f]] = tc.id;
      sk.triangles.push_back(tc);
    }
  }

  // Vertices by union-find over corners.
  std::vector<int> parent(4 * n);
  std::iota(parent.begin(), parent.end(), 0);
  for (int t = 0; t < n; ++t)
    for (int f = 0; f < 4; ++f) {
      const Gluing& g = table[t][f];
      for (int v = 0; v < 4; ++v) {
        if (v == f) continue;
        int a = find_root(parent, 4 * t + v), b = find_root(parent, 4 * g.tet + g.perm[v]);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  std::vector<int> root_id(4 * n, -1);
  for (int t = 0; t < n; ++t)
    for (int v = 0; v < 4; ++v) {
      int r = find_root(parent, 4 * t + v);
      if (root_id[r] < 0) {
        root_id[r] = static_cast<int>(sk.vertices.size());
        VertexClass vc;
        vc.id = root_id[r];
        sk.vertices.push_back(vc);
      }
      sk.vertex_of[t][v] = root_id[r];
      sk.vertices[root_id[r]].members.emplace_back(t, v);
    }

  // Edges by walking around each edge.
  for (int t = 0; t < n; ++t) {
    for (int e = 0; e < 6; ++e) {
      if (sk.edge_of[t][e] >= 0) continue;
      const int id = static_cast<int>(sk.edges.size());
      EdgeClass ec;
      ec.id = id;
      int a = kEdgeVertices[e][0], b = kEdgeVertices[e][1];
      int x = -1, y = -1;
      for (int v = 0; v < 4; ++v) {
        if (v == a || v == b) continue;
        if (x < 0) x = v; else y = v;
      }
      const Corner start{t, static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b),
                         static_cast<std::uint8_t>(x), static_cast<std::uint8_t>(y)};
      Corner c = start;
      std::vector<std::pair<int, int>> touched;
      while (true) {
        const int ce = edge_index(c.a, c.b);
        if (sk.edge_of[c.tet][ce] >= 0) {
          throw Error(ErrorKind::InvalidEdge, "edge " + std::to_string(e) + " of tetrahedron " +
                                                  std::to_string(t) + " is identified with itself reversed");
        }
        sk.edge_of[c.tet][ce] = id;
        ec.cycle.push_back(c);
        const Gluing& g = table[c.tet][c.x];
        Corner next{g.tet, static_cast<std::uint8_t>(g.perm[c.a]), static_cast<std::uint8_t>(g.perm[c.b]),
                    static_cast<std::uint8_t>(g.perm[c.y]), static_cast<std::uint8_t>(g.perm[c.x])};
        if (next == start) break;
        c = next;
      }
      ec.v0 = sk.vertex_of[t][a];
      ec.v1 = sk.vertex_of[t][b];
      ec.is_loop = ec.v0 == ec.v1;
      sk.edges.push_back(std::move(ec));
    }
  }

  // Links: chi = (#edge ends) - (3F/2) + F; orientability by sign propagation.
  std::vector<int> ends(sk.vertices.size(), 0);
  for (const auto& ec : sk.edges) {
    ++ends[ec.v0];
    ++ends[ec.v1];
  }
  std::vector<int> sign(4 * n, 0);
  for (auto& vc : sk.vertices) {
    const int f = static_cast<int>(vc.members.size());
    if ((3 * f) % 2 != 0) throw Error(ErrorKind::NotASurface, "odd number of link edges");
    vc.link.euler = ends[vc.id] - (3 * f) / 2 + f;
    vc.link.orientable = true;
    std::vector<std::pair<int, int>> stack{vc.members.front()};
    sign[4 * vc.members.front().first + vc.members.front().second] = 1;
    while (!stack.empty()) {
      auto [ct, cv] = stack.back();
      stack.pop_back();
      const int s = sign[4 * ct + cv];
      for (int face = 0; face < 4; ++face) {
        if (face == cv) continue;
        const Gluing& g = table[ct][face];
        const int nt = g.tet, nv = g.perm[cv];
        const int want = -s * g.perm.sign();
        int& ns = sign[4 * nt + nv];
        if (ns == 0) {
          ns = want;
          stack.emplace_back(nt, nv);
        } else if (ns != want) {
          vc.link.orientable = false;
        }
      }
    }
    if (vc.link.euler > 2) throw Error(ErrorKind::NotASurface, "link Euler characteristic exceeds 2");
  }
  return sk;
}

Triangulation Triangulation::from_table(GluingTable table) {
  check_table(table);
  Triangulation t;
  t.skel_ = std::make_shared<const Skeleton>(compute_skeleton(table));
  t.table_ = std::move(table);
  return t;
}

Triangulation Triangulation::build(int n_tets, const std::vector<GluingEntry>& entries) {
  if (n_tets < 1) throw Error(ErrorKind::DanglingFace, "a triangulation needs at least one tetrahedron");
  GluingTable table(n_tets);
  std::vector<std::array<bool, 4>> seen(n_tets, {false, false, false, false});
  for (const auto& en : entries) {
    if (en.tet < 0 || en.tet >= n_tets || en.face < 0 || en.face > 3 || en.target < 0 ||
        en.target >= n_tets)
      throw Error(ErrorKind::BadPermutation, "entry refers to a missing tetrahedron or face");
    if (seen[en.tet][en.face])
      throw Error(ErrorKind::NonInvolutive, "face " + face_name(en.tet, en.face) + " listed twice");
    seen[en.tet][en.face] = true;
    table[en.tet][en.face] = Gluing{en.target, en.perm};
  }
  return from_table(std::move(table));
}

std::vector<Corner> edge_cycle(const Triangulation& tri, int edge_class) {
  return tri.skeleton().edges.at(edge_class).cycle;
}

LinkSurface vertex_link(const Triangulation& tri, int vertex_class) {
  return tri.skeleton().vertices.at(vertex_class).link;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::uint8_t> close_edge_masks(const Skeleton& sk, const std::vector<std::uint8_t>& in) {
  std::vector<bool> cls(sk.edges.size(), false);
  for (std::size_t t = 0; t < in.size(); ++t)
    for (int e = 0; e < 6; ++e)
      if (in[t] >> e & 1) cls[sk.edge_of[t][e]] = true;
  std::vector<std::uint8_t> out(in.size(), 0);
  for (std::size_t t = 0; t < in.size(); ++t)
    for (int e = 0; e < 6; ++e)
      if (cls[sk.edge_of[t][e]]) out[t] |= static_cast<std::uint8_t>(1u << e);
  return out;
}

std::vector<std::uint8_t> close_vertex_tags(const Skeleton& sk, const std::vector<std::uint8_t>& in) {
  std::vector<bool> cls(sk.vertices.size(), false);
  for (std::size_t t = 0; t < in.size(); ++t)
    for (int v = 0; v < 4; ++v)
      if (in[t] >> v & 1) cls[sk.vertex_of[t][v]] = true;
  std::vector<std::uint8_t> out(in.size(), 0);
  for (std::size_t t = 0; t < in.size(); ++t)
    for (int v = 0; v < 4; ++v)
      if (cls[sk.vertex_of[t][v]]) out[t] |= static_cast<std::uint8_t>(1u << v);
  return out;
}

}  // namespace

MarkedTriangulation::MarkedTriangulation(Triangulation tri)
    : tri_(std::move(tri)), masks_(tri_.size(), 0), vtags_(tri_.size(), 0xF) {}

MarkedTriangulation::MarkedTriangulation(Triangulation tri, const std::vector<int>& marked_classes)
    : tri_(std::move(tri)), masks_(tri_.size(), 0), vtags_(tri_.size(), 0xF) {
  const Skeleton& sk = tri_.skeleton();
  std::vector<int> sorted = marked_classes;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw Error(ErrorKind::ValidationError, "marked edge classes must be distinct");
  for (int id : sorted) {
    if (id < 0 || id >= static_cast<int>(sk.edges.size()))
      throw Error(ErrorKind::ValidationError, "marked edge class " + std::to_string(id) + " does not exist");
    for (const Corner& c : sk.edges[id].cycle) masks_[c.tet] |= static_cast<std::uint8_t>(1u << edge_index(c.a, c.b));
  }
}

MarkedTriangulation MarkedTriangulation::from_masks(Triangulation tri, std::vector<std::uint8_t> edge_masks,
                                                    std::vector<std::uint8_t> vertex_tags) {
  MarkedTriangulation m;
  const Skeleton& sk = tri.skeleton();
  edge_masks.resize(tri.size(), 0);
  m.masks_ = close_edge_masks(sk, edge_masks);
  if (vertex_tags.empty()) vertex_tags.assign(tri.size(), 0xF);
  vertex_tags.resize(tri.size(), 0);
  m.vtags_ = close_vertex_tags(sk, vertex_tags);
  m.tri_ = std::move(tri);
  return m;
}

std::vector<int> MarkedTriangulation::marked() const {
  std::vector<int> out;
  const Skeleton& sk = skeleton();
  for (const auto& ec : sk.edges) {
    const Corner& c = ec.cycle.front();
    if (masks_[c.tet] >> edge_index(c.a, c.b) & 1) out.push_back(ec.id);
  }
  return out;
}

bool MarkedTriangulation::is_marked(int edge_class) const {
  const Corner& c = skeleton().edges.at(edge_class).cycle.front();
  return masks_[c.tet] >> edge_index(c.a, c.b) & 1;
}

int MarkedTriangulation::marked_count() const { return static_cast<int>(marked().size()); }

bool MarkedTriangulation::vertex_tagged(int vertex_class) const {
  auto [t, v] = skeleton().vertices.at(vertex_class).members.front();
  return vtags_[t] >> v & 1;
}

MarkedTriangulation MarkedTriangulation::with_all_vertices_tagged() const {
  MarkedTriangulation m = *this;
  m.vtags_.assign(size(), 0xF);
  return m;
}

}  // namespace mark3d
