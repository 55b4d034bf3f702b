#include "mark3d/applications.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace mark3d {

namespace {

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (int x : v) s += (s.empty() ? "" : ",") + std::to_string(x);
  return s;
}

bool contains(const std::vector<int>& sorted, int x) { return std::binary_search(sorted.begin(), sorted.end(), x); }

int class_at(const Triangulation& tri, int tet, int a, int b) { return tri.skeleton().edge_of[tet][edge_index(a, b)]; }

struct BStep {
  DistinguishedTriangulation result;
  int first_new = 0;
};

BStep b_plus(const DistinguishedTriangulation& d, int e, int tet) {
  if (!contains(d.link_edges, e)) throw Error(ErrorKind::NotInLink, "edge " + std::to_string(e) + " is not a link edge");
  if (tet < 0 || tet >= d.tri.size()) throw Error(ErrorKind::Inapplicable, "no tetrahedron " + std::to_string(tet));
  const Skeleton& sk = d.tri.skeleton();
  int ei = -1;
  for (int k = 0; k < 6 && ei < 0; ++k)
    if (sk.edge_of[tet][k] == e) ei = k;
  if (ei < 0) throw Error(ErrorKind::Inapplicable, "the link edge is not an edge of the tetrahedron");
  const int a = kEdgeVertices[ei][0], b = kEdgeVertices[ei][1];

  ApplyResult r = apply_move(MarkedTriangulation(d.tri), {MoveKind::BaPlus, {tet}}, ApplyOptions{false});
  const Triangulation& out = r.result.tri();
  // Fresh tetrahedron k has the new vertex at label k and the old labels elsewhere.
  auto image = [&](const Corner& c) {
    if (c.tet != tet) return class_at(out, r.old_to_new[c.tet], c.a, c.b);
    int k = 0;
    while (k == c.a || k == c.b) ++k;
    return class_at(out, r.first_new + k, c.a, c.b);
  };
  std::vector<int> link;
  for (int id : d.link_edges)
    if (id != e) link.push_back(image(sk.edges[id].cycle[0]));
  link.push_back(class_at(out, r.first_new + b, b, a));
  link.push_back(class_at(out, r.first_new + a, a, b));
  return {check_hamiltonian(out, link), r.first_new};
}

}  // namespace

std::vector<std::vector<int>> DistinguishedTriangulation::components() const {
  const Skeleton& sk = tri.skeleton();
  std::map<int, std::vector<std::pair<int, int>>> at;  // vertex -> (edge, other end)
  for (int id : link_edges) {
    const EdgeClass& ec = sk.edges[id];
    at[ec.v0].push_back({id, ec.v1});
    at[ec.v1].push_back({id, ec.v0});
  }
  std::set<int> used;
  std::vector<std::vector<int>> out;
  for (const auto& [v, _] : at) {
    if (used.count(v)) continue;
    std::vector<int> cyc{v};
    used.insert(v);
    int cur = v, via = -1;
    for (;;) {
      const auto& nb = at[cur];
      const auto& step = nb[0].first != via ? nb[0] : nb[1];
      if (step.second == v || used.count(step.second)) break;
      via = step.first;
      cur = step.second;
      used.insert(cur);
      cyc.push_back(cur);
    }
    out.push_back(cyc);
  }
  return out;
}

DistinguishedTriangulation check_hamiltonian(const Triangulation& tri, std::vector<int> link_edges) {
  link_edges = sorted_unique(std::move(link_edges));
  const Skeleton& sk = tri.skeleton();
  for (int id : link_edges)
    if (id < 0 || id >= static_cast<int>(sk.edges.size()))
      throw Error(ErrorKind::InvalidEdge, "no edge class " + std::to_string(id));
  std::vector<int> open;
  for (const VertexClass& v : sk.vertices)
    if (!v.link.is_sphere()) open.push_back(v.id);
  if (!open.empty()) throw Error(ErrorKind::NotClosed, "non-sphere links at vertices " + join(open));
  std::vector<int> germs(sk.vertices.size(), 0);
  for (int id : link_edges) {
    ++germs[sk.edges[id].v0];
    ++germs[sk.edges[id].v1];
  }
  std::string bad;
  for (std::size_t v = 0; v < germs.size(); ++v)
    if (germs[v] != 2) bad += (bad.empty() ? "" : ", ") + std::to_string(v) + " (" + std::to_string(germs[v]) + ")";
  if (!bad.empty()) throw Error(ErrorKind::GermCountViolation, "germ counts at vertices " + bad);
  return {tri, std::move(link_edges)};
}

DistinguishedTriangulation distinguished_b_move(const DistinguishedTriangulation& d, int edge_class, int tet) {
  return b_plus(d, edge_class, tet).result;
}

DistinguishedTriangulation distinguished_b_move_inverse(const DistinguishedTriangulation& d, int tet, int vertex) {
  if (tet < 0 || tet >= d.tri.size() || vertex < 0 || vertex > 3)
    throw Error(ErrorKind::Inapplicable, "bad b- site");
  ApplyResult r = apply_move(MarkedTriangulation(d.tri), {MoveKind::BaMinus, {tet, vertex}}, ApplyOptions{false});
  const Triangulation& out = r.result.tri();
  // Star tetrahedron m sees fresh label l as frames[m][l]; the vertex sits at frames[m][m].
  std::array<int, 4> tets;
  std::array<Perm4, 4> frames;
  tets[vertex] = tet;
  for (int m = 0; m < 4; ++m) {
    if (m == vertex) continue;
    const Gluing& g = d.tri.adj(tet, m);
    tets[m] = g.tet;
    frames[m] = g.perm * Perm4::swap(vertex, m);
  }
  const Skeleton& sk = d.tri.skeleton();
  std::vector<int> ends;
  std::set<int> through;
  for (int l = 0; l < 4; ++l) {
    // The edge towards fresh label `vertex` lies in a neighbouring star tetrahedron.
    const int m = l == vertex ? (vertex + 1) % 4 : vertex;
    const int id = sk.edge_of[tets[m]][edge_index(frames[m][m], frames[m][l])];
    if (contains(d.link_edges, id)) {
      ends.push_back(l);
      through.insert(id);
    }
  }
  if (ends.size() != 2) throw Error(ErrorKind::Inapplicable, "b-: the vertex is not on exactly two link edges");
  auto image = [&](const Corner& c) {
    for (int m = 0; m < 4; ++m)
      if (tets[m] == c.tet) {
        const Perm4 inv = frames[m].inverse();
        return class_at(out, r.first_new, inv[c.a], inv[c.b]);
      }
    return class_at(out, r.old_to_new[c.tet], c.a, c.b);
  };
  std::vector<int> link;
  for (int id : d.link_edges)
    if (!through.count(id)) link.push_back(image(sk.edges[id].cycle[0]));
  link.push_back(class_at(out, r.first_new, ends[0], ends[1]));
  return check_hamiltonian(out, link);
}

std::string DistinguishedStep::encode() const {
  switch (kind) {
    case Kind::BPlus: return "b+:" + join(site);
    case Kind::BMinus: return "b-:" + join(site);
    case Kind::MP: break;
  }
  return mp.encode();
}

Signature signature(const DistinguishedTriangulation& d) { return signature(d.as_marked()); }

DistinguishedTriangulation replay_distinguished(const DistinguishedTriangulation& d,
                                                const std::vector<DistinguishedStep>& steps) {
  DistinguishedTriangulation cur = d;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const DistinguishedStep& s = steps[k];
    try {
      if (s.kind == DistinguishedStep::Kind::BPlus) {
        if (s.site.size() != 2) throw Error(ErrorKind::Inapplicable, "b+ takes an edge class and a tetrahedron");
        cur = distinguished_b_move(cur, s.site[0], s.site[1]);
      } else if (s.kind == DistinguishedStep::Kind::BMinus) {
        if (s.site.size() != 2) throw Error(ErrorKind::Inapplicable, "b- takes a tetrahedron and a vertex");
        cur = distinguished_b_move_inverse(cur, s.site[0], s.site[1]);
      } else {
        if (s.mp.kind != MoveKind::MPaPlus && s.mp.kind != MoveKind::MPaMinus)
          throw Error(ErrorKind::Inapplicable, "only mp moves are allowed between b-moves");
        ApplyResult r = apply_move(cur.as_marked(), s.mp, ApplyOptions{false});
        cur = check_hamiltonian(r.result.tri(), r.result.marked());
      }
    } catch (const Error& e) {
      throw Error(e.kind(), "step " + std::to_string(k) + ": " + e.what());
    }
  }
  return cur;
}

std::optional<DistinguishedCertificate> distinguished_connect(const DistinguishedTriangulation& a,
                                                              const DistinguishedTriangulation& b,
                                                              const SearchBudget& budget) {
  DistinguishedCertificate cert;
  cert.start = signature(a);
  cert.end = signature(b);

  auto vertices = [](const DistinguishedTriangulation& d) { return d.tri.skeleton().vertices.size(); };
  auto grow = [&](const DistinguishedTriangulation& d) {
    const int e = d.link_edges.front();
    const int tet = d.tri.skeleton().edges[e].cycle[0].tet;
    return std::make_pair(DistinguishedStep{DistinguishedStep::Kind::BPlus, {e, tet}, {}}, b_plus(d, e, tet));
  };

  DistinguishedTriangulation left = a;
  while (vertices(left) < vertices(b)) {
    auto [step, res] = grow(left);
    cert.steps.push_back(step);
    left = res.result;
  }
  // Stages on the b side, undone at the end.
  std::vector<BStep> right{{b, 0}};
  while (vertices(right.back().result) < vertices(left)) right.push_back(grow(right.back().result).second);

  auto c = connect(left.as_marked(), right.back().result.as_marked(), budget, true);
  if (!c) return std::nullopt;
  for (const MoveInstance& mv : c->moves) cert.steps.push_back({DistinguishedStep::Kind::MP, {}, mv});

  DistinguishedTriangulation cur = replay_distinguished(a, cert.steps);
  for (std::size_t k = right.size() - 1; k > 0; --k) {
    const auto iso = find_isomorphism(right[k].result.as_marked(), cur.as_marked());
    if (!iso) throw Error(ErrorKind::InvariantMismatch, "search result does not match the target");
    const int fn = right[k].first_new;
    DistinguishedStep step{DistinguishedStep::Kind::BMinus, {iso->tets[fn], iso->labels[fn][0]}, {}};
    cur = distinguished_b_move_inverse(cur, step.site[0], step.site[1]);
    cert.steps.push_back(step);
  }
  if (signature(cur) != cert.end) throw Error(ErrorKind::InvariantMismatch, "certificate does not reach the target");
  return cert;
}

PartiallyTruncated check_ptt(const Triangulation& tri, std::vector<int> ideal, std::vector<int> zero) {
  ideal = sorted_unique(std::move(ideal));
  zero = sorted_unique(std::move(zero));
  const Skeleton& sk = tri.skeleton();
  for (int v : ideal) {
    if (v < 0 || v >= static_cast<int>(sk.vertices.size()))
      throw Error(ErrorKind::ValidationError, "no vertex class " + std::to_string(v));
    if (!sk.vertices[v].link.is_torus())
      throw Error(ErrorKind::ValidationError, "ideal vertex " + std::to_string(v) + " has a non-torus link");
  }
  for (int e : zero) {
    if (e < 0 || e >= static_cast<int>(sk.edges.size()))
      throw Error(ErrorKind::ValidationError, "no edge class " + std::to_string(e));
    if (contains(ideal, sk.edges[e].v0) || contains(ideal, sk.edges[e].v1))
      throw Error(ErrorKind::ValidationError, "zero edge " + std::to_string(e) + " ends at an ideal vertex");
  }
  return {tri, std::move(ideal), std::move(zero)};
}

std::vector<int> default_ideal(const MarkedTriangulation& m) {
  const Skeleton& sk = m.skeleton();
  std::vector<bool> touched(sk.vertices.size(), false);
  for (int id : m.marked()) touched[sk.edges[id].v0] = touched[sk.edges[id].v1] = true;
  std::vector<int> out;
  for (const VertexClass& v : sk.vertices)
    if (v.link.is_torus() && !touched[v.id]) out.push_back(v.id);
  return out;
}

MarkedWithIdeal ptt_to_marked(const PartiallyTruncated& p) {
  return {MarkedTriangulation(p.tri, p.zero), p.ideal};
}

PartiallyTruncated marked_to_ptt(const MarkedTriangulation& m, PttOptions opt, std::vector<std::string>* warnings,
                                 const std::optional<std::vector<int>>& ideal) {
  std::vector<int> spheres;
  for (const VertexClass& v : m.skeleton().vertices)
    if (v.link.is_sphere()) spheres.push_back(v.id);
  if (!spheres.empty()) {
    const std::string msg = "sphere links at vertices " + join(spheres);
    if (opt.strict) throw Error(ErrorKind::SphereBoundary, msg);
    if (warnings) warnings->push_back(msg);
  }
  return check_ptt(m.tri(), ideal ? *ideal : default_ideal(m), m.marked());
}

}  // namespace mark3d
