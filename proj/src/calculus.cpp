#include "mark3d/calculus.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

#include "mark3d/invariants.hpp"

namespace mark3d {

Certificate make_certificate(const MarkedTriangulation& start, const std::vector<MoveInstance>& moves,
                             bool with_steps) {
  Certificate c;
  c.start = signature(start);
  c.moves = moves;
  MarkedTriangulation cur = start;
  for (std::size_t k = 0; k < moves.size(); ++k) {
    try {
      cur = apply_move(cur, moves[k], ApplyOptions{false}).result;
    } catch (const Error& e) {
      throw Error(e.kind(), "step " + std::to_string(k) + " (" + moves[k].encode() + "): " + e.what());
    }
    if (with_steps) c.steps.push_back(signature(cur));
  }
  c.end = with_steps && !c.steps.empty() ? c.steps.back() : signature(cur);
  return c;
}

bool Certificate::verify(const MarkedTriangulation& from) const {
  if (signature(from) != start) return false;
  if (!steps.empty() && steps.size() != moves.size()) return false;
  try {
    MarkedTriangulation cur = from;
    for (std::size_t k = 0; k < moves.size(); ++k) {
      cur = apply_move(cur, moves[k], ApplyOptions{false}).result;
      if (!steps.empty() && signature(cur) != steps[k]) return false;
    }
    return signature(cur) == end;
  } catch (const Error&) {
    return false;
  }
}

namespace {

int corner_edge(const Corner& c) { return edge_index(c.a, c.b); }

std::vector<int> remap(const std::vector<int>& ids, const std::vector<int>& old_to_new) {
  std::vector<int> out(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) out[i] = ids[i] < 0 ? -1 : old_to_new[ids[i]];
  return out;
}

// A move sequence under construction, remembering where the starting
// tetrahedra went and which tetrahedra it created.
struct Chain {
  MarkedTriangulation cur;
  std::vector<int> origin;
  std::vector<int> hot;
  std::vector<MoveInstance> moves;
};

Chain start_chain(const MarkedTriangulation& m) {
  Chain c{m, std::vector<int>(m.size()), {}, {}};
  std::iota(c.origin.begin(), c.origin.end(), 0);
  return c;
}

Chain step(const Chain& c, const MoveInstance& mv) {
  ApplyResult r = apply_move(c.cur, mv, ApplyOptions{false});
  Chain n;
  n.origin = remap(c.origin, r.old_to_new);
  for (int h : c.hot)
    if (r.old_to_new[h] >= 0) n.hot.push_back(r.old_to_new[h]);
  for (int t = r.first_new; t < r.result.size(); ++t) n.hot.push_back(t);
  n.cur = std::move(r.result);
  n.moves = c.moves;
  n.moves.push_back(mv);
  return n;
}

// The direct result of a move, with the starting tetrahedra located in it.
struct Target {
  MarkedTriangulation tri;
  std::vector<int> origin;
};

std::optional<Target> direct(const MarkedTriangulation& m, const MoveInstance& mv) {
  try {
    ApplyResult r = apply_move(m, mv, ApplyOptions{false});
    return Target{std::move(r.result), std::move(r.old_to_new)};
  } catch (const Error&) {
    return std::nullopt;
  }
}

// Isomorphism from the target to the chain's result, anchored at a tetrahedron
// both left untouched when there is one.
std::optional<Isomorphism> match(const Chain& c, const Target& t) {
  if (c.cur.size() != t.tri.size()) return std::nullopt;
  for (std::size_t o = 0; o < c.origin.size(); ++o)
    if (c.origin[o] >= 0 && t.origin[o] >= 0) return extend_isomorphism(t.tri, c.cur, t.origin[o], c.origin[o], Perm4());
  return find_isomorphism(t.tri, c.cur);
}

std::vector<MoveInstance> mp_plus_near(const Chain& c) {
  const Skeleton& sk = c.cur.skeleton();
  std::vector<MoveInstance> out;
  std::set<int> seen;
  for (int h : c.hot)
    for (int f = 0; f < 4; ++f) {
      if (c.cur.tri().adj(h, f).tet == h) continue;
      if (seen.insert(sk.triangle_of[h][f]).second) out.push_back({MoveKind::MPaPlus, {h, f}});
    }
  return out;
}

std::vector<MoveInstance> mp_minus_near(const Chain& c) {
  const Skeleton& sk = c.cur.skeleton();
  std::vector<MoveInstance> out;
  std::set<int> seen;
  for (int h : c.hot)
    for (int e = 0; e < 6; ++e) {
      const int id = sk.edge_of[h][e];
      if (!seen.insert(id).second) continue;
      const EdgeClass& ec = sk.edges[id];
      if (ec.valence() != 3 || c.cur.is_marked(id)) continue;
      if (ec.cycle[0].tet == ec.cycle[1].tet || ec.cycle[0].tet == ec.cycle[2].tet ||
          ec.cycle[1].tet == ec.cycle[2].tet)
        continue;
      out.push_back({MoveKind::MPaMinus, {h, e}});
    }
  return out;
}

// Depth-first search for `plus` mp+ and `minus` mp- moves near the chain's
// new tetrahedra reaching the target.
std::optional<Chain> search_mp(const Chain& c, int plus, int minus, const Target& t) {
  if (plus == 0 && minus == 0) {
    if (match(c, t)) return c;
    return std::nullopt;
  }
  if (plus > 0)
    for (const MoveInstance& mv : mp_plus_near(c)) {
      Chain n;
      try {
        n = step(c, mv);
      } catch (const Error&) {
        continue;
      }
      if (auto r = search_mp(n, plus - 1, minus, t)) return r;
    }
  if (minus > 0)
    for (const MoveInstance& mv : mp_minus_near(c)) {
      Chain n;
      try {
        n = step(c, mv);
      } catch (const Error&) {
        continue;
      }
      if (auto r = search_mp(n, plus, minus - 1, t)) return r;
    }
  return std::nullopt;
}

void require_kind(const MoveInstance& mv, MoveKind k) {
  if (mv.kind != k)
    throw Error(ErrorKind::Inapplicable, std::string("expected a ") + to_string(k) + " move, got " + mv.encode());
}

Target require_direct(const MarkedTriangulation& m, const MoveInstance& mv) {
  try {
    ApplyResult r = apply_move(m, mv, ApplyOptions{false});
    return Target{std::move(r.result), std::move(r.old_to_new)};
  } catch (const Error& e) {
    throw Error(ErrorKind::Inapplicable, e.what());
  }
}

// The la+ decomposition as a chain, so callers can locate the lune afterwards.
Chain decompose_l_chain(const MarkedTriangulation& m, const MoveInstance& mv) {
  require_kind(mv, MoveKind::LaPlus);
  require_direct(m, mv);
  const Skeleton& sk = m.skeleton();
  const int id = sk.edge_of[mv.site[0]][mv.site[1]];
  const std::vector<Corner>& cyc = sk.edges[id].cycle;
  const int v = static_cast<int>(cyc.size());
  const int i = mv.site[2], j = mv.site[3], side = mv.site[4];
  const bool marked = m.is_marked(id);

  // The lune is grown corner by corner along one side of the arc; on a marked
  // region the grown side is the one that ends up unmarked.
  const bool grow_first = marked ? side == 2 : (j - i) <= v - (j - i);
  const int a = grow_first ? i : j;
  const int len = grow_first ? j - i : v - (j - i);

  // la+ whose first side (in grown terms) is the arc c_start .. c_{start+p-1}.
  auto arc_move = [&](int start, int p) {
    const int b = start + p;
    int s0 = start, s1 = b;
    bool arc_is_side1 = true;
    if (b >= v) {
      s0 = b - v;
      s1 = start;
      arc_is_side1 = false;
    }
    const int s = marked ? (arc_is_side1 ? 2 : 1) : 0;
    return MoveInstance{MoveKind::LaPlus, {mv.site[0], mv.site[1], s0, s1, s}};
  };
  // Grow the arc one corner at a time at either end, looking for an order in
  // which every partial move exists.
  std::map<std::pair<int, int>, std::optional<Target>> partial;
  auto target = [&](int off, int p) -> const std::optional<Target>& {
    auto it = partial.find({off, p});
    if (it == partial.end()) it = partial.emplace(std::make_pair(off, p), direct(m, arc_move((a + off) % v, p))).first;
    return it->second;
  };
  std::map<std::pair<int, int>, std::pair<int, int>> prev;
  std::deque<std::pair<int, int>> queue;
  for (int off = 0; off < len; ++off)
    if (target(off, 1)) {
      prev[{off, 1}] = {-1, -1};
      queue.push_back({off, 1});
    }
  while (!queue.empty() && !prev.count({0, len})) {
    const auto [off, p] = queue.front();
    queue.pop_front();
    for (const auto& nx : {std::make_pair(off - 1, p + 1), std::make_pair(off, p + 1)}) {
      if (nx.first < 0 || nx.first + nx.second > len || prev.count(nx) || !target(nx.first, nx.second)) continue;
      prev[nx] = {off, p};
      queue.push_back(nx);
    }
  }
  std::vector<std::pair<int, int>> path;
  if (prev.count({0, len})) {
    for (auto at = std::make_pair(0, len); at.first >= 0; at = prev[at]) path.push_back(at);
    std::reverse(path.begin(), path.end());
  } else {
    // Forwards, jumping over missing partial moves.
    for (int p = 1; p <= len; ++p)
      if (p == len || target(0, p)) path.push_back({0, p});
  }

  Chain c = start_chain(m);
  std::pair<int, int> at{0, 0};
  for (const auto& nx : path) {
    const Target& t = *target(nx.first, nx.second);
    const int d = nx.second - at.second;
    std::optional<Chain> found;
    if (at.second == 0) {
      const int first = (a + nx.first) % v;
      for (int k = 0; k < 3 && !found; ++k) {
        Chain n = step(c, {MoveKind::VaPlus, {cyc[first].tet, k}});
        found = search_mp(n, d - 1, d - 1, t);
      }
    } else {
      found = search_mp(c, d, d, t);
      if (!found && d > 1) {
        Chain all = c;
        all.hot.resize(c.cur.size());
        std::iota(all.hot.begin(), all.hot.end(), 0);
        // Crossing a triangle met twice around the edge can take one more pair.
        for (int extra = 0; extra < 2 && !found; ++extra) found = search_mp(all, d + extra, d + extra, t);
      }
    }
    if (!found) throw Error(ErrorKind::Inapplicable, "no va+/mpa decomposition found for " + mv.encode());
    c = std::move(*found);
    // The lune of the partial move is where the next slide happens.
    const auto iso = match(c, t);
    c.hot = {iso->tets[t.tri.size() - 2], iso->tets[t.tri.size() - 1]};
    at = nx;
  }
  return c;
}

}  // namespace

Certificate decompose_v(const MarkedTriangulation& m, const MoveInstance& mv) {
  require_kind(mv, MoveKind::VaPlus);
  if (m.size() < 2) throw Error(ErrorKind::Inapplicable, "va+ decomposes into mp moves only with two tetrahedra");
  const Target t = require_direct(m, mv);
  Chain c = start_chain(m);
  c.hot = {mv.site[0]};
  auto found = search_mp(c, 3, 1, t);
  if (!found) throw Error(ErrorKind::Inapplicable, "no mpa decomposition found for " + mv.encode());
  return make_certificate(m, found->moves);
}

Certificate decompose_l(const MarkedTriangulation& m, const MoveInstance& mv) {
  return make_certificate(m, decompose_l_chain(m, mv).moves);
}

Certificate decompose_c(const MarkedTriangulation& m, const MoveInstance& mv) {
  require_kind(mv, MoveKind::CaPlus);
  require_direct(m, mv);
  const CaVariant& var = ca_variants()[mv.site[1]];
  const int offset = m.size() - 1;  // ball tetrahedra always sit at the end
  std::vector<MoveInstance> moves{{MoveKind::VaPlus, {mv.site[0], var.va_choice}}};
  for (const MoveInstance& s : var.mp_steps) moves.push_back({s.kind, {offset + s.site[0], s.site[1]}});
  return make_certificate(m, moves);
}

std::optional<MarkedTriangulation> remove_arch(const MarkedTriangulation& m, const std::vector<int>& tets) {
  const Skeleton& sk = m.skeleton();
  for (int t : tets) {
    if (t < 0 || t >= m.size()) continue;
    for (int e = 0; e < 6; ++e) {
      const EdgeClass& ec = sk.edges[sk.edge_of[t][e]];
      if (ec.valence() != 1) continue;
      const Corner c = ec.cycle[0];
      const Gluing ga = m.tri().adj(t, c.a), gb = m.tri().adj(t, c.b);
      if (ga.tet == t || gb.tet == t) continue;
      // Close the gap: face a of the arch (labels b,x,y) meets face b (a,x,y).
      Perm4 tau;
      tau = Perm4::swap(c.a, c.b);
      GluingTable table = m.tri().table();
      const Perm4 glue = gb.perm * tau * ga.perm.inverse();
      table[ga.tet][ga.perm[c.a]] = Gluing{gb.tet, glue};
      table[gb.tet][gb.perm[c.b]] = Gluing{ga.tet, glue.inverse()};
      std::vector<int> keep;
      for (int u = 0; u < m.size(); ++u)
        if (u != t) keep.push_back(u);
      std::vector<int> pos(m.size(), -1);
      for (std::size_t k = 0; k < keep.size(); ++k) pos[keep[k]] = static_cast<int>(k);
      GluingTable out(keep.size());
      std::vector<std::uint8_t> masks(keep.size()), tags(keep.size());
      for (std::size_t k = 0; k < keep.size(); ++k) {
        for (int f = 0; f < 4; ++f) out[k][f] = Gluing{pos[table[keep[k]][f].tet], table[keep[k]][f].perm};
        masks[k] = m.edge_mask(keep[k]);
        tags[k] = m.vertex_tags(keep[k]);
      }
      MarkedTriangulation r;
      try {
        r = MarkedTriangulation::from_masks(Triangulation::from_table(out), masks, tags);
      } catch (const Error&) {
        continue;
      }
      if (r.marked_count() == m.marked_count()) return r;
      // Closing the gap can split a marked class in two; the piece lying inside
      // the ball is a new interior edge and loses the mark.
      const Skeleton& rs = r.skeleton();
      const std::set<int> ball(tets.begin(), tets.end());
      std::map<int, std::pair<int, int>> best;  // old class -> (score, new class)
      for (int id : r.marked()) {
        const Corner& rc = rs.edges[id].cycle[0];
        const int old = sk.edge_of[keep[rc.tet]][edge_index(rc.a, rc.b)];
        int outside = 0;
        for (const Corner& q : rs.edges[id].cycle)
          if (!ball.count(keep[q.tet])) ++outside;
        const int score = outside * 1000 + static_cast<int>(rs.edges[id].cycle.size());
        auto it = best.find(old);
        if (it == best.end() || score > it->second.first) best[old] = {score, id};
      }
      std::set<int> kept;
      for (const auto& [old, v] : best) kept.insert(v.second);
      std::vector<std::uint8_t> fixed = r.edge_masks();
      for (int id : r.marked())
        if (!kept.count(id))
          for (const Corner& q : rs.edges[id].cycle) fixed[q.tet] &= static_cast<std::uint8_t>(~(1u << edge_index(q.a, q.b)));
      return MarkedTriangulation::from_masks(r.tri(), fixed, r.vertex_tag_masks());
    }
  }
  return std::nullopt;
}

Subdivision subdivide_edge(const MarkedTriangulation& m, int edge_class) {
  const Skeleton& sk = m.skeleton();
  if (edge_class < 0 || edge_class >= static_cast<int>(sk.edges.size()))
    throw Error(ErrorKind::InvalidEdge, "no edge class " + std::to_string(edge_class));
  if (m.is_marked(edge_class)) throw Error(ErrorKind::MarkedEdge, "a marked edge cannot be subdivided");
  const std::vector<Corner>& cyc = sk.edges[edge_class].cycle;
  if (cyc.size() < 2) throw Error(ErrorKind::ValenceTooSmall, "edge valence is below 2");
  std::set<int> star;
  for (const Corner& c : cyc) star.insert(c.tet);
  if (star.size() != cyc.size()) throw Error(ErrorKind::Inapplicable, "the edge star has repeated tetrahedra");

  const Corner c0 = cyc[0];
  Subdivision out;
  ApplyResult r = apply_move(m, {MoveKind::BaPlus, {c0.tet}}, ApplyOptions{false});
  out.moves.push_back({MoveKind::BaPlus, {c0.tet}});
  // The cone on face a never meets the edge and keeps the new vertex at label a;
  // the cone on face y stays at one end of the fan.
  int keep = r.first_new + c0.a;
  int anchor = r.first_new + c0.y;
  MarkedTriangulation cur = std::move(r.result);
  for (;;) {
    const Skeleton& s = cur.skeleton();
    const int e = s.edge_of[anchor][edge_index(c0.a, c0.b)];
    const int nv = s.vertex_of[keep][c0.a];
    const auto& cycle = s.edges[e].cycle;
    if (cycle.size() <= 3) break;
    std::optional<MoveInstance> next;
    for (const Corner& c : cycle) {
      if (c.tet == anchor) continue;
      for (int lab : {static_cast<int>(c.x), static_cast<int>(c.y)}) {
        if (s.vertex_of[c.tet][lab] != nv) continue;
        const Gluing& g = cur.tri().adj(c.tet, lab);
        bool other_has_v = false;
        for (int w = 0; w < 4; ++w) other_has_v = other_has_v || s.vertex_of[g.tet][w] == nv;
        if (g.tet != c.tet && !other_has_v) next = MoveInstance{MoveKind::MPaPlus, {c.tet, lab}};
      }
      if (next) break;
    }
    if (!next) throw Error(ErrorKind::Inapplicable, "edge subdivision lost track of its fan");
    r = apply_move(cur, *next, ApplyOptions{false});
    out.moves.push_back(*next);
    keep = r.old_to_new[keep];
    anchor = r.old_to_new[anchor];
    cur = std::move(r.result);
  }
  const MoveInstance last{MoveKind::MPaMinus, {anchor, edge_index(c0.a, c0.b)}};
  r = apply_move(cur, last, ApplyOptions{false});
  out.moves.push_back(last);
  out.new_vertex_tet = r.old_to_new[keep];
  out.result = std::move(r.result);
  return out;
}

Certificate subdivide_edge_certificate(const MarkedTriangulation& m, int edge_class) {
  return make_certificate(m, subdivide_edge(m, edge_class).moves);
}

// ---------------------------------------------------------------------------
// Desingularization

namespace {

std::string describe(const SingularityFinding& f) {
  std::string s = to_string(f.type);
  s += " tets";
  for (int t : f.tets) s += " " + std::to_string(t);
  if (!f.edges.empty()) {
    s += " edges";
    for (int e : f.edges) s += " " + std::to_string(e);
  }
  return s;
}

struct Closure {
  std::set<int> tets, triangles, edges, vertices;
};

Closure closed_star(const MarkedTriangulation& m, int id) {
  const Skeleton& sk = m.skeleton();
  Closure c;
  for (int t : star_tets(m.tri(), id)) {
    c.tets.insert(t);
    for (int f = 0; f < 4; ++f) c.triangles.insert(sk.triangle_of[t][f]);
    for (int e = 0; e < 6; ++e) c.edges.insert(sk.edge_of[t][e]);
    for (int v = 0; v < 4; ++v) c.vertices.insert(sk.vertex_of[t][v]);
  }
  return c;
}

template <class T>
bool meets(const std::set<T>& a, const std::set<T>& b) {
  for (const T& x : a)
    if (b.count(x)) return true;
  return false;
}

// Applies moves to the working triangulation and, in lockstep, to a probe copy
// whose vertex tags mark the vertices present when the current round began.
struct Runner {
  MarkedTriangulation real;
  MarkedTriangulation probe;
  std::vector<MoveInstance> moves;
  int limit = 0;

  ApplyResult apply(const MoveInstance& mv) {
    if (static_cast<int>(moves.size()) >= limit)
      throw Error(ErrorKind::PhaseLimit, "desingularization exceeded " + std::to_string(limit) + " moves");
    ApplyResult r = apply_move(real, mv, ApplyOptions{false});
    probe = apply_move(probe, mv, ApplyOptions{false}).result;
    real = r.result;
    moves.push_back(mv);
    return r;
  }

  void run(const std::vector<MoveInstance>& seq) {
    for (const MoveInstance& mv : seq) apply(mv);
  }
};

std::vector<int> carry(const std::vector<int>& data, const ApplyResult& r) {
  std::vector<int> out(r.result.size(), -1);
  for (std::size_t t = 0; t < data.size(); ++t)
    if (r.old_to_new[t] >= 0) out[r.old_to_new[t]] = data[t];
  return out;
}

// Barycentric subdivision leaving the marked edges whole: cone every
// tetrahedron, then every old triangle (ba + mp), then every old edge.
void barycentric_round(Runner& run) {
  run.probe = run.real.with_all_vertices_tagged();
  const int n0 = run.real.size();

  std::vector<int> todo(n0);
  std::iota(todo.begin(), todo.end(), 0);
  std::vector<int> old_face(n0, -1);
  for (int k = 0; k < n0; ++k) {
    ApplyResult r = run.apply({MoveKind::BaPlus, {todo[k]}});
    todo = remap(todo, r.old_to_new);
    old_face = carry(old_face, r);
    for (int f = 0; f < 4; ++f) old_face[r.first_new + f] = f;
  }

  for (;;) {
    int x = -1;
    for (int t = 0; t < run.real.size() && x < 0; ++t)
      if (old_face[t] >= 0) x = t;
    if (x < 0) break;
    const int f = old_face[x];
    const int y = run.real.tri().adj(x, f).tet;
    old_face[x] = old_face[y] = -1;
    ApplyResult r = run.apply({MoveKind::BaPlus, {x}});
    old_face = carry(old_face, r);
    r = run.apply({MoveKind::MPaPlus, {r.first_new + f, f}});
    old_face = carry(old_face, r);
  }

  for (;;) {
    const Skeleton& sk = run.real.skeleton();
    int pick = -1;
    for (const EdgeClass& ec : sk.edges)
      if (!run.real.is_marked(ec.id) && run.probe.vertex_tagged(ec.v0) && run.probe.vertex_tagged(ec.v1)) {
        pick = ec.id;
        break;
      }
    if (pick < 0) break;
    run.run(subdivide_edge(run.real, pick).moves);
  }
}

// Cuts the star of a marked edge down to three tetrahedra with an la+ that
// keeps the mark on the short side, then divides the parallel edge it leaves.
void shrink_marked_star(Runner& run, int id) {
  const Skeleton& sk = run.real.skeleton();
  const std::vector<Corner> cyc = sk.edges[id].cycle;
  const int v = static_cast<int>(cyc.size());
  for (int i = 0; i + 2 < v; ++i) {
    const MoveInstance la{MoveKind::LaPlus, {cyc[0].tet, corner_edge(cyc[0]), i, i + 2, 1}};
    auto target = direct(run.real, la);
    if (!target) continue;
    Chain chain;
    try {
      chain = decompose_l_chain(run.real, la);
    } catch (const Error&) {
      continue;
    }
    const auto iso = match(chain, *target);
    if (!iso) continue;
    // A corner of the parallel edge outside the lune, read in the decomposed result.
    const Skeleton& ts = target->tri.skeleton();
    const int q = target->tri.size() - 1;
    const int e2 = ts.edge_of[q][edge_index(2, 3)];
    std::optional<Corner> rep;
    for (const Corner& c : ts.edges[e2].cycle)
      if (c.tet < target->tri.size() - 2) rep = c;
    run.run(chain.moves);
    const int t = iso->tets[rep->tet];
    const Perm4 p = iso->labels[rep->tet];
    const int e2_now = run.real.skeleton().edge_of[t][edge_index(p[rep->a], p[rep->b])];
    run.run(subdivide_edge(run.real, e2_now).moves);
    return;
  }
  throw Error(ErrorKind::PhaseLimit, "no la+ reduces the star of marked edge " + std::to_string(id));
}

// Divides unmarked edges until only allowed singularities remain.
void clean_up(Runner& run) {
  for (;;) {
    const SingularityReport rep = singularity_report(run.real);
    const SingularityFinding* bad = nullptr;
    for (const auto& f : rep.findings)
      if (!f.allowed) {
        bad = &f;
        break;
      }
    if (!bad) return;
    int pick = -1;
    if (bad->type == SingularityType::SelfAdjacentVertices || bad->type == SingularityType::MultipleAdjacencyVertices)
      for (int e : bad->edges)
        if (!run.real.is_marked(e)) {
          pick = e;
          break;
        }
    if (pick < 0) throw Error(ErrorKind::PhaseLimit, "cannot remove singularity: " + describe(*bad));
    run.run(subdivide_edge(run.real, pick).moves);
  }
}

}  // namespace

PostconditionReport check_desingularized(const MarkedTriangulation& m) {
  PostconditionReport out;
  const Skeleton& sk = m.skeleton();
  for (const auto& f : singularity_report(m).findings)
    if (!f.allowed) {
      out.allowed_singularities = false;
      out.problems.push_back("singularity: " + describe(f));
    }

  const std::vector<int> marked = m.marked();
  std::vector<Closure> stars;
  for (int id : marked) {
    const EdgeClass& ec = sk.edges[id];
    const std::vector<int> tets = star_tets(m.tri(), id);
    const bool three = ec.valence() == 3 && tets.size() == 3;
    if (!ec.is_loop) {
      if (!three) {
        out.marked_stars = false;
        out.problems.push_back("marked edge " + std::to_string(id) + ": star is not three tetrahedra");
      }
    } else {
      bool ok = three;
      std::set<int> equator, faces;
      for (const Corner& c : ec.cycle) {
        equator.insert(sk.vertex_of[c.tet][c.x]);
        equator.insert(sk.vertex_of[c.tet][c.y]);
        faces.insert(sk.triangle_of[c.tet][c.a]);
        faces.insert(sk.triangle_of[c.tet][c.b]);
      }
      ok = ok && equator.size() == 3 && !equator.count(ec.v0) && faces.size() == 6;
      if (!ok) {
        out.loop_cones = false;
        out.problems.push_back("marked loop " + std::to_string(id) + ": neighbourhood is not a cone on a triangle");
      }
    }
    stars.push_back(closed_star(m, id));
  }

  for (std::size_t i = 0; i < marked.size(); ++i) {
    const EdgeClass& ei = sk.edges[marked[i]];
    for (int v : stars[i].vertices)
      if (v != ei.v0 && v != ei.v1 && m.vertex_tagged(v)) {
        out.disjoint_stars = false;
        out.problems.push_back("marked edge " + std::to_string(marked[i]) + ": star meets an original boundary vertex");
      }
    for (std::size_t j = i + 1; j < marked.size(); ++j) {
      const EdgeClass& ej = sk.edges[marked[j]];
      bool bad = meets(stars[i].tets, stars[j].tets) || meets(stars[i].triangles, stars[j].triangles) ||
                 meets(stars[i].edges, stars[j].edges);
      for (int v : stars[i].vertices)
        if (stars[j].vertices.count(v) && !((v == ei.v0 || v == ei.v1) && (v == ej.v0 || v == ej.v1))) bad = true;
      if (bad) {
        out.disjoint_stars = false;
        out.problems.push_back("marked edges " + std::to_string(marked[i]) + " and " + std::to_string(marked[j]) +
                               ": neighbourhoods overlap");
      }
    }
  }
  return out;
}

DesingularizeResult desingularize(const MarkedTriangulation& m, DesingularizeOptions opt) {
  if (check_desingularized(m).ok()) return {m, make_certificate(m, {}, opt.with_step_signatures)};
  Runner run{m, m, {}, opt.max_iterations};
  barycentric_round(run);
  if (run.real.marked_count() > 0 || !singularity_report(run.real).empty()) barycentric_round(run);
  for (;;) {
    const Skeleton& sk = run.real.skeleton();
    int pick = -1;
    for (int id : run.real.marked())
      if (sk.edges[id].valence() > 3) {
        pick = id;
        break;
      }
    if (pick < 0) break;
    shrink_marked_star(run, pick);
  }
  clean_up(run);
  const PostconditionReport rep = check_desingularized(run.real);
  if (!rep.ok()) {
    std::string msg = "postconditions not reached:";
    for (const auto& p : rep.problems) msg += " " + p + ";";
    throw Error(ErrorKind::PhaseLimit, msg);
  }
  return {run.real, make_certificate(m, run.moves, opt.with_step_signatures)};
}

// ---------------------------------------------------------------------------
// Searches

namespace {

using Clock = std::chrono::steady_clock;

// Walks a chain of signatures from `from`, rediscovering one move per step.
std::optional<std::vector<MoveInstance>> realize(const MarkedTriangulation& from, const std::vector<Signature>& path,
                                                 const std::vector<MoveKind>& kinds) {
  MarkedTriangulation cur = from;
  std::vector<MoveInstance> moves;
  for (std::size_t k = 1; k < path.size(); ++k) {
    bool found = false;
    for (const MoveInstance& mv : enumerate_moves(cur, kinds)) {
      ApplyResult r = apply_move(cur, mv, ApplyOptions{false});
      if (signature(r.result) != path[k]) continue;
      cur = std::move(r.result);
      moves.push_back(mv);
      found = true;
      break;
    }
    if (!found) return std::nullopt;
  }
  return moves;
}

struct Visit {
  MarkedTriangulation rep;
  Signature parent;
  int depth = 0;
};

using VisitMap = std::unordered_map<Signature, Visit, SignatureHash>;

std::vector<Signature> trace(const VisitMap& seen, const Signature& s, const Signature& root) {
  std::vector<Signature> path{s};
  Signature cur = s;
  while (!(cur == root)) {
    cur = seen.at(cur).parent;
    path.push_back(cur);
  }
  return path;  // from s back to the root
}

}  // namespace

std::optional<Certificate> connect(const MarkedTriangulation& a, const MarkedTriangulation& b,
                                   const SearchBudget& budget, bool mpa_only) {
  const std::vector<MoveKind> kinds = mpa_only
                                          ? std::vector<MoveKind>{MoveKind::MPaPlus, MoveKind::MPaMinus}
                                          : std::vector<MoveKind>{MoveKind::MPaPlus, MoveKind::MPaMinus,
                                                                  MoveKind::VaPlus, MoveKind::VaMinus};
  const Signature root[2] = {signature(a), signature(b)};
  if (root[0] == root[1]) return make_certificate(a, {});
  if (a.size() > budget.max_tets || b.size() > budget.max_tets) return std::nullopt;

  const auto t0 = Clock::now();
  VisitMap seen[2];
  std::vector<Signature> frontier[2];
  seen[0].emplace(root[0], Visit{a, root[0], 0});
  seen[1].emplace(root[1], Visit{b, root[1], 0});
  frontier[0] = {root[0]};
  frontier[1] = {root[1]};
  long states = 2;
  std::optional<Signature> meet;
  int depth[2] = {0, 0};

  while (!meet && !frontier[0].empty() && !frontier[1].empty()) {
    const int side = frontier[0].size() <= frontier[1].size() ? 0 : 1;
    if (depth[0] + depth[1] >= budget.max_depth) break;
    std::vector<Signature> next;
    for (const Signature& s : frontier[side]) {
      const MarkedTriangulation rep = seen[side].at(s).rep;
      for (const MoveInstance& mv : enumerate_moves(rep, kinds)) {
        if (rep.size() + tet_delta(mv.kind) > budget.max_tets) continue;
        MarkedTriangulation out = apply_move(rep, mv, ApplyOptions{false}).result;
        Signature sig = signature(out);
        if (seen[side].count(sig)) continue;
        seen[side].emplace(sig, Visit{std::move(out), s, depth[side] + 1});
        next.push_back(sig);
        ++states;
        if (seen[1 - side].count(sig)) {
          meet = sig;
          break;
        }
      }
      if (meet) break;
      if (states > budget.max_states) return std::nullopt;
      if (std::chrono::duration<double>(Clock::now() - t0).count() > budget.max_seconds) return std::nullopt;
    }
    std::sort(next.begin(), next.end());
    frontier[side] = std::move(next);
    ++depth[side];
  }
  if (!meet) return std::nullopt;

  std::vector<Signature> path = trace(seen[0], *meet, root[0]);
  std::reverse(path.begin(), path.end());
  const std::vector<Signature> back = trace(seen[1], *meet, root[1]);
  path.insert(path.end(), back.begin() + 1, back.end());
  auto moves = realize(a, path, kinds);
  if (!moves) return std::nullopt;
  return make_certificate(a, *moves);
}

std::optional<Domination> dominate(const MarkedTriangulation& a, const MarkedTriangulation& b,
                                   const SearchBudget& budget) {
  if (!(homology_h1(a.tri()) == homology_h1(b.tri())))
    throw Error(ErrorKind::InvariantMismatch, "first homology differs");
  if (link_multiset(a.tri()) != link_multiset(b.tri()))
    throw Error(ErrorKind::InvariantMismatch, "vertex links differ");
  if (a.marked_count() != b.marked_count()) throw Error(ErrorKind::InvariantMismatch, "marked edge counts differ");

  const std::vector<MoveKind> kinds{MoveKind::MPaPlus, MoveKind::LaPlus};
  const Signature root[2] = {signature(a), signature(b)};
  const auto t0 = Clock::now();
  VisitMap seen[2];
  // Positive moves only grow the triangulation, so nodes are expanded by size.
  std::map<int, std::vector<Signature>> bucket[2];
  seen[0].emplace(root[0], Visit{a, root[0], 0});
  seen[1].emplace(root[1], Visit{b, root[1], 0});
  bucket[0][a.size()].push_back(root[0]);
  bucket[1][b.size()].push_back(root[1]);
  long states = 2;

  auto finish = [&](const Signature& d) -> std::optional<Domination> {
    Domination out;
    out.dominator = d;
    for (int side = 0; side < 2; ++side) {
      std::vector<Signature> path = trace(seen[side], d, root[side]);
      std::reverse(path.begin(), path.end());
      auto moves = realize(side == 0 ? a : b, path, kinds);
      if (!moves) return std::nullopt;
      (side == 0 ? out.from_a : out.from_b) = make_certificate(side == 0 ? a : b, *moves);
    }
    return out;
  };
  if (root[0] == root[1]) return finish(root[0]);

  for (int size = std::min(a.size(), b.size()); size <= budget.max_tets; ++size) {
    for (int side = 0; side < 2; ++side) {
      auto it = bucket[side].find(size);
      if (it == bucket[side].end()) continue;
      std::vector<Signature> layer = it->second;
      std::sort(layer.begin(), layer.end());
      for (const Signature& s : layer) {
        const Visit& vis = seen[side].at(s);
        if (vis.depth >= budget.max_depth) continue;
        const MarkedTriangulation rep = vis.rep;
        const int d = vis.depth;
        for (const MoveInstance& mv : enumerate_moves(rep, kinds)) {
          if (rep.size() + tet_delta(mv.kind) > budget.max_tets) continue;
          MarkedTriangulation out = apply_move(rep, mv, ApplyOptions{false}).result;
          Signature sig = signature(out);
          if (seen[side].count(sig)) continue;
          const int n = out.size();
          seen[side].emplace(sig, Visit{std::move(out), s, d + 1});
          bucket[side][n].push_back(sig);
          ++states;
          if (seen[1 - side].count(sig)) return finish(sig);
        }
        if (states > budget.max_states) return std::nullopt;
        if (std::chrono::duration<double>(Clock::now() - t0).count() > budget.max_seconds) return std::nullopt;
      }
    }
  }
  return std::nullopt;
}

MoveGraph move_graph(const MarkedTriangulation& start, int max_tets, const std::vector<MoveKind>& kinds,
                     long max_nodes) {
  std::map<Signature, int> index;
  std::vector<MarkedTriangulation> reps;
  std::vector<Signature> sigs;
  std::vector<MoveGraph::Edge> edges;
  MoveGraph g;
  auto visit = [&](const Signature& s, const MarkedTriangulation& m) {
    auto [it, fresh] = index.emplace(s, static_cast<int>(reps.size()));
    if (fresh) {
      reps.push_back(m);
      sigs.push_back(s);
    }
    return it->second;
  };
  if (start.size() > max_tets) return g;
  visit(signature(start), start);
  for (std::size_t at = 0; at < reps.size(); ++at) {
    const MarkedTriangulation cur = reps[at];
    for (const MoveInstance& mv : enumerate_moves(cur, kinds)) {
      if (cur.size() + tet_delta(mv.kind) > max_tets) continue;
      ApplyResult r;
      try {
        r = apply_move(cur, mv, ApplyOptions{false});
      } catch (const Error&) {
        continue;
      }
      const Signature s = signature(r.result);
      if (!index.count(s) && static_cast<long>(reps.size()) >= max_nodes) {
        g.truncated = true;
        continue;
      }
      edges.push_back({static_cast<int>(at), visit(s, r.result), mv});
    }
  }
  std::vector<int> order(reps.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int x, int y) { return sigs[x] < sigs[y]; });
  std::vector<int> pos(reps.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    pos[order[k]] = static_cast<int>(k);
    g.nodes.push_back(sigs[order[k]]);
    g.reps.push_back(reps[order[k]]);
  }
  for (auto& e : edges) g.edges.push_back({pos[e.from], pos[e.to], e.move});
  return g;
}

}  // namespace mark3d
