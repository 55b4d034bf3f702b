#include "engine.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace mark3d::engine {

Work from_marked(const MarkedTriangulation& m) {
  return Work{m.tri().table(), m.edge_masks(), m.vertex_tag_masks()};
}

MarkedTriangulation to_marked(const Work& w) {
  return MarkedTriangulation::from_masks(Triangulation::from_table(w.table), w.masks, w.tags);
}

Rewrite replace_ball(Work& w, std::vector<int> removed, const std::vector<FreshTet>& fresh) {
  const int n_old = w.size();
  const int k = static_cast<int>(fresh.size());
  std::sort(removed.begin(), removed.end());
  std::vector<bool> gone(n_old, false);
  for (int t : removed) gone[t] = true;

  // Removed face -> (fresh tet, fresh face, labels fresh -> removed).
  std::map<std::pair<int, int>, std::tuple<int, int, Perm4>> taken;
  for (int i = 0; i < k; ++i)
    for (int f = 0; f < 4; ++f) {
      const Slot& s = fresh[i].faces[f];
      if (s.external) taken[{s.tet, s.face}] = {i, f, s.perm};
    }

  GluingTable add(k);
  std::vector<std::uint8_t> add_masks(k, 0), add_tags(k, 0);
  for (int i = 0; i < k; ++i) {
    for (int f = 0; f < 4; ++f) {
      const Slot& s = fresh[i].faces[f];
      if (!s.external) {
        add[i][f] = Gluing{n_old + s.tet, s.perm};
        continue;
      }
      const Gluing old = w.table[s.tet][s.face];
      if (old.tet < 0) {
        add[i][f] = Gluing{};
        continue;
      }
      const int g2 = old.perm[s.face];
      if (gone[old.tet]) {
        auto it = taken.find({old.tet, g2});
        if (it == taken.end()) throw std::logic_error("replace_ball: boundary face not covered");
        auto [j, f2, sigma2] = it->second;
        add[i][f] = Gluing{n_old + j, sigma2.inverse() * old.perm * s.perm};
      } else {
        const Perm4 p = old.perm * s.perm;
        add[i][f] = Gluing{old.tet, p};
        w.table[old.tet][g2] = Gluing{n_old + i, p.inverse()};
      }
    }
    // Edge and vertex flags inherited from faces on the patch boundary.
    for (int e = 0; e < 6; ++e) {
      const int a = kEdgeVertices[e][0], b = kEdgeVertices[e][1];
      for (int f = 0; f < 4; ++f) {
        const Slot& s = fresh[i].faces[f];
        if (!s.external || f == a || f == b) continue;
        if (w.masks[s.tet] >> edge_index(s.perm[a], s.perm[b]) & 1) add_masks[i] |= static_cast<std::uint8_t>(1u << e);
        break;
      }
    }
    for (int v = 0; v < 4; ++v)
      for (int f = 0; f < 4; ++f) {
        const Slot& s = fresh[i].faces[f];
        if (!s.external || f == v) continue;
        if (w.tags[s.tet] >> s.perm[v] & 1) add_tags[i] |= static_cast<std::uint8_t>(1u << v);
        break;
      }
  }
  for (int i = 0; i < k; ++i) {
    w.table.push_back(add[i]);
    w.masks.push_back(add_masks[i]);
    w.tags.push_back(add_tags[i]);
  }

  // Compact.
  const int total = n_old + k;
  std::vector<int> remap(total, -1);
  int next = 0;
  for (int t = 0; t < total; ++t)
    if (t >= n_old || !gone[t]) remap[t] = next++;
  Work out;
  out.table.resize(next);
  out.masks.resize(next);
  out.tags.resize(next);
  for (int t = 0; t < total; ++t) {
    if (remap[t] < 0) continue;
    for (int f = 0; f < 4; ++f) {
      Gluing g = w.table[t][f];
      if (g.tet >= 0) g.tet = remap[g.tet];
      out.table[remap[t]][f] = g;
    }
    out.masks[remap[t]] = w.masks[t];
    out.tags[remap[t]] = w.tags[t];
  }
  w = std::move(out);
  Rewrite r;
  r.old_to_new.assign(remap.begin(), remap.begin() + n_old);
  r.first_new = next - k;
  return r;
}

Corner corner_for(int tet, int a, int b) {
  if (a > b) std::swap(a, b);
  int x = -1, y = -1;
  for (int v = 0; v < 4; ++v) {
    if (v == a || v == b) continue;
    if (x < 0) x = v; else y = v;
  }
  return Corner{tet, static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b), static_cast<std::uint8_t>(x),
                static_cast<std::uint8_t>(y)};
}

Corner next_corner(const Work& w, const Corner& c) {
  const Gluing& g = w.table[c.tet][c.x];
  if (g.tet < 0) return Corner{-1, 0, 0, 0, 0};
  return Corner{g.tet, static_cast<std::uint8_t>(g.perm[c.a]), static_cast<std::uint8_t>(g.perm[c.b]),
                static_cast<std::uint8_t>(g.perm[c.y]), static_cast<std::uint8_t>(g.perm[c.x])};
}

std::optional<std::vector<Corner>> walk_edge(const Work& w, const Corner& start) {
  std::vector<Corner> out{start};
  Corner c = start;
  for (int guard = 0; guard <= 6 * w.size(); ++guard) {
    c = next_corner(w, c);
    if (c.tet < 0) return std::nullopt;
    if (c == start) return out;
    out.push_back(c);
  }
  return std::nullopt;
}

Rewrite mp_plus(Work& w, int a_tet, int fa) {
  const Gluing g = w.table[a_tet][fa];
  const int b_tet = g.tet;
  const Perm4 p = g.perm;
  int x[3], n = 0;
  for (int v = 0; v < 4; ++v)
    if (v != fa) x[n++] = v;
  std::vector<FreshTet> fresh(3);
  for (int i = 0; i < 3; ++i) {
    const int x0 = x[i], x1 = x[(i + 1) % 3], x2 = x[(i + 2) % 3];
    FreshTet& t = fresh[i];
    t.faces[0] = external(b_tet, p[x0], Perm4(p[x0], p[fa], p[x1], p[x2]));
    t.faces[1] = external(a_tet, x0, Perm4(fa, x0, x1, x2));
    t.faces[2] = internal((i + 1) % 3, 3, Perm4(0, 1, 3, 2));
    t.faces[3] = internal((i + 2) % 3, 2, Perm4(0, 1, 3, 2));
  }
  return replace_ball(w, {a_tet, b_tet}, fresh);
}

Rewrite mp_minus(Work& w, const std::vector<Corner>& cyc) {
  // Equator vertex E_k is y_k in tetrahedron k and x_{k+1} in tetrahedron k+1.
  auto lab = [](int m) { return ((m % 3) + 3) % 3 + 1; };
  std::vector<FreshTet> fresh(2);
  fresh[0].faces[0] = internal(1, 0, Perm4());
  fresh[1].faces[0] = internal(0, 0, Perm4());
  for (int k = 0; k < 3; ++k) {
    const Corner& c = cyc[k];
    int su[4], sw[4];
    su[0] = c.a;
    sw[0] = c.b;
    su[lab(k - 1)] = sw[lab(k - 1)] = c.x;
    su[lab(k)] = sw[lab(k)] = c.y;
    su[lab(k + 1)] = c.b;
    sw[lab(k + 1)] = c.a;
    fresh[0].faces[lab(k + 1)] = external(c.tet, c.b, Perm4(su[0], su[1], su[2], su[3]));
    fresh[1].faces[lab(k + 1)] = external(c.tet, c.a, Perm4(sw[0], sw[1], sw[2], sw[3]));
  }
  return replace_ball(w, {cyc[0].tet, cyc[1].tet, cyc[2].tet}, fresh);
}

Perm4 va_frame(int k) {
  switch (k) {
    case 0: return Perm4(0, 1, 2, 3);
    case 1: return Perm4(0, 2, 1, 3);
    default: return Perm4(0, 3, 1, 2);
  }
}

Rewrite va_plus(Work& w, int tet, int k) {
  const Perm4 pi = va_frame(k);
  std::vector<FreshTet> fresh(3);  // T', P, Q
  FreshTet& t = fresh[0];
  FreshTet& p = fresh[1];
  FreshTet& q = fresh[2];
  t.faces[0] = internal(1, 0, Perm4());
  t.faces[1] = internal(1, 1, Perm4());
  t.faces[2] = external(tet, pi[2], pi);
  t.faces[3] = external(tet, pi[3], pi);
  p.faces[0] = internal(0, 0, Perm4());
  p.faces[1] = internal(0, 1, Perm4());
  p.faces[2] = internal(2, 2, Perm4());
  p.faces[3] = internal(2, 3, Perm4());
  q.faces[0] = external(tet, pi[0], pi);
  q.faces[1] = external(tet, pi[1], pi);
  q.faces[2] = internal(1, 2, Perm4());
  q.faces[3] = internal(1, 3, Perm4());
  return replace_ball(w, {tet}, fresh);
}

std::optional<VaSite> va_minus_site(const Work& w, int p, int k) {
  const Perm4 pi = va_frame(k);
  const Gluing& g0 = w.table[p][pi[0]];
  const Gluing& g1 = w.table[p][pi[1]];
  const Gluing& h2 = w.table[p][pi[2]];
  const Gluing& h3 = w.table[p][pi[3]];
  if (g0.tet < 0 || g1.tet < 0 || h2.tet < 0 || h3.tet < 0) return std::nullopt;
  const int t = g0.tet, q = h2.tet;
  if (g1.tet != t || h3.tet != q || t == p || q == p || t == q) return std::nullopt;
  // Both opposite edges must have valence two: the two faces through each edge
  // reach the same faces of the partner.
  const Perm4 rt(g1.perm[pi[0]], g0.perm[pi[1]], g0.perm[pi[2]], g0.perm[pi[3]]);
  const Perm4 rq(h2.perm[pi[0]], h2.perm[pi[1]], h3.perm[pi[2]], h2.perm[pi[3]]);
  if (g1.perm[pi[2]] != rt[2] || g1.perm[pi[3]] != rt[3]) return std::nullopt;
  if (h3.perm[pi[0]] != rq[0] || h3.perm[pi[1]] != rq[1]) return std::nullopt;
  // rt and rq must be bijections.
  auto bij = [](const Perm4& r) {
    bool seen[4] = {false, false, false, false};
    for (int i = 0; i < 4; ++i) {
      if (r[i] < 0 || r[i] > 3 || seen[r[i]]) return false;
      seen[r[i]] = true;
    }
    return true;
  };
  if (!bij(rt) || !bij(rq)) return std::nullopt;
  return VaSite{t, p, q, rt, rq};
}

Rewrite va_minus(Work& w, int p, int k) {
  const auto site = va_minus_site(w, p, k);
  if (!site) throw std::logic_error("va_minus: pattern absent");
  std::vector<FreshTet> fresh(1);
  FreshTet& r = fresh[0];
  r.faces[0] = external(site->q, site->rho_q[0], site->rho_q);
  r.faces[1] = external(site->q, site->rho_q[1], site->rho_q);
  r.faces[2] = external(site->t, site->rho_t[2], site->rho_t);
  r.faces[3] = external(site->t, site->rho_t[3], site->rho_t);
  return replace_ball(w, {site->t, site->p, site->q}, fresh);
}

Rewrite ba_plus(Work& w, int tet) {
  std::vector<FreshTet> fresh(4);
  for (int k = 0; k < 4; ++k)
    for (int m = 0; m < 4; ++m)
      fresh[k].faces[m] = (m == k) ? external(tet, k, Perm4()) : internal(m, k, Perm4::swap(k, m));
  return replace_ball(w, {tet}, fresh);
}

std::optional<BaSite> ba_minus_site(const Work& w, int t0, int v0) {
  BaSite s;
  s.tets[v0] = t0;
  s.frames[v0] = Perm4();
  for (int m = 0; m < 4; ++m) {
    if (m == v0) continue;
    const Gluing& g = w.table[t0][m];
    if (g.tet < 0) return std::nullopt;
    s.tets[m] = g.tet;
    s.frames[m] = g.perm * Perm4::swap(v0, m);
  }
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (s.tets[i] == s.tets[j]) return std::nullopt;
  for (int m = 0; m < 4; ++m)
    for (int m2 = 0; m2 < 4; ++m2) {
      if (m == m2) continue;
      const Gluing& g = w.table[s.tets[m]][s.frames[m][m2]];
      const Perm4 want = s.frames[m2] * Perm4::swap(m, m2) * s.frames[m].inverse();
      if (g.tet != s.tets[m2] || g.perm != want) return std::nullopt;
    }
  return s;
}

Rewrite ba_minus(Work& w, int t0, int v0) {
  const auto s = ba_minus_site(w, t0, v0);
  if (!s) throw std::logic_error("ba_minus: pattern absent");
  std::vector<FreshTet> fresh(1);
  for (int m = 0; m < 4; ++m) fresh[0].faces[m] = external(s->tets[m], s->frames[m][m], s->frames[m]);
  return replace_ball(w, {s->tets[0], s->tets[1], s->tets[2], s->tets[3]}, fresh);
}

Rewrite la_plus(Work& w, const std::vector<Corner>& cyc, int i, int j) {
  const int v = static_cast<int>(cyc.size());
  const Corner& ci = cyc[i];
  const Corner& cim = cyc[(i + v - 1) % v];
  const Corner& cj = cyc[j];
  const Corner& cjm = cyc[(j + v - 1) % v];
  const int n = w.size();
  const int P = n, Q = n + 1;
  w.table.resize(n + 2);
  w.masks.resize(n + 2, 0);
  w.tags.resize(n + 2, 0);
  auto glue = [&](int t, int f, int t2, Perm4 perm) {
    w.table[t][f] = Gluing{t2, perm};
    w.table[t2][perm[f]] = Gluing{t, perm.inverse()};
  };
  // Labels: 2,3 are the endpoints of the edge, 0,1 the pillow's third vertices.
  const Perm4 pf0(ci.y, ci.x, ci.a, ci.b);
  const Perm4 pf1(cjm.y, cjm.x, cjm.a, cjm.b);
  const Perm4 qf0(cim.x, cim.y, cim.a, cim.b);
  const Perm4 qf1(cj.x, cj.y, cj.a, cj.b);
  // Flags for the pillow come from the faces it is inserted between.
  auto inherit = [&](int nt, int f, int ot, Perm4 perm) {
    for (int e = 0; e < 6; ++e) {
      const int a = kEdgeVertices[e][0], b = kEdgeVertices[e][1];
      if (a == f || b == f) continue;
      if (w.masks[ot] >> edge_index(perm[a], perm[b]) & 1) w.masks[nt] |= static_cast<std::uint8_t>(1u << e);
    }
    for (int x = 0; x < 4; ++x)
      if (x != f && (w.tags[ot] >> perm[x] & 1)) w.tags[nt] |= static_cast<std::uint8_t>(1u << x);
  };
  inherit(P, 0, ci.tet, pf0);
  inherit(P, 1, cjm.tet, pf1);
  inherit(Q, 0, cim.tet, qf0);
  inherit(Q, 1, cj.tet, qf1);
  glue(P, 0, ci.tet, pf0);
  glue(P, 1, cjm.tet, pf1);
  glue(Q, 0, cim.tet, qf0);
  glue(Q, 1, cj.tet, qf1);
  glue(P, 2, Q, Perm4());
  glue(P, 3, Q, Perm4());
  Rewrite r;
  r.old_to_new.resize(n);
  for (int t = 0; t < n; ++t) r.old_to_new[t] = t;
  r.first_new = n;
  return r;
}

Rewrite la_minus(Work& w, const Corner& d) {
  const int P = d.tet;
  const Gluing gx = w.table[P][d.x];
  const Gluing gy = w.table[P][d.y];
  const int Q = gx.tet;
  Perm4 phi(0, 0, 0, 0);
  int img[4];
  img[d.a] = gx.perm[d.a];
  img[d.b] = gx.perm[d.b];
  img[d.y] = gx.perm[d.y];
  img[d.x] = gy.perm[d.x];
  phi = Perm4(img[0], img[1], img[2], img[3]);
  const int n = w.size();
  for (int u : {static_cast<int>(d.a), static_cast<int>(d.b)}) {
    const Gluing f1 = w.table[P][u];
    const Gluing f2 = w.table[Q][phi[u]];
    const int face1 = f1.perm[u];
    const int face2 = f2.perm[phi[u]];
    const Perm4 perm = f2.perm * phi * f1.perm.inverse();
    w.table[f1.tet][face1] = Gluing{f2.tet, perm};
    w.table[f2.tet][face2] = Gluing{f1.tet, perm.inverse()};
  }
  // Merge flags of the two edges opposite d onto the surviving neighbours.
  Rewrite r;
  r.old_to_new.assign(n, -1);
  int next = 0;
  for (int t = 0; t < n; ++t)
    if (t != P && t != Q) r.old_to_new[t] = next++;
  Work out;
  out.table.resize(next);
  out.masks.resize(next);
  out.tags.resize(next);
  for (int t = 0; t < n; ++t) {
    if (r.old_to_new[t] < 0) continue;
    for (int f = 0; f < 4; ++f) {
      Gluing g = w.table[t][f];
      g.tet = r.old_to_new[g.tet];
      out.table[r.old_to_new[t]][f] = g;
    }
    out.masks[r.old_to_new[t]] = w.masks[t];
    out.tags[r.old_to_new[t]] = w.tags[t];
  }
  w = std::move(out);
  r.first_new = next;
  return r;
}

std::optional<PatternMatch> match_pattern(const Work& w, const Pattern& pat, int anchor, Perm4 frame) {
  PatternMatch m;
  m.tets.assign(pat.size, -1);
  m.frames.assign(pat.size, Perm4());
  m.tets[0] = anchor;
  m.frames[0] = frame;
  std::vector<int> queue{0};
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const int pt = queue[qi];
    for (int f = 0; f < 4; ++f) {
      const Gluing& in = pat.inner[pt][f];
      if (in.tet < 0) continue;
      const Gluing& g = w.table[m.tets[pt]][m.frames[pt][f]];
      if (g.tet < 0) return std::nullopt;
      if (m.tets[in.tet] < 0) {
        for (int other : m.tets)
          if (other == g.tet) return std::nullopt;
        m.tets[in.tet] = g.tet;
        m.frames[in.tet] = g.perm * m.frames[pt] * in.perm.inverse();
        queue.push_back(in.tet);
      } else if (g.tet != m.tets[in.tet] || g.perm != m.frames[in.tet] * in.perm * m.frames[pt].inverse()) {
        return std::nullopt;
      }
    }
  }
  for (int t : m.tets)
    if (t < 0) return std::nullopt;
  return m;
}

Rewrite contract_pattern(Work& w, const Pattern& pat, const PatternMatch& match) {
  std::vector<FreshTet> fresh(1);
  for (int pt = 0; pt < pat.size; ++pt)
    for (int f = 0; f < 4; ++f) {
      if (pat.inner[pt][f].tet >= 0) continue;
      const auto& [ref_face, sigma] = pat.boundary[pt][f];
      const Perm4 fr = match.frames[pt];
      fresh[0].faces[ref_face] = external(match.tets[pt], fr[f], fr * sigma.inverse());
    }
  return replace_ball(w, match.tets, fresh);
}

Rewrite expand_pattern(Work& w, const Pattern& pat, int tet, Perm4 frame) {
  std::vector<FreshTet> fresh(pat.size);
  for (int pt = 0; pt < pat.size; ++pt)
    for (int f = 0; f < 4; ++f) {
      const Gluing& in = pat.inner[pt][f];
      if (in.tet >= 0) {
        fresh[pt].faces[f] = internal(in.tet, in.perm[f], in.perm);
      } else {
        const auto& [ref_face, sigma] = pat.boundary[pt][f];
        fresh[pt].faces[f] = external(tet, frame[ref_face], frame * sigma);
      }
    }
  return replace_ball(w, {tet}, fresh);
}

}  // namespace mark3d::engine
