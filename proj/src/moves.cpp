#include "mark3d/moves.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "ca_catalog.hpp"
#include "engine.hpp"

namespace mark3d {

const char* to_string(MoveKind k) {
  switch (k) {
    case MoveKind::MPaPlus: return "mpa+";
    case MoveKind::MPaMinus: return "mpa-";
    case MoveKind::VaPlus: return "va+";
    case MoveKind::VaMinus: return "va-";
    case MoveKind::LaPlus: return "la+";
    case MoveKind::LaMinus: return "la-";
    case MoveKind::CaPlus: return "ca+";
    case MoveKind::CaMinus: return "ca-";
    case MoveKind::BaPlus: return "ba+";
    case MoveKind::BaMinus: return "ba-";
  }
  return "?";
}

std::optional<MoveKind> parse_kind(const std::string& s) {
  std::string low;
  for (char c : s) low.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  for (MoveKind k : kAllKinds)
    if (low == to_string(k)) return k;
  return std::nullopt;
}

int tet_delta(MoveKind k) {
  switch (k) {
    case MoveKind::MPaPlus: return 1;
    case MoveKind::MPaMinus: return -1;
    case MoveKind::VaPlus: return 2;
    case MoveKind::VaMinus: return -2;
    case MoveKind::LaPlus: return 2;
    case MoveKind::LaMinus: return -2;
    case MoveKind::CaPlus: return 4;
    case MoveKind::CaMinus: return -4;
    case MoveKind::BaPlus: return 3;
    case MoveKind::BaMinus: return -3;
  }
  return 0;
}

bool is_positive(MoveKind k) { return tet_delta(k) > 0; }

MoveKind inverse_kind(MoveKind k) {
  switch (k) {
    case MoveKind::MPaPlus: return MoveKind::MPaMinus;
    case MoveKind::MPaMinus: return MoveKind::MPaPlus;
    case MoveKind::VaPlus: return MoveKind::VaMinus;
    case MoveKind::VaMinus: return MoveKind::VaPlus;
    case MoveKind::LaPlus: return MoveKind::LaMinus;
    case MoveKind::LaMinus: return MoveKind::LaPlus;
    case MoveKind::CaPlus: return MoveKind::CaMinus;
    case MoveKind::CaMinus: return MoveKind::CaPlus;
    case MoveKind::BaPlus: return MoveKind::BaMinus;
    case MoveKind::BaMinus: return MoveKind::BaPlus;
  }
  return k;
}

std::string MoveInstance::encode() const {
  std::string s = to_string(kind);
  s += ':';
  for (std::size_t i = 0; i < site.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(site[i]);
  }
  return s;
}

MoveInstance MoveInstance::decode(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw Error(ErrorKind::SyntaxError, "move '" + s + "': missing ':'");
  auto kind = parse_kind(s.substr(0, colon));
  if (!kind) throw Error(ErrorKind::SyntaxError, "move '" + s + "': unknown kind");
  MoveInstance mv{*kind, {}};
  std::stringstream ss(s.substr(colon + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      mv.site.push_back(v);
    } catch (const std::exception&) {
      throw Error(ErrorKind::SyntaxError, "move '" + s + "': bad site value '" + item + "'");
    }
  }
  return mv;
}

namespace {

using engine::Work;

[[noreturn]] void reject(const std::string& msg) { throw Error(ErrorKind::NotAdmissible, msg); }

std::size_t expected_site_size(MoveKind k) {
  switch (k) {
    case MoveKind::MPaPlus:
    case MoveKind::MPaMinus:
    case MoveKind::VaPlus:
    case MoveKind::VaMinus:
    case MoveKind::LaMinus:
    case MoveKind::CaPlus:
    case MoveKind::BaMinus: return 2;
    case MoveKind::LaPlus: return 5;
    case MoveKind::CaMinus: return 3;
    case MoveKind::BaPlus: return 1;
  }
  return 0;
}

int edge_of_corner(const Corner& c) { return edge_index(c.a, c.b); }

bool corner_marked(const MarkedTriangulation& m, int tet, int a, int b) {
  return m.edge_mask(tet) >> edge_index(a, b) & 1;
}

struct Applied {
  Work work;
  engine::Rewrite rw;
  MoveInstance inverse;
  int marked_choice = 0;
  // Edge class (given by a corner of the result) whose marks are dropped (la+ side choice).
  std::optional<std::pair<int, int>> unmark;
};

Applied do_mpa_plus(const MarkedTriangulation& m, const std::vector<int>& s) {
  const int t = s[0], f = s[1];
  if (f < 0 || f > 3) reject("mpa+: face out of range");
  if (m.tri().adj(t, f).tet == t) reject("mpa+: the triangle joins a tetrahedron to itself");
  Applied a{engine::from_marked(m), {}, {}, 0, std::nullopt};
  a.rw = engine::mp_plus(a.work, t, f);
  a.inverse = {MoveKind::MPaMinus, {a.rw.first_new, edge_index(0, 1)}};
  return a;
}

Applied do_mpa_minus(const MarkedTriangulation& m, const std::vector<int>& s) {
  const Skeleton& sk = m.skeleton();
  if (s[1] < 0 || s[1] > 5) reject("mpa-: edge out of range");
  const int id = sk.edge_of[s[0]][s[1]];
  const EdgeClass& ec = sk.edges[id];
  if (ec.valence() != 3) reject("mpa-: edge valence is not 3");
  std::set<int> tets;
  for (const Corner& c : ec.cycle) tets.insert(c.tet);
  if (tets.size() != 3) reject("mpa-: edge star has repeated tetrahedra");
  if (m.is_marked(id)) reject("mpa-: the disappearing region is marked");
  Applied a{engine::from_marked(m), {}, {}, 0, std::nullopt};
  a.rw = engine::mp_minus(a.work, ec.cycle);
  a.inverse = {MoveKind::MPaPlus, {a.rw.first_new, 0}};
  return a;
}

Applied do_va_plus(const MarkedTriangulation& m, const std::vector<int>& s) {
  if (s[1] < 0 || s[1] > 2) reject("va+: choice out of range");
  Applied a{engine::from_marked(m), {}, {}, 0, std::nullopt};
  a.rw = engine::va_plus(a.work, s[0], s[1]);
  a.inverse = {MoveKind::VaMinus, {a.rw.first_new + 1, 0}};
  return a;
}

std::optional<engine::VaSite> va_site_checked(const MarkedTriangulation& m, const Work& w, int p, int k) {
  if (k < 0 || k > 2) return std::nullopt;
  auto site = engine::va_minus_site(w, p, k);
  if (!site) return std::nullopt;
  const Perm4 pi = engine::va_frame(k);
  if (corner_marked(m, p, pi[0], pi[1]) || corner_marked(m, p, pi[2], pi[3])) return std::nullopt;
  return site;
}

Applied do_va_minus(const MarkedTriangulation& m, const std::vector<int>& s) {
  Applied a{engine::from_marked(m), {}, {}, 0, std::nullopt};
  if (s[1] < 0 || s[1] > 2) reject("va-: choice out of range");
  if (!engine::va_minus_site(a.work, s[0], s[1])) reject("va-: pattern not present");
  if (!va_site_checked(m, a.work, s[0], s[1])) reject("va-: a disappearing region is marked");
  a.rw = engine::va_minus(a.work, s[0], s[1]);
  a.inverse = {MoveKind::VaPlus, {a.rw.first_new, 0}};
  return a;
}

Applied do_la_plus(const MarkedTriangulation& m, const std::vector<int>& s) {
  const Skeleton& sk = m.skeleton();
  if (s[1] < 0 || s[1] > 5) reject("la+: edge out of range");
  const int id = sk.edge_of[s[0]][s[1]];
  const auto& cyc = sk.edges[id].cycle;
  const int v = static_cast<int>(cyc.size());
  const int i = s[2], j = s[3], side = s[4];
  if (!(0 <= i && i < j && j < v)) reject("la+: positions must satisfy 0 <= i < j < valence");
  if (sk.triangle_of[cyc[i].tet][cyc[i].y] == sk.triangle_of[cyc[j].tet][cyc[j].y])
    reject("la+: both arc endpoints lie on the same triangle");
  const bool marked = m.is_marked(id);
  if (marked && side != 1 && side != 2) reject("la+: a marked region needs side 1 or 2");
  if (!marked && side != 0) reject("la+: side choice given for an unmarked region");
  Applied a{engine::from_marked(m), {}, {}, side, std::nullopt};
  a.rw = engine::la_plus(a.work, cyc, i, j);
  const int P = a.rw.first_new, Q = P + 1;
  a.inverse = {MoveKind::LaMinus, {P, edge_index(0, 1)}};
  if (marked) a.unmark = side == 1 ? std::make_pair(Q, edge_index(2, 3)) : std::make_pair(P, edge_index(2, 3));
  return a;
}

struct LaMinusSite {
  Corner d;
  int q;
  int e1, e2;  // classes of the opposite edges in P and Q
};

LaMinusSite la_minus_site(const MarkedTriangulation& m, int tet, int edge) {
  const Skeleton& sk = m.skeleton();
  if (edge < 0 || edge > 5) reject("la-: edge out of range");
  const int id = sk.edge_of[tet][edge];
  const auto& cyc = sk.edges[id].cycle;
  if (cyc.size() != 2) reject("la-: edge valence is not 2");
  if (cyc[0].tet == cyc[1].tet) reject("la-: lune tetrahedra coincide");
  if (m.is_marked(id)) reject("la-: the lune region is marked");
  const Corner d = cyc[0];
  const Corner c1 = cyc[1];
  LaMinusSite s{d, c1.tet, sk.edge_of[d.tet][edge_index(d.x, d.y)], sk.edge_of[c1.tet][edge_index(c1.x, c1.y)]};
  for (int w : {static_cast<int>(d.a), static_cast<int>(d.b)}) {
    const int t1 = m.tri().adj(d.tet, w).tet;
    if (t1 == d.tet || t1 == s.q) reject("la-: lune is glued to itself");
  }
  for (int w : {static_cast<int>(c1.a), static_cast<int>(c1.b)}) {
    const int t2 = m.tri().adj(c1.tet, w).tet;
    if (t2 == d.tet || t2 == s.q) reject("la-: lune is glued to itself");
  }
  if (s.e1 == s.e2) throw Error(ErrorKind::StandardnessLost, "la-: the two merging regions coincide");
  if (m.is_marked(s.e1) && m.is_marked(s.e2)) reject("la-: both merging regions are marked");
  return s;
}

Applied do_la_minus(const MarkedTriangulation& m, const std::vector<int>& s) {
  const Skeleton& sk = m.skeleton();
  const LaMinusSite site = la_minus_site(m, s[0], s[1]);
  const int P = site.d.tet, Q = site.q;
  Applied a{engine::from_marked(m), {}, {}, 0, std::nullopt};
  a.rw = engine::la_minus(a.work, site.d);

  // Locate the arc of the inverse la+ in the merged region.
  std::set<std::pair<int, int>> old_e1;
  int v1 = 0, v2 = 0;
  for (const Corner& c : sk.edges[site.e1].cycle)
    if (c.tet != P && c.tet != Q) {
      old_e1.insert({a.rw.old_to_new[c.tet], edge_of_corner(c)});
      ++v1;
    }
  for (const Corner& c : sk.edges[site.e2].cycle)
    if (c.tet != P && c.tet != Q) ++v2;
  if (v1 == 0 || v2 == 0) reject("la-: a merging region lies entirely in the lune");
  Skeleton nsk;
  try {
    check_table(a.work.table);
    nsk = compute_skeleton(a.work.table);
  } catch (const Error& e) {
    reject(std::string("la-: result is not a valid triangulation: ") + e.what());
  }
  const auto first = *old_e1.begin();
  const int rid = nsk.edge_of[first.first][first.second];
  const auto& rc = nsk.edges[rid].cycle;
  const int V = static_cast<int>(rc.size());
  if (V != v1 + v2) reject("la-: merged region is not the union of the two sides");
  std::vector<bool> in1(V);
  for (int k = 0; k < V; ++k) in1[k] = old_e1.count({rc[k].tet, edge_of_corner(rc[k])}) > 0;
  int start = -1, runs = 0;
  for (int k = 0; k < V; ++k)
    if (in1[k] && !in1[(k + V - 1) % V]) {
      start = k;
      ++runs;
    }
  if (runs != 1) reject("la-: merged region does not split into two arcs");
  int i = start, j = start + v1;
  bool side1_is_e1 = true;
  if (j >= V) {
    i = j - V;
    j = start;
    side1_is_e1 = false;
  }
  if (nsk.triangle_of[rc[i].tet][rc[i].y] == nsk.triangle_of[rc[j].tet][rc[j].y])
    reject("la-: inverse arc would join a triangle to itself");
  int side = 0;
  if (m.is_marked(site.e1)) side = side1_is_e1 ? 1 : 2;
  if (m.is_marked(site.e2)) side = side1_is_e1 ? 2 : 1;
  a.inverse = {MoveKind::LaPlus, {rc[0].tet, edge_of_corner(rc[0]), i, j, side}};
  return a;
}

Applied do_ca_plus(const MarkedTriangulation& m, const std::vector<int>& s) {
  const auto& cat = ca_catalog();
  if (s[1] < 0 || s[1] >= static_cast<int>(cat.size())) reject("ca+: choice out of range");
  Applied a{engine::from_marked(m), {}, {}, 0, std::nullopt};
  a.rw = engine::expand_pattern(a.work, cat[s[1]].pattern, s[0], Perm4());
  a.inverse = {MoveKind::CaMinus, {s[1], a.rw.first_new, 0}};
  return a;
}

std::optional<engine::PatternMatch> ca_match(const MarkedTriangulation& m, const Work& w, int c, int tet, int frame) {
  const auto& cat = ca_catalog();
  if (c < 0 || c >= static_cast<int>(cat.size()) || frame < 0 || frame > 23) return std::nullopt;
  auto match = engine::match_pattern(w, cat[c].pattern, tet, Perm4::from_index(frame));
  if (!match) return std::nullopt;
  for (auto [pt, e] : cat[c].interior_edges) {
    const Perm4 fr = match->frames[pt];
    if (corner_marked(m, match->tets[pt], fr[kEdgeVertices[e][0]], fr[kEdgeVertices[e][1]])) return std::nullopt;
  }
  return match;
}

Applied do_ca_minus(const MarkedTriangulation& m, const std::vector<int>& s) {
  Applied a{engine::from_marked(m), {}, {}, 0, std::nullopt};
  auto match = ca_match(m, a.work, s[0], s[1], s[2]);
  if (!match) reject("ca-: pattern not present or a disappearing region is marked");
  a.rw = engine::contract_pattern(a.work, ca_catalog()[s[0]].pattern, *match);
  a.inverse = {MoveKind::CaPlus, {a.rw.first_new, s[0]}};
  return a;
}

Applied do_ba_plus(const MarkedTriangulation& m, const std::vector<int>& s) {
  Applied a{engine::from_marked(m), {}, {}, 0, std::nullopt};
  a.rw = engine::ba_plus(a.work, s[0]);
  a.inverse = {MoveKind::BaMinus, {a.rw.first_new, 0}};
  return a;
}

std::optional<engine::BaSite> ba_site_checked(const MarkedTriangulation& m, const Work& w, int t, int v) {
  if (v < 0 || v > 3) return std::nullopt;
  auto site = engine::ba_minus_site(w, t, v);
  if (!site) return std::nullopt;
  for (int k = 0; k < 4; ++k) {
    const int c = site->frames[k][k];
    for (int o = 0; o < 4; ++o)
      if (o != c && corner_marked(m, site->tets[k], c, o)) return std::nullopt;
  }
  return site;
}

Applied do_ba_minus(const MarkedTriangulation& m, const std::vector<int>& s) {
  Applied a{engine::from_marked(m), {}, {}, 0, std::nullopt};
  if (!engine::ba_minus_site(a.work, s[0], s[1])) reject("ba-: pattern not present");
  if (!ba_site_checked(m, a.work, s[0], s[1])) reject("ba-: a disappearing region is marked");
  a.rw = engine::ba_minus(a.work, s[0], s[1]);
  a.inverse = {MoveKind::BaPlus, {a.rw.first_new}};
  return a;
}

}  // namespace

ApplyResult apply_move(const MarkedTriangulation& m, const MoveInstance& mv, ApplyOptions opt) {
  if (mv.site.size() != expected_site_size(mv.kind))
    reject(std::string(to_string(mv.kind)) + ": expected " + std::to_string(expected_site_size(mv.kind)) +
           " site values");
  const int tet_slot = mv.kind == MoveKind::CaMinus ? 1 : 0;
  if (mv.site[tet_slot] < 0 || mv.site[tet_slot] >= m.size())
    reject(std::string(to_string(mv.kind)) + ": tetrahedron out of range");

  Applied a;
  switch (mv.kind) {
    case MoveKind::MPaPlus: a = do_mpa_plus(m, mv.site); break;
    case MoveKind::MPaMinus: a = do_mpa_minus(m, mv.site); break;
    case MoveKind::VaPlus: a = do_va_plus(m, mv.site); break;
    case MoveKind::VaMinus: a = do_va_minus(m, mv.site); break;
    case MoveKind::LaPlus: a = do_la_plus(m, mv.site); break;
    case MoveKind::LaMinus: a = do_la_minus(m, mv.site); break;
    case MoveKind::CaPlus: a = do_ca_plus(m, mv.site); break;
    case MoveKind::CaMinus: a = do_ca_minus(m, mv.site); break;
    case MoveKind::BaPlus: a = do_ba_plus(m, mv.site); break;
    case MoveKind::BaMinus: a = do_ba_minus(m, mv.site); break;
  }

  MarkedTriangulation out;
  try {
    out = engine::to_marked(a.work);
  } catch (const Error& e) {
    reject(std::string(to_string(mv.kind)) + ": result is not a valid triangulation: " + e.what());
  }
  if (a.unmark) {
    const Skeleton& sk = out.skeleton();
    const int drop = sk.edge_of[a.unmark->first][a.unmark->second];
    const int keep = sk.edge_of[a.rw.first_new + (a.marked_choice == 1 ? 0 : 1)][edge_index(2, 3)];
    if (drop == keep) reject("la+: the two sides of the split region coincide");
    std::vector<std::uint8_t> masks = out.edge_masks();
    for (const Corner& c : sk.edges[drop].cycle) masks[c.tet] &= static_cast<std::uint8_t>(~(1u << edge_of_corner(c)));
    out = MarkedTriangulation::from_masks(out.tri(), masks, out.vertex_tag_masks());
  } else if (mv.kind == MoveKind::LaPlus) {
    const Skeleton& sk = out.skeleton();
    const int P = a.rw.first_new;
    if (sk.edge_of[P][edge_index(2, 3)] == sk.edge_of[P + 1][edge_index(2, 3)])
      reject("la+: the two sides of the split region coincide");
  }

  ApplyResult r;
  r.old_to_new = a.rw.old_to_new;
  r.first_new = a.rw.first_new;
  r.record.move = mv;
  r.record.marked_choice = a.marked_choice;
  r.record.inverse = a.inverse;
  if (opt.signatures) {
    r.record.before = signature(m);
    r.record.after = signature(out);
  }
  r.result = std::move(out);
  return r;
}

MoveInstance invert(const MoveRecord& r) { return r.inverse; }

namespace {

bool trial(const MarkedTriangulation& m, const MoveInstance& mv) {
  try {
    apply_move(m, mv, ApplyOptions{false});
    return true;
  } catch (const Error&) {
    return false;
  }
}

void enum_kind(const MarkedTriangulation& m, MoveKind kind, std::vector<MoveInstance>& out) {
  const Skeleton& sk = m.skeleton();
  const int n = m.size();
  switch (kind) {
    case MoveKind::MPaPlus:
      for (const auto& tc : sk.triangles)
        if (tc.sides[0].first != tc.sides[1].first) out.push_back({kind, {tc.sides[0].first, tc.sides[0].second}});
      break;
    case MoveKind::MPaMinus:
      for (const auto& ec : sk.edges) {
        if (ec.valence() != 3 || m.is_marked(ec.id)) continue;
        MoveInstance mv{kind, {ec.cycle[0].tet, edge_of_corner(ec.cycle[0])}};
        if (trial(m, mv)) out.push_back(mv);
      }
      break;
    case MoveKind::VaPlus:
      for (int t = 0; t < n; ++t)
        for (int k = 0; k < 3; ++k) out.push_back({kind, {t, k}});
      break;
    case MoveKind::VaMinus: {
      const Work w = engine::from_marked(m);
      std::set<std::vector<int>> seen;
      for (int p = 0; p < n; ++p)
        for (int k = 0; k < 3; ++k) {
          auto site = va_site_checked(m, w, p, k);
          if (!site) continue;
          std::vector<int> key{site->t, site->p, site->q};
          std::sort(key.begin(), key.end());
          if (!seen.insert(key).second) continue;
          MoveInstance mv{kind, {p, k}};
          if (trial(m, mv)) out.push_back(mv);
        }
      break;
    }
    case MoveKind::LaPlus:
      for (const auto& ec : sk.edges) {
        const int v = ec.valence();
        const std::vector<int> sides = m.is_marked(ec.id) ? std::vector<int>{1, 2} : std::vector<int>{0};
        for (int i = 0; i < v; ++i)
          for (int j = i + 1; j < v; ++j) {
            const Corner &ci = ec.cycle[i], &cj = ec.cycle[j];
            if (sk.triangle_of[ci.tet][ci.y] == sk.triangle_of[cj.tet][cj.y]) continue;
            for (int s : sides) {
              MoveInstance mv{kind, {ec.cycle[0].tet, edge_of_corner(ec.cycle[0]), i, j, s}};
              if (trial(m, mv)) out.push_back(mv);
            }
          }
      }
      break;
    case MoveKind::LaMinus:
      for (const auto& ec : sk.edges) {
        if (ec.valence() != 2) continue;
        MoveInstance mv{kind, {ec.cycle[0].tet, edge_of_corner(ec.cycle[0])}};
        if (trial(m, mv)) out.push_back(mv);
      }
      break;
    case MoveKind::CaPlus: {
      const int variants = static_cast<int>(ca_catalog().size());
      for (int t = 0; t < n; ++t)
        for (int c = 0; c < variants; ++c) out.push_back({kind, {t, c}});
      break;
    }
    case MoveKind::CaMinus: {
      if (n < 5) break;
      const Work w = engine::from_marked(m);
      std::set<std::vector<int>> seen;
      const int variants = static_cast<int>(ca_catalog().size());
      for (int c = 0; c < variants; ++c)
        for (int t = 0; t < n; ++t)
          for (int f = 0; f < 24; ++f) {
            auto match = ca_match(m, w, c, t, f);
            if (!match) continue;
            std::vector<int> key = match->tets;
            std::sort(key.begin(), key.end());
            if (!seen.insert(key).second) continue;
            MoveInstance mv{kind, {c, t, f}};
            if (trial(m, mv)) out.push_back(mv);
          }
      break;
    }
    case MoveKind::BaPlus:
      for (int t = 0; t < n; ++t) out.push_back({kind, {t}});
      break;
    case MoveKind::BaMinus: {
      if (n < 4) break;
      const Work w = engine::from_marked(m);
      std::set<std::vector<int>> seen;
      for (int t = 0; t < n; ++t)
        for (int v = 0; v < 4; ++v) {
          auto site = ba_site_checked(m, w, t, v);
          if (!site) continue;
          std::vector<int> key(site->tets.begin(), site->tets.end());
          std::sort(key.begin(), key.end());
          if (!seen.insert(key).second) continue;
          MoveInstance mv{kind, {t, v}};
          if (trial(m, mv)) out.push_back(mv);
        }
      break;
    }
  }
}

}  // namespace

std::vector<MoveInstance> enumerate_moves(const MarkedTriangulation& m, const std::vector<MoveKind>& kinds) {
  std::vector<MoveInstance> out;
  for (MoveKind k : kAllKinds)
    if (std::find(kinds.begin(), kinds.end(), k) != kinds.end()) enum_kind(m, k, out);
  return out;
}

std::vector<MoveInstance> enumerate_moves(const MarkedTriangulation& m) {
  return enumerate_moves(m, std::vector<MoveKind>(std::begin(kAllKinds), std::end(kAllKinds)));
}

ReplayResult replay(const MarkedTriangulation& m, const std::vector<MoveInstance>& seq, bool signatures) {
  ReplayResult r{m, {}};
  for (std::size_t k = 0; k < seq.size(); ++k) {
    try {
      ApplyResult a = apply_move(r.final, seq[k], ApplyOptions{signatures});
      r.records.push_back(a.record);
      r.final = std::move(a.result);
    } catch (const Error& e) {
      throw Error(e.kind(), "step " + std::to_string(k) + " (" + seq[k].encode() + "): " + e.what());
    }
  }
  return r;
}

}  // namespace mark3d
