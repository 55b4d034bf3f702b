#include "ca_catalog.hpp"

#include <functional>
#include <set>
#include <stdexcept>
#include <string>

namespace mark3d {

namespace {

using engine::Work;

// A single tetrahedron (index 4) with a collar tetrahedron D_F on each face;
// the collars keep the boundary labels fixed while the ball is rewritten.
constexpr int kPad = 4;

Perm4 collar(int F) { return Perm4::swap(0, F); }

Work padded() {
  Work w;
  w.table.resize(kPad + 1);
  w.masks.assign(kPad + 1, 0);
  w.tags.assign(kPad + 1, 0);
  for (int F = 0; F < 4; ++F) {
    w.table[F][0] = Gluing{kPad, collar(F)};
    w.table[kPad][F] = Gluing{F, collar(F).inverse()};
  }
  return w;
}

std::string code(const Work& w) {
  const int n = w.size();
  std::vector<int> pos(n, -1);
  std::vector<Perm4> rho(n);
  std::vector<int> order{0};
  pos[0] = 0;
  std::string s;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const int t = order[i];
    const Perm4 r = rho[t];
    for (int F = 0; F < 4; ++F) {
      const Gluing& g = w.table[t][r.inverse()[F]];
      if (g.tet < 0) {
        s += "-,";
        continue;
      }
      if (pos[g.tet] < 0) {
        pos[g.tet] = static_cast<int>(order.size());
        order.push_back(g.tet);
        rho[g.tet] = g.tet < kPad ? Perm4() : r * g.perm.inverse();
      }
      s += std::to_string(pos[g.tet]) + ":" + std::to_string((rho[g.tet] * g.perm * r.inverse()).index()) + ",";
    }
  }
  return s;
}

engine::Pattern to_pattern(const Work& w) {
  engine::Pattern p;
  p.size = w.size() - kPad;
  p.inner.assign(p.size, {});
  p.boundary.assign(p.size, {});
  for (int t = kPad; t < w.size(); ++t)
    for (int f = 0; f < 4; ++f) {
      const Gluing& g = w.table[t][f];
      if (g.tet >= kPad) {
        p.inner[t - kPad][f] = Gluing{g.tet - kPad, g.perm};
      } else {
        p.inner[t - kPad][f] = Gluing{};
        p.boundary[t - kPad][f] = {g.tet, collar(g.tet) * g.perm};
      }
    }
  return p;
}

std::vector<Corner> cycle_at(const Work& w, int tet, int edge) {
  auto c = engine::walk_edge(w, engine::corner_for(tet, kEdgeVertices[edge][0], kEdgeVertices[edge][1]));
  return c ? *c : std::vector<Corner>{};
}

void run_step(Work& w, const MoveInstance& s) {
  if (s.kind == MoveKind::MPaPlus)
    engine::mp_plus(w, kPad + s.site[0], s.site[1]);
  else
    engine::mp_minus(w, cycle_at(w, kPad + s.site[0], s.site[1]));
}

// Smallest (tet, edge) index over a closed edge cycle.
int cycle_key(const std::vector<Corner>& cyc) {
  int best = 1 << 30;
  for (const Corner& c : cyc) best = std::min(best, c.tet * 6 + edge_index(c.a, c.b));
  return best;
}

// Depth-first search for a va+ followed by three mp+ and one mp- inside the ball.
std::optional<CaVariant> find_macro(const std::string& target) {
  std::vector<MoveInstance> steps;
  std::function<bool(const Work&, int, int)> dfs = [&](const Work& w, int plus, int minus) -> bool {
    if (plus == 3 && minus == 1) return code(w) == target;
    if (plus < 3)
      for (int t = kPad; t < w.size(); ++t)
        for (int f = 0; f < 4; ++f) {
          const Gluing& g = w.table[t][f];
          if (g.tet < kPad || g.tet == t || std::make_pair(g.tet, g.perm[f]) < std::make_pair(t, f)) continue;
          Work next = w;
          engine::mp_plus(next, t, f);
          steps.push_back({MoveKind::MPaPlus, {t - kPad, f}});
          if (dfs(next, plus + 1, minus)) return true;
          steps.pop_back();
        }
    if (minus < 1)
      for (int t = kPad; t < w.size(); ++t)
        for (int e = 0; e < 6; ++e) {
          auto cyc = cycle_at(w, t, e);
          if (cyc.size() != 3 || cycle_key(cyc) != t * 6 + e) continue;
          std::set<int> tets;
          for (const Corner& c : cyc) tets.insert(c.tet);
          if (tets.size() != 3 || *tets.begin() < kPad) continue;
          Work next = w;
          engine::mp_minus(next, cyc);
          steps.push_back({MoveKind::MPaMinus, {t - kPad, e}});
          if (dfs(next, plus, minus + 1)) return true;
          steps.pop_back();
        }
    return false;
  };
  for (int k = 0; k < 3; ++k) {
    Work w = padded();
    engine::va_plus(w, kPad, k);
    steps.clear();
    if (dfs(w, 0, 0)) return CaVariant{k, steps};
  }
  return std::nullopt;
}

std::vector<CaEntry> build_catalog() {
  // The reference variant. Removing its folded tetrahedron (the arch, with a
  // valence-1 edge) and closing the gap leaves the 1-to-4 pattern of ba+.
  const CaVariant seed{1,
                       {{MoveKind::MPaPlus, {1, 3}},
                        {MoveKind::MPaPlus, {2, 2}},
                        {MoveKind::MPaPlus, {0, 1}},
                        {MoveKind::MPaMinus, {0, edge_index(0, 3)}}}};
  Work base = padded();
  engine::va_plus(base, kPad, seed.va_choice);
  for (const auto& s : seed.mp_steps) run_step(base, s);
  const engine::Pattern ref = to_pattern(base);

  std::vector<CaEntry> out;
  std::set<std::string> seen;
  for (int p = 0; p < 24; ++p) {
    Work w = padded();
    engine::expand_pattern(w, ref, kPad, Perm4::from_index(p));
    const std::string c = code(w);
    if (!seen.insert(c).second) continue;
    CaEntry entry;
    entry.pattern = to_pattern(w);
    for (int t = kPad; t < w.size(); ++t)
      for (int e = 0; e < 6; ++e)
        if (!cycle_at(w, t, e).empty()) entry.interior_edges.push_back({t - kPad, e});
    auto macro = find_macro(c);
    if (!macro) throw std::logic_error("no V + MP macro for a C-move variant");
    entry.macro = *macro;
    out.push_back(std::move(entry));
  }
  if (out.size() != 12) throw std::logic_error("expected 12 C-move variants");
  return out;
}

}  // namespace

const std::vector<CaEntry>& ca_catalog() {
  static const std::vector<CaEntry> catalog = build_catalog();
  return catalog;
}

const std::vector<CaVariant>& ca_variants() {
  static const std::vector<CaVariant> variants = [] {
    std::vector<CaVariant> v;
    for (const auto& e : ca_catalog()) v.push_back(e.macro);
    return v;
  }();
  return variants;
}

}  // namespace mark3d
