#include "mark3d/signature.hpp"

#include <stdexcept>

namespace mark3d {

std::string Signature::hex() const {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char c : bytes) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 15]);
  }
  return out;
}

Signature Signature::from_hex(const std::string& hex) {
  if (hex.size() % 2) throw std::invalid_argument("odd-length signature");
  auto val = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    throw std::invalid_argument("bad hex digit in signature");
  };
  Signature s;
  for (std::size_t i = 0; i < hex.size(); i += 2)
    s.bytes.push_back(static_cast<char>(val(hex[i]) * 16 + val(hex[i + 1])));
  return s;
}

namespace {

// Breadth-first relabeling from one start; emits into `out`, aborting as soon
// as the prefix exceeds `best` (when `best` is non-empty). Returns -1 if aborted,
// 0 if equal to best's gluing part, 1 if strictly smaller or best empty.
struct Labeler {
  const MarkedTriangulation& m;
  int n;
  int width;
  std::vector<int> pos;
  std::vector<Perm4> rho;
  std::vector<int> order;

  explicit Labeler(const MarkedTriangulation& mm)
      : m(mm), n(mm.size()), width(mm.size() < 256 ? 1 : 2), pos(n), rho(n), order(n) {}

  void header(std::string& out) const {
    out.push_back(static_cast<char>(n >> 8));
    out.push_back(static_cast<char>(n & 255));
  }

  int run(int start, Perm4 r0, std::string& out, const std::string& best) {
    out.clear();
    header(out);
    std::fill(pos.begin(), pos.end(), -1);
    pos[start] = 0;
    rho[start] = r0;
    order[0] = start;
    int next = 1;
    bool smaller = best.empty();
    const Triangulation& tri = m.tri();
    for (int i = 0; i < n; ++i) {
      const int t = order[i];
      const Perm4 ri = rho[t];
      const Perm4 ri_inv = ri.inverse();
      for (int F = 0; F < 4; ++F) {
        const int f = ri_inv[F];
        const Gluing& g = tri.adj(t, f);
        if (pos[g.tet] < 0) {
          pos[g.tet] = next;
          order[next++] = g.tet;
          rho[g.tet] = ri * g.perm.inverse();
        }
        const Perm4 np = rho[g.tet] * g.perm * ri_inv;
        const int idx = pos[g.tet];
        const std::size_t at = out.size();
        if (width == 2) out.push_back(static_cast<char>(idx >> 8));
        out.push_back(static_cast<char>(idx & 255));
        out.push_back(static_cast<char>(np.index()));
        if (!smaller) {
          for (std::size_t k = at; k < out.size(); ++k) {
            unsigned char a = static_cast<unsigned char>(out[k]);
            unsigned char b = static_cast<unsigned char>(best[k]);
            if (a < b) {
              smaller = true;
              break;
            }
            if (a > b) return -1;
          }
        }
      }
    }
    return smaller ? 1 : 0;
  }

  void marks(std::string& out) const {
    for (int i = 0; i < n; ++i) {
      const int t = order[i];
      const Perm4 r = rho[t];
      const std::uint8_t mask = m.edge_mask(t);
      std::uint8_t nm = 0;
      for (int e = 0; e < 6; ++e)
        if (mask >> e & 1) nm |= static_cast<std::uint8_t>(1u << edge_index(r[kEdgeVertices[e][0]], r[kEdgeVertices[e][1]]));
      out.push_back(static_cast<char>(nm));
    }
  }
};

struct Best {
  std::string bytes;
  CanonicalLabeling labeling;
};

Best compute(const MarkedTriangulation& m, bool want_labeling) {
  Labeler lab(m);
  const int n = m.size();
  bool any_marks = false;
  for (int t = 0; t < n; ++t) any_marks |= m.edge_mask(t) != 0;
  std::string best_glue, best_marks, cur, cur_marks;
  CanonicalLabeling best_lab;
  for (int s = 0; s < n; ++s) {
    for (int p = 0; p < 24; ++p) {
      int r = lab.run(s, Perm4::from_index(p), cur, best_glue);
      if (r < 0) continue;
      bool take = r > 0;
      if (any_marks) {
        cur_marks.clear();
        lab.marks(cur_marks);
        if (r == 0) take = cur_marks < best_marks;
      }
      if (take) {
        best_glue = cur;
        best_marks = cur_marks;
        if (want_labeling) {
          best_lab.order = lab.order;
          best_lab.labels.assign(n, Perm4());
          for (int i = 0; i < n; ++i) best_lab.labels[i] = lab.rho[lab.order[i]];
        }
      }
    }
  }
  if (!any_marks) {
    best_marks.assign(n, '\0');
  }
  return {best_glue + best_marks, best_lab};
}

}  // namespace

Signature signature(const MarkedTriangulation& m) { return Signature{compute(m, false).bytes}; }

Signature signature(const Triangulation& tri) { return signature(MarkedTriangulation(tri)); }

CanonicalLabeling canonical_labeling(const MarkedTriangulation& m) { return compute(m, true).labeling; }

MarkedTriangulation relabel(const MarkedTriangulation& m, const std::vector<int>& pos,
                            const std::vector<Perm4>& relabel) {
  const int n = m.size();
  GluingTable table(n);
  std::vector<std::uint8_t> masks(n, 0), tags(n, 0);
  for (int t = 0; t < n; ++t) {
    const Perm4 r = relabel[t];
    for (int f = 0; f < 4; ++f) {
      const Gluing& g = m.tri().adj(t, f);
      table[pos[t]][r[f]] = Gluing{pos[g.tet], relabel[g.tet] * g.perm * r.inverse()};
    }
    for (int e = 0; e < 6; ++e)
      if (m.edge_mask(t) >> e & 1)
        masks[pos[t]] |= static_cast<std::uint8_t>(1u << edge_index(r[kEdgeVertices[e][0]], r[kEdgeVertices[e][1]]));
    for (int v = 0; v < 4; ++v)
      if (m.vertex_tags(t) >> v & 1) tags[pos[t]] |= static_cast<std::uint8_t>(1u << r[v]);
  }
  return MarkedTriangulation::from_masks(Triangulation::from_table(std::move(table)), masks, tags);
}

}  // namespace mark3d

namespace mark3d {

std::optional<Isomorphism> extend_isomorphism(const MarkedTriangulation& a, const MarkedTriangulation& b, int root_a,
                                              int root_b, Perm4 perm) {
  const int n = a.size();
  if (n != b.size() || root_a < 0 || root_a >= n || root_b < 0 || root_b >= n) return std::nullopt;
  Isomorphism iso{std::vector<int>(n, -1), std::vector<Perm4>(n)};
  std::vector<char> used(n, 0);
  std::vector<int> queue{root_a};
  iso.tets[root_a] = root_b;
  iso.labels[root_a] = perm;
  used[root_b] = 1;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    const int t = queue[i];
    const int u = iso.tets[t];
    const Perm4 s = iso.labels[t];
    for (int e = 0; e < 6; ++e) {
      const bool ma = a.edge_mask(t) >> e & 1;
      const bool mb = b.edge_mask(u) >> edge_index(s[kEdgeVertices[e][0]], s[kEdgeVertices[e][1]]) & 1;
      if (ma != mb) return std::nullopt;
    }
    for (int f = 0; f < 4; ++f) {
      const Gluing& ga = a.tri().adj(t, f);
      const Gluing& gb = b.tri().adj(u, s[f]);
      const Perm4 want = gb.perm * s * ga.perm.inverse();
      if (iso.tets[ga.tet] < 0) {
        if (used[gb.tet]) return std::nullopt;
        iso.tets[ga.tet] = gb.tet;
        iso.labels[ga.tet] = want;
        used[gb.tet] = 1;
        queue.push_back(ga.tet);
      } else if (iso.tets[ga.tet] != gb.tet || !(iso.labels[ga.tet] == want)) {
        return std::nullopt;
      }
    }
  }
  if (static_cast<int>(queue.size()) != n) return std::nullopt;
  return iso;
}

std::optional<Isomorphism> find_isomorphism(const MarkedTriangulation& a, const MarkedTriangulation& b) {
  if (a.size() != b.size() || a.size() == 0) return std::nullopt;
  for (int t = 0; t < b.size(); ++t)
    for (int p = 0; p < 24; ++p)
      if (auto iso = extend_isomorphism(a, b, 0, t, Perm4::from_index(p))) return iso;
  return std::nullopt;
}

}  // namespace mark3d
