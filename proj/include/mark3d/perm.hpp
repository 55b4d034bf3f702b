#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace mark3d {

// Permutation of the four vertex labels {0,1,2,3} of a tetrahedron.
class Perm4 {
 public:
  constexpr Perm4() : img_{0, 1, 2, 3} {}
  constexpr Perm4(int a, int b, int c, int d)
      : img_{static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b),
             static_cast<std::uint8_t>(c), static_cast<std::uint8_t>(d)} {}

  constexpr int operator[](int i) const { return img_[i]; }

  constexpr Perm4 inverse() const {
    Perm4 r;
    for (int i = 0; i < 4; ++i) r.img_[img_[i]] = static_cast<std::uint8_t>(i);
    return r;
  }

  // (p * q)[i] == p[q[i]]
  constexpr Perm4 operator*(const Perm4& q) const {
    Perm4 r;
    for (int i = 0; i < 4; ++i) r.img_[i] = img_[q.img_[i]];
    return r;
  }

  constexpr bool operator==(const Perm4& o) const { return img_ == o.img_; }
  constexpr bool operator!=(const Perm4& o) const { return !(img_ == o.img_); }
  constexpr bool operator<(const Perm4& o) const { return index() < o.index(); }

  constexpr int sign() const {
    int inv = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (img_[i] > img_[j]) ++inv;
    return (inv % 2) ? -1 : 1;
  }

  // Lexicographic rank in [0, 24).
  constexpr int index() const {
    int r = 0;
    for (int i = 0; i < 4; ++i) {
      int smaller = 0;
      for (int j = i + 1; j < 4; ++j)
        if (img_[j] < img_[i]) ++smaller;
      r = r * (4 - i) + smaller;
    }
    return r;
  }

  static constexpr Perm4 from_index(int idx) {
    int digits[4] = {0, 0, 0, 0};
    for (int i = 3; i >= 0; --i) {
      digits[i] = idx % (4 - i);
      idx /= (4 - i);
    }
    bool used[4] = {false, false, false, false};
    int out[4] = {0, 0, 0, 0};
    for (int i = 0; i < 4; ++i) {
      int k = digits[i];
      for (int v = 0; v < 4; ++v) {
        if (used[v]) continue;
        if (k == 0) {
          out[i] = v;
          used[v] = true;
          break;
        }
        --k;
      }
    }
    return Perm4(out[0], out[1], out[2], out[3]);
  }

  // Transposition of labels a and b.
  static constexpr Perm4 swap(int a, int b) {
    Perm4 r;
    r.img_[a] = static_cast<std::uint8_t>(b);
    r.img_[b] = static_cast<std::uint8_t>(a);
    return r;
  }

  // Images of the three labels other than `face`, in increasing order, e.g. "302".
  std::string face_string(int face) const {
    std::string s;
    for (int i = 0; i < 4; ++i)
      if (i != face) s.push_back(static_cast<char>('0' + img_[i]));
    return s;
  }

  // Validates and completes a 3-symbol face correspondence. Returns false on error.
  static bool from_face_string(int face, const std::string& s, Perm4& out) {
    if (s.size() != 3 || face < 0 || face > 3) return false;
    int img[4] = {-1, -1, -1, -1};
    bool used[4] = {false, false, false, false};
    int k = 0;
    for (int i = 0; i < 4; ++i) {
      if (i == face) continue;
      char c = s[k++];
      if (c < '0' || c > '3') return false;
      int v = c - '0';
      if (used[v]) return false;
      used[v] = true;
      img[i] = v;
    }
    for (int v = 0; v < 4; ++v)
      if (!used[v]) img[face] = v;
    out = Perm4(img[0], img[1], img[2], img[3]);
    return true;
  }

 private:
  std::array<std::uint8_t, 4> img_;
};

inline constexpr std::array<std::array<int, 2>, 6> kEdgeVertices = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

constexpr int edge_index(int a, int b) {
  if (a > b) {
    int t = a;
    a = b;
    b = t;
  }
  constexpr int table[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
  return table[a][b];
}

// Index of the edge opposite edge e.
constexpr int opposite_edge(int e) { return 5 - e; }

}  // namespace mark3d
