#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mark3d/signature.hpp"
#include "mark3d/triangulation.hpp"

namespace mark3d {

enum class MoveKind { MPaPlus, MPaMinus, VaPlus, VaMinus, LaPlus, LaMinus, CaPlus, CaMinus, BaPlus, BaMinus };

inline constexpr MoveKind kAllKinds[] = {MoveKind::MPaPlus, MoveKind::MPaMinus, MoveKind::VaPlus, MoveKind::VaMinus,
                                         MoveKind::LaPlus,  MoveKind::LaMinus,  MoveKind::CaPlus, MoveKind::CaMinus,
                                         MoveKind::BaPlus,  MoveKind::BaMinus};

const char* to_string(MoveKind k);
std::optional<MoveKind> parse_kind(const std::string& s);  // "mpa+", "va-", ...
int tet_delta(MoveKind k);
bool is_positive(MoveKind k);
MoveKind inverse_kind(MoveKind k);

// Site parameters per kind:
//   mpa+ {tet, face}            triangle given by one of its sides
//   mpa- {tet, edge}            edge class given by a representative
//   va+  {tet, k}               k in 0..2
//   va-  {tet, k}               middle tetrahedron of the pattern and its frame
//   la+  {tet, edge, i, j, s}   positions i < j in the edge's corner cycle; s = 0 unmarked, else 1 or 2
//   la-  {tet, edge}            the valence-2 edge of the lune
//   ca+  {tet, c}               c in 0..11
//   ca-  {c, tet, frame}        pattern c anchored at tet with frame index 0..23
//   ba+  {tet}
//   ba-  {tet, vertex}
struct MoveInstance {
  MoveKind kind = MoveKind::MPaPlus;
  std::vector<int> site;

  // "la+:0,3,1,4,2"
  std::string encode() const;
  static MoveInstance decode(const std::string& s);  // throws Error(SyntaxError)
  bool operator==(const MoveInstance&) const = default;
};

struct MoveRecord {
  MoveInstance move;
  int marked_choice = 0;  // la+ side taken on a marked region
  Signature before;
  Signature after;
  MoveInstance inverse;
};

struct ApplyResult {
  MarkedTriangulation result;
  MoveRecord record;
  std::vector<int> old_to_new;  // -1 for removed tetrahedra
  int first_new = 0;            // new tetrahedra occupy [first_new, size)
};

struct ApplyOptions {
  bool signatures = true;  // fill record.before / record.after
};

std::vector<MoveInstance> enumerate_moves(const MarkedTriangulation& m, const std::vector<MoveKind>& kinds);
std::vector<MoveInstance> enumerate_moves(const MarkedTriangulation& m);

// Throws Error(NotAdmissible) or Error(StandardnessLost).
ApplyResult apply_move(const MarkedTriangulation& m, const MoveInstance& mv, ApplyOptions opt = {});

MoveInstance invert(const MoveRecord& r);

struct ReplayResult {
  MarkedTriangulation final;
  std::vector<MoveRecord> records;
};

// Error messages name the failing step as "step <k>". Without signatures the
// records carry only the moves and inverses.
ReplayResult replay(const MarkedTriangulation& m, const std::vector<MoveInstance>& seq, bool signatures = true);

// The C-move variants, exposed for the calculus module.
struct CaVariant {
  int va_choice;                         // k of the initial va+
  std::vector<MoveInstance> mp_steps;    // sites relative to a host whose ball sits at the end
};
const std::vector<CaVariant>& ca_variants();

}  // namespace mark3d
