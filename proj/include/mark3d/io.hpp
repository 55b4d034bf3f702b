#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "mark3d/applications.hpp"
#include "mark3d/calculus.hpp"

namespace mark3d {

// Which optional sections a file carries: `marked:`, `linkedges:`, or `ideal:`/`zero:`.
enum class FileMode { Marked, Distinguished, PartiallyTruncated };
const char* to_string(FileMode m);

// Gluings plus class-level sections. Class ids refer to tri.skeleton().
struct TriFile {
  FileMode mode = FileMode::Marked;
  Triangulation tri;
  std::vector<int> marked;  // edge classes, marked mode
  std::vector<int> link;    // edge classes, distinguished mode
  std::vector<int> ideal;   // vertex classes, partially truncated mode
  std::vector<int> zero;    // edge classes, partially truncated mode

  // The edge set of the active mode read as marked edges.
  MarkedTriangulation as_marked() const;
  bool operator==(const TriFile&) const = default;
};

TriFile from_marked(const MarkedTriangulation& m);
TriFile from_distinguished(const DistinguishedTriangulation& d);
TriFile from_ptt(const PartiallyTruncated& p);
// Validate the mode-specific invariants; throw ValidationError.
DistinguishedTriangulation to_distinguished(const TriFile& f);
PartiallyTruncated to_ptt(const TriFile& f);

// Throws SyntaxError (with the line number), ValidationError or AmbiguousMode.
TriFile parse_tri(const std::string& text);
// As parse_tri; IoError when the file cannot be read.
TriFile read_tri(const std::string& path);
// Canonical text: classes named by their smallest (tet, label) representative, sorted.
std::string render_tri(const TriFile& f);
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

nlohmann::json to_json(const MoveInstance& mv);
nlohmann::json to_json(const Certificate& c);
nlohmann::json to_json(const DistinguishedCertificate& c);
// Throw SyntaxError on malformed documents.
Certificate certificate_from_json(const nlohmann::json& j);
DistinguishedCertificate distinguished_certificate_from_json(const nlohmann::json& j);
DistinguishedStep decode_distinguished_step(const std::string& s);

}  // namespace mark3d
