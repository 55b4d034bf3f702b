#include "mark3d/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace mark3d {

namespace {

using nlohmann::json;

[[noreturn]] void syntax(int line, const std::string& msg) {
  throw Error(ErrorKind::SyntaxError, "line " + std::to_string(line) + ": " + msg);
}

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorKind::ValidationError, msg); }

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

bool parse_int(const std::string& s, int& out) {
  if (s.empty() || s.size() > 9 || !std::all_of(s.begin(), s.end(), ::isdigit)) return false;
  out = std::stoi(s);
  return true;
}

// "t:ab" for edges, "t:a" for vertices.
struct Name {
  int line;
  int tet;
  std::string labels;
};

Name parse_name(int line, const std::string& w, std::size_t n_labels) {
  const auto colon = w.find(':');
  Name nm{line, 0, ""};
  if (colon == std::string::npos || !parse_int(w.substr(0, colon), nm.tet)) syntax(line, "bad name '" + w + "'");
  nm.labels = w.substr(colon + 1);
  if (nm.labels.size() != n_labels || !std::all_of(nm.labels.begin(), nm.labels.end(), [](char c) {
        return c >= '0' && c <= '3';
      }))
    syntax(line, "bad name '" + w + "'");
  if (n_labels == 2 && nm.labels[0] == nm.labels[1]) syntax(line, "bad name '" + w + "'");
  return nm;
}

std::vector<int> resolve_edges(const Triangulation& tri, const std::vector<Name>& names, const char* section) {
  std::vector<int> out;
  for (const Name& nm : names) {
    if (nm.tet >= tri.size())
      invalid(std::string(section) + ": no tetrahedron " + std::to_string(nm.tet) + " (line " +
              std::to_string(nm.line) + ")");
    const int id = tri.skeleton().edge_of[nm.tet][edge_index(nm.labels[0] - '0', nm.labels[1] - '0')];
    if (std::find(out.begin(), out.end(), id) != out.end())
      invalid(std::string(section) + ": edge class named twice (line " + std::to_string(nm.line) + ")");
    out.push_back(id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> resolve_vertices(const Triangulation& tri, const std::vector<Name>& names) {
  std::vector<int> out;
  for (const Name& nm : names) {
    if (nm.tet >= tri.size())
      invalid("ideal: no tetrahedron " + std::to_string(nm.tet) + " (line " + std::to_string(nm.line) + ")");
    const int id = tri.skeleton().vertex_of[nm.tet][nm.labels[0] - '0'];
    if (std::find(out.begin(), out.end(), id) != out.end())
      invalid("ideal: vertex class named twice (line " + std::to_string(nm.line) + ")");
    out.push_back(id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string edge_name(const Triangulation& tri, int id) {
  const Skeleton& sk = tri.skeleton();
  std::pair<int, int> best{1 << 30, 0};
  for (const Corner& c : sk.edges[id].cycle) best = std::min(best, {c.tet, edge_index(c.a, c.b)});
  const auto& v = kEdgeVertices[best.second];
  return std::to_string(best.first) + ":" + std::to_string(v[0]) + std::to_string(v[1]);
}

std::string vertex_name(const Triangulation& tri, int id) {
  const auto& members = tri.skeleton().vertices[id].members;
  const auto best = *std::min_element(members.begin(), members.end());
  return std::to_string(best.first) + ":" + std::to_string(best.second);
}

std::string section(const char* head, const std::vector<std::string>& names) {
  std::string s = head;
  for (const std::string& n : names) s += " " + n;
  return s + "\n";
}

std::vector<std::string> sorted_names(std::vector<std::string> v) {
  // Names sort by tetrahedron numerically, then by labels.
  std::sort(v.begin(), v.end(), [](const std::string& a, const std::string& b) {
    const int ta = std::stoi(a.substr(0, a.find(':'))), tb = std::stoi(b.substr(0, b.find(':')));
    return ta != tb ? ta < tb : a < b;
  });
  return v;
}

MoveInstance move_from_json(const json& j) {
  if (j.is_string()) return MoveInstance::decode(j.get<std::string>());
  if (!j.is_object() || !j.contains("move") || !j["move"].is_string())
    throw Error(ErrorKind::SyntaxError, "certificate: a move needs a 'move' string");
  return MoveInstance::decode(j["move"].get<std::string>());
}

Signature sig_from_json(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) throw Error(ErrorKind::SyntaxError, std::string("certificate: missing '") + key + "'");
  try {
    return Signature::from_hex(j[key].get<std::string>());
  } catch (const std::exception&) {
    throw Error(ErrorKind::SyntaxError, std::string("certificate: bad signature in '") + key + "'");
  }
}

}  // namespace

const char* to_string(FileMode m) {
  switch (m) {
    case FileMode::Marked: return "marked";
    case FileMode::Distinguished: return "distinguished";
    case FileMode::PartiallyTruncated: return "partially-truncated";
  }
  return "?";
}

MarkedTriangulation TriFile::as_marked() const {
  switch (mode) {
    case FileMode::Marked: return MarkedTriangulation(tri, marked);
    case FileMode::Distinguished: return MarkedTriangulation(tri, link);
    case FileMode::PartiallyTruncated: return MarkedTriangulation(tri, zero);
  }
  return MarkedTriangulation(tri);
}

TriFile from_marked(const MarkedTriangulation& m) {
  TriFile f;
  f.tri = m.tri();
  f.marked = m.marked();
  return f;
}

TriFile from_distinguished(const DistinguishedTriangulation& d) {
  TriFile f;
  f.mode = FileMode::Distinguished;
  f.tri = d.tri;
  f.link = d.link_edges;
  return f;
}

TriFile from_ptt(const PartiallyTruncated& p) {
  TriFile f;
  f.mode = FileMode::PartiallyTruncated;
  f.tri = p.tri;
  f.ideal = p.ideal;
  f.zero = p.zero;
  return f;
}

DistinguishedTriangulation to_distinguished(const TriFile& f) {
  if (f.mode != FileMode::Distinguished) invalid("not a distinguished triangulation (no linkedges: section)");
  try {
    return check_hamiltonian(f.tri, f.link);
  } catch (const Error& e) {
    invalid(e.what());
  }
}

PartiallyTruncated to_ptt(const TriFile& f) {
  if (f.mode != FileMode::PartiallyTruncated) invalid("not a partially truncated triangulation (no ideal:/zero:)");
  return check_ptt(f.tri, f.ideal, f.zero);
}

TriFile parse_tri(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  int line = 0, n = -1;
  std::vector<GluingEntry> entries;
  std::vector<bool> seen_tet;
  std::map<std::string, std::pair<int, std::vector<std::string>>> sections;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const auto w = words(raw);
    if (w.empty()) continue;
    if (n < 0) {
      if (w.size() != 2 || w[0] != "tets" || !parse_int(w[1], n) || n < 1)
        syntax(line, "expected 'tets <n>' with n >= 1");
      seen_tet.assign(n, false);
      continue;
    }
    const std::string& head = w[0];
    if (head == "marked:" || head == "linkedges:" || head == "ideal:" || head == "zero:") {
      if (sections.count(head)) syntax(line, "section '" + head + "' repeated");
      sections[head] = {line, std::vector<std::string>(w.begin() + 1, w.end())};
      continue;
    }
    int t = -1;
    if (head.size() < 3 || head[0] != 't' || head.back() != ':' || !parse_int(head.substr(1, head.size() - 2), t))
      syntax(line, "expected 't<i>:' or a section name");
    if (t >= n) syntax(line, "tetrahedron " + std::to_string(t) + " out of range");
    if (seen_tet[t]) syntax(line, "tetrahedron " + std::to_string(t) + " listed twice");
    seen_tet[t] = true;
    if (w.size() != 5) syntax(line, "expected four face gluings");
    for (int f = 0; f < 4; ++f) {
      const std::string& g = w[f + 1];
      const auto open = g.find('(');
      int target = -1;
      Perm4 p;
      if (open == std::string::npos || g.back() != ')' || !parse_int(g.substr(0, open), target) ||
          !Perm4::from_face_string(f, g.substr(open + 1, g.size() - open - 2), p))
        syntax(line, "bad gluing '" + g + "'");
      entries.push_back({t, f, target, p});
    }
  }
  if (n < 0) syntax(line, "missing 'tets <n>' header");
  for (int t = 0; t < n; ++t)
    if (!seen_tet[t]) syntax(line, "tetrahedron " + std::to_string(t) + " missing");

  const bool has_marked = sections.count("marked:"), has_link = sections.count("linkedges:");
  const bool has_ptt = sections.count("ideal:") || sections.count("zero:");
  if (has_marked + has_link + has_ptt > 1)
    throw Error(ErrorKind::AmbiguousMode, "sections from more than one mode (marked:, linkedges:, ideal:/zero:)");

  auto names = [&](const char* key, std::size_t labels) {
    std::vector<Name> out;
    auto it = sections.find(key);
    if (it == sections.end()) return out;
    for (const std::string& s : it->second.second) out.push_back(parse_name(it->second.first, s, labels));
    return out;
  };
  const auto marked_names = names("marked:", 2), link_names = names("linkedges:", 2);
  const auto ideal_names = names("ideal:", 1), zero_names = names("zero:", 2);

  TriFile f;
  try {
    f.tri = Triangulation::build(n, entries);
  } catch (const Error& e) {
    invalid(e.what());
  }
  f.marked = resolve_edges(f.tri, marked_names, "marked");
  f.link = resolve_edges(f.tri, link_names, "linkedges");
  f.zero = resolve_edges(f.tri, zero_names, "zero");
  f.ideal = resolve_vertices(f.tri, ideal_names);
  if (has_link) {
    f.mode = FileMode::Distinguished;
    to_distinguished(f);
  } else if (has_ptt) {
    f.mode = FileMode::PartiallyTruncated;
    to_ptt(f);
  } else {
    try {
      MarkedTriangulation(f.tri, f.marked);
    } catch (const Error& e) {
      invalid(e.what());
    }
  }
  return f;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path);
}

TriFile read_tri(const std::string& path) { return parse_tri(read_text(path)); }

std::string render_tri(const TriFile& f) {
  std::string s = "tets " + std::to_string(f.tri.size()) + "\n";
  for (int t = 0; t < f.tri.size(); ++t) {
    s += "t" + std::to_string(t) + ":";
    for (int face = 0; face < 4; ++face) {
      const Gluing& g = f.tri.adj(t, face);
      s += " " + std::to_string(g.tet) + "(" + g.perm.face_string(face) + ")";
    }
    s += "\n";
  }
  auto edges = [&](const std::vector<int>& ids) {
    std::vector<std::string> out;
    for (int id : ids) out.push_back(edge_name(f.tri, id));
    return sorted_names(out);
  };
  switch (f.mode) {
    case FileMode::Marked:
      if (!f.marked.empty()) s += section("marked:", edges(f.marked));
      break;
    case FileMode::Distinguished: s += section("linkedges:", edges(f.link)); break;
    case FileMode::PartiallyTruncated: {
      std::vector<std::string> vs;
      for (int id : f.ideal) vs.push_back(vertex_name(f.tri, id));
      s += section("ideal:", sorted_names(vs));
      s += section("zero:", edges(f.zero));
      break;
    }
  }
  return s;
}

json to_json(const MoveInstance& mv) {
  json j{{"move", mv.encode()}, {"kind", to_string(mv.kind)}, {"site", mv.site}};
  if (mv.kind == MoveKind::LaPlus && mv.site.size() == 5) j["marked_choice"] = mv.site[4];
  return j;
}

json to_json(const Certificate& c) {
  json moves = json::array();
  for (const MoveInstance& mv : c.moves) moves.push_back(to_json(mv));
  json steps = json::array();
  for (const Signature& s : c.steps) steps.push_back(s.hex());
  return {{"format", "mark3d-certificate"}, {"start", c.start.hex()}, {"end", c.end.hex()}, {"moves", moves},
          {"steps", steps}};
}

json to_json(const DistinguishedCertificate& c) {
  json steps = json::array();
  for (const DistinguishedStep& s : c.steps) steps.push_back(s.encode());
  return {{"format", "mark3d-distinguished-certificate"}, {"start", c.start.hex()}, {"end", c.end.hex()},
          {"moves", steps}};
}

Certificate certificate_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::SyntaxError, "certificate: expected an object");
  Certificate c;
  c.start = sig_from_json(j, "start");
  c.end = sig_from_json(j, "end");
  if (!j.contains("moves") || !j["moves"].is_array()) throw Error(ErrorKind::SyntaxError, "certificate: missing 'moves'");
  for (const json& m : j["moves"]) c.moves.push_back(move_from_json(m));
  if (j.contains("steps")) {
    if (!j["steps"].is_array()) throw Error(ErrorKind::SyntaxError, "certificate: 'steps' must be a list");
    for (const json& s : j["steps"]) {
      if (!s.is_string()) throw Error(ErrorKind::SyntaxError, "certificate: step signatures are hex strings");
      try {
        c.steps.push_back(Signature::from_hex(s.get<std::string>()));
      } catch (const std::exception&) {
        throw Error(ErrorKind::SyntaxError, "certificate: bad step signature");
      }
    }
    if (!c.steps.empty() && c.steps.size() != c.moves.size())
      throw Error(ErrorKind::SyntaxError, "certificate: one step signature per move");
  }
  return c;
}

DistinguishedStep decode_distinguished_step(const std::string& s) {
  if (s.rfind("b+:", 0) == 0 || s.rfind("b-:", 0) == 0) {
    DistinguishedStep st;
    st.kind = s[1] == '+' ? DistinguishedStep::Kind::BPlus : DistinguishedStep::Kind::BMinus;
    // Reuse the move decoder for the comma list.
    st.site = MoveInstance::decode("ba+:" + s.substr(3)).site;
    return st;
  }
  DistinguishedStep st;
  st.mp = MoveInstance::decode(s);
  return st;
}

DistinguishedCertificate distinguished_certificate_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::SyntaxError, "certificate: expected an object");
  DistinguishedCertificate c;
  c.start = sig_from_json(j, "start");
  c.end = sig_from_json(j, "end");
  if (!j.contains("moves") || !j["moves"].is_array()) throw Error(ErrorKind::SyntaxError, "certificate: missing 'moves'");
  for (const json& m : j["moves"]) {
    if (!m.is_string()) throw Error(ErrorKind::SyntaxError, "certificate: steps are encoded strings");
    c.steps.push_back(decode_distinguished_step(m.get<std::string>()));
  }
  return c;
}

}  // namespace mark3d
