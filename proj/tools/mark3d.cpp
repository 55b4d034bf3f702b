// mark3d command-line tool.
#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "mark3d/applications.hpp"
#include "mark3d/calculus.hpp"
#include "mark3d/invariants.hpp"
#include "mark3d/io.hpp"

using nlohmann::json;
using namespace mark3d;

namespace {

enum Exit { kOk = 0, kInvalid = 1, kExhausted = 2, kIo = 3 };

int log_level() {
  static const int level = [] {
    const char* v = std::getenv("MARK3D_LOG");
    if (!v) return 1;
    const std::string s = v;
    if (s == "error" || s == "0") return 0;
    if (s == "info" || s == "2") return 2;
    if (s == "debug" || s == "3") return 3;
    return 1;
  }();
  return level;
}

void log(int level, const std::string& msg) {
  static const char* names[] = {"error", "warn", "info", "debug"};
  if (level <= log_level()) std::cerr << "mark3d " << names[level] << ": " << msg << "\n";
}

struct Context {
  bool json_out = false;
};

void emit(const Context& ctx, const json& j, const std::string& text) {
  if (ctx.json_out)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

std::vector<MoveKind> parse_kinds(const std::string& list) {
  if (list.empty()) return {std::begin(kAllKinds), std::end(kAllKinds)};
  std::vector<MoveKind> out;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');) {
    auto k = parse_kind(item);
    if (!k) throw Error(ErrorKind::SyntaxError, "unknown move kind '" + item + "'");
    out.push_back(*k);
  }
  return out;
}

json counts(const Triangulation& tri) {
  const Skeleton& sk = tri.skeleton();
  int valence = 0;
  for (const auto& e : sk.edges) valence += e.valence();
  return {{"tetrahedra", tri.size()},
          {"triangles", sk.triangles.size()},
          {"edges", sk.edges.size()},
          {"vertices", sk.vertices.size()},
          {"valence_sum", valence}};
}

json links(const Triangulation& tri) {
  json out = json::array();
  for (const LinkSurface& l : link_multiset(tri)) out.push_back(describe(l));
  return out;
}

json singularities(const MarkedTriangulation& m) {
  json out = json::array();
  for (const auto& f : singularity_report(m).findings)
    out.push_back({{"type", to_string(f.type)},
                   {"tets", f.tets},
                   {"edges", f.edges},
                   {"marked", f.witness_marked},
                   {"allowed", f.allowed}});
  return out;
}

// Long signatures are shortened in text output; `canon` and --json print them in full.
std::string brief(const Signature& sig) {
  std::string h = sig.hex();
  if (h.size() <= 64) return h;
  return h.substr(0, 32) + "..." + " (" + std::to_string(h.size() / 2) + " bytes)";
}

std::string certificate_text(const Certificate& c) {
  std::string s = "start " + brief(c.start) + "\n";
  for (const MoveInstance& mv : c.moves) s += "  " + mv.encode() + "\n";
  return s + "end   " + brief(c.end) + "\n";
}

std::string write_or_print(const std::string& path, const std::string& text) {
  if (path.empty()) return text;
  write_text(path, text);
  log(2, "wrote " + path);
  return "";
}

// Always JSON: the report is meant for machines.
int cmd_validate(const std::string& path) {
  const std::string text = read_text(path);
  TriFile f;
  try {
    f = parse_tri(text);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::SyntaxError) throw;
    std::cout << json{{"file", path}, {"signature", nullptr}, {"valid", false}, {"error", e.what()}}.dump(2) << "\n";
    return kInvalid;
  }
  const MarkedTriangulation m = f.as_marked();
  const Skeleton& sk = f.tri.skeleton();
  int valence = 0;
  for (const auto& e : sk.edges) valence += e.valence();
  int chi = 0;
  for (const auto& v : sk.vertices) chi += v.link.euler;
  const SpineStats st = spine_stats(f.tri);
  json checks{{"triangles_2n", sk.triangles.size() == static_cast<std::size_t>(2 * f.tri.size())},
              {"valence_6n", valence == 6 * f.tri.size()},
              {"spine_euler", 2 * st.euler == chi}};
  bool ok = true;
  for (auto& [k, v] : checks.items()) ok = ok && v.get<bool>();
  json j{{"file", path},         {"signature", signature(m).hex()}, {"valid", ok},
         {"mode", to_string(f.mode)}, {"counts", counts(f.tri)},   {"checks", checks},
         {"links", links(f.tri)}, {"marked", m.marked()}};
  std::cout << j.dump(2) << "\n";
  return ok ? kOk : kInvalid;
}

int cmd_info(const Context& ctx, const std::string& path) {
  const TriFile f = read_tri(path);
  const MarkedTriangulation m = f.as_marked();
  const SpineStats st = spine_stats(f.tri);
  const Homology h = homology_h1(f.tri);
  json j{{"file", path},
         {"signature", signature(m).hex()},
         {"mode", to_string(f.mode)},
         {"counts", counts(f.tri)},
         {"spine", {{"vertices", st.spine_vertices}, {"edges", st.spine_edges}, {"regions", st.spine_regions}, {"euler", st.euler}}},
         {"h1", h.str()},
         {"links", links(f.tri)},
         {"marked", m.marked()},
         {"singularities", singularities(m)}};
  std::ostringstream t;
  t << "signature    " << brief(signature(m)) << "\n";
  t << "mode         " << to_string(f.mode) << "\n";
  t << "tetrahedra   " << f.tri.size() << "\n";
  t << "classes      " << j["counts"]["vertices"] << " vertices, " << j["counts"]["edges"] << " edges, "
    << j["counts"]["triangles"] << " triangles\n";
  t << "spine        V=" << st.spine_vertices << " E=" << st.spine_edges << " R=" << st.spine_regions << "\n";
  t << "H1           " << h.str() << "\n";
  t << "links        ";
  for (std::size_t i = 0; i < j["links"].size(); ++i) t << (i ? ", " : "") << j["links"][i].get<std::string>();
  t << "\nmarked       " << m.marked_count() << "\n";
  t << "singular     " << j["singularities"].size() << "\n";
  emit(ctx, j, t.str());
  return kOk;
}

int cmd_moves(const Context& ctx, const std::string& path, const std::string& kinds) {
  const MarkedTriangulation m = read_tri(path).as_marked();
  json list = json::array();
  std::string text;
  for (const MoveInstance& mv : enumerate_moves(m, parse_kinds(kinds))) {
    list.push_back(to_json(mv));
    text += mv.encode() + "\n";
  }
  emit(ctx, {{"signature", signature(m).hex()}, {"moves", list}}, text);
  return kOk;
}

int cmd_apply(const Context& ctx, const std::string& path, const std::string& move, const std::string& out) {
  const TriFile f = read_tri(path);
  const MarkedTriangulation m = f.as_marked();
  const ApplyResult r = apply_move(m, MoveInstance::decode(move));
  const std::string rendered = render_tri(from_marked(r.result));
  const std::string printed = write_or_print(out, rendered);
  json j{{"signature", r.record.before.hex()},
         {"move", to_json(r.record.move)},
         {"after", r.record.after.hex()},
         {"inverse", r.record.inverse.encode()},
         {"tetrahedra", r.result.size()}};
  if (out.empty()) j["result"] = rendered;
  emit(ctx, j, printed.empty() ? "after " + brief(r.record.after) + "\ninverse " + r.record.inverse.encode() + "\n" : printed);
  return kOk;
}

int cmd_decompose(const Context& ctx, const std::string& path, const std::string& move) {
  const MarkedTriangulation m = read_tri(path).as_marked();
  const MoveInstance mv = MoveInstance::decode(move);
  Certificate c;
  switch (mv.kind) {
    case MoveKind::VaPlus: c = decompose_v(m, mv); break;
    case MoveKind::LaPlus: c = decompose_l(m, mv); break;
    case MoveKind::CaPlus: c = decompose_c(m, mv); break;
    default: throw Error(ErrorKind::Inapplicable, "decompose takes a va+, la+ or ca+ move");
  }
  json j = to_json(c);
  j["signature"] = c.start.hex();
  j["decomposes"] = mv.encode();
  emit(ctx, j, certificate_text(c));
  return kOk;
}

int cmd_desingularize(const Context& ctx, const std::string& path, const std::string& out, const std::string& cert,
                      bool step_signatures) {
  const MarkedTriangulation m = read_tri(path).as_marked();
  DesingularizeOptions opt;
  opt.with_step_signatures = step_signatures;
  const auto t0 = std::chrono::steady_clock::now();
  const DesingularizeResult r = desingularize(m, opt);
  log(2, "desingularized in " +
             std::to_string(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()) + " s");
  const std::string rendered = render_tri(from_marked(r.result));
  if (!out.empty()) write_text(out, rendered);
  if (!cert.empty()) write_text(cert, to_json(r.certificate).dump(2) + "\n");
  const PostconditionReport rep = check_desingularized(r.result);
  json j{{"signature", r.certificate.start.hex()},
         {"result_signature", r.certificate.end.hex()},
         {"tetrahedra", r.result.size()},
         {"moves", r.certificate.moves.size()},
         {"postconditions", rep.ok()}};
  if (out.empty()) j["result"] = rendered;
  if (cert.empty()) j["certificate"] = to_json(r.certificate);
  std::string text = "result " + brief(r.certificate.end) + "\n" + std::to_string(r.result.size()) + " tetrahedra, " +
                     std::to_string(r.certificate.moves.size()) + " moves\n";
  if (out.empty()) text += rendered;
  emit(ctx, j, text);
  return kOk;
}

int cmd_connect(const Context& ctx, const std::string& a, const std::string& b, const SearchBudget& budget,
                bool mpa_only, const std::string& out) {
  const MarkedTriangulation ma = read_tri(a).as_marked(), mb = read_tri(b).as_marked();
  log(2, "searching with max_tets=" + std::to_string(budget.max_tets) + " max_states=" + std::to_string(budget.max_states));
  const auto c = connect(ma, mb, budget, mpa_only);
  json j{{"signature", signature(ma).hex()}, {"target_signature", signature(mb).hex()}, {"found", c.has_value()}};
  if (!c) {
    emit(ctx, j, "no certificate within the budget\n");
    return kExhausted;
  }
  if (!out.empty()) write_text(out, to_json(*c).dump(2) + "\n");
  j["certificate"] = to_json(*c);
  emit(ctx, j, certificate_text(*c));
  return kOk;
}

int cmd_dominate(const Context& ctx, const std::string& a, const std::string& b, const SearchBudget& budget) {
  const MarkedTriangulation ma = read_tri(a).as_marked(), mb = read_tri(b).as_marked();
  const auto d = dominate(ma, mb, budget);
  json j{{"signature", signature(ma).hex()}, {"target_signature", signature(mb).hex()}, {"found", d.has_value()}};
  if (!d) {
    emit(ctx, j, "no common dominator within the budget\n");
    return kExhausted;
  }
  j["dominator"] = d->dominator.hex();
  j["from_a"] = to_json(d->from_a);
  j["from_b"] = to_json(d->from_b);
  emit(ctx, j, "dominator " + brief(d->dominator) + "\nfrom a:\n" + certificate_text(d->from_a) + "from b:\n" +
                   certificate_text(d->from_b));
  return kOk;
}

int cmd_replay(const Context& ctx, const std::string& path, const std::string& cert_path) {
  const TriFile f = read_tri(path);
  json doc;
  try {
    doc = json::parse(read_text(cert_path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::SyntaxError, std::string("certificate: ") + e.what());
  }
  const bool distinguished = doc.is_object() && doc.value("format", "") == "mark3d-distinguished-certificate";
  json j{{"signature", signature(f.as_marked()).hex()}};
  bool ok = false;
  std::string why;
  if (distinguished) {
    const DistinguishedCertificate c = distinguished_certificate_from_json(doc);
    const DistinguishedTriangulation d = to_distinguished(f);
    ok = signature(d) == c.start;
    if (!ok) why = "start signature differs from the input";
    if (ok) {
      try {
        ok = signature(replay_distinguished(d, c.steps)) == c.end;
        if (!ok) why = "end signature differs";
      } catch (const Error& e) {
        ok = false;
        why = e.what();
      }
    }
  } else {
    const Certificate c = certificate_from_json(doc);
    const MarkedTriangulation m = f.as_marked();
    ok = signature(m) == c.start;
    if (!ok) why = "start signature differs from the input";
    if (ok) {
      try {
        ok = c.verify(m);
        if (!ok) why = "a recorded signature differs";
      } catch (const Error& e) {
        ok = false;
        why = e.what();
      }
    }
  }
  j["valid"] = ok;
  if (!ok) j["error"] = why;
  emit(ctx, j, ok ? "certificate replays\n" : "certificate fails: " + why + "\n");
  return ok ? kOk : kInvalid;
}

int cmd_canon(const Context& ctx, const std::string& path) {
  const Signature s = signature(read_tri(path).as_marked());
  emit(ctx, {{"signature", s.hex()}}, s.hex() + "\n");
  return kOk;
}

int cmd_graph(const Context& ctx, const std::string& path, int max_tets, const std::string& dot,
              const std::string& kinds, long max_nodes) {
  const MarkedTriangulation m = read_tri(path).as_marked();
  const MoveGraph g = move_graph(m, max_tets, parse_kinds(kinds), max_nodes);
  std::ostringstream d;
  d << "digraph moves {\n";
  const Signature root = signature(m);
  for (const Signature& s : g.nodes)
    d << "  \"" << s.hex() << "\"" << (s == root ? " [shape=box]" : "") << ";\n";
  for (const auto& e : g.edges)
    d << "  \"" << g.nodes[e.from].hex() << "\" -> \"" << g.nodes[e.to].hex() << "\" [label=\"" << to_string(e.move.kind)
      << "\"];\n";
  d << "}\n";
  const std::string printed = write_or_print(dot, d.str());
  json j{{"signature", root.hex()}, {"nodes", g.nodes.size()}, {"edges", g.edges.size()}, {"truncated", g.truncated}};
  emit(ctx, j, printed.empty() ? std::to_string(g.nodes.size()) + " nodes, " + std::to_string(g.edges.size()) + " edges\n" : printed);
  return kOk;
}

int cmd_ptt(const Context& ctx, const std::string& dir, const std::string& path, const std::string& out, bool strict) {
  const TriFile f = read_tri(path);
  if (dir == "to-marked") {
    const MarkedWithIdeal r = ptt_to_marked(to_ptt(f));
    const std::string rendered = render_tri(from_marked(r.marked));
    const std::string printed = write_or_print(out, rendered);
    json j{{"signature", signature(f.as_marked()).hex()}, {"ideal", r.ideal}, {"marked", r.marked.marked()}};
    if (out.empty()) j["result"] = rendered;
    emit(ctx, j, printed);
    return kOk;
  }
  std::vector<std::string> warnings;
  const PartiallyTruncated p = marked_to_ptt(f.as_marked(), PttOptions{strict}, &warnings);
  for (const auto& w : warnings) log(1, w);
  const std::string rendered = render_tri(from_ptt(p));
  const std::string printed = write_or_print(out, rendered);
  json j{{"signature", signature(f.as_marked()).hex()}, {"ideal", p.ideal}, {"zero", p.zero}, {"warnings", warnings}};
  if (out.empty()) j["result"] = rendered;
  emit(ctx, j, printed);
  return kOk;
}

int cmd_dist_check(const Context& ctx, const std::string& path) {
  const TriFile f = read_tri(path);
  const DistinguishedTriangulation d = to_distinguished(f);
  const auto comps = d.components();
  json j{{"signature", signature(d).hex()},
         {"valid", true},
         {"vertices", d.tri.skeleton().vertices.size()},
         {"link_edges", d.link_edges},
         {"components", comps}};
  emit(ctx, j, "hamiltonian: " + std::to_string(comps.size()) + " link component(s), " +
                   std::to_string(d.tri.skeleton().vertices.size()) + " vertices\n");
  return kOk;
}

int exit_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::SyntaxError:
    case ErrorKind::IoError: return kIo;
    default: return kInvalid;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Marked ideal triangulations: moves, certificates and searches"};
  app.require_subcommand(1);
  Context ctx;
  app.add_flag("--json", ctx.json_out, "Machine-readable output");

  std::string file, file_b, move, out, kinds, cert, dot, dir;
  SearchBudget budget;
  bool mpa_only = false, strict = false, step_sigs = false;
  long max_nodes = 100000;

  auto* validate = app.add_subcommand("validate", "Parse and report invariants");
  validate->add_option("file", file)->required();
  auto* info = app.add_subcommand("info", "Skeleton, spine, H1, links and singularities");
  info->add_option("file", file)->required();
  auto* moves = app.add_subcommand("moves", "List admissible moves");
  moves->add_option("file", file)->required();
  moves->add_option("--kinds", kinds, "Comma-separated kinds, e.g. mpa+,va+");
  auto* apply = app.add_subcommand("apply", "Apply one move");
  apply->add_option("file", file)->required();
  apply->add_option("--move", move)->required();
  apply->add_option("-o,--output", out);
  auto* decompose = app.add_subcommand("decompose", "Decompose va+, la+ or ca+ into smaller moves");
  decompose->add_option("file", file)->required();
  decompose->add_option("--move", move)->required();
  auto* desing = app.add_subcommand("desingularize", "Remove singularities around marked edges");
  desing->add_option("file", file)->required();
  desing->add_option("-o,--output", out);
  desing->add_option("--cert", cert, "Write the certificate here");
  desing->add_flag("--step-signatures", step_sigs, "Record a signature after every move");
  auto* conn = app.add_subcommand("connect", "Search for a va/mpa certificate between two triangulations");
  conn->add_option("a", file)->required();
  conn->add_option("b", file_b)->required();
  conn->add_option("--max-tets", budget.max_tets)->capture_default_str();
  conn->add_option("--max-states", budget.max_states)->capture_default_str();
  conn->add_option("--max-seconds", budget.max_seconds)->capture_default_str();
  conn->add_flag("--mpa-only", mpa_only);
  conn->add_option("-o,--output", out, "Write the certificate here");
  auto* dom = app.add_subcommand("dominate", "Search for a common positive successor");
  dom->add_option("a", file)->required();
  dom->add_option("b", file_b)->required();
  dom->add_option("--max-tets", budget.max_tets)->capture_default_str();
  dom->add_option("--max-states", budget.max_states)->capture_default_str();
  dom->add_option("--max-seconds", budget.max_seconds)->capture_default_str();
  auto* rep = app.add_subcommand("replay", "Verify a certificate");
  rep->add_option("file", file)->required();
  rep->add_option("certificate", cert)->required();
  auto* canon = app.add_subcommand("canon", "Print the signature");
  canon->add_option("file", file)->required();
  auto* graph = app.add_subcommand("graph", "Export the reachable move graph as DOT");
  graph->add_option("file", file)->required();
  graph->add_option("--max-tets", budget.max_tets)->required();
  graph->add_option("--dot", dot, "Output path (stdout when omitted)");
  graph->add_option("--kinds", kinds);
  graph->add_option("--max-nodes", max_nodes)->capture_default_str();
  auto* ptt = app.add_subcommand("ptt", "Partially truncated <-> marked conversions");
  ptt->add_option("direction", dir)->required()->check(CLI::IsMember({"to-marked", "from-marked"}));
  ptt->add_option("file", file)->required();
  ptt->add_option("-o,--output", out);
  ptt->add_flag("--strict", strict, "Sphere links are an error");
  auto* dist = app.add_subcommand("dist", "Distinguished triangulations");
  std::string dist_cmd;
  dist->add_option("action", dist_cmd)->required()->check(CLI::IsMember({"check"}));
  dist->add_option("file", file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kIo;
  }

  try {
    if (*validate) return cmd_validate(file);
    if (*info) return cmd_info(ctx, file);
    if (*moves) return cmd_moves(ctx, file, kinds);
    if (*apply) return cmd_apply(ctx, file, move, out);
    if (*decompose) return cmd_decompose(ctx, file, move);
    if (*desing) return cmd_desingularize(ctx, file, out, cert, step_sigs);
    if (*conn) return cmd_connect(ctx, file, file_b, budget, mpa_only, out);
    if (*dom) return cmd_dominate(ctx, file, file_b, budget);
    if (*rep) return cmd_replay(ctx, file, cert);
    if (*canon) return cmd_canon(ctx, file);
    if (*graph) return cmd_graph(ctx, file, budget.max_tets, dot, kinds, max_nodes);
    if (*ptt) return cmd_ptt(ctx, dir, file, out, strict);
    if (*dist) return cmd_dist_check(ctx, file);
  } catch (const Error& e) {
    log(0, e.what());
    if (ctx.json_out) std::cout << json{{"error", e.what()}, {"kind", to_string(e.kind())}}.dump(2) << "\n";
    return exit_for(e.kind());
  } catch (const std::exception& e) {
    log(0, e.what());
    return kInvalid;
  }
  return kOk;
}
