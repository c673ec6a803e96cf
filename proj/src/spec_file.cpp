#include "weylcalc/spec_file.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace weyl {

namespace {

using nlohmann::json;

std::size_t u(int i) { return static_cast<std::size_t>(i); }

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw SpecError(path + ": " + msg);
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                    const std::string& path) {
  for (const auto& item : obj.items())
    if (!allowed.count(item.key()))
      fail(path + "." + item.key(), "unknown field");
}

ScalarField parse_field(const json& node, const std::string& path,
                        const std::vector<std::string>& coords) {
  if (!node.is_string()) fail(path, "expected an expression string");
  try {
    return ScalarField::parse(node.get<std::string>(), coords);
  } catch (const ParseError& e) {
    fail(path, std::string("expression error: ") + e.what());
  }
}

std::vector<ScalarField> parse_form(const json& node, const std::string& path,
                                    int n,
                                    const std::vector<std::string>& coords) {
  if (!node.is_array() || static_cast<int>(node.size()) != n)
    fail(path, "expected an array of " + std::to_string(n) + " expressions");
  std::vector<ScalarField> out;
  for (int i = 0; i < n; ++i)
    out.push_back(parse_field(node[u(i)], path + "[" + std::to_string(i) + "]",
                              coords));
  return out;
}

}  // namespace

WeylManifold ManifoldSpec::manifold() const {
  return WeylManifold(coordinates, metric, weyl_form, connection_form);
}

ManifoldSpec parse_spec(const std::string& json_text,
                        const std::string& origin) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SpecError(origin + ": invalid JSON: " + e.what());
  }
  if (!root.is_object()) fail(origin, "top level must be an object");
  reject_unknown(root,
                 {"name", "dimension", "coordinates", "metric", "weyl_form",
                  "connection_form", "mapping", "gauge", "sampling",
                  "tolerance", "gap"},
                 origin);

  ManifoldSpec spec;
  if (!root.contains("name") || !root["name"].is_string())
    fail(origin + ".name", "required string");
  spec.name = root["name"].get<std::string>();

  if (!root.contains("dimension") || !root["dimension"].is_number_integer())
    fail(origin + ".dimension", "required integer");
  spec.dimension = root["dimension"].get<int>();
  if (spec.dimension < 2) fail(origin + ".dimension", "must be >= 2");
  const int n = spec.dimension;

  if (!root.contains("coordinates") || !root["coordinates"].is_array() ||
      static_cast<int>(root["coordinates"].size()) != n)
    fail(origin + ".coordinates", "required array of " + std::to_string(n) +
                                      " names");
  for (const auto& c : root["coordinates"]) {
    if (!c.is_string()) fail(origin + ".coordinates", "names must be strings");
    spec.coordinates.push_back(c.get<std::string>());
  }

  // Metric: upper triangle required, lower triangle mirrored. A lower-
  // triangle entry may be given explicitly but must repeat the mirror text.
  if (!root.contains("metric") || !root["metric"].is_array() ||
      static_cast<int>(root["metric"].size()) != n)
    fail(origin + ".metric", "required " + std::to_string(n) + "x" +
                                 std::to_string(n) + " matrix");
  spec.metric.assign(u(n), std::vector<ScalarField>());
  std::vector<std::vector<std::string>> raw(u(n), std::vector<std::string>(u(n)));
  for (int i = 0; i < n; ++i) {
    const json& row = root["metric"][u(i)];
    const std::string rpath = origin + ".metric[" + std::to_string(i) + "]";
    if (!row.is_array()) fail(rpath, "expected an array row");
    const int len = static_cast<int>(row.size());
    if (len != n && len != n - i)
      fail(rpath, "row must have " + std::to_string(n) +
                      " entries (or the upper-triangle tail)");
    for (int j = 0; j < len; ++j) {
      const json& cell = row[u(j)];
      if (!cell.is_string())
        fail(rpath + "[" + std::to_string(j) + "]", "expected a string");
      int col = (len == n) ? j : i + j;
      raw[u(i)][u(col)] = cell.get<std::string>();
    }
    if (len == n)
      for (int j = 0; j < i; ++j)
        if (!raw[u(i)][u(j)].empty() && raw[u(j)][u(i)] != raw[u(i)][u(j)])
          fail(rpath + "[" + std::to_string(j) + "]",
               "lower-triangle entry must mirror metric[" + std::to_string(j) +
                   "][" + std::to_string(i) + "]");
  }
  for (int i = 0; i < n; ++i) {
    spec.metric[u(i)].reserve(u(n));
    for (int j = 0; j < n; ++j) {
      const std::string& text = (j >= i) ? raw[u(i)][u(j)] : raw[u(j)][u(i)];
      const std::string path = origin + ".metric[" + std::to_string(std::min(i, j)) +
                               "][" + std::to_string(std::max(i, j)) + "]";
      if (text.empty()) fail(path, "missing upper-triangle entry");
      spec.metric[u(i)].push_back(parse_field(json(text), path, spec.coordinates));
    }
  }

  if (!root.contains("weyl_form"))
    fail(origin + ".weyl_form", "required array");
  spec.weyl_form = parse_form(root["weyl_form"], origin + ".weyl_form", n,
                              spec.coordinates);
  if (!root.contains("connection_form"))
    fail(origin + ".connection_form", "required array");
  spec.connection_form = parse_form(root["connection_form"],
                                    origin + ".connection_form", n,
                                    spec.coordinates);

  if (root.contains("mapping")) {
    const json& mp = root["mapping"];
    if (!mp.is_object()) fail(origin + ".mapping", "expected an object");
    reject_unknown(mp, {"P", "Q"}, origin + ".mapping");
    if (!mp.contains("P") || !mp.contains("Q"))
      fail(origin + ".mapping", "requires P and Q arrays");
    ConformalMapping map;
    map.P = parse_form(mp["P"], origin + ".mapping.P", n, spec.coordinates);
    map.Q = parse_form(mp["Q"], origin + ".mapping.Q", n, spec.coordinates);
    spec.mapping = std::move(map);
  }

  if (root.contains("gauge")) {
    const json& ga = root["gauge"];
    if (!ga.is_object()) fail(origin + ".gauge", "expected an object");
    reject_unknown(ga, {"lambda"}, origin + ".gauge");
    if (!ga.contains("lambda")) fail(origin + ".gauge.lambda", "required");
    spec.gauge_lambda = parse_field(ga["lambda"], origin + ".gauge.lambda",
                                    spec.coordinates);
  }

  if (root.contains("sampling")) {
    if (!root["sampling"].is_object())
      fail(origin + ".sampling", "expected an object");
    const json& sampling = root["sampling"];
    reject_unknown(sampling, {"box", "points", "seed"}, origin + ".sampling");
    if (sampling.contains("box")) {
      if (!sampling["box"].is_array() ||
          static_cast<int>(sampling["box"].size()) != n)
        fail(origin + ".sampling.box",
             "expected an array of " + std::to_string(n) + " [lo, hi] pairs");
      for (int i = 0; i < n; ++i) {
        const json& b = sampling["box"][u(i)];
        const std::string bpath =
            origin + ".sampling.box[" + std::to_string(i) + "]";
        if (!b.is_array() || b.size() != 2 || !b[0].is_number() ||
            !b[1].is_number())
          fail(bpath, "expected [lo, hi]");
        double lo = b[0].get<double>(), hi = b[1].get<double>();
        if (!(lo < hi)) fail(bpath, "lo must be < hi");
        spec.box.emplace_back(lo, hi);
      }
    }
    if (sampling.contains("points")) {
      if (!sampling["points"].is_number_integer() ||
          sampling["points"].get<int>() < 1)
        fail(origin + ".sampling.points", "must be a positive integer");
      spec.points = sampling["points"].get<int>();
    }
    if (sampling.contains("seed")) {
      if (!sampling["seed"].is_number_unsigned() &&
          !sampling["seed"].is_number_integer())
        fail(origin + ".sampling.seed", "must be an integer");
      spec.seed = sampling["seed"].get<std::uint64_t>();
    }
  }
  if (spec.box.empty())
    spec.box.assign(static_cast<std::size_t>(n), {-0.5, 0.5});

  if (root.contains("tolerance")) {
    if (!root["tolerance"].is_number() || root["tolerance"].get<double>() <= 0)
      fail(origin + ".tolerance", "must be a positive number");
    spec.tolerance = root["tolerance"].get<double>();
  }
  if (root.contains("gap")) {
    if (!root["gap"].is_number() || root["gap"].get<double>() <= 0)
      fail(origin + ".gap", "must be a positive number");
    spec.gap = root["gap"].get<double>();
  }
  if (spec.gap < 1000.0 * spec.tolerance)
    fail(origin + ".gap", "must be at least 1000x tolerance");
  return spec;
}

ManifoldSpec load_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec(buf.str(), path);
}

namespace {

void append_json_string(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char hex[8];
          std::snprintf(hex, sizeof(hex), "\\u%04x", c);
          out += hex;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

}  // namespace

std::string report_to_json(const VerificationReport& report) {
  std::string out;
  out += "{\"meta\":{\"spec_name\":";
  append_json_string(out, report.spec_name);
  out += ",\"version\":";
  append_json_string(out, report.version);
  out += ",\"dimension\":" + std::to_string(report.dimension);
  out += ",\"manifold_digest\":" + std::to_string(report.manifold_digest);
  out += ",\"seed\":" + std::to_string(report.seed);
  out += ",\"points\":" + std::to_string(report.points);
  out += ",\"box\":[";
  for (std::size_t i = 0; i < report.box.size(); ++i) {
    if (i) out += ',';
    out += '[' + format_double(report.box[i].first) + ',' +
           format_double(report.box[i].second) + ']';
  }
  out += "],\"tolerance\":" + format_double(report.tolerance);
  out += ",\"gap\":" + format_double(report.gap);
  out += "},\"identities\":[";
  for (std::size_t i = 0; i < report.identities.size(); ++i) {
    const IdentityRecord& rec = report.identities[i];
    if (i) out += ',';
    out += "{\"name\":";
    append_json_string(out, rec.name);
    out += ",\"paper_ref\":";
    append_json_string(out, rec.paper_ref);
    out += ",\"max_residual\":" + format_double(rec.max_residual);
    out += ",\"tolerance\":" + format_double(rec.tolerance);
    out += ",\"verdict\":";
    append_json_string(out, rec.pass ? "pass" : "fail");
    out += ",\"worst_point\":[";
    for (std::size_t j = 0; j < rec.worst_point.size(); ++j) {
      if (j) out += ',';
      out += format_double(rec.worst_point[j]);
    }
    out += "]}";
  }
  out += "],\"theorem\":{\"D_S\":" + format_double(report.theorem.D_S);
  out += ",\"D_Z\":" + format_double(report.theorem.D_Z);
  out += ",\"cell\":";
  append_json_string(out, report.theorem.cell);
  out += ",\"beta_consistency_residual\":" +
         format_double(report.theorem.beta_consistency_residual);
  out += "}}\n";
  return out;
}

VerificationReport report_from_json(const std::string& json_text) {
  json root = json::parse(json_text);
  VerificationReport report;
  const json& meta = root.at("meta");
  report.spec_name = meta.at("spec_name").get<std::string>();
  report.version = meta.at("version").get<std::string>();
  report.dimension = meta.at("dimension").get<int>();
  report.manifold_digest = meta.at("manifold_digest").get<std::uint64_t>();
  report.seed = meta.at("seed").get<std::uint64_t>();
  report.points = meta.at("points").get<int>();
  for (const auto& b : meta.at("box"))
    report.box.emplace_back(b.at(0).get<double>(), b.at(1).get<double>());
  report.tolerance = meta.at("tolerance").get<double>();
  report.gap = meta.at("gap").get<double>();
  for (const auto& rec : root.at("identities")) {
    IdentityRecord ir;
    ir.name = rec.at("name").get<std::string>();
    ir.paper_ref = rec.at("paper_ref").get<std::string>();
    ir.max_residual = rec.at("max_residual").get<double>();
    ir.tolerance = rec.at("tolerance").get<double>();
    ir.pass = rec.at("verdict").get<std::string>() == "pass";
    for (const auto& c : rec.at("worst_point"))
      ir.worst_point.push_back(c.get<double>());
    report.identities.push_back(std::move(ir));
  }
  const json& th = root.at("theorem");
  report.theorem.D_S = th.at("D_S").get<double>();
  report.theorem.D_Z = th.at("D_Z").get<double>();
  report.theorem.cell = th.at("cell").get<std::string>();
  report.theorem.beta_consistency_residual =
      th.at("beta_consistency_residual").get<double>();
  report.theorem.pass =
      report.theorem.cell != "violation" &&
      (report.theorem.cell != "both_concircular" ||
       report.theorem.beta_consistency_residual <= report.tolerance);
  return report;
}

std::string report_to_text(const VerificationReport& report) {
  std::ostringstream out;
  out << "suite: " << report.spec_name << "  (n=" << report.dimension
      << ", points=" << report.points << ", seed=" << report.seed
      << ", tol=" << format_double(report.tolerance) << ")\n";
  out << "----------------------------------------------------------------------\n";
  for (const IdentityRecord& rec : report.identities) {
    out << (rec.pass ? "pass" : "FAIL") << "  ";
    std::string name = rec.name;
    name.resize(34, ' ');
    out << name;
    std::string ref = rec.paper_ref;
    ref.resize(16, ' ');
    out << ref << "max " << format_double(rec.max_residual) << "\n";
  }
  out << "theorem: cell=" << report.theorem.cell
      << "  D_S=" << format_double(report.theorem.D_S)
      << "  D_Z=" << format_double(report.theorem.D_Z)
      << "  beta_resid="
      << format_double(report.theorem.beta_consistency_residual)
      << (report.theorem.pass ? "  [pass]" : "  [FAIL]") << "\n";
  return out.str();
}

}  // namespace weyl
