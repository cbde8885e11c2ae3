#include "todacli/diff.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "todacli/report.hpp"

namespace todacli {

using nlohmann::json;

namespace {

const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) throw SchemaMismatch(path + "/" + key, "missing");
  return j.at(key);
}

std::map<std::string, const json*> by_name(const json& arr, const std::string& path) {
  if (!arr.is_array()) throw SchemaMismatch(path, "expected an array");
  std::map<std::string, const json*> out;
  for (const auto& e : arr) {
    const auto& name = field(e, "name", path);
    if (!name.is_string()) throw SchemaMismatch(path + "/name", "expected a string");
    out[name.get<std::string>()] = &e;
  }
  return out;
}

std::string show(const json& v) { return v.is_null() ? "null" : v.dump(); }

}  // namespace

DiffResult diff_reports(const json& a, const json& b) {
  if (field(a, "schema_version", "") != field(b, "schema_version", ""))
    throw SchemaMismatch("/schema_version", "versions differ");
  DiffResult out;
  const auto ca = by_name(field(a, "checks", ""), "/checks");
  const auto cb = by_name(field(b, "checks", ""), "/checks");
  for (const auto& [name, _] : cb)
    if (!ca.count(name)) throw SchemaMismatch("/checks/" + name, "only in the second report");
  for (const auto& [name, ja] : ca) {
    const std::string cpath = "/checks/" + name;
    if (!cb.count(name)) throw SchemaMismatch(cpath, "only in the first report");
    const json& jb = *cb.at(name);
    if (field(*ja, "passed", cpath) != field(jb, "passed", cpath))
      out.lines.push_back(cpath + ": passed " + show((*ja)["passed"]) + " vs " + show(jb["passed"]));
    if (ja->contains("error") != jb.contains("error"))
      out.lines.push_back(cpath + ": error present in only one report");

    const auto ma = by_name(field(*ja, "metrics", cpath), cpath + "/metrics");
    const auto mb = by_name(field(jb, "metrics", cpath), cpath + "/metrics");
    for (const auto& [mname, _] : mb)
      if (!ma.count(mname)) throw SchemaMismatch(cpath + "/metrics/" + mname, "only in the second report");
    for (const auto& [mname, pa] : ma) {
      const std::string mpath = cpath + "/metrics/" + mname;
      if (!mb.count(mname)) throw SchemaMismatch(mpath, "only in the first report");
      const json& x = *pa;
      const json& y = *mb.at(mname);
      const auto& kx = field(x, "kind", mpath);
      if (kx != field(y, "kind", mpath)) throw SchemaMismatch(mpath + "/kind", "kinds differ");
      MetricKind kind;
      try {
        kind = metric_kind_from(kx.get<std::string>());
      } catch (const std::exception&) {
        throw SchemaMismatch(mpath + "/kind", "unknown kind");
      }
      if (field(x, "passed", mpath) != field(y, "passed", mpath))
        out.lines.push_back(mpath + ": passed " + show(x["passed"]) + " vs " + show(y["passed"]));
      if (kind == MetricKind::LowerBound) continue;
      const json& vx = field(x, "value", mpath);
      const json& vy = field(y, "value", mpath);
      if (vx.is_null() || vy.is_null()) {
        if (vx.is_null() != vy.is_null()) out.lines.push_back(mpath + ": " + show(vx) + " vs " + show(vy));
        continue;
      }
      if (!vx.is_number() || !vy.is_number()) throw SchemaMismatch(mpath + "/value", "expected a number");
      const double va = vx.get<double>(), vb = vy.get<double>();
      const double tol = std::max(field(x, "tol", mpath).get<double>(), field(y, "tol", mpath).get<double>());
      const bool relative = kind == MetricKind::Rel || kind == MetricKind::Info;
      const double allowed = relative ? tol * std::max(std::abs(va), std::abs(vb)) : tol;
      const double delta = std::abs(va - vb);
      if (delta > allowed) {
        std::ostringstream os;
        os.precision(6);
        os << mpath << ": " << va << " vs " << vb << " (|delta| " << delta << " > allowed " << allowed << ")";
        out.lines.push_back(os.str());
      }
    }
  }
  return out;
}

int diff_command(const std::string& path_a, const std::string& path_b, std::ostream& out) {
  json a, b;
  for (auto [path, target] : {std::pair{&path_a, &a}, std::pair{&path_b, &b}}) {
    std::ifstream in(*path);
    if (!in) {
      out << "cannot read " << *path << '\n';
      return 2;
    }
    try {
      *target = json::parse(in);
    } catch (const json::parse_error& e) {
      out << *path << ": " << e.what() << '\n';
      return 2;
    }
  }
  try {
    const auto d = diff_reports(a, b);
    for (const auto& l : d.lines) out << l << '\n';
    return d.drifted() ? 1 : 0;
  } catch (const SchemaMismatch& e) {
    out << "schema mismatch at " << e.what() << '\n';
    return 3;
  }
}

}  // namespace todacli
