#include "todacli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "toda/errors.hpp"
#include "toda/variation.hpp"

namespace todacli {

using nlohmann::json;

namespace {

// Line and column (1-based) of byte offset `pos`.
std::pair<int, int> locate(const std::string& text, std::size_t pos) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < pos && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

[[noreturn]] void schema(const std::string& path, const std::string& what) {
  throw ConfigParseError(path + ": " + what);
}

// Walks one JSON object, dispatching each key to a handler; unknown keys are errors.
class Object {
 public:
  Object(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) schema(path_, "expected an object");
  }

  template <class F>
  Object& on(const std::string& key, F&& f) {
    handlers_[key] = std::forward<F>(f);
    return *this;
  }

  void run() {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      auto h = handlers_.find(it.key());
      if (h == handlers_.end()) schema(path_ + "/" + it.key(), "unknown key");
      h->second(it.value(), path_ + "/" + it.key());
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::map<std::string, std::function<void(const json&, const std::string&)>> handlers_;
};

double number(const json& j, const std::string& path) {
  if (!j.is_number()) schema(path, "expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) schema(path, "expected an integer");
  return j.get<int>();
}

bool boolean(const json& j, const std::string& path) {
  if (!j.is_boolean()) schema(path, "expected true or false");
  return j.get<bool>();
}

std::string string(const json& j, const std::string& path) {
  if (!j.is_string()) schema(path, "expected a string");
  return j.get<std::string>();
}

std::vector<double> numbers(const json& j, const std::string& path) {
  if (!j.is_array()) schema(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], path + "/" + std::to_string(i)));
  return out;
}

std::vector<std::string> strings(const json& j, const std::string& path) {
  if (!j.is_array()) schema(path, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(string(j[i], path + "/" + std::to_string(i)));
  return out;
}

template <class T>
auto setter(T& target) {
  if constexpr (std::is_same_v<T, double>)
    return [&target](const json& j, const std::string& p) { target = number(j, p); };
  else if constexpr (std::is_same_v<T, int>)
    return [&target](const json& j, const std::string& p) { target = integer(j, p); };
  else if constexpr (std::is_same_v<T, bool>)
    return [&target](const json& j, const std::string& p) { target = boolean(j, p); };
  else if constexpr (std::is_same_v<T, std::vector<double>>)
    return [&target](const json& j, const std::string& p) { target = numbers(j, p); };
  else
    return [&target](const json& j, const std::string& p) { target = strings(j, p); };
}

toda::Precision precision_from(const std::string& s, const std::string& path) {
  if (s == "double") return toda::Precision::Double;
  if (s == "extended") return toda::Precision::Extended;
  schema(path, "expected \"double\" or \"extended\"");
}

void parse_tolerances(const json& j, const std::string& path, Tolerances& t) {
  Object(j, path)
      .on("lambda_product", setter(t.lambda_product))
      .on("realness", setter(t.realness))
      .on("cut", setter(t.cut))
      .on("direct_route", setter(t.direct_route))
      .on("closed_form", setter(t.closed_form))
      .on("radial_spread", setter(t.radial_spread))
      .on("residual", setter(t.residual))
      .on("order_min", setter(t.order_min))
      .on("decay_slope", setter(t.decay_slope))
      .on("mass", setter(t.mass))
      .on("expand_S", setter(t.expand_S))
      .on("expand_leading", setter(t.expand_leading))
      .on("expand_first", setter(t.expand_first))
      .on("expand_absent", setter(t.expand_absent))
      .on("linearize", setter(t.linearize))
      .on("control_ratio", setter(t.control_ratio))
      .on("control_min", setter(t.control_min))
      .on("dual_route", setter(t.dual_route))
      .on("decay_amplitude", setter(t.decay_amplitude))
      .on("mode_leak", setter(t.mode_leak))
      .on("cross_component", setter(t.cross_component))
      .on("decay_exponent_min", setter(t.decay_exponent_min))
      .on("green", setter(t.green))
      .on("delta", setter(t.delta))
      .on("ibp_abs", setter(t.ibp_abs))
      .on("ibp_rel", setter(t.ibp_rel))
      .on("cross_response", setter(t.cross_response))
      .on("model_integral", setter(t.model_integral))
      .run();
}

void parse_grids(const json& j, const std::string& path, RunConfig& c) {
  Object(j, path)
      .on("residual",
          [&](const json& g, const std::string& p) {
            auto& r = c.residual;
            Object(g, p)
                .on("points", setter(r.points))
                .on("r_min", setter(r.r_min))
                .on("r_max", setter(r.r_max))
                .on("h", setter(r.h))
                .on("order_h", setter(r.order_h))
                .on("order_points", setter(r.order_points))
                .on("decay_radius", setter(r.decay_radius))
                .run();
          })
      .on("mass",
          [&](const json& g, const std::string& p) {
            auto& m = c.mass;
            Object(g, p)
                .on("radius", setter(m.radius))
                .on("angles", setter(m.angles))
                .on("doubling_check", setter(m.doubling_check))
                .run();
          })
      .on("expand",
          [&](const json& g, const std::string& p) {
            auto& e = c.expand;
            Object(g, p)
                .on("r_min", setter(e.r_min))
                .on("r_max", setter(e.r_max))
                .on("per_decade", setter(e.per_decade))
                .on("angles", setter(e.angles))
                .run();
          })
      .on("linearize",
          [&](const json& g, const std::string& p) {
            auto& l = c.linearize;
            Object(g, p)
                .on("points", setter(l.points))
                .on("r_min", setter(l.r_min))
                .on("r_max", setter(l.r_max))
                .on("h", setter(l.h))
                .on("param_step", setter(l.param_step))
                .on("decay_radii", setter(l.decay_radii))
                .on("amplitude_radius", setter(l.amplitude_radius))
                .on("corrupt_factor", setter(l.corrupt_factor))
                .on("params", setter(l.params))
                .run();
          })
      .on("identities", [&](const json& g, const std::string& p) {
        auto& d = c.identities;
        Object(g, p)
            .on("green_radius", setter(d.green_radius))
            .on("green_points", setter(d.green_points))
            .on("ibp_radius", setter(d.ibp_radius))
            .on("orth_radii", setter(d.orth_radii))
            .on("hbar",
                [&](const json& arr, const std::string& ap) {
                  if (!arr.is_array()) schema(ap, "expected an array");
                  for (std::size_t i = 0; i < arr.size(); ++i) {
                    HbarSpec h;
                    Object(arr[i], ap + "/" + std::to_string(i))
                        .on("component", setter(h.component))
                        .on("c0", setter(h.c0))
                        .on("c1", setter(h.c1))
                        .on("c2", setter(h.c2))
                        .on("c11", setter(h.c11))
                        .on("c12", setter(h.c12))
                        .on("c22", setter(h.c22))
                        .run();
                    d.hbar.push_back(h);
                  }
                })
            .run();
      })
      .run();
}

// "i,j" -> (i, j)
std::pair<int, int> index_pair(const std::string& key, const std::string& path) {
  std::istringstream is(key);
  int i = 0, j = 0;
  char comma = 0;
  if (!(is >> i >> comma >> j) || comma != ',' || !is.eof())
    schema(path, "coefficient keys have the form \"i,j\"");
  return {i, j};
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text, nullptr, true, false);
  } catch (const json::parse_error& e) {
    const auto [line, col] = locate(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ConfigParseError("syntax error at line " + std::to_string(line) + ", column " +
                               std::to_string(col) + ": " + e.what(),
                           line, col);
  }

  RunConfig c;
  bool have_n = false, have_gamma = false;
  Object(doc, "")
      .on("name", [&](const json& j, const std::string& p) { c.name = string(j, p); })
      .on("n",
          [&](const json& j, const std::string& p) {
            c.n = integer(j, p);
            have_n = true;
          })
      .on("gamma",
          [&](const json& j, const std::string& p) {
            c.gamma = numbers(j, p);
            have_gamma = true;
          })
      .on("lambda",
          [&](const json& j, const std::string& p) {
            if (j.is_string()) {
              if (j.get<std::string>() != "auto") schema(p, "expected \"auto\" or an array");
              c.lambda.reset();
            } else {
              c.lambda = numbers(j, p);
            }
          })
      .on("c",
          [&](const json& j, const std::string& p) {
            if (!j.is_object()) schema(p, "expected an object mapping \"i,j\" to [re, im]");
            for (auto it = j.begin(); it != j.end(); ++it) {
              const std::string kp = p + "/" + it.key();
              const auto [i, k] = index_pair(it.key(), kp);
              const auto v = numbers(it.value(), kp);
              if (v.size() != 2) schema(kp, "expected [re, im]");
              c.c.emplace_back(i, k, std::complex<double>(v[0], v[1]));
            }
          })
      .on("autonormalize", setter(c.autonormalize))
      .on("precision",
          [&](const json& j, const std::string& p) { c.precision = precision_from(string(j, p), p); })
      .on("seed",
          [&](const json& j, const std::string& p) {
            if (!j.is_number_unsigned()) schema(p, "expected a nonnegative integer");
            c.seed = j.get<std::uint64_t>();
          })
      .on("checks",
          [&](const json& j, const std::string& p) {
            c.checks = strings(j, p);
            for (const auto& s : c.checks)
              if (std::find(all_checks().begin(), all_checks().end(), s) == all_checks().end())
                schema(p, "unknown check \"" + s + "\"");
          })
      .on("csv", setter(c.csv))
      .on("grids", [&](const json& j, const std::string& p) { parse_grids(j, p, c); })
      .on("tolerances", [&](const json& j, const std::string& p) { parse_tolerances(j, p, c.tol); })
      .run();
  if (!have_n) schema("/n", "missing");
  if (!have_gamma) schema("/gamma", "missing");
  return c;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigParseError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

Prepared prepare(const RunConfig& cfg) {
  if (cfg.n < 1) throw toda::ValidationError("n", "rank must be >= 1");
  auto cd = toda::build_cartan(cfg.n, cfg.gamma);
  toda::SolutionParams raw(cfg.n);
  if (cfg.lambda) {
    if (cfg.lambda->size() != static_cast<std::size_t>(cfg.n) + 1)
      throw toda::ValidationError("lambda", "expected n+1 = " + std::to_string(cfg.n + 1) + " entries");
    raw.lambda = *cfg.lambda;
  } else {
    // Equal weights; putting the whole constant on lambda_0 concentrates the solution.
    raw.lambda.assign(cfg.n + 1, std::pow(cd.lambda_product(), 1.0 / (cfg.n + 1)));
  }
  std::set<std::pair<int, int>> seen;
  for (const auto& [i, j, v] : cfg.c) {
    const std::string field = "c[" + std::to_string(i) + "," + std::to_string(j) + "]";
    if (i < 1 || i > cfg.n || j < 0 || j >= i)
      throw toda::ValidationError(field, "indices must satisfy 0 <= j < i <= n");
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw toda::ValidationError(field, "not finite");
    if (!seen.insert({i, j}).second) throw toda::ValidationError(field, "given twice");
    raw.set_c(i, j, v);
  }
  // Forbidden coefficients are an error unless autonormalize; lambda "auto"
  // only rescales lambda_0.
  auto v = toda::validate_params(cd, raw, cfg.autonormalize);
  if (!cfg.autonormalize && !cfg.lambda) v = toda::validate_params(cd, v.params, true);
  if (!v.params.normalized)
    throw toda::ValidationError("lambda", "lambda_0 ... lambda_n does not match the normalization constant");
  for (const auto& h : cfg.identities.hbar)
    if (h.component < 1 || h.component > cfg.n)
      throw toda::ValidationError("grids/identities/hbar", "component outside 1..n");
  for (const auto& s : cfg.linearize.params)
    toda::direction_of(cd, v.params, toda::ParamId::parse(s));
  return Prepared{std::move(cd), std::move(v.params), std::move(v.coerced)};
}

json to_json(const RunConfig& c) {
  json cs = json::object();
  for (const auto& [i, j, v] : c.c) cs[std::to_string(i) + "," + std::to_string(j)] = {v.real(), v.imag()};
  json j{{"name", c.name},
         {"n", c.n},
         {"gamma", c.gamma},
         {"c", cs},
         {"autonormalize", c.autonormalize},
         {"precision", toda::to_string(c.precision)},
         {"seed", c.seed},
         {"checks", c.checks}};
  j["lambda"] = c.lambda ? json(*c.lambda) : json("auto");
  return j;
}

}  // namespace todacli
