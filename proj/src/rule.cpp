#include "hoplr/rule.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace hoplr {

using json = nlohmann::json;

WeightSpec::WeightSpec(Kind kind, double ratio, std::vector<double> values)
    : kind_(kind), ratio_(ratio), values_(std::move(values)) {}

WeightSpec WeightSpec::geometric(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("geometric weight ratio must be positive");
  return WeightSpec(Kind::geometric, c, {});
}

WeightSpec WeightSpec::polydecay() { return WeightSpec(Kind::polydecay, 0.0, {}); }

WeightSpec WeightSpec::list(std::vector<double> values) {
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("weights must be positive");
  }
  return WeightSpec(Kind::list, 0.0, std::move(values));
}

WeightSpec WeightSpec::parse(std::string_view text) {
  if (text == "polydecay") return polydecay();
  if (text.starts_with("geom:")) {
    const std::string arg(text.substr(5));
    std::size_t used = 0;
    double c = 0.0;
    try {
      c = std::stod(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != arg.size()) throw std::invalid_argument("bad geometric weight ratio '" + arg + "'");
    return geometric(c);
  }
  if (text.starts_with("list:")) {
    std::string body(text.substr(5));
    for (char& ch : body) {
      if (ch == ',') ch = ' ';
    }
    std::istringstream in(body);
    std::vector<double> values;
    std::string token;
    while (in >> token) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size() || used == 0) throw std::invalid_argument("bad weight '" + token + "'");
      values.push_back(v);
    }
    if (values.empty()) throw std::invalid_argument("empty weight list");
    return list(std::move(values));
  }
  throw std::invalid_argument("unknown weight spec '" + std::string(text) + "' (geom:C, polydecay, list:...)");
}

std::vector<double> WeightSpec::materialize(int s) const {
  if (s < 0) throw std::invalid_argument("dimension must be nonnegative");
  std::vector<double> g(s);
  for (int j = 1; j <= s; ++j) {
    switch (kind_) {
      case Kind::geometric:
        g[j - 1] = std::pow(ratio_, j);
        break;
      case Kind::polydecay:
        g[j - 1] = 1.0 / (static_cast<double>(j) * j);
        break;
      case Kind::list:
        if (j > static_cast<int>(values_.size())) {
          throw std::invalid_argument("weight list has " + std::to_string(values_.size()) + " entries, need " +
                                      std::to_string(s));
        }
        g[j - 1] = values_[j - 1];
        break;
    }
  }
  return g;
}

namespace {

// Shortest decimal that reads back to the same double.
std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string WeightSpec::describe() const {
  switch (kind_) {
    case Kind::geometric:
      return "geom:" + shortest(ratio_);
    case Kind::polydecay:
      return "polydecay";
    case Kind::list: {
      std::string out = "list:";
      for (std::size_t i = 0; i < values_.size(); ++i) out += (i ? "," : "") + shortest(values_[i]);
      return out;
    }
  }
  return {};
}

void validate(const LatticeRule& rule) {
  const gf::PrimeBase base(rule.b);
  if (rule.m < 1) throw std::invalid_argument("m must be >= 1");
  if (rule.alpha < 2) throw std::invalid_argument("alpha must be >= 2");
  if (rule.n != rule.alpha * rule.m) throw std::invalid_argument("n must equal alpha * m");
  const gf::Modulus mod(rule.p, base);
  if (mod.degree() != rule.n) throw std::invalid_argument("deg p does not match n");
  for (gf::PolyCode q : rule.q) {
    if (q == 0 || q >= mod.field_size()) throw std::invalid_argument("generating polynomial out of range");
  }
  if (rule.errors.size() != rule.q.size()) throw std::invalid_argument("error list length differs from dimension");
}

namespace {

json weights_to_json(const WeightSpec& w) {
  switch (w.kind()) {
    case WeightSpec::Kind::geometric:
      return json{{"kind", "geom"}, {"param", w.ratio()}};
    case WeightSpec::Kind::polydecay:
      return json{{"kind", "polydecay"}};
    case WeightSpec::Kind::list:
      return json(w.values());
  }
  return {};
}

WeightSpec weights_from_json(const json& j) {
  if (j.is_array()) return WeightSpec::list(j.get<std::vector<double>>());
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "geom") return WeightSpec::geometric(j.at("param").get<double>());
  if (kind == "polydecay") return WeightSpec::polydecay();
  throw std::invalid_argument("unknown weight kind '" + kind + "'");
}

}  // namespace

std::string rule_to_json(const LatticeRule& rule) {
  json j;
  j["schema_version"] = kRuleSchemaVersion;
  j["b"] = rule.b;
  j["m"] = rule.m;
  j["n"] = rule.n;
  j["alpha"] = rule.alpha;
  j["p"] = rule.p;
  j["q"] = rule.q;
  j["weights"] = weights_to_json(rule.weights);
  j["errors"] = rule.errors;
  j["generator_g"] = rule.generator;
  j["tie_break"] = kTieBreak;
  return j.dump(2) + "\n";
}

LatticeRule rule_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed rule file: ") + e.what());
  }
  try {
    if (j.at("schema_version").get<int>() != kRuleSchemaVersion) {
      throw std::invalid_argument("unsupported rule schema version");
    }
    LatticeRule r;
    r.b = j.at("b").get<std::uint32_t>();
    r.m = j.at("m").get<int>();
    r.n = j.at("n").get<int>();
    r.alpha = j.at("alpha").get<int>();
    r.p = j.at("p").get<gf::PolyCode>();
    r.q = j.at("q").get<std::vector<gf::PolyCode>>();
    r.weights = weights_from_json(j.at("weights"));
    r.errors = j.at("errors").get<std::vector<double>>();
    r.generator = j.value("generator_g", gf::PolyCode{0});
    validate(r);
    return r;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed rule file: ") + e.what());
  }
}

void write_rule_file(const std::filesystem::path& path, const LatticeRule& rule) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << rule_to_json(rule);
}

LatticeRule read_rule_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return rule_from_json(text.str());
}

}  // namespace hoplr
