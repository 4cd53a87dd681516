#include "frameforge/spec_json.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace frameforge {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw SpecError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) throw SpecError(std::string(what) + " must be a number");
  return j.get<double>();
}

Index integer(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw SpecError(std::string(what) + " must be an integer");
  return j.get<Index>();
}

std::uint64_t unsigned_integer(const Json& j, const char* what) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<std::int64_t>() < 0)) {
    throw SpecError(std::string(what) + " must be a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

double number_or(const Json& j, const char* key, double fallback) {
  return j.contains(key) ? number(j.at(key), key) : fallback;
}

Json linear_to_json(const LinearRule& r) { return {{"scale", r.scale}, {"offset", r.offset}}; }

LinearRule linear_from_json(const Json& j) {
  if (!j.is_object()) throw SpecError("linear rule must be an object {\"scale\", \"offset\"}");
  LinearRule r;
  if (j.contains("scale")) r.scale = integer(j.at("scale"), "scale");
  if (j.contains("offset")) r.offset = integer(j.at("offset"), "offset");
  return r;
}

Json family_params(const Family& f) {
  return std::visit(
      overloaded{
          [](const family::OrthonormalBasis&) { return Json::object(); },
          [](const family::Diagonal& x) { return Json{{"c", to_json(x.c)}}; },
          [](const family::OnePlusEn&) { return Json::object(); },
          [](const family::NTimesOnePlusEn&) { return Json::object(); },
          [](const family::FiniteDomainExample& x) { return Json{{"d", x.d}}; },
          [](const family::RandomGaussian& x) {
            return Json{{"seed", x.seed}, {"dim", linear_to_json(x.dim)}, {"count", linear_to_json(x.count)}};
          },
          [](const family::RepeatedVector& x) { return Json{{"k", x.k}}; },
          [](const family::Interleave& x) { return Json{{"first", to_json(*x.first)}, {"second", to_json(*x.second)}}; },
          [](const family::Weighted& x) { return Json{{"base", to_json(*x.base)}, {"weights", to_json(x.weights)}}; },
      },
      f);
}

Family family_from_json(const std::string& name, const Json& p) {
  if (!p.is_object()) throw SpecError("family params must be an object");
  if (name == "orthonormal_basis") return family::OrthonormalBasis{};
  if (name == "diagonal") return family::Diagonal{rule_from_json(field(p, "c"))};
  if (name == "one_plus_en") return family::OnePlusEn{};
  if (name == "n_times_one_plus_en") return family::NTimesOnePlusEn{};
  if (name == "finite_domain_example") {
    return family::FiniteDomainExample{p.contains("d") ? integer(p.at("d"), "d") : 1};
  }
  if (name == "random_gaussian") {
    family::RandomGaussian g;
    if (p.contains("seed")) g.seed = unsigned_integer(p.at("seed"), "seed");
    if (p.contains("dim")) g.dim = linear_from_json(p.at("dim"));
    if (p.contains("count")) g.count = linear_from_json(p.at("count"));
    return g;
  }
  if (name == "repeated_vector") return family::RepeatedVector{p.contains("k") ? integer(p.at("k"), "k") : 1};
  if (name == "interleave") {
    return family::Interleave{std::make_shared<const SequenceSpec>(spec_from_json(field(p, "first"))),
                              std::make_shared<const SequenceSpec>(spec_from_json(field(p, "second")))};
  }
  if (name == "weighted") {
    return family::Weighted{std::make_shared<const SequenceSpec>(spec_from_json(field(p, "base"))),
                            rule_from_json(field(p, "weights"))};
  }
  throw SpecError("unknown family \"" + name + "\"");
}

}  // namespace

Json to_json(Scalar z) { return Json::array({z.real(), z.imag()}); }

Scalar scalar_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw SpecError("complex number must be [re, im] or a real number");
}

Json to_json(const ScalarRule& rule) {
  switch (rule.kind()) {
    case ScalarRule::Kind::Constant:
      return {{"rule", "constant"}, {"value", to_json(rule.value())}};
    case ScalarRule::Kind::Power:
      return {{"rule", "power"}, {"exponent", rule.exponent()}, {"scale", rule.scale()}};
    case ScalarRule::Kind::OneOverN:
      return {{"rule", "one_over_n"}};
    case ScalarRule::Kind::Geometric:
      return {{"rule", "geometric"}, {"ratio", rule.ratio()}, {"scale", rule.scale()}};
    case ScalarRule::Kind::Explicit: {
      Json values = Json::array();
      for (const Scalar& z : rule.values()) values.push_back(to_json(z));
      return {{"rule", "explicit"}, {"values", values}};
    }
    case ScalarRule::Kind::RandomBounded:
      return {{"rule", "random_bounded"}, {"seed", rule.seed()}, {"max_modulus", rule.max_modulus()}};
  }
  return {};
}

ScalarRule rule_from_json(const Json& j) {
  if (j.is_array()) {
    std::vector<Scalar> values;
    for (const Json& z : j) values.push_back(scalar_from_json(z));
    return ScalarRule::explicit_values(std::move(values));
  }
  if (j.is_number()) return ScalarRule::constant(scalar_from_json(j));
  const Json& kind = field(j, "rule");
  if (!kind.is_string()) throw SpecError("\"rule\" must be a string");
  const std::string name = kind.get<std::string>();
  if (name == "constant") return ScalarRule::constant(scalar_from_json(field(j, "value")));
  if (name == "power") return ScalarRule::power(number(field(j, "exponent"), "exponent"), number_or(j, "scale", 1.0));
  if (name == "one_over_n") return ScalarRule::one_over_n();
  if (name == "geometric") return ScalarRule::geometric(number(field(j, "ratio"), "ratio"), number_or(j, "scale", 1.0));
  if (name == "explicit") return rule_from_json(field(j, "values"));
  if (name == "random_bounded") {
    return ScalarRule::random_bounded(j.contains("seed") ? unsigned_integer(j.at("seed"), "seed") : 0,
                                      number_or(j, "max_modulus", 1.0));
  }
  throw SpecError("unknown rule \"" + name + "\"");
}

Json to_json(const LimitMeta& meta) {
  Json j = Json::object();
  if (meta.complete_in_limit) j["complete_in_limit"] = *meta.complete_in_limit;
  if (meta.bessel_in_limit) j["bessel_in_limit"] = *meta.bessel_in_limit;
  return j;
}

LimitMeta meta_from_json(const Json& j) {
  if (j.is_null()) return {};
  if (!j.is_object()) throw SpecError("\"meta\" must be an object");
  LimitMeta m;
  for (const auto& [key, value] : j.items()) {
    if (!value.is_boolean()) throw SpecError("meta field \"" + key + "\" must be a boolean");
    if (key == "complete_in_limit") {
      m.complete_in_limit = value.get<bool>();
    } else if (key == "bessel_in_limit") {
      m.bessel_in_limit = value.get<bool>();
    } else {
      throw SpecError("unknown meta field \"" + key + "\"");
    }
  }
  return m;
}

Json vectors_to_json(const Matrix& columns) {
  Json out = Json::array();
  for (Index c = 0; c < columns.cols(); ++c) {
    Json v = Json::array();
    for (Index r = 0; r < columns.rows(); ++r) v.push_back(to_json(columns(r, c)));
    out.push_back(std::move(v));
  }
  return out;
}

Matrix vectors_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw SpecError("\"vectors\" must be a non-empty list of vectors");
  const std::size_t dim = j[0].is_array() ? j[0].size() : 0;
  if (dim == 0) throw SpecError("vectors must be non-empty lists of complex numbers");
  Matrix m(static_cast<Index>(dim), static_cast<Index>(j.size()));
  for (std::size_t c = 0; c < j.size(); ++c) {
    if (!j[c].is_array() || j[c].size() != dim) throw SpecError("all vectors must have the same length");
    for (std::size_t r = 0; r < dim; ++r) m(static_cast<Index>(r), static_cast<Index>(c)) = scalar_from_json(j[c][r]);
  }
  return m;
}

Json to_json(const SequenceSpec& spec) {
  Json j;
  if (spec.is_explicit()) {
    j["kind"] = "explicit";
    j["vectors"] = vectors_to_json(spec.explicit_columns());
  } else {
    j["kind"] = "family";
    j["name"] = spec.name();
    j["params"] = family_params(spec.family());
  }
  j["meta"] = to_json(spec.declared_meta());
  return j;
}

SequenceSpec spec_from_json(const Json& j) {
  if (!j.is_object()) throw SpecError("sequence spec must be an object");
  const Json& kind = field(j, "kind");
  if (!kind.is_string()) throw SpecError("\"kind\" must be a string");
  const LimitMeta meta = j.contains("meta") ? meta_from_json(j.at("meta")) : LimitMeta{};
  if (kind == "explicit") return SequenceSpec::explicit_vectors(vectors_from_json(field(j, "vectors")), meta);
  if (kind == "family") {
    const Json& name = field(j, "name");
    if (!name.is_string()) throw SpecError("\"name\" must be a string");
    const Json params = j.contains("params") ? j.at("params") : Json::object();
    return SequenceSpec::from_family(family_from_json(name.get<std::string>(), params), meta);
  }
  throw SpecError("unknown sequence kind \"" + kind.get<std::string>() + "\"");
}

Json to_json(const MultiplierSpec& spec) {
  return {{"symbol", to_json(spec.symbol)}, {"phi", to_json(spec.phi)}, {"psi", to_json(spec.psi)}};
}

MultiplierSpec multiplier_from_json(const Json& j) {
  if (!j.is_object()) throw SpecError("multiplier spec must be an object");
  return {rule_from_json(field(j, "symbol")), spec_from_json(field(j, "phi")), spec_from_json(field(j, "psi"))};
}

Json to_json(const RunConfig& c) {
  return {{"tolerance", c.tolerance},
          {"svd_cutoff", c.svd_cutoff},
          {"trend_slope_threshold", c.trend_slope_threshold},
          {"defect_residual_threshold", c.defect_residual_threshold},
          {"seed", c.seed},
          {"Ns", c.ns},
          {"sign_trials", c.sign_trials},
          {"ascent_iters", c.ascent_iters},
          {"max_dim", c.max_dim},
          {"condition_cap", c.condition_cap},
          {"log_growth_threshold", c.log_growth_threshold},
          {"test_vectors", c.test_vectors}};
}

RunConfig config_from_json(const Json& j, RunConfig c) {
  if (!j.is_object()) throw SpecError("config must be an object");
  for (const auto& [key, v] : j.items()) {
    if (key == "tolerance") {
      c.tolerance = number(v, "tolerance");
    } else if (key == "svd_cutoff") {
      c.svd_cutoff = number(v, "svd_cutoff");
    } else if (key == "trend_slope_threshold") {
      c.trend_slope_threshold = number(v, "trend_slope_threshold");
    } else if (key == "defect_residual_threshold") {
      c.defect_residual_threshold = number(v, "defect_residual_threshold");
    } else if (key == "seed") {
      c.seed = unsigned_integer(v, "seed");
    } else if (key == "Ns") {
      if (!v.is_array()) throw SpecError("Ns must be a list of integers");
      c.ns.clear();
      for (const Json& n : v) c.ns.push_back(integer(n, "Ns entry"));
    } else if (key == "sign_trials") {
      c.sign_trials = static_cast<int>(integer(v, "sign_trials"));
    } else if (key == "ascent_iters") {
      c.ascent_iters = static_cast<int>(integer(v, "ascent_iters"));
    } else if (key == "max_dim") {
      c.max_dim = integer(v, "max_dim");
    } else if (key == "condition_cap") {
      c.condition_cap = number(v, "condition_cap");
    } else if (key == "log_growth_threshold") {
      c.log_growth_threshold = number(v, "log_growth_threshold");
    } else if (key == "test_vectors") {
      c.test_vectors = static_cast<int>(integer(v, "test_vectors"));
    } else {
      throw SpecError("unknown config field \"" + key + "\"");
    }
  }
  return c;
}

Json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    throw SpecError(path.string() + ": " + e.what());
  }
}

}  // namespace frameforge
