// Measure-spec JSON. Floating literals are kept as their source text so
// that "0.4375" becomes exactly 7/16 rather than the nearest double.

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rgw/model.hpp"

namespace rgw {

namespace {

using json = nlohmann::json;

// Builds a json DOM in which every number is stored as its literal text.
class ExactNumberSax : public nlohmann::json_sax<json> {
 public:
  json root;

  bool null() override { return value(json(nullptr)); }
  bool boolean(bool v) override { return value(json(v)); }
  bool number_integer(number_integer_t v) override { return value(json(std::to_string(v))); }
  bool number_unsigned(number_unsigned_t v) override { return value(json(std::to_string(v))); }
  bool number_float(number_float_t, const string_t& s) override { return value(json(s)); }
  bool string(string_t& v) override { return value(json(v)); }
  bool binary(binary_t&) override { return false; }
  bool start_object(std::size_t) override { return open(json::object()); }
  bool key(string_t& k) override {
    key_ = k;
    return true;
  }
  bool end_object() override { return close(); }
  bool start_array(std::size_t) override { return open(json::array()); }
  bool end_array() override { return close(); }
  bool parse_error(std::size_t pos, const std::string&, const nlohmann::detail::exception& ex) override {
    throw ValidationError("measure JSON parse error at byte " + std::to_string(pos) + ": " + ex.what());
  }

 private:
  json* put(json v) {
    if (stack_.empty()) {
      root = std::move(v);
      return &root;
    }
    json& top = *stack_.back();
    if (top.is_array()) {
      top.push_back(std::move(v));
      return &top.back();
    }
    top[key_] = std::move(v);
    return &top[key_];
  }
  bool value(json v) {
    put(std::move(v));
    return true;
  }
  bool open(json v) {
    stack_.push_back(put(std::move(v)));
    return true;
  }
  bool close() {
    stack_.pop_back();
    return true;
  }

  std::vector<json*> stack_;
  std::string key_;
};

Rational number(const json& j, const std::string& what) {
  if (!j.is_string()) throw ValidationError(what + " must be a number or a numeric string");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const ValidationError& e) {
    throw ValidationError(what + ": " + e.what());
  }
}

const json& field(const json& obj, const char* name) {
  if (!obj.is_object() || !obj.contains(name))
    throw ValidationError(std::string("measure JSON lacks field '") + name + "'");
  return obj.at(name);
}

}  // namespace

EnvMeasure parse_measure_json(const std::string& text) {
  ExactNumberSax sax;
  nlohmann::json::sax_parse(text, &sax);
  const json& root = sax.root;
  const json& type = field(root, "type");
  if (!type.is_string()) throw ValidationError("measure 'type' must be a string");
  const std::string t = type.get<std::string>();
  if (t == "quad-uniform") {
    const Rational density = root.contains("density") ? number(root.at("density"), "density") : Rational(1);
    return EnvMeasure::quad_uniform(number(field(root, "lo"), "lo"), number(field(root, "hi"), "hi"), density);
  }
  if (t == "finite") {
    const json& atoms = field(root, "atoms");
    if (!atoms.is_array()) throw ValidationError("'atoms' must be an array");
    std::vector<Atom> out;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const std::string tag = "atom " + std::to_string(i);
      const json& cs = field(atoms[i], "coeffs");
      if (!cs.is_array()) throw ValidationError(tag + ": 'coeffs' must be an array");
      std::vector<Rational> p;
      for (const auto& c : cs) p.push_back(number(c, tag + " coefficient"));
      const Rational w = atoms[i].contains("weight") ? number(atoms[i].at("weight"), tag + " weight") : Rational(1);
      try {
        out.push_back({w, GenFunc(std::move(p))});
      } catch (const ValidationError& e) {
        throw ValidationError(tag + ": " + e.what());
      }
    }
    return EnvMeasure::finite(std::move(out));
  }
  throw ValidationError("unknown measure type '" + t + "' (expected finite or quad-uniform)");
}

EnvMeasure load_measure_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open measure file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_measure_json(ss.str());
}

std::string measure_to_json(const EnvMeasure& mu) {
  json j;
  if (mu.is_quad_uniform()) {
    j["type"] = "quad-uniform";
    j["lo"] = to_fraction_string(mu.lo());
    j["hi"] = to_fraction_string(mu.hi());
    if (mu.density() != Rational(1)) j["density"] = to_fraction_string(mu.density());
    return j.dump();
  }
  j["type"] = "finite";
  j["atoms"] = json::array();
  for (const auto& a : mu.atoms()) {
    json atom;
    atom["weight"] = to_fraction_string(a.weight);
    atom["coeffs"] = json::array();
    for (const auto& p : a.pgf.coeffs()) atom["coeffs"].push_back(to_fraction_string(p));
    j["atoms"].push_back(std::move(atom));
  }
  return j.dump();
}

}  // namespace rgw
