#include "euler_plane/scene.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

namespace euler_plane::cli {

SceneError::SceneError(ErrorCode code, Position at, const std::string& message)
    : Error(code, std::to_string(at.line) + ":" + std::to_string(at.column) + ": " + message), at_(at) {}

namespace {

constexpr const char* kHeader = "euler-plane scene";

std::string format_number(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);  // shortest round-trip form
  return std::string(buf, r.ptr);
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

/// Cursor over one line; columns are 1-based in the original text.
class Cursor {
 public:
  Cursor(const std::string& text, int line, std::size_t begin = 0, std::size_t end = std::string::npos)
      : s_(text), i_(begin), end_(std::min(end, text.size())), line_(line) {}

  Position at() const { return {line_, static_cast<int>(i_) + 1}; }
  void skip_ws() {
    while (i_ < end_ && (s_[i_] == ' ' || s_[i_] == '\t')) ++i_;
  }
  bool done() {
    skip_ws();
    return i_ >= end_;
  }
  char peek() {
    skip_ws();
    return i_ < end_ ? s_[i_] : '\0';
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++i_;
    return true;
  }
  void expect(char c, const std::string& context) {
    if (!accept(c)) fail(std::string("expected '") + c + "' " + context);
  }
  std::string ident(const std::string& what) {
    skip_ws();
    if (i_ >= end_ || !is_ident_start(s_[i_])) fail("expected " + what);
    const std::size_t b = i_;
    while (i_ < end_ && is_ident_char(s_[i_])) ++i_;
    return s_.substr(b, i_ - b);
  }
  double number(const std::string& what) {
    skip_ws();
    double v = 0.0;
    const auto r = std::from_chars(s_.data() + i_, s_.data() + end_, v);
    if (r.ec != std::errc() || !std::isfinite(v)) fail("expected a number for " + what);
    i_ = static_cast<std::size_t>(r.ptr - s_.data());
    return v;
  }
  long long integer(const std::string& what) {
    skip_ws();
    long long v = 0;
    const auto r = std::from_chars(s_.data() + i_, s_.data() + end_, v);
    if (r.ec != std::errc()) fail("expected an integer for " + what);
    i_ = static_cast<std::size_t>(r.ptr - s_.data());
    if (i_ < end_ && (s_[i_] == '.' || s_[i_] == 'e' || s_[i_] == 'E')) fail("expected an integer for " + what);
    return v;
  }
  std::string rest() {
    skip_ws();
    std::string r = s_.substr(i_, end_ - i_);
    while (!r.empty() && std::isspace(static_cast<unsigned char>(r.back()))) r.pop_back();
    i_ = end_;
    return r;
  }
  void finish(const std::string& context) {
    if (!done()) fail("unexpected '" + std::string(1, s_[i_]) + "' " + context);
  }
  [[noreturn]] void fail(const std::string& message) { throw SceneError(ErrorCode::SyntaxError, at(), message); }

 private:
  const std::string& s_;
  std::size_t i_;
  std::size_t end_;
  int line_;
};

// --- words --------------------------------------------------------------------

WordExpr parse_product(Cursor& c);

WordExpr parse_term(Cursor& c) {
  WordExpr w;
  c.skip_ws();
  const Position at = c.at();
  if (c.accept('(')) {
    w = parse_product(c);
    c.expect(')', "to close the group");
  } else {
    w.kind = WordExpr::Kind::Atom;
    w.name = c.ident("a primitive name, 'id' or '('");
  }
  w.at = at;
  for (;;) {
    if (c.accept('^')) {
      const long long e = c.integer("the exponent");
      if (std::abs(e) > 1000000) c.fail("exponent out of range");
      WordExpr p{WordExpr::Kind::Power, "", {std::move(w)}, static_cast<int>(e), at};
      w = std::move(p);
    } else if (c.accept('\'')) {
      WordExpr inv{WordExpr::Kind::Inverse, "", {std::move(w)}, 1, at};
      w = std::move(inv);
    } else {
      return w;
    }
  }
}

WordExpr parse_product(Cursor& c) {
  c.skip_ws();
  const Position at = c.at();
  std::vector<WordExpr> factors{parse_term(c)};
  while (c.accept('*')) factors.push_back(parse_term(c));
  if (factors.size() == 1) return std::move(factors.front());
  return WordExpr{WordExpr::Kind::Product, "", std::move(factors), 1, at};
}

std::string print_operand(const WordExpr& w) {
  return w.kind == WordExpr::Kind::Product ? "(" + print_word(w) + ")" : print_word(w);
}

void collect_atoms(const WordExpr& w, std::vector<const WordExpr*>& out) {
  if (w.kind == WordExpr::Kind::Atom) out.push_back(&w);
  for (const WordExpr& c : w.children) collect_atoms(c, out);
}

// --- primitives -----------------------------------------------------------------

struct KindSpec {
  const char* name;
  std::vector<std::pair<const char*, std::optional<double>>> numbers;  // key, default
};

const std::vector<KindSpec>& kinds() {
  static const std::vector<KindSpec> k{
      {"translation", {{"x", {}}, {"y", {}}}},
      {"dilation", {{"factor", {}}, {"cx", 0.0}, {"cy", 0.0}}},
      {"rotation", {{"angle", {}}, {"cx", 0.0}, {"cy", 0.0}}},
      {"twist", {{"cx", 0.0}, {"cy", 0.0}, {"r_in", {}}, {"r_out", {}}, {"power", {}}}},
      {"local_rotation", {{"cx", 0.0}, {"cy", 0.0}, {"r_in", {}}, {"r_out", {}}, {"angle", {}}}},
      {"step", {{"x", {}}, {"y", {}}, {"x_lo", {}}, {"x_hi", {}}}},
      {"shear", {{"y_lo", {}}, {"y_hi", {}}, {"amplitude", {}}}},
      {"product", {}},
  };
  return k;
}

const KindSpec* find_kind(const std::string& name) {
  for (const KindSpec& k : kinds())
    if (name == k.name) return &k;
  return nullptr;
}

[[noreturn]] void bad(Position at, const std::string& message) {
  throw SceneError(ErrorCode::BadParameter, at, message);
}

std::map<std::string, ArgValue> parse_args(Cursor& c) {
  std::map<std::string, ArgValue> args;
  if (!c.accept('(')) return args;
  if (c.accept(')')) return args;
  do {
    const Position at = c.at();
    const std::string key = c.ident("a parameter name");
    c.expect('=', "after parameter '" + key + "'");
    const char p = c.peek();
    ArgValue v;
    if (is_ident_start(p))
      v = c.ident("a value");
    else
      v = c.number(key);
    if (!args.emplace(key, v).second) bad(at, "parameter '" + key + "' given twice");
  } while (c.accept(','));
  c.expect(')', "to close the parameter list");
  return args;
}

double number_arg(const PrimitiveDef& d, const char* key, std::optional<double> fallback) {
  const auto it = d.args.find(key);
  if (it == d.args.end()) {
    if (!fallback) bad(d.at, d.kind + " '" + d.name + "' needs parameter '" + key + "'");
    return *fallback;
  }
  if (!std::holds_alternative<double>(it->second)) bad(d.at, "parameter '" + std::string(key) + "' must be a number");
  return std::get<double>(it->second);
}

std::string name_arg(const PrimitiveDef& d, const char* key, const std::optional<std::string>& fallback) {
  const auto it = d.args.find(key);
  if (it == d.args.end()) {
    if (!fallback) bad(d.at, d.kind + " '" + d.name + "' needs parameter '" + key + "'");
    return *fallback;
  }
  if (!std::holds_alternative<std::string>(it->second)) bad(d.at, "parameter '" + std::string(key) + "' must be a name");
  return std::get<std::string>(it->second);
}

void check_keys(const PrimitiveDef& d, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : d.args)
    if (!allowed.count(key)) {
      std::string hint;
      for (const std::string& a : allowed) hint += (hint.empty() ? "" : ", ") + a;
      bad(d.at, d.kind + " has no parameter '" + key + "' (expected one of: " + hint + ")");
    }
}

MapExpr build_primitive(const PrimitiveDef& d, const std::map<std::string, MapExpr>& earlier) {
  const KindSpec* spec = find_kind(d.kind);
  if (!spec) throw SceneError(ErrorCode::UnknownPrimitive, d.at, "unknown primitive kind '" + d.kind + "'");
  if (d.kind == "product") {
    check_keys(d, {"core", "conjugator", "indices"});
    auto lookup = [&](const char* key) {
      const std::string n = name_arg(d, key, std::nullopt);
      const auto it = earlier.find(n);
      if (it == earlier.end())
        throw SceneError(ErrorCode::UndeclaredGenerator, d.at, "'" + n + "' is not a primitive declared above");
      return it->second;
    };
    const MapExpr core = lookup("core");
    const MapExpr conj = lookup("conjugator");
    const std::string idx = name_arg(d, "indices", std::string("all"));
    if (idx != "all" && idx != "nonnegative") bad(d.at, "indices must be 'all' or 'nonnegative'");
    try {
      return lazy_twist_product(core, conj, idx == "all" ? IndexSet::All : IndexSet::NonNegative);
    } catch (const Error& e) {
      bad(d.at, e.what());
    }
  }
  std::set<std::string> allowed;
  std::map<std::string, double> v;
  for (const auto& [key, fallback] : spec->numbers) {
    allowed.insert(key);
    v[key] = number_arg(d, key, fallback);
  }
  check_keys(d, allowed);
  try {
    if (d.kind == "translation") return make_translation(Vector(v["x"], v["y"]));
    if (d.kind == "dilation") {
      if (!(v["factor"] > 0)) bad(d.at, "dilation factor must be positive");
      return make_dilation(v["factor"], Point(v["cx"], v["cy"]));
    }
    if (d.kind == "rotation") return make_rotation(v["angle"], Point(v["cx"], v["cy"]));
    if (d.kind == "twist") {
      const double k = v["power"];
      if (k != std::round(k) || std::abs(k) > 1e6) bad(d.at, "twist power must be an integer");
      return make_annulus_twist(Point(v["cx"], v["cy"]), v["r_in"], v["r_out"], static_cast<int>(k));
    }
    if (d.kind == "local_rotation")
      return make_local_rotation(Point(v["cx"], v["cy"]), v["r_in"], v["r_out"], v["angle"]);
    if (d.kind == "step") return make_step_translation(Vector(v["x"], v["y"]), v["x_lo"], v["x_hi"]);
    return make_strip_shear(v["y_lo"], v["y_hi"], v["amplitude"]);
  } catch (const SceneError&) {
    throw;
  } catch (const Error& e) {
    bad(d.at, e.what());
  }
}

MapExpr build_word(const WordExpr& w, const std::map<std::string, MapExpr>& prims) {
  switch (w.kind) {
    case WordExpr::Kind::Atom:
      if (w.name == "id") return MapExpr();
      return prims.at(w.name);
    case WordExpr::Kind::Product: {
      std::vector<MapExpr> f;
      for (const WordExpr& c : w.children) f.push_back(build_word(c, prims));
      return compose(std::move(f));
    }
    case WordExpr::Kind::Power: return power(build_word(w.children.front(), prims), w.exponent);
    case WordExpr::Kind::Inverse: return inverse(build_word(w.children.front(), prims));
  }
  return MapExpr();
}

std::vector<std::string> generator_names(int genus) {
  std::vector<std::string> out;
  for (int i = 1; i <= genus; ++i) {
    out.push_back("a" + std::to_string(i));
    out.push_back("b" + std::to_string(i));
  }
  return out;
}

const std::set<std::string> kMethods{"lift", "graphical", "signed-sum", "writhe-diff", "all"};

// --- blocks ---------------------------------------------------------------------------

struct Parser {
  SceneFile scene;
  std::string section;
  std::set<std::string> seen_sections;
  std::set<std::pair<std::string, std::string>> seen_keys;
  std::map<std::string, Position> key_at;

  void key_value(Cursor& c) {
    const Position at = c.at();
    const std::string key = c.ident("a key");
    if (!seen_keys.insert({section, key}).second)
      throw SceneError(ErrorCode::SyntaxError, at, "key '" + key + "' repeated in [" + section + "]");
    key_at[section + "." + key] = at;
    c.expect('=', "after key '" + key + "'");
    if (section == "group")
      group(c, key, at);
    else if (section == "primitives")
      primitive(c, key, at);
    else if (section == "generators")
      generator(c, key, at);
    else if (section == "method")
      method(c, key, at);
    else
      output(c, key, at);
  }

  [[noreturn]] static void unknown_key(Position at, const std::string& key, const std::string& section,
                                       const std::string& expected) {
    throw SceneError(ErrorCode::SyntaxError, at,
                     "unknown key '" + key + "' in [" + section + "] (expected " + expected + ")");
  }

  void group(Cursor& c, const std::string& key, Position at) {
    if (key == "genus") {
      const long long g = c.integer("genus");
      if (g < 1 || g > 100) bad(at, "genus must be between 1 and 100");
      scene.genus = static_cast<int>(g);
    } else if (key == "recipe") {
      RecipeRef r;
      c.skip_ws();
      r.at = c.at();
      r.name = c.ident("a recipe name");
      for (const auto& [k, v] : parse_args(c)) {
        if (!std::holds_alternative<double>(v)) bad(r.at, "recipe parameter '" + k + "' must be a number");
        r.parameters[k] = std::get<double>(v);
      }
      scene.recipe = r;
    } else {
      unknown_key(at, key, "group", "genus, recipe");
    }
    c.finish("after the value");
  }

  void primitive(Cursor& c, const std::string& key, Position at) {
    if (key == "id") throw SceneError(ErrorCode::SyntaxError, at, "'id' is reserved for the identity");
    PrimitiveDef d;
    d.name = key;
    d.at = at;
    c.skip_ws();
    const Position kind_at = c.at();
    d.kind = c.ident("a primitive kind");
    if (!find_kind(d.kind)) {
      std::string hint;
      for (const KindSpec& k : kinds()) hint += (hint.empty() ? "" : ", ") + std::string(k.name);
      throw SceneError(ErrorCode::UnknownPrimitive, kind_at,
                       "unknown primitive kind '" + d.kind + "' (expected one of: " + hint + ")");
    }
    d.args = parse_args(c);
    c.finish("after the primitive");
    scene.primitives.push_back(std::move(d));
  }

  void generator(Cursor& c, const std::string& key, Position) {
    WordExpr w = parse_product(c);
    c.finish("in the word");
    scene.generators.emplace_back(key, std::move(w));
  }

  void method(Cursor& c, const std::string& key, Position at) {
    MethodBlock& m = scene.method;
    if (key == "name") {
      c.skip_ws();
      const Position vat = c.at();
      std::string v = c.rest();
      if (!kMethods.count(v))
        throw SceneError(ErrorCode::SyntaxError, vat,
                         "unknown method '" + v + "' (expected lift, graphical, signed-sum, writhe-diff or all)");
      m.name = v;
      return;
    } else if (key == "N") {
      const long long v = c.integer("N");
      if (v < 1 || v > 100000) bad(at, "N must be between 1 and 100000");
      m.N = static_cast<int>(v);
    } else if (key == "n") {
      const long long v = c.integer("n");
      if (v < 0 || v > 1000) bad(at, "n must be between 0 and 1000");
      m.n = static_cast<int>(v);
    } else if (key == "R") {
      const double v = c.number("R");
      if (!(v > 0)) bad(at, "R must be positive");
      m.R = v;
    } else if (key == "basepoint") {
      c.expect('(', "to open the basepoint");
      const double x = c.number("the basepoint");
      c.expect(',', "between coordinates");
      const double y = c.number("the basepoint");
      c.expect(')', "to close the basepoint");
      m.basepoint = Point(x, y);
    } else if (key == "seed") {
      c.skip_ws();
      const long long probe = c.integer("seed");
      if (probe < 0) bad(at, "seed must be nonnegative");
      m.seed = static_cast<std::uint64_t>(probe);
    } else if (key == "tolerance") {
      const double v = c.number("tolerance");
      if (!(v > 0)) bad(at, "tolerance must be positive");
      m.tolerance = v;
    } else if (key == "splice_radius") {
      const double v = c.number("splice_radius");
      if (!(v >= 0)) bad(at, "splice_radius must be nonnegative");
      m.splice_radius = v;
    } else if (key == "allow_non_proper") {
      const std::string v = c.ident("true or false");
      if (v != "true" && v != "false") bad(at, "allow_non_proper must be true or false");
      m.allow_non_proper = v == "true";
    } else {
      unknown_key(at, key, "method", "name, N, n, R, basepoint, seed, tolerance, splice_radius, allow_non_proper");
    }
    c.finish("after the value");
  }

  void output(Cursor& c, const std::string& key, Position at) {
    const std::string v = c.rest();
    if (v.empty()) throw SceneError(ErrorCode::SyntaxError, at, "expected a path after '" + key + " ='");
    if (key == "report")
      scene.output.report = v;
    else if (key == "svg")
      scene.output.svg = v;
    else
      unknown_key(at, key, "output", "report, svg");
  }

  void validate(Position end) {
    if (scene.recipe) {
      if (!scene.primitives.empty() || !scene.generators.empty())
        throw SceneError(ErrorCode::SyntaxError, scene.recipe->at,
                         "a recipe scene cannot also declare primitives or generators");
      zoo::Recipe r;
      try {
        r = zoo::make(scene.recipe->name, scene.recipe->parameters);
      } catch (const Error& e) {
        throw SceneError(e.code(), scene.recipe->at, e.what());
      }
      if (scene.genus && *scene.genus != r.action.genus)
        bad(key_at["group.genus"], "genus " + std::to_string(*scene.genus) + " does not match recipe genus " +
                                       std::to_string(r.action.genus));
      return;
    }
    if (!scene.genus) throw SceneError(ErrorCode::SyntaxError, end, "[group] needs 'genus' or 'recipe'");
    const std::vector<std::string> names = generator_names(*scene.genus);
    std::string expected;
    for (const std::string& n : names) expected += (expected.empty() ? "" : ", ") + n;
    std::set<std::string> declared;
    for (const PrimitiveDef& d : scene.primitives)
      if (!declared.insert(d.name).second)
        throw SceneError(ErrorCode::SyntaxError, d.at, "primitive '" + d.name + "' declared twice");
    std::map<std::string, WordExpr> by_name;
    for (auto& [name, w] : scene.generators) {
      if (std::find(names.begin(), names.end(), name) == names.end())
        unknown_key(key_at["generators." + name], name, "generators", expected);
      std::vector<const WordExpr*> atoms;
      collect_atoms(w, atoms);
      for (const WordExpr* a : atoms)
        if (a->name != "id" && !declared.count(a->name))
          throw SceneError(ErrorCode::UndeclaredGenerator, a->at, "'" + a->name + "' is not a declared primitive");
      by_name[name] = w;
    }
    for (const std::string& n : names)
      if (!by_name.count(n)) throw SceneError(ErrorCode::SyntaxError, end, "[generators] is missing '" + n + "'");
    // canonical order a1, b1, a2, ...
    scene.generators.clear();
    for (const std::string& n : names) scene.generators.emplace_back(n, by_name[n]);
    std::map<std::string, MapExpr> built;
    for (const PrimitiveDef& d : scene.primitives) built[d.name] = build_primitive(d, built);
  }
};

}  // namespace

WordExpr parse_word(const std::string& text) {
  Cursor c(text, 1);
  WordExpr w = parse_product(c);
  c.finish("in the word");
  return w;
}

std::string print_word(const WordExpr& w) {
  switch (w.kind) {
    case WordExpr::Kind::Atom: return w.name;
    case WordExpr::Kind::Product: {
      std::string s;
      for (const WordExpr& c : w.children) s += (s.empty() ? "" : " * ") + print_operand(c);
      return s;
    }
    case WordExpr::Kind::Power: return print_operand(w.children.front()) + "^" + std::to_string(w.exponent);
    case WordExpr::Kind::Inverse: return print_operand(w.children.front()) + "'";
  }
  return {};
}

SceneFile parse_scene(const std::string& text) {
  Parser p;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    Cursor c(line, number);
    if (c.done() || c.peek() == '#') continue;
    if (!header) {
      const std::string h = c.rest();
      const std::string prefix = std::string(kHeader) + " ";
      if (h.rfind(prefix, 0) != 0)
        throw SceneError(ErrorCode::SyntaxError, {number, 1}, "expected header '" + prefix + "1'");
      if (h.substr(prefix.size()) != "1")
        throw SceneError(ErrorCode::SyntaxError, {number, static_cast<int>(prefix.size()) + 1},
                         "unsupported scene version '" + h.substr(prefix.size()) + "' (expected 1)");
      header = true;
      continue;
    }
    if (c.accept('[')) {
      const Position at = c.at();
      const std::string name = c.ident("a section name");
      c.expect(']', "to close the section name");
      c.finish("after the section header");
      static const std::set<std::string> sections{"group", "primitives", "generators", "method", "output"};
      if (!sections.count(name))
        throw SceneError(ErrorCode::SyntaxError, at,
                         "unknown section '" + name + "' (expected group, primitives, generators, method or output)");
      if (!p.seen_sections.insert(name).second)
        throw SceneError(ErrorCode::SyntaxError, at, "section [" + name + "] repeated");
      p.section = name;
      continue;
    }
    if (p.section.empty()) c.fail("expected a [section] header");
    p.key_value(c);
  }
  if (!header) throw SceneError(ErrorCode::SyntaxError, {number + 1, 1}, "empty scene: expected header");
  p.validate({number + 1, 1});
  return p.scene;
}

std::string print_scene(const SceneFile& s) {
  std::ostringstream o;
  o << kHeader << " " << s.version << "\n\n[group]\n";
  if (s.genus) o << "genus = " << *s.genus << "\n";
  if (s.recipe) {
    o << "recipe = " << s.recipe->name << "(";
    bool first = true;
    for (const auto& [k, v] : s.recipe->parameters) {
      o << (first ? "" : ", ") << k << "=" << format_number(v);
      first = false;
    }
    o << ")\n";
  }
  if (!s.primitives.empty()) {
    o << "\n[primitives]\n";
    for (const PrimitiveDef& d : s.primitives) {
      o << d.name << " = " << d.kind << "(";
      bool first = true;
      for (const auto& [k, v] : d.args) {
        o << (first ? "" : ", ") << k << "="
          << (std::holds_alternative<double>(v) ? format_number(std::get<double>(v)) : std::get<std::string>(v));
        first = false;
      }
      o << ")\n";
    }
  }
  if (!s.generators.empty()) {
    o << "\n[generators]\n";
    for (const auto& [name, w] : s.generators) o << name << " = " << print_word(w) << "\n";
  }
  const MethodBlock& m = s.method;
  if (!(m == MethodBlock{})) {
    o << "\n[method]\n";
    if (m.name) o << "name = " << *m.name << "\n";
    if (m.N) o << "N = " << *m.N << "\n";
    if (m.n) o << "n = " << *m.n << "\n";
    if (m.R) o << "R = " << format_number(*m.R) << "\n";
    if (m.basepoint)
      o << "basepoint = (" << format_number(m.basepoint->x()) << ", " << format_number(m.basepoint->y()) << ")\n";
    if (m.seed) o << "seed = " << *m.seed << "\n";
    if (m.tolerance) o << "tolerance = " << format_number(*m.tolerance) << "\n";
    if (m.splice_radius) o << "splice_radius = " << format_number(*m.splice_radius) << "\n";
    if (m.allow_non_proper) o << "allow_non_proper = " << (*m.allow_non_proper ? "true" : "false") << "\n";
  }
  if (s.output.report || s.output.svg) {
    o << "\n[output]\n";
    if (s.output.report) o << "report = " << *s.output.report << "\n";
    if (s.output.svg) o << "svg = " << *s.output.svg << "\n";
  }
  return o.str();
}

zoo::Recipe build_recipe(const SceneFile& scene) {
  if (scene.recipe) {
    zoo::Recipe r = zoo::make(scene.recipe->name, scene.recipe->parameters);
    if (scene.method.basepoint) r.graphical_basepoint = *scene.method.basepoint;
    return r;
  }
  const int genus = scene.genus.value_or(1);
  std::map<std::string, MapExpr> prims;
  for (const PrimitiveDef& d : scene.primitives) prims[d.name] = build_primitive(d, prims);
  std::vector<MapExpr> gens;
  for (const auto& [name, w] : scene.generators) gens.push_back(build_word(w, prims));
  zoo::Recipe r;
  r.name = "custom";
  r.action = PlanarAction::surface(genus, std::move(gens));
  const double R = scene.method.R.value_or(60.0);
  r.lift = LiftContext::infinity(R, Point(2 * R, 0));
  r.graphical_basepoint = scene.method.basepoint.value_or(Point(0.3, 0.2));
  return r;
}

}  // namespace euler_plane::cli
