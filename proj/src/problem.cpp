#include "lagcoh/problem.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "lagcoh/errors.hpp"

namespace lagcoh {

namespace toml {

const Value* find(const Table& t, const std::string& key) {
  for (const auto& [k, v] : t)
    if (k == key) return &v;
  return nullptr;
}

namespace {

bool bare_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; }

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  Table run() {
    Table root;
    Table* current = &root;
    for (;;) {
      skip_ws_comments(true);
      if (eof()) break;
      if (peek() == '[') {
        ++i_;
        std::vector<std::string> path;
        skip_inline_ws();
        path.push_back(key());
        skip_inline_ws();
        while (peek() == '.') {
          ++i_;
          skip_inline_ws();
          path.push_back(key());
          skip_inline_ws();
        }
        expect(']');
        end_of_line();
        current = open_table(root, path);
      } else {
        std::string k = key();
        skip_inline_ws();
        expect('=');
        skip_inline_ws();
        Value v = value();
        if (find(*current, k)) fail("duplicate key '" + k + "'");
        current->emplace_back(k, std::move(v));
        end_of_line();
      }
    }
    return root;
  }

 private:
  const std::string& s_;
  std::size_t i_ = 0;

  bool eof() const { return i_ >= s_.size(); }
  char peek() const { return eof() ? '\0' : s_[i_]; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, i_); }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++i_;
  }
  void skip_inline_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) ++i_;
  }
  void skip_comment() {
    if (peek() == '#')
      while (!eof() && peek() != '\n') ++i_;
  }
  void skip_ws_comments(bool newlines) {
    for (;;) {
      skip_inline_ws();
      skip_comment();
      if (newlines && !eof() && (peek() == '\n' || peek() == '\r')) {
        ++i_;
        continue;
      }
      return;
    }
  }
  void end_of_line() {
    skip_inline_ws();
    skip_comment();
    if (peek() == '\r') ++i_;
    if (!eof() && peek() != '\n') fail("trailing characters");
  }

  Table* open_table(Table& root, const std::vector<std::string>& path) {
    Table* t = &root;
    for (std::size_t k = 0; k < path.size(); ++k) {
      Value* v = nullptr;
      for (auto& [key, val] : *t)
        if (key == path[k]) v = &val;
      if (!v) {
        t->emplace_back(path[k], Value{Table{}});
        v = &t->back().second;
      } else if (!v->is_table()) {
        fail("'" + path[k] + "' is not a table");
      } else if (k + 1 == path.size() && !std::get<Table>(v->v).empty()) {
        bool has_scalar = false;
        for (const auto& [kk, vv] : std::get<Table>(v->v)) has_scalar |= !vv.is_table();
        if (has_scalar) fail("table '" + path[k] + "' defined twice");
      }
      t = &std::get<Table>(v->v);
    }
    return t;
  }

  std::string key() {
    if (peek() == '"') return string();
    std::string k;
    while (!eof() && bare_char(peek())) k += s_[i_++];
    if (k.empty()) fail("expected a key");
    return k;
  }

  std::string string() {
    expect('"');
    std::string out;
    for (;;) {
      if (eof() || peek() == '\n') fail("unterminated string");
      char c = s_[i_++];
      if (c == '"') return out;
      if (c != '\\') {
        out += c;
        continue;
      }
      if (eof()) fail("unterminated escape");
      char e = s_[i_++];
      switch (e) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        default: fail(std::string("unsupported escape \\") + e);
      }
    }
  }

  Value value() {
    char c = peek();
    if (c == '"') return Value{string()};
    if (c == '[') {
      ++i_;
      Array a;
      for (;;) {
        skip_ws_comments(true);
        if (peek() == ']') {
          ++i_;
          return Value{std::move(a)};
        }
        a.push_back(value());
        skip_ws_comments(true);
        if (peek() == ',') {
          ++i_;
          continue;
        }
        if (peek() != ']') fail("expected ',' or ']'");
      }
    }
    if (s_.compare(i_, 4, "true") == 0 && !bare_char(i_ + 4 < s_.size() ? s_[i_ + 4] : ' ')) {
      i_ += 4;
      return Value{true};
    }
    if (s_.compare(i_, 5, "false") == 0 && !bare_char(i_ + 5 < s_.size() ? s_[i_ + 5] : ' ')) {
      i_ += 5;
      return Value{false};
    }
    std::size_t start = i_;
    if (c == '+' || c == '-') ++i_;
    while (!eof() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '_')) ++i_;
    std::string digits;
    for (std::size_t k = start; k < i_; ++k)
      if (s_[k] != '_') digits += s_[k];
    if (digits.empty() || digits == "+" || digits == "-") fail("expected a value");
    try {
      return Value{std::stoll(digits)};
    } catch (const std::exception&) {
      fail("integer out of range");
    }
  }
};

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

std::string print_key(const std::string& k) {
  bool bare = !k.empty();
  for (char c : k) bare &= bare_char(c);
  return bare ? k : quote(k);
}

std::string print_value(const Value& v) {
  if (v.is_string()) return quote(std::get<std::string>(v.v));
  if (v.is_int()) return std::to_string(std::get<long long>(v.v));
  if (v.is_bool()) return std::get<bool>(v.v) ? "true" : "false";
  if (v.is_table()) throw Error("inline tables are not part of the subset");
  std::string out = "[";
  const auto& a = std::get<Array>(v.v);
  for (std::size_t k = 0; k < a.size(); ++k) out += (k ? ", " : "") + print_value(a[k]);
  return out + "]";
}

void print_table(std::ostringstream& os, const Table& t, const std::string& prefix) {
  for (const auto& [k, v] : t)
    if (!v.is_table()) os << print_key(k) << " = " << print_value(v) << "\n";
  for (const auto& [k, v] : t) {
    if (!v.is_table()) continue;
    std::string name = prefix.empty() ? print_key(k) : prefix + "." + print_key(k);
    const auto& sub = std::get<Table>(v.v);
    bool has_scalar = sub.empty();
    for (const auto& [kk, vv] : sub) has_scalar |= !vv.is_table();
    if (has_scalar) os << "\n[" << name << "]\n";
    print_table(os, sub, name);
  }
}

}  // namespace

Table parse(const std::string& text) { return Parser(text).run(); }

std::string print(const Table& t) {
  std::ostringstream os;
  print_table(os, t, "");
  std::string s = os.str();
  while (!s.empty() && s.front() == '\n') s.erase(s.begin());
  return s;
}

}  // namespace toml

namespace {

using toml::Array;
using toml::Table;
using toml::Value;

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what, 0);
}

const Table& as_table(const Value& v, const std::string& where) {
  if (!v.is_table()) bad(where, "expected a table");
  return std::get<Table>(v.v);
}
const Array& as_array(const Value& v, const std::string& where) {
  if (!v.is_array()) bad(where, "expected an array");
  return std::get<Array>(v.v);
}
const std::string& as_string(const Value& v, const std::string& where) {
  if (!v.is_string()) bad(where, "expected a string");
  return std::get<std::string>(v.v);
}
long long as_int(const Value& v, const std::string& where) {
  if (!v.is_int()) bad(where, "expected an integer");
  return std::get<long long>(v.v);
}
std::vector<std::string> string_list(const Value& v, const std::string& where) {
  std::vector<std::string> out;
  for (const auto& x : as_array(v, where)) out.push_back(as_string(x, where));
  return out;
}
std::vector<std::vector<std::string>> string_matrix(const Value& v, const std::string& where) {
  std::vector<std::vector<std::string>> out;
  for (const auto& row : as_array(v, where)) out.push_back(string_list(row, where));
  return out;
}
std::vector<std::vector<long long>> int_matrix(const Value& v, const std::string& where) {
  std::vector<std::vector<long long>> out;
  for (const auto& row : as_array(v, where)) {
    std::vector<long long> r;
    for (const auto& x : as_array(row, where)) r.push_back(as_int(x, where));
    out.push_back(r);
  }
  return out;
}
void check_keys(const Table& t, const std::vector<std::string>& allowed, const std::string& where) {
  for (const auto& [k, v] : t) {
    bool ok = false;
    for (const auto& a : allowed) ok |= (a == k);
    if (!ok) bad(where, "unknown key '" + k + "'");
  }
}

Value str_v(const std::string& s) { return Value{s}; }
Value list_v(const std::vector<std::string>& xs) {
  Array a;
  for (const auto& x : xs) a.push_back(str_v(x));
  return Value{a};
}
Value matrix_v(const std::vector<std::vector<std::string>>& m) {
  Array a;
  for (const auto& r : m) a.push_back(list_v(r));
  return Value{a};
}

std::vector<DoubleComplexSpec::Entry> dc_entries(const Value& v, const std::string& where) {
  std::vector<DoubleComplexSpec::Entry> out;
  for (const auto& e : as_array(v, where)) {
    const auto& a = as_array(e, where);
    if (a.size() != 3) bad(where, "entries are [p, q, matrix]");
    out.emplace_back(as_int(a[0], where), as_int(a[1], where), string_matrix(a[2], where));
  }
  return out;
}

Value dc_entries_v(const std::vector<DoubleComplexSpec::Entry>& es) {
  Array a;
  for (const auto& [p, q, m] : es) a.push_back(Value{Array{Value{p}, Value{q}, matrix_v(m)}});
  return Value{a};
}

}  // namespace

ProblemFile parse_problem(const std::string& text) {
  Table root = toml::parse(text);
  ProblemFile pf;
  check_keys(root, {"algebra", "chart", "action", "lagrangian", "module", "double_complex", "options"}, "file");
  if (const Value* v = toml::find(root, "algebra")) {
    const Table& t = as_table(*v, "algebra");
    check_keys(t, {"catalog", "n", "c", "basis", "brackets"}, "algebra");
    AlgebraSpec a;
    if (auto x = toml::find(t, "catalog")) a.catalog = as_string(*x, "algebra.catalog");
    if (auto x = toml::find(t, "n")) a.n = as_int(*x, "algebra.n");
    if (auto x = toml::find(t, "c")) a.c = as_string(*x, "algebra.c");
    if (auto x = toml::find(t, "basis")) a.basis = string_list(*x, "algebra.basis");
    if (auto x = toml::find(t, "brackets"))
      for (const auto& e : as_array(*x, "algebra.brackets")) {
        const auto& q = as_array(e, "algebra.brackets");
        if (q.size() != 4) bad("algebra.brackets", "entries are [i, j, k, \"coeff\"]");
        a.brackets.emplace_back(as_int(q[0], "algebra.brackets"), as_int(q[1], "algebra.brackets"),
                                as_int(q[2], "algebra.brackets"), as_string(q[3], "algebra.brackets"));
      }
    if (a.catalog.has_value() == !a.basis.empty()) bad("algebra", "give either catalog or basis");
    if (!a.catalog && (a.n || a.c)) bad("algebra", "n and c apply to catalog algebras");
    if (a.catalog && !a.brackets.empty()) bad("algebra", "brackets apply to explicit bases");
    pf.algebra = a;
  }
  if (const Value* v = toml::find(root, "chart")) {
    const Table& t = as_table(*v, "chart");
    check_keys(t, {"coords"}, "chart");
    const Value* c = toml::find(t, "coords");
    if (!c) bad("chart", "missing coords");
    for (const auto& row : string_matrix(*c, "chart.coords")) {
      if (row.size() != 2 || (row[1] != "line" && row[1] != "angle"))
        bad("chart.coords", "entries are [name, \"line\" | \"angle\"]");
      pf.chart.emplace_back(row[0], row[1]);
    }
  }
  if (const Value* v = toml::find(root, "action")) {
    const Table& t = as_table(*v, "action");
    ActionSpec a;
    for (const auto& [k, x] : t) {
      if (k == "transitive") {
        if (!x.is_bool()) bad("action.transitive", "expected a boolean");
        a.transitive = std::get<bool>(x.v);
      } else if (k == "stabilizer") {
        a.stabilizer = string_list(x, "action.stabilizer");
      } else {
        a.fields.emplace_back(k, string_list(x, "action." + k));
      }
    }
    pf.action = a;
  }
  if (const Value* v = toml::find(root, "lagrangian"))
    for (const auto& [k, x] : as_table(*v, "lagrangian")) pf.lagrangians.emplace_back(k, as_string(x, "lagrangian." + k));
  if (const Value* v = toml::find(root, "module"))
    for (const auto& [name, x] : as_table(*v, "module")) {
      const std::string where = "module." + name;
      const Table& t = as_table(x, where);
      check_keys(t, {"trivial", "seeds", "rho"}, where);
      ModuleSpec m;
      m.name = name;
      if (auto y = toml::find(t, "trivial")) m.trivial_dim = as_int(*y, where);
      if (auto y = toml::find(t, "seeds")) m.seeds = string_list(*y, where);
      if (auto y = toml::find(t, "rho"))
        for (const auto& mat : as_array(*y, where)) m.rho.push_back(string_matrix(mat, where));
      int kinds = (m.trivial_dim ? 1 : 0) + (m.seeds.empty() ? 0 : 1) + (m.rho.empty() ? 0 : 1);
      if (kinds != 1) bad(where, "give exactly one of trivial, seeds, rho");
      pf.modules.push_back(m);
    }
  if (const Value* v = toml::find(root, "double_complex"))
    for (const auto& [name, x] : as_table(*v, "double_complex")) {
      const std::string where = "double_complex." + name;
      const Table& t = as_table(x, where);
      check_keys(t, {"dims", "d1", "d2"}, where);
      DoubleComplexSpec d;
      d.name = name;
      const Value* dims = toml::find(t, "dims");
      if (!dims) bad(where, "missing dims");
      d.dims = int_matrix(*dims, where);
      if (auto y = toml::find(t, "d1")) d.d1 = dc_entries(*y, where);
      if (auto y = toml::find(t, "d2")) d.d2 = dc_entries(*y, where);
      pf.double_complexes.push_back(d);
    }
  if (const Value* v = toml::find(root, "options")) {
    const Table& t = as_table(*v, "options");
    check_keys(t, {"set", "points"}, "options");
    if (auto x = toml::find(t, "set")) pf.options.set = as_string(*x, "options.set");
    if (auto x = toml::find(t, "points")) pf.options.points = string_matrix(*x, "options.points");
  }
  return pf;
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

std::string print_problem(const ProblemFile& pf) {
  Table root;
  if (pf.algebra) {
    const auto& a = *pf.algebra;
    Table t;
    if (a.catalog) t.emplace_back("catalog", str_v(*a.catalog));
    if (a.n) t.emplace_back("n", Value{*a.n});
    if (a.c) t.emplace_back("c", str_v(*a.c));
    if (!a.basis.empty()) t.emplace_back("basis", list_v(a.basis));
    if (!a.brackets.empty()) {
      Array b;
      for (const auto& [i, j, k, c] : a.brackets) b.push_back(Value{Array{Value{i}, Value{j}, Value{k}, str_v(c)}});
      t.emplace_back("brackets", Value{b});
    }
    root.emplace_back("algebra", Value{t});
  }
  if (!pf.chart.empty()) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& [n, k] : pf.chart) rows.push_back({n, k});
    root.emplace_back("chart", Value{Table{{"coords", matrix_v(rows)}}});
  }
  if (pf.action) {
    Table t;
    for (const auto& [k, f] : pf.action->fields) t.emplace_back(k, list_v(f));
    t.emplace_back("transitive", Value{pf.action->transitive});
    if (pf.action->stabilizer) t.emplace_back("stabilizer", list_v(*pf.action->stabilizer));
    root.emplace_back("action", Value{t});
  }
  if (!pf.lagrangians.empty()) {
    Table t;
    for (const auto& [k, s] : pf.lagrangians) t.emplace_back(k, str_v(s));
    root.emplace_back("lagrangian", Value{t});
  }
  if (!pf.modules.empty()) {
    Table t;
    for (const auto& m : pf.modules) {
      Table s;
      if (m.trivial_dim) s.emplace_back("trivial", Value{*m.trivial_dim});
      if (!m.seeds.empty()) s.emplace_back("seeds", list_v(m.seeds));
      if (!m.rho.empty()) {
        Array a;
        for (const auto& r : m.rho) a.push_back(matrix_v(r));
        s.emplace_back("rho", Value{a});
      }
      t.emplace_back(m.name, Value{s});
    }
    root.emplace_back("module", Value{t});
  }
  if (!pf.double_complexes.empty()) {
    Table t;
    for (const auto& d : pf.double_complexes) {
      Table s;
      Array dims;
      for (const auto& row : d.dims) {
        Array r;
        for (auto x : row) r.push_back(Value{x});
        dims.push_back(Value{r});
      }
      s.emplace_back("dims", Value{dims});
      if (!d.d1.empty()) s.emplace_back("d1", dc_entries_v(d.d1));
      if (!d.d2.empty()) s.emplace_back("d2", dc_entries_v(d.d2));
      t.emplace_back(d.name, Value{s});
    }
    root.emplace_back("double_complex", Value{t});
  }
  if (!pf.options.set.empty() || !pf.options.points.empty()) {
    Table t;
    if (!pf.options.set.empty()) t.emplace_back("set", str_v(pf.options.set));
    if (!pf.options.points.empty()) t.emplace_back("points", matrix_v(pf.options.points));
    root.emplace_back("options", Value{t});
  }
  return toml::print(root);
}

std::map<std::string, Scalar> parse_set(const std::string& text) {
  std::map<std::string, Scalar> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ParseError("expected name=value in '" + item + "'", 0);
    std::string name;
    for (char c : item.substr(0, eq))
      if (!std::isspace(static_cast<unsigned char>(c))) name += c;
    if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0]))) throw ParseError("bad parameter name '" + name + "'", 0);
    out[name] = parse_scalar(item.substr(eq + 1));
  }
  return out;
}

std::string substitute(const std::string& expr, const std::map<std::string, Scalar>& values) {
  if (values.empty()) return expr;
  std::string out;
  std::size_t i = 0;
  while (i < expr.size()) {
    char c = expr[i];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < expr.size() && (std::isalnum(static_cast<unsigned char>(expr[j])) || expr[j] == '_')) ++j;
      std::string id = expr.substr(i, j - i);
      auto it = values.find(id);
      out += it == values.end() ? id : "(" + it->second.get_str() + ")";
      i = j;
    } else {
      out += c;
      ++i;
    }
  }
  return out;
}

StructureConstants build_algebra(const ProblemFile& pf) {
  if (!pf.algebra) throw ParseError("missing [algebra]", 0);
  const auto& a = *pf.algebra;
  if (a.catalog) {
    CatalogParams cp;
    if (a.n) {
      if (*a.n < 0) throw BadParams("n must be nonnegative");
      cp.n = static_cast<std::size_t>(*a.n);
    }
    if (a.c) cp.c = parse_scalar(*a.c);
    return catalog(*a.catalog, cp);
  }
  StructureConstants g(a.basis);
  const auto n = static_cast<long long>(a.basis.size());
  std::map<std::tuple<long long, long long, long long>, Scalar> seen;
  for (const auto& [i, j, k, c] : a.brackets) {
    if (i < 1 || j < 1 || k < 1 || i > n || j > n || k > n) throw ParseError("bracket index out of range", 0);
    if (i == j) throw ParseError("bracket [e_i, e_i] must vanish", 0);
    Scalar v = parse_scalar(c);
    long long lo = std::min(i, j), hi = std::max(i, j);
    if (i > j) v = -v;
    auto key = std::make_tuple(lo, hi, k);
    if (seen.count(key) && seen[key] != v) throw ParseError("conflicting bracket entries", 0);
    seen[key] = v;
    g.set(static_cast<std::size_t>(lo - 1), static_cast<std::size_t>(hi - 1), static_cast<std::size_t>(k - 1), v);
  }
  return g;
}

ChartPtr build_chart(const ProblemFile& pf) {
  if (pf.chart.empty()) throw ParseError("missing [chart]", 0);
  std::vector<Coord> cs;
  for (const auto& [n, k] : pf.chart) cs.push_back({n, k == "angle" ? CoordKind::Angle : CoordKind::Line});
  return make_chart(cs);
}

GMPair build_pair(const ProblemFile& pf, const std::map<std::string, Scalar>& params) {
  GMPair p;
  p.algebra = build_algebra(pf);
  p.chart = build_chart(pf);
  if (!pf.action) throw ParseError("missing [action]", 0);
  const auto& names = p.algebra.basis_names();
  if (pf.action->fields.size() != names.size()) throw ParseError("[action] needs one field per basis element", 0);
  for (std::size_t i = 0; i < names.size(); ++i) {
    const auto* f = static_cast<const std::vector<std::string>*>(nullptr);
    for (const auto& [k, v] : pf.action->fields)
      if (k == names[i]) f = &v;
    if (!f) throw ParseError("[action] has no field for '" + names[i] + "'", 0);
    if (f->size() != p.chart->dim()) throw ParseError("field '" + names[i] + "' has the wrong number of components", 0);
    VectorFieldExpr x{p.chart, {}};
    for (const auto& s : *f) x.components.push_back(parse_expr(p.chart, substitute(s, params)));
    p.fields.push_back(x);
  }
  p.transitive = pf.action->transitive;
  if (pf.action->stabilizer) {
    if (pf.action->stabilizer->size() != names.size()) throw ParseError("stabilizer needs one entry per basis element", 0);
    std::vector<Expr> s;
    for (const auto& e : *pf.action->stabilizer) s.push_back(parse_expr(p.chart, substitute(e, params)));
    p.stabilizer = s;
  }
  return p;
}

Expr build_lagrangian(const ProblemFile& pf, const ChartPtr& chart, const std::string& name,
                      const std::map<std::string, Scalar>& params) {
  for (const auto& [k, s] : pf.lagrangians)
    if (k == name) return parse_expr(chart, substitute(s, params));
  throw UnknownName("no Lagrangian named '" + name + "'");
}

GModule build_module(const ProblemFile& pf, const std::string& name, std::size_t closure_cap) {
  for (const auto& m : pf.modules) {
    if (m.name != name) continue;
    if (m.trivial_dim) {
      if (*m.trivial_dim < 0) throw ParseError("module dimension must be nonnegative", 0);
      return trivial_module(build_algebra(pf), static_cast<std::size_t>(*m.trivial_dim));
    }
    if (!m.seeds.empty()) {
      GMPair p = build_pair(pf);
      std::vector<Expr> seeds;
      for (const auto& s : m.seeds) seeds.push_back(parse_expr(p.chart, s));
      return closure_module(p, seeds, closure_cap).module;
    }
    StructureConstants g = build_algebra(pf);
    if (m.rho.size() != g.dim()) throw ParseError("module '" + name + "' needs one matrix per generator", 0);
    GModule out;
    out.dim = m.rho.front().size();
    for (const auto& mat : m.rho) {
      Mat r(out.dim, out.dim);
      if (mat.size() != out.dim) throw ParseError("module '" + name + "': matrices must be square of equal size", 0);
      for (std::size_t i = 0; i < out.dim; ++i) {
        if (mat[i].size() != out.dim) throw ParseError("module '" + name + "': matrices must be square", 0);
        for (std::size_t j = 0; j < out.dim; ++j) r(i, j) = parse_scalar(mat[i][j]);
      }
      out.rho.push_back(r);
    }
    return out;
  }
  throw UnknownName("no module named '" + name + "'");
}

DoubleComplex build_double_complex(const ProblemFile& pf, const std::string& name) {
  for (const auto& d : pf.double_complexes) {
    if (d.name != name) continue;
    std::vector<std::vector<std::size_t>> dims;
    for (const auto& row : d.dims) {
      std::vector<std::size_t> r;
      for (auto x : row) {
        if (x < 0) throw ParseError("negative cell dimension", 0);
        r.push_back(static_cast<std::size_t>(x));
      }
      if (!dims.empty() && r.size() != dims.front().size()) throw ParseError("dims must be rectangular", 0);
      dims.push_back(r);
    }
    if (dims.empty() || dims.front().empty()) throw ParseError("empty double complex", 0);
    DoubleComplex dc = make_double_complex(dims);
    auto fill = [&](const std::vector<DoubleComplexSpec::Entry>& es, bool vertical) {
      for (const auto& [p, q, rows] : es) {
        if (p < 0 || q < 0 || static_cast<std::size_t>(p) >= dc.P || static_cast<std::size_t>(q) >= dc.Q)
          throw ParseError("map index out of range", 0);
        auto pp = static_cast<std::size_t>(p), qq = static_cast<std::size_t>(q);
        Mat& target = vertical ? dc.d1[pp][qq] : dc.d2[pp][qq];
        if (rows.size() != target.rows()) throw ParseError("map has the wrong number of rows", 0);
        for (std::size_t i = 0; i < rows.size(); ++i) {
          if (rows[i].size() != target.cols()) throw ParseError("map has the wrong number of columns", 0);
          for (std::size_t j = 0; j < rows[i].size(); ++j) target(i, j) = parse_scalar(rows[i][j]);
        }
      }
    };
    fill(d.d1, true);
    fill(d.d2, false);
    return dc;
  }
  throw UnknownName("no double complex named '" + name + "'");
}

std::vector<Point> build_points(const ProblemFile& pf, const Chart& chart) {
  std::vector<Point> out;
  for (const auto& row : pf.options.points) {
    if (row.size() != chart.dim()) throw ParseError("point has the wrong number of coordinates", 0);
    Point pt(chart.dim());
    for (std::size_t mu = 0; mu < chart.dim(); ++mu) {
      auto colon = row[mu].find(':');
      if (chart.is_angle(mu)) {
        if (colon == std::string::npos) throw ParseError("angle values are given as \"sin:cos\"", 0);
        pt[mu].sin = parse_scalar(row[mu].substr(0, colon));
        pt[mu].cos = parse_scalar(row[mu].substr(colon + 1));
      } else {
        if (colon != std::string::npos) throw ParseError("line values are plain rationals", 0);
        pt[mu].value = parse_scalar(row[mu]);
      }
    }
    point_assignment(chart, pt);
    out.push_back(pt);
  }
  return out;
}

}  // namespace lagcoh
