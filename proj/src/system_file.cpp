#include "kahler/system_file.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "kahler/errors.hpp"

namespace kahler {

namespace {

const std::set<std::string>& tolerance_keys() {
  static const std::set<std::string> keys = {"antisymmetry", "kahler_fd",    "closedness",   "solve_consistency",
                                             "constraint",   "oracle",       "el_residual",  "energy_drift", "constraint_drift",
                                             "classify"};
  return keys;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

class Parser {
 public:
  Parser(std::string_view text, std::string source) : text_(text) { out_.source = std::move(source); }

  SystemFile run() {
    std::size_t pos = 0;
    int line_no = 0;
    while (pos <= text_.size()) {
      const auto nl = text_.find('\n', pos);
      const std::string_view raw =
          text_.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
      ++line_no;
      handle(line_no, raw);
      if (nl == std::string_view::npos) break;
      pos = nl + 1;
    }
    finish(line_no);
    return std::move(out_);
  }

 private:
  struct Pending {
    std::string text;
    int line;
  };

  [[noreturn]] void fail(int line, const std::string& msg) const { throw SystemFileError(out_.source, line, msg); }

  void handle(int line, std::string_view raw) {
    const auto hash = raw.find('#');
    std::string_view s = trim(hash == std::string_view::npos ? raw : raw.substr(0, hash));
    if (s.empty()) return;
    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "unterminated section header");
      section_ = std::string(trim(s.substr(1, s.size() - 2)));
      static const std::set<std::string> known = {"system",  "lagrangian", "constraints",
                                                  "initial", "integrator", "tolerances"};
      if (!known.count(section_)) fail(line, "unknown section [" + section_ + "]");
      if (!seen_.insert(section_).second) fail(line, "duplicate section [" + section_ + "]");
      return;
    }
    if (section_.empty()) fail(line, "content before the first section header");
    if (section_ == "lagrangian") {
      if (lagrangian_.text.empty()) lagrangian_.line = line;
      if (!lagrangian_.text.empty()) lagrangian_.text += ' ';
      lagrangian_.text += std::string(s);
      return;
    }
    if (section_ == "constraints") {
      const auto colon = s.find(':');
      if (colon == std::string_view::npos) fail(line, "expected 'name: c1, ..., c2m'");
      const std::string name(trim(s.substr(0, colon)));
      if (name.empty()) fail(line, "constraint name is empty");
      constraints_.push_back({name + '\x1f' + std::string(s.substr(colon + 1)), line});
      return;
    }
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) fail(line, "expected 'key = value'");
    const std::string key(trim(s.substr(0, eq)));
    const std::string value(trim(s.substr(eq + 1)));
    if (key.empty()) fail(line, "empty key");
    if (value.empty()) fail(line, "missing value for '" + key + "'");
    if (!keys_.insert(section_ + "." + key).second) fail(line, "duplicate key '" + key + "'");
    entries_.push_back({section_, key, value, line});
  }

  double number(const std::string& v, int line, const std::string& key) const {
    double x = 0.0;
    const auto* end = v.data() + v.size();
    const auto res = std::from_chars(v.data(), end, x);
    if (res.ec != std::errc() || res.ptr != end) fail(line, "'" + key + "' expects a real number, got '" + v + "'");
    return x;
  }

  Expr expression(const std::string& text, int line) const {
    try {
      return parse_expression(text, out_.m);
    } catch (const ParseError& e) {
      fail(line, e.what());
    }
  }

  void finish(int last_line) {
    // [system] first: everything else needs m
    for (const auto& e : entries_) {
      if (e.section != "system") continue;
      if (e.key == "m") {
        const double v = number(e.value, e.line, e.key);
        if (v != std::floor(v) || v < 1 || v > 64) fail(e.line, "m must be a positive integer");
        out_.m = static_cast<int>(v);
      } else if (e.key == "name") {
        out_.name = e.value;
      } else if (e.key == "seed") {
        std::uint64_t seed = 0;
        const auto* end = e.value.data() + e.value.size();
        const auto res = std::from_chars(e.value.data(), end, seed);
        if (res.ec != std::errc() || res.ptr != end) fail(e.line, "seed must be a nonnegative integer");
        out_.seed = seed;
      } else {
        fail(e.line, "unknown key '" + e.key + "' in [system]");
      }
    }
    if (out_.m == 0) fail(seen_.count("system") ? last_line : 1, "[system] must declare m");
    const int m = out_.m;

    if (lagrangian_.text.empty()) fail(last_line, "missing [lagrangian] expression");
    out_.lagrangian_text = lagrangian_.text;
    out_.lagrangian = expression(lagrangian_.text, lagrangian_.line);

    std::set<std::string> names;
    for (const auto& c : constraints_) {
      const auto sep = c.text.find('\x1f');
      ConstraintSpec spec{c.text.substr(0, sep), {}, c.line};
      if (!names.insert(spec.name).second) fail(c.line, "duplicate constraint name '" + spec.name + "'");
      std::stringstream ss(c.text.substr(sep + 1));
      std::string item;
      while (std::getline(ss, item, ',')) {
        const std::string t(trim(item));
        if (t.empty()) fail(c.line, "empty coefficient in constraint '" + spec.name + "'");
        spec.coefficients.push_back(expression(t, c.line));
      }
      if (static_cast<int>(spec.coefficients.size()) != 2 * m)
        fail(c.line, "constraint '" + spec.name + "' needs " + std::to_string(2 * m) + " coefficients, got " +
                         std::to_string(spec.coefficients.size()));
      out_.constraints.push_back(std::move(spec));
    }

    out_.initial.assign(2 * m, cplx{});
    std::vector<bool> given(2 * m, false);
    for (const auto& e : entries_) {
      if (e.section == "initial") {
        Expr sym;
        try {
          sym = parse_expression(e.key, m);
        } catch (const ParseError& err) {
          fail(e.line, std::string("bad coordinate name: ") + err.what());
        }
        if (sym.op() != Op::Var) fail(e.line, "'" + e.key + "' is not a coordinate");
        const Expr value = expression(e.value, e.line);
        if (depends_on_symbols(value)) fail(e.line, "initial value of " + e.key + " must be a literal");
        const int slot = sym.symbol().slot(m);
        out_.initial[slot] = evaluate(value, EvalPoint(m));
        given[slot] = true;
      } else if (e.section == "integrator") {
        const double v = number(e.value, e.line, e.key);
        if (e.key == "t1") {
          if (!(v > 0.0)) fail(e.line, "t1 must be positive");
          out_.t1 = v;
        } else if (e.key == "dt") {
          if (!(v > 0.0)) fail(e.line, "dt must be positive");
          out_.dt = v;
        } else {
          fail(e.line, "unknown key '" + e.key + "' in [integrator]");
        }
      } else if (e.section == "tolerances") {
        if (!tolerance_keys().count(e.key)) fail(e.line, "unknown tolerance '" + e.key + "'");
        const double v = number(e.value, e.line, e.key);
        if (!(v >= 0.0)) fail(e.line, "tolerance '" + e.key + "' must be nonnegative");
        out_.tolerances[e.key] = v;
      }
    }
    if (seen_.count("initial"))
      for (int p = 0; p < 2 * m; ++p)
        if (!given[p]) fail(last_line, "[initial] is missing " + Symbol::from_slot(p, m).name());
  }

  struct Entry {
    std::string section;
    std::string key;
    std::string value;
    int line;
  };

  std::string_view text_;
  SystemFile out_;
  std::string section_;
  std::set<std::string> seen_;
  std::set<std::string> keys_;
  Pending lagrangian_{"", 0};
  std::vector<Pending> constraints_;
  std::vector<Entry> entries_;
};

}  // namespace

LagrangianSystem SystemFile::build() const {
  std::vector<NamedForm> forms;
  for (const auto& c : constraints) {
    SymbolicOneForm f(m);
    for (int p = 0; p < 2 * m; ++p) f[p] = c.coefficients[p];
    forms.push_back({c.name, std::move(f)});
  }
  return LagrangianSystem(m, lagrangian, std::move(forms));
}

PhaseState SystemFile::initial_state() const { return PhaseState::from_packed(0.0, initial); }

SystemFile parse_system_file(std::string_view text, const std::string& source) {
  return Parser(text, source).run();
}

SystemFile load_system_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SystemFileError(path.string(), 0, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_system_file(ss.str(), path.string());
}

}  // namespace kahler
