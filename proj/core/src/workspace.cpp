#include "nilspace/workspace.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

#include "nilspace/budget.hpp"
#include "nilspace/cohomology.hpp"
#include "nilspace/constructors.hpp"
#include "nilspace/extension.hpp"
#include "nilspace/factor.hpp"
#include "nilspace/translation.hpp"

namespace nilspace {

WorkspaceParseError::WorkspaceParseError(SourceLocation loc, const std::string& message)
    : std::runtime_error(std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " + message),
      loc_(loc),
      message_(message) {}

std::size_t Workspace::count(StatementKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(statements.begin(), statements.end(), [&](const Statement& s) { return s.kind == kind; }));
}

namespace {

std::string format_levels(const std::vector<std::vector<Int>>& levels) {
  std::string s = "[";
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (i) s += "; ";
    for (std::size_t j = 0; j < levels[i].size(); ++j) {
      if (j) s += ", ";
      s += std::to_string(levels[i][j]);
    }
  }
  return s + "]";
}

std::string format_argument(const Argument& a) {
  switch (a.kind) {
    case Argument::Kind::Number: return std::to_string(a.number);
    case Argument::Kind::Name: return a.text;
    case Argument::Kind::String: return "\"" + a.text + "\"";
    case Argument::Kind::Levels: return format_levels(a.levels);
    case Argument::Kind::Option: return a.text + "=" + format_argument(a.value.front());
  }
  return {};
}

}  // namespace

std::string to_string(const Call& call) {
  std::string s = call.func + "(";
  for (std::size_t i = 0; i < call.args.size(); ++i) {
    if (i) s += ", ";
    s += format_argument(call.args[i]);
  }
  return s + ")";
}

AbelianIdentification identify_abelian(const FiniteGroup& g) {
  std::vector<std::vector<std::size_t>> add(g.order(), std::vector<std::size_t>(g.order()));
  for (std::size_t a = 0; a < g.order(); ++a)
    for (std::size_t b = 0; b < g.order(); ++b) add[a][b] = g.mul(static_cast<FiniteGroup::Element>(a), static_cast<FiniteGroup::Element>(b));
  return identify_abelian_table(add, 0);
}

std::uint64_t resolve_budget(std::optional<std::uint64_t> command_line, const char* env_value) {
  if (command_line) return *command_line;
  if (env_value != nullptr && *env_value != '\0') {
    std::uint64_t v = 0;
    std::size_t used = 0;
    try {
      v = std::stoull(env_value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || env_value[used] != '\0' || v == 0)
      throw std::invalid_argument(std::string("NILSPACE_BUDGET is not a positive integer: ") + env_value);
    return v;
  }
  return kDefaultNodeBudget;
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok { Ident, Number, String, LParen, RParen, LBracket, RBracket, Comma, Semicolon, Equals, Newline, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  Int number = 0;
  SourceLocation loc;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::Ident: return "'" + t.text + "'";
    case Tok::Number: return "number " + t.text;
    case Tok::String: return "string \"" + t.text + "\"";
    case Tok::Newline: return "end of line";
    case Tok::End: return "end of input";
    default: return "'" + t.text + "'";
  }
}

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1, depth = 0;
  std::size_t i = 0;
  auto advance = [&] {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  };
  while (i < text.size()) {
    const char c = text[i];
    const SourceLocation loc{line, col};
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance();
      continue;
    }
    if (c == '\n') {
      if (depth == 0 && (out.empty() || out.back().kind != Tok::Newline)) out.push_back({Tok::Newline, "\n", 0, loc});
      advance();
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      advance();
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string word;
      while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
        word += text[i];
        advance();
      }
      out.push_back({Tok::Ident, word, 0, loc});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string digits;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        digits += text[i];
        advance();
      }
      if (digits.size() > 18) throw WorkspaceParseError(loc, "number " + digits + " is too large");
      out.push_back({Tok::Number, digits, std::stoll(digits), loc});
      continue;
    }
    if (c == '"') {
      advance();
      std::string s;
      while (i < text.size() && text[i] != '"') {
        if (text[i] == '\n') throw WorkspaceParseError(loc, "unterminated string");
        if (text[i] == '\\' && i + 1 < text.size()) advance();
        s += text[i];
        advance();
      }
      if (i >= text.size()) throw WorkspaceParseError(loc, "unterminated string");
      advance();
      out.push_back({Tok::String, s, 0, loc});
      continue;
    }
    Tok kind;
    switch (c) {
      case '(': kind = Tok::LParen; ++depth; break;
      case ')': kind = Tok::RParen; depth = std::max(0, depth - 1); break;
      case '[': kind = Tok::LBracket; ++depth; break;
      case ']': kind = Tok::RBracket; depth = std::max(0, depth - 1); break;
      case ',': kind = Tok::Comma; break;
      case ';': kind = Tok::Semicolon; break;
      case '=': kind = Tok::Equals; break;
      default: throw WorkspaceParseError(loc, std::string("unexpected character '") + c + "'");
    }
    out.push_back({kind, std::string(1, c), 0, loc});
    advance();
  }
  out.push_back({Tok::Newline, "\n", 0, {line, col}});
  out.push_back({Tok::End, "", 0, {line, col}});
  return out;
}

// ---------------------------------------------------------------------------
// Parser

struct Symbol {
  StatementKind kind;
  std::string group;  // spaces: underlying group, if any
  std::string base;   // cocycles: base space
};

std::string kind_name(StatementKind k) {
  switch (k) {
    case StatementKind::Group: return "group";
    case StatementKind::Filtration: return "filtration";
    case StatementKind::Space: return "space";
    case StatementKind::Cocycle: return "cocycle";
    default: return "command";
  }
}

class Parser {
 public:
  Parser(const std::string& text, std::filesystem::path base_dir) : toks_(tokenize(text)) {
    ws_.base_dir = std::move(base_dir);
  }

  Workspace parse() {
    while (peek().kind != Tok::End) {
      if (peek().kind == Tok::Newline) {
        ++pos_;
        continue;
      }
      statement();
      const Token& t = peek();
      if (t.kind != Tok::Newline) throw error(t, "expected end of statement, found " + describe(t));
    }
    return std::move(ws_);
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Workspace ws_;
  std::map<std::string, Symbol> symbols_;

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  static WorkspaceParseError error(const Token& t, const std::string& msg) { return {t.loc, msg}; }
  static WorkspaceParseError error(SourceLocation loc, const std::string& msg) { return {loc, msg}; }

  const Token& expect(Tok kind, const std::string& what) {
    const Token& t = peek();
    if (t.kind != kind) throw error(t, "expected " + what + ", found " + describe(t));
    return next();
  }

  std::string keyword_ident(const std::string& what) { return expect(Tok::Ident, what).text; }

  void statement() {
    const Token& head = expect(Tok::Ident, "a statement keyword");
    Statement st;
    st.loc = head.loc;
    const std::string& kw = head.text;
    if (kw == "group" || kw == "space" || kw == "cocycle" || kw == "filtration") {
      const Token& name = expect(Tok::Ident, "a name");
      if (symbols_.count(name.text)) throw error(name, "name '" + name.text + "' is already defined");
      st.name = name.text;
      if (kw == "filtration") {
        expect_word("on");
        const Token& g = expect(Tok::Ident, "a group name");
        resolve(g.text, g.loc, StatementKind::Group);
        st.on = g.text;
      }
      expect(Tok::Equals, "'='");
      if (kw == "filtration") {
        st.kind = StatementKind::Filtration;
        if (peek().kind == Tok::LBracket) {
          st.call.loc = peek().loc;
          st.call.func = "levels";
          st.call.args.push_back(argument());
        } else {
          const Token& t = expect(Tok::Ident, "'[' or lcs");
          if (t.text != "lcs") throw error(t, "unknown filtration '" + t.text + "'");
          st.call = {"lcs", t.loc, {}};
        }
        define_filtration(st);
      } else {
        st.call = call();
        if (kw == "group") {
          st.kind = StatementKind::Group;
          define_group(st);
        } else if (kw == "space") {
          st.kind = StatementKind::Space;
          define_space(st);
        } else {
          st.kind = StatementKind::Cocycle;
          define_cocycle(st);
        }
      }
    } else if (kw == "assert") {
      st.kind = StatementKind::Assert;
      st.call = call();
      check_assert(st.call);
    } else if (kw == "compute") {
      st.kind = StatementKind::Compute;
      st.call = call();
      check_compute(st.call);
    } else if (kw == "set") {
      expect_word("budget");
      const Token& n = expect(Tok::Number, "a node budget");
      if (n.number <= 0) throw error(n, "budget must be positive");
      st.kind = StatementKind::SetBudget;
      st.budget = static_cast<std::uint64_t>(n.number);
    } else if (kw == "write") {
      const Token& name = expect(Tok::Ident, "a cocycle name");
      resolve(name.text, name.loc, StatementKind::Cocycle);
      const Token& p = expect(Tok::String, "an output path");
      st.kind = StatementKind::Write;
      st.name = name.text;
      st.path = p.text;
    } else {
      throw error(head, "unknown statement '" + kw + "'");
    }
    ws_.statements.push_back(std::move(st));
  }

  void expect_word(const std::string& word) {
    const Token& t = expect(Tok::Ident, "'" + word + "'");
    if (t.text != word) throw error(t, "expected '" + word + "', found " + describe(t));
  }

  Call call() {
    const Token& f = expect(Tok::Ident, "a function name");
    Call c{f.text, f.loc, {}};
    if (peek().kind != Tok::LParen) return c;
    next();
    if (peek().kind == Tok::RParen) {
      next();
      return c;
    }
    while (true) {
      c.args.push_back(argument());
      const Token& t = next();
      if (t.kind == Tok::RParen) break;
      if (t.kind != Tok::Comma) throw error(t, "expected ',' or ')', found " + describe(t));
    }
    return c;
  }

  Argument argument() {
    const Token& t = next();
    Argument a;
    a.loc = t.loc;
    switch (t.kind) {
      case Tok::Number:
        a.kind = Argument::Kind::Number;
        a.number = t.number;
        return a;
      case Tok::String:
        a.kind = Argument::Kind::String;
        a.text = t.text;
        return a;
      case Tok::Ident:
        a.text = t.text;
        if (peek().kind == Tok::Equals) {
          next();
          a.kind = Argument::Kind::Option;
          const Token& v = next();
          if (v.kind != Tok::Number && v.kind != Tok::Ident)
            throw error(v, "expected a value for option '" + t.text + "', found " + describe(v));
          Argument val;
          val.loc = v.loc;
          val.kind = v.kind == Tok::Number ? Argument::Kind::Number : Argument::Kind::Name;
          val.number = v.number;
          val.text = v.text;
          a.value.push_back(val);
        } else {
          a.kind = Argument::Kind::Name;
        }
        return a;
      case Tok::LBracket: {
        a.kind = Argument::Kind::Levels;
        a.levels.emplace_back();
        if (peek().kind == Tok::RBracket) {
          next();
          return a;
        }
        while (true) {
          if (peek().kind == Tok::Number) a.levels.back().push_back(next().number);
          const Token& sep = next();
          if (sep.kind == Tok::RBracket) break;
          if (sep.kind == Tok::Semicolon) a.levels.emplace_back();
          else if (sep.kind != Tok::Comma) throw error(sep, "expected ',', ';' or ']', found " + describe(sep));
        }
        return a;
      }
      default: throw error(t, "expected an argument, found " + describe(t));
    }
  }

  // ----- resolution helpers

  const Symbol& resolve(const std::string& name, SourceLocation loc, StatementKind kind) {
    auto it = symbols_.find(name);
    if (it == symbols_.end()) throw error(loc, "undefined name '" + name + "'");
    if (it->second.kind != kind)
      throw error(loc, "'" + name + "' is a " + kind_name(it->second.kind) + ", expected a " + kind_name(kind));
    return it->second;
  }

  struct Args {
    std::vector<const Argument*> positional;
    std::map<std::string, const Argument*> options;
  };

  Args split(const Call& c, std::size_t lo, std::size_t hi, std::initializer_list<const char*> allowed = {}) {
    Args a;
    for (const auto& arg : c.args) {
      if (arg.kind == Argument::Kind::Option) {
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) { return arg.text == k; }) ==
            allowed.end())
          throw error(arg.loc, "unknown option '" + arg.text + "' for " + c.func);
        if (a.options.count(arg.text)) throw error(arg.loc, "option '" + arg.text + "' given twice");
        a.options[arg.text] = &arg.value.front();
      } else {
        if (!a.options.empty()) throw error(arg.loc, "positional argument after an option");
        a.positional.push_back(&arg);
      }
    }
    const std::size_t n = a.positional.size();
    if (n < lo || n > hi) {
      std::string want = lo == hi ? std::to_string(lo) : std::to_string(lo) + " to " + std::to_string(hi);
      throw error(c.loc, c.func + " takes " + want + " arguments, got " + std::to_string(n));
    }
    return a;
  }

  const Symbol& name_arg(const Argument* a, StatementKind kind) {
    if (a->kind != Argument::Kind::Name) throw error(a->loc, "expected a " + kind_name(kind) + " name");
    return resolve(a->text, a->loc, kind);
  }

  Int number_arg(const Argument* a, Int lo, Int hi, const std::string& what) {
    if (a->kind != Argument::Kind::Number) throw error(a->loc, "expected " + what);
    if (a->number < lo || a->number > hi)
      throw error(a->loc, what + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return a->number;
  }

  std::vector<FiniteGroup::Element> gen_list(const Argument* a, const FiniteGroup& g) {
    if (a->kind != Argument::Kind::Levels || a->levels.size() != 1)
      throw error(a->loc, "expected a generator list [g1, g2, ...]");
    std::vector<FiniteGroup::Element> out;
    for (Int x : a->levels.front()) {
      if (x < 0 || static_cast<std::uint64_t>(x) >= g.order())
        throw error(a->loc, "element " + std::to_string(x) + " is outside a group of order " +
                                std::to_string(g.order()));
      out.push_back(static_cast<FiniteGroup::Element>(x));
    }
    return out;
  }

  std::filesystem::path resolve_path(const std::string& p) const {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : ws_.base_dir / path;
  }

  // ----- definitions

  void define_group(Statement& st) {
    const Call& c = st.call;
    FiniteGroup g;
    try {
      if (c.func == "cyclic") {
        auto a = split(c, 1, 1);
        g = cyclic_group(static_cast<std::uint32_t>(number_arg(a.positional[0], 1, 4096, "the order")));
      } else if (c.func == "product") {
        auto a = split(c, 2, 16);
        for (std::size_t i = 0; i < a.positional.size(); ++i) {
          name_arg(a.positional[i], StatementKind::Group);
          const FiniteGroup& h = ws_.groups.at(a.positional[i]->text);
          if (i == 0) g = h;
          else if (g.order() * h.order() > 4096) throw error(c.loc, "product group is too large");
          else g = direct_product(g, h);
        }
      } else if (c.func == "table") {
        auto a = split(c, 1, 1);
        if (a.positional[0]->kind != Argument::Kind::String) throw error(a.positional[0]->loc, "expected a path");
        try {
          g = load_group_table(resolve_path(a.positional[0]->text).string());
        } catch (const std::exception& ex) {
          throw error(a.positional[0]->loc, "table \"" + a.positional[0]->text + "\": " + ex.what());
        }
      } else if (c.func == "heisenberg") {
        auto a = split(c, 1, 1);
        g = heisenberg_group(static_cast<std::uint32_t>(number_arg(a.positional[0], 2, 16, "the prime")));
      } else if (c.func == "dihedral") {
        auto a = split(c, 1, 1);
        g = dihedral_group(static_cast<std::uint32_t>(number_arg(a.positional[0], 1, 2048, "n")));
      } else if (c.func == "quaternion") {
        split(c, 0, 0);
        g = quaternion_group();
      } else {
        throw error(c.loc, "unknown group constructor '" + c.func + "'");
      }
    } catch (const WorkspaceParseError&) {
      throw;
    } catch (const std::exception& ex) {
      throw error(c.loc, ex.what());
    }
    ws_.groups[st.name] = std::move(g);
    symbols_[st.name] = {StatementKind::Group, {}, {}};
  }

  void define_filtration(Statement& st) {
    const FiniteGroup& g = ws_.groups.at(st.on);
    Filtration f;
    try {
      if (st.call.func == "lcs") {
        f = Filtration::lower_central_series(g);
      } else {
        const Argument& a = st.call.args.front();
        std::vector<std::vector<FiniteGroup::Element>> levels;
        for (const auto& lv : a.levels) {
          Argument one = a;
          one.levels = {lv};
          levels.push_back(gen_list(&one, g));
        }
        if (levels.size() == 1 && levels.front().empty()) levels.clear();
        f = Filtration::from_generators(g, levels);
      }
    } catch (const WorkspaceParseError&) {
      throw;
    } catch (const std::exception& ex) {
      throw error(st.call.loc, ex.what());
    }
    ws_.filtrations[st.name] = std::move(f);
    symbols_[st.name] = {StatementKind::Filtration, {}, {}};
  }

  void define_space(Statement& st) {
    const Call& c = st.call;
    Symbol sym{StatementKind::Space, {}, {}};
    if (c.func == "degree") {
      auto a = split(c, 2, 2);
      name_arg(a.positional[0], StatementKind::Group);
      if (!ws_.groups.at(a.positional[0]->text).is_abelian())
        throw error(a.positional[0]->loc, "degree needs an abelian group");
      number_arg(a.positional[1], 1, 5, "the degree");
      sym.group = a.positional[0]->text;
    } else if (c.func == "groupcubes") {
      auto a = split(c, 2, 3);
      name_arg(a.positional[0], StatementKind::Group);
      name_arg(a.positional[1], StatementKind::Filtration);
      check_filtration_on(a.positional[1], a.positional[0]->text);
      if (a.positional.size() == 3) {
        const Argument* m = a.positional[2];
        if (m->kind != Argument::Kind::Name || (m->text != "gray" && m->text != "generative"))
          throw error(m->loc, "mode must be gray or generative");
      }
      sym.group = a.positional[0]->text;
    } else if (c.func == "cosets") {
      auto a = split(c, 3, 3);
      name_arg(a.positional[0], StatementKind::Group);
      name_arg(a.positional[1], StatementKind::Filtration);
      check_filtration_on(a.positional[1], a.positional[0]->text);
      gen_list(a.positional[2], ws_.groups.at(a.positional[0]->text));
    } else if (c.func == "product") {
      auto a = split(c, 2, 8);
      for (auto* p : a.positional) name_arg(p, StatementKind::Space);
    } else if (c.func == "arrows") {
      auto a = split(c, 2, 2);
      name_arg(a.positional[0], StatementKind::Space);
      number_arg(a.positional[1], 1, 5, "the arrow height");
    } else if (c.func == "derived") {
      auto a = split(c, 2, 2);
      name_arg(a.positional[0], StatementKind::Space);
      number_arg(a.positional[1], 0, std::numeric_limits<Point>::max(), "a point id");
    } else if (c.func == "component") {
      auto a = split(c, 2, 2);
      name_arg(a.positional[0], StatementKind::Space);
      number_arg(a.positional[1], 0, std::numeric_limits<Point>::max(), "a point id");
    } else if (c.func == "quotient") {
      auto a = split(c, 2, 2);
      const Symbol& s = name_arg(a.positional[0], StatementKind::Space);
      if (s.group.empty())
        throw error(a.positional[0]->loc, "quotient needs a space built from a group (degree or groupcubes)");
      gen_list(a.positional[1], ws_.groups.at(s.group));
    } else if (c.func == "extension") {
      auto a = split(c, 2, 2);
      name_arg(a.positional[0], StatementKind::Space);
      const Symbol& rho = name_arg(a.positional[1], StatementKind::Cocycle);
      if (rho.base != a.positional[0]->text)
        throw error(a.positional[1]->loc, "cocycle '" + a.positional[1]->text + "' lives on '" + rho.base +
                                              "', not on '" + a.positional[0]->text + "'");
    } else {
      throw error(c.loc, "unknown space constructor '" + c.func + "'");
    }
    symbols_[st.name] = sym;
  }

  void check_filtration_on(const Argument* f, const std::string& group) {
    for (const auto& st : ws_.statements)
      if (st.kind == StatementKind::Filtration && st.name == f->text && st.on != group)
        throw error(f->loc, "filtration '" + f->text + "' is on '" + st.on + "', not on '" + group + "'");
  }

  void abelian_group_arg(const Argument* a) {
    name_arg(a, StatementKind::Group);
    if (!ws_.groups.at(a->text).is_abelian()) throw error(a->loc, "coefficient group must be abelian");
  }

  void define_cocycle(Statement& st) {
    const Call& c = st.call;
    Symbol sym{StatementKind::Cocycle, {}, {}};
    if (c.func == "zero") {
      auto a = split(c, 3, 3);
      name_arg(a.positional[0], StatementKind::Space);
      number_arg(a.positional[1], 0, 4, "the degree");
      abelian_group_arg(a.positional[2]);
      sym.base = a.positional[0]->text;
    } else if (c.func == "representative") {
      auto a = split(c, 4, 4);
      name_arg(a.positional[0], StatementKind::Space);
      number_arg(a.positional[1], 0, 4, "the degree");
      abelian_group_arg(a.positional[2]);
      number_arg(a.positional[3], 0, std::numeric_limits<std::int32_t>::max(), "a class index");
      sym.base = a.positional[0]->text;
    } else if (c.func == "fromfile") {
      auto a = split(c, 1, 1);
      const Argument* p = a.positional[0];
      if (p->kind != Argument::Kind::String) throw error(p->loc, "expected a path");
      std::ifstream in(resolve_path(p->text), std::ios::binary);
      if (!in) throw error(p->loc, "cannot open cocycle file \"" + p->text + "\"");
      std::ostringstream buf;
      buf << in.rdbuf();
      st.contents = buf.str();
      std::istringstream header(st.contents.substr(0, st.contents.find('\n')));
      std::string word, degree, space;
      header >> word >> degree >> space;
      if (word != "cocycle" || space.empty())
        throw error(p->loc, "cocycle file \"" + p->text + "\": line 1 must read 'cocycle <degree> <space> <group>'");
      auto it = symbols_.find(space);
      if (it == symbols_.end() || it->second.kind != StatementKind::Space)
        throw error(p->loc, "cocycle file \"" + p->text + "\" refers to undefined space '" + space + "'");
      sym.base = space;
    } else {
      throw error(c.loc, "unknown cocycle constructor '" + c.func + "'");
    }
    st.base = sym.base;
    symbols_[st.name] = sym;
  }

  // ----- commands

  void check_assert(const Call& c) {
    if (c.func == "nilspace") {
      auto a = split(c, 1, 1, {"step", "maxdim", "gluing"});
      name_arg(a.positional[0], StatementKind::Space);
      option_number(a, "step", 0, 5);
      option_number(a, "maxdim", 1, 6);
      option_number(a, "gluing", 1, 6);
    } else if (c.func == "ergodic") {
      auto a = split(c, 2, 2);
      name_arg(a.positional[0], StatementKind::Space);
      number_arg(a.positional[1], 0, 4, "the dimension");
    } else if (c.func == "isomorphic") {
      auto a = split(c, 2, 2, {"maxdim"});
      name_arg(a.positional[0], StatementKind::Space);
      name_arg(a.positional[1], StatementKind::Space);
      option_number(a, "maxdim", 1, 6);
    } else {
      throw error(c.loc, "unknown assertion '" + c.func + "'");
    }
  }

  void check_compute(const Call& c) {
    if (c.func == "factors") {
      auto a = split(c, 1, 2);
      name_arg(a.positional[0], StatementKind::Space);
      if (a.positional.size() == 2) number_arg(a.positional[1], 0, 5, "the step");
    } else if (c.func == "decomposition") {
      auto a = split(c, 1, 2, {"certify", "rebuild"});
      name_arg(a.positional[0], StatementKind::Space);
      if (a.positional.size() == 2) number_arg(a.positional[1], 0, 5, "the step");
      option_number(a, "certify", 0, 6);
      option_number(a, "rebuild", 0, 6);
    } else if (c.func == "translations") {
      auto a = split(c, 2, 2);
      name_arg(a.positional[0], StatementKind::Space);
      number_arg(a.positional[1], 1, 6, "the height");
    } else if (c.func == "centralseries") {
      auto a = split(c, 1, 1);
      name_arg(a.positional[0], StatementKind::Space);
    } else if (c.func == "cohomology") {
      auto a = split(c, 3, 3);
      name_arg(a.positional[0], StatementKind::Space);
      number_arg(a.positional[1], 0, 4, "the degree");
      abelian_group_arg(a.positional[2]);
    } else if (c.func == "compare") {
      auto a = split(c, 2, 2, {"maxdim"});
      name_arg(a.positional[0], StatementKind::Space);
      name_arg(a.positional[1], StatementKind::Space);
      option_number(a, "maxdim", 1, 6);
    } else {
      throw error(c.loc, "unknown computation '" + c.func + "'");
    }
  }

  void option_number(const Args& a, const char* key, Int lo, Int hi) {
    auto it = a.options.find(key);
    if (it != a.options.end()) number_arg(it->second, lo, hi, std::string("option ") + key);
  }
};

}  // namespace

Workspace parse_workspace(const std::string& text, const std::filesystem::path& base_dir) {
  return Parser(text, base_dir).parse();
}

Workspace load_workspace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open workspace " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_workspace(buf.str(), path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

// ---------------------------------------------------------------------------
// Runner

namespace {

std::string join_ids(std::span<const Point> ids) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(ids[i]);
  }
  return s;
}

std::string join_groups(const std::vector<FinAbelianGroup>& groups) {
  std::string s;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (i) s += "; ";
    s += groups[i].to_string();
  }
  return s.empty() ? "none" : s;
}

// thrown when an argument refers to a definition that failed earlier
struct DependencyFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Runner {
 public:
  Runner(const Workspace& ws, const RunOptions& opt)
      : ws_(ws), budget_(opt.budget == 0 ? kDefaultNodeBudget : opt.budget) {}

  Report run() {
    for (const auto& st : ws_.statements) {
      if (st.kind == StatementKind::SetBudget) {
        budget_ = st.budget;
        continue;
      }
      ReportSection sec;
      sec.title = title(st);
      Budget budget(budget_);
      try {
        BudgetScope scope(budget);
        execute(st, sec);
      } catch (const BudgetExceeded& ex) {
        sec.status = Verdict::Indeterminate;
        sec.add("reason", std::string(ex.what()));
        mark_failed(st);
      } catch (const DependencyFailed& ex) {
        sec.status = Verdict::Fail;
        sec.add("error", std::string(ex.what()));
        mark_failed(st);
      } catch (const std::exception& ex) {
        sec.status = Verdict::Fail;
        sec.add("error", std::string(ex.what()));
        mark_failed(st);
      }
      sec.add("nodes", budget.used());
      sec.add("budget", budget.limit());
      report_.sections.push_back(std::move(sec));
    }
    return std::move(report_);
  }

 private:
  const Workspace& ws_;
  std::uint64_t budget_;
  Report report_;
  std::map<std::string, Cubespace> spaces_;
  std::map<std::string, Cocycle> cocycles_;
  std::map<std::string, std::string> space_group_;
  std::set<std::string> failed_;

  static std::string title(const Statement& st) {
    switch (st.kind) {
      case StatementKind::Group: return "group " + st.name + " = " + to_string(st.call);
      case StatementKind::Filtration:
        return "filtration " + st.name + " on " + st.on + " = " +
               (st.call.func == "lcs" ? std::string("lcs") : format_levels(st.call.args.front().levels));
      case StatementKind::Space: return "space " + st.name + " = " + to_string(st.call);
      case StatementKind::Cocycle: return "cocycle " + st.name + " = " + to_string(st.call);
      case StatementKind::Assert: return "assert " + to_string(st.call);
      case StatementKind::Compute: return "compute " + to_string(st.call);
      case StatementKind::Write: return "write " + st.name + " \"" + st.path + "\"";
      case StatementKind::SetBudget: return "set budget " + std::to_string(st.budget);
    }
    return {};
  }

  void mark_failed(const Statement& st) {
    if (!st.name.empty() && st.kind != StatementKind::Write) failed_.insert(st.name);
  }

  // ----- argument access

  static std::vector<const Argument*> positional(const Call& c) {
    std::vector<const Argument*> out;
    for (const auto& a : c.args)
      if (a.kind != Argument::Kind::Option) out.push_back(&a);
    return out;
  }

  static std::optional<Int> option(const Call& c, const std::string& key) {
    for (const auto& a : c.args)
      if (a.kind == Argument::Kind::Option && a.text == key) return a.value.front().number;
    return std::nullopt;
  }

  void check_dependency(const std::string& name) const {
    if (failed_.count(name)) throw DependencyFailed("depends on failed definition '" + name + "'");
  }

  const Cubespace& space(const Argument* a) const {
    check_dependency(a->text);
    return spaces_.at(a->text);
  }
  const Cocycle& cocycle(const Argument* a) const {
    check_dependency(a->text);
    return cocycles_.at(a->text);
  }
  const FiniteGroup& group(const Argument* a) const { return ws_.groups.at(a->text); }
  FinAbelianGroup coefficients(const Argument* a) const { return identify_abelian(group(a)).group; }

  std::filesystem::path resolve_path(const std::string& p) const {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : ws_.base_dir / path;
  }

  // ----- dispatch

  void execute(const Statement& st, ReportSection& sec) {
    switch (st.kind) {
      case StatementKind::Group: return run_group(st, sec);
      case StatementKind::Filtration: return run_filtration(st, sec);
      case StatementKind::Space: return run_space(st, sec);
      case StatementKind::Cocycle: return run_cocycle(st, sec);
      case StatementKind::Assert: return run_assert(st.call, sec);
      case StatementKind::Compute: return run_compute(st.call, sec);
      case StatementKind::Write: return run_write(st, sec);
      case StatementKind::SetBudget: return;
    }
  }

  void run_group(const Statement& st, ReportSection& sec) {
    const FiniteGroup& g = ws_.groups.at(st.name);
    sec.add("order", g.order());
    sec.add("abelian", g.is_abelian() ? "yes" : "no");
    if (g.is_abelian()) sec.add("invariants", identify_abelian(g).group.to_string());
  }

  void run_filtration(const Statement& st, ReportSection& sec) {
    const Filtration& f = ws_.filtrations.at(st.name);
    sec.add("degree", std::to_string(f.degree()));
    std::string orders;
    for (int i = 1; i <= f.degree() + 1; ++i) {
      if (i > 1) orders += ' ';
      orders += std::to_string(f.level(i).size());
    }
    sec.add("level_orders", orders);
  }

  void run_space(const Statement& st, ReportSection& sec) {
    const Call& c = st.call;
    const auto a = positional(c);
    for (const auto* p : a)
      if (p->kind == Argument::Kind::Name) check_dependency(p->text);
    Cubespace s;
    if (c.func == "degree") {
      const FiniteGroup& g = group(a[0]);
      const int k = static_cast<int>(a[1]->number);
      AbelianIdentification id = identify_abelian(g);
      Cubespace d = degree_space(id.group, k);
      std::vector<Point> points(id.element_of.begin(), id.element_of.end());
      bool identity = true;
      for (Point i = 0; i < points.size(); ++i) identity = identity && points[i] == i;
      // points are relabelled to the element indices of g
      auto rule = identity ? d.rule_ptr() : subspace(d, points).rule_ptr();
      s = Cubespace(rule, g.labels(), k);
      space_group_[st.name] = a[0]->text;
    } else if (c.func == "groupcubes") {
      GroupCubeMode mode = GroupCubeMode::GrayCode;
      if (a.size() == 3 && a[2]->text == "generative") mode = GroupCubeMode::Generative;
      s = group_space(group(a[0]), ws_.filtrations.at(a[1]->text), mode);
      space_group_[st.name] = a[0]->text;
    } else if (c.func == "cosets") {
      const FiniteGroup& g = group(a[0]);
      std::vector<FiniteGroup::Element> gens(a[2]->levels.front().begin(), a[2]->levels.front().end());
      s = coset_space(g, ws_.filtrations.at(a[1]->text), gens);
    } else if (c.func == "product") {
      s = space(a[0]);
      for (std::size_t i = 1; i < a.size(); ++i) s = product(s, space(a[i]));
    } else if (c.func == "arrows") {
      s = arrow_space(space(a[0]), static_cast<int>(a[1]->number));
    } else if (c.func == "derived") {
      const Cubespace& n = space(a[0]);
      if (static_cast<std::uint64_t>(a[1]->number) >= n.size())
        throw std::invalid_argument("point " + std::to_string(a[1]->number) + " is outside a space of " +
                                    std::to_string(n.size()) + " points");
      s = derived_at(n, static_cast<Point>(a[1]->number));
    } else if (c.func == "component") {
      const Cubespace& n = space(a[0]);
      const auto p = static_cast<std::uint64_t>(a[1]->number);
      if (p >= n.size())
        throw std::invalid_argument("point " + std::to_string(p) + " is outside a space of " + std::to_string(n.size()) +
                                    " points");
      for (const auto& comp : ergodic_components(n))
        if (std::find(comp.begin(), comp.end(), static_cast<Point>(p)) != comp.end()) s = subspace(n, comp);
      sec.add("component_of", n.label(static_cast<Point>(p)));
    } else if (c.func == "quotient") {
      const Cubespace& n = space(a[0]);
      const FiniteGroup& g = ws_.groups.at(space_group_.at(a[0]->text));
      std::vector<FiniteGroup::Element> gens(a[1]->levels.front().begin(), a[1]->levels.front().end());
      const auto h = g.generated_subgroup(gens);
      // left cosets x<H>, numbered by their least element
      constexpr Point kNone = ~Point{0};
      std::vector<Point> class_of(n.size(), kNone);
      std::vector<std::string> labels;
      for (Point x = 0; x < n.size(); ++x) {
        if (class_of[x] != kNone) continue;
        const auto id = static_cast<Point>(labels.size());
        labels.push_back("[" + n.label(x) + "]");
        for (auto e : h) class_of[g.mul(x, e)] = id;
      }
      s = quotient_space(n, std::move(class_of), std::move(labels));
    } else if (c.func == "extension") {
      s = extension_from_cocycle(cocycle(a[1]), st.name).total;
    }
    s = s.with_name(st.name);
    spaces_[st.name] = s;
    sec.add("points", s.size());
    sec.add("rule", s.rule().kind());
    if (s.claimed_step()) sec.add("claimed_step", std::to_string(*s.claimed_step()));
  }

  void run_cocycle(const Statement& st, ReportSection& sec) {
    const Call& c = st.call;
    const auto a = positional(c);
    check_dependency(st.base);
    const Cubespace& base = spaces_.at(st.base);
    Cocycle rho;
    if (c.func == "zero") {
      rho = zero_cocycle(base, static_cast<int>(a[1]->number), coefficients(a[2]));
    } else if (c.func == "representative") {
      CohomologyGroup h = cohomology(base, static_cast<int>(a[1]->number), coefficients(a[2]));
      const auto idx = static_cast<std::size_t>(a[3]->number);
      if (idx >= h.representatives.size())
        throw std::invalid_argument("class index " + std::to_string(idx) + " is out of range: H = " +
                                    h.group.to_string() + " has " + std::to_string(h.representatives.size()) +
                                    " representatives");
      rho = h.representatives[idx];
    } else {
      std::istringstream in(st.contents);
      rho = parse_cocycle(in, base, nullptr, a[0]->text);
    }
    CocycleCheck check = check_cocycle_axioms(rho);
    cocycles_[st.name] = rho;
    sec.add("degree", std::to_string(rho.degree));
    sec.add("group", rho.group.to_string());
    sec.add("cubes", rho.size());
    sec.add("zero", rho.is_zero() ? "yes" : "no");
    sec.add("axioms", check.ok ? "ok" : "violated");
    if (!check.ok) {
      sec.status = Verdict::Fail;
      sec.add("witness", check.witness);
      failed_.insert(st.name);
    }
  }

  void run_write(const Statement& st, ReportSection& sec) {
    check_dependency(st.name);
    const Cocycle& rho = cocycles_.at(st.name);
    std::string base = rho.base.name().empty() ? "N" : rho.base.name();
    std::ofstream out(resolve_path(st.path), std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + st.path);
    out << format_cocycle(rho, base);
    if (!out) throw std::runtime_error("write to " + st.path + " failed");
    sec.add("path", st.path);
    sec.add("lines", rho.size() + 1);
  }

  // ----- assertions

  static void add_axiom(ReportSection& sec, const std::string& name, const AxiomResult& r) {
    sec.add(name, to_string(r.verdict));
    if (r.verdict != Verdict::Pass) sec.add("witness." + name, r.witness);
  }

  void run_assert(const Call& c, ReportSection& sec) {
    const auto a = positional(c);
    const Cubespace& n = space(a[0]);
    if (c.func == "nilspace") {
      const int k = option(c, "step") ? static_cast<int>(*option(c, "step")) : nilspace_step(n);
      const int maxdim = static_cast<int>(option(c, "maxdim").value_or(3));
      const int gluing = static_cast<int>(option(c, "gluing").value_or(-1));
      AxiomReport r = verify_axioms(n, k, maxdim, gluing);
      sec.status = r.overall();
      sec.add("step", std::to_string(r.step));
      sec.add("maxdim", std::to_string(r.max_dim));
      sec.add("gluing_dim", std::to_string(r.gluing_dim));
      add_axiom(sec, "composition", r.composition);
      add_axiom(sec, "ergodicity", r.ergodicity);
      add_axiom(sec, "gluing", r.gluing);
      add_axiom(sec, "unique_closing", r.unique_closing);
      sec.add("cubes_checked", r.cubes_checked);
    } else if (c.func == "ergodic") {
      const int k = static_cast<int>(a[1]->number);
      const std::uint64_t count = count_cubes(n, k);
      std::uint64_t all = 1;
      for (std::uint32_t v = 0; v < vertex_count(k); ++v)
        all = static_cast<std::uint64_t>(checked_mul(static_cast<Int>(all), static_cast<Int>(n.size())));
      sec.add("dimension", std::to_string(k));
      sec.add("cubes", count);
      sec.add("maps", all);
      if (count == all) return;
      sec.status = Verdict::Fail;
      // least non-cube map in lexicographic order
      Cube m(vertex_count(k), 0);
      while (n.is_cube(m)) {
        charge_nodes();
        std::size_t i = m.size();
        while (i > 0 && ++m[i - 1] == n.size()) m[--i] = 0;
      }
      sec.add("witness_cube", join_ids(m));
      sec.add("witness", n.format_cube(m) + " is not a cube");
    } else if (c.func == "isomorphic") {
      const Cubespace& b = space(a[1]);
      const int maxdim = static_cast<int>(option(c, "maxdim").value_or(3));
      sec.add("maxdim", std::to_string(maxdim));
      for (int d = 1; d <= maxdim; ++d) {
        const auto ca = count_cubes(n, d), cb = count_cubes(b, d);
        if (ca != cb || n.size() != b.size()) {
          sec.status = Verdict::Fail;
          sec.add("witness", n.size() != b.size()
                                 ? std::to_string(n.size()) + " vs " + std::to_string(b.size()) + " points"
                                 : "C^" + std::to_string(d) + " has " + std::to_string(ca) + " vs " +
                                       std::to_string(cb) + " cubes");
          return;
        }
      }
      auto iso = find_isomorphism(n, b, maxdim);
      if (iso) {
        sec.add("map", join_ids(*iso));
      } else {
        sec.status = Verdict::Fail;
        sec.add("witness", "no point bijection carries the cubes up to dimension " + std::to_string(maxdim));
      }
    }
  }

  // ----- computations

  void run_compute(const Call& c, ReportSection& sec) {
    const auto a = positional(c);
    const Cubespace& n = space(a[0]);
    if (c.func == "factors") {
      const int k = a.size() == 2 ? static_cast<int>(a[1]->number) : nilspace_step(n);
      sec.add("step", std::to_string(k));
      for (int j = 0; j <= k; ++j) {
        SimKPartition p = sim_k(n, j);
        const std::string key = "F" + std::to_string(j);
        sec.add(key + ".points", p.class_count());
        sec.add(key + ".classes", p.to_string(n));
      }
    } else if (c.func == "decomposition") {
      const int k = a.size() == 2 ? static_cast<int>(a[1]->number) : nilspace_step(n);
      const int certify = static_cast<int>(option(c, "certify").value_or(k + 1));
      const int rebuild = static_cast<int>(option(c, "rebuild").value_or(k + 1));
      BundleDecomposition d = bundle_decomposition(n, k, certify);
      sec.add("step", std::to_string(k));
      sec.add("structure_groups", join_groups(d.structure_groups()));
      for (std::size_t i = 1; i < d.levels.size(); ++i) {
        const auto& lvl = d.levels[i];
        sec.add("A" + std::to_string(i), lvl.group.to_string());
        sec.add("T" + std::to_string(i) + ".points", lvl.factor.space.size());
      }
      sec.add("certificate", d.certificate.ok ? "ok" : "failed");
      if (!d.certificate.ok) {
        sec.status = Verdict::Fail;
        sec.add("violated", d.certificate.violated);
        sec.add("witness", d.certificate.witness);
        return;
      }
      RebuildCheck r = rebuild_from_decomposition(n, d, rebuild);
      std::string counts;
      for (auto x : r.cube_counts) counts += (counts.empty() ? "" : " ") + std::to_string(x);
      sec.add("rebuild_dims", std::to_string(rebuild));
      sec.add("rebuild_counts", counts);
      sec.add("rebuild", r.certificate.ok ? "ok" : "failed");
      if (!r.certificate.ok) {
        sec.status = Verdict::Fail;
        sec.add("violated", r.certificate.violated);
        sec.add("witness", r.certificate.witness);
      }
    } else if (c.func == "translations") {
      const int h = static_cast<int>(a[1]->number);
      TranslationGroup g = enumerate_translations(n, h);
      sec.add("height", std::to_string(h));
      sec.add("step", std::to_string(g.step));
      sec.add("order", g.order());
      sec.add("abelian", g.is_abelian() ? "yes" : "no");
      sec.add("complete", g.complete ? "yes" : "no");
      if (!g.complete) {
        sec.status = Verdict::Indeterminate;
        sec.add("reason", g.note);
      }
    } else if (c.func == "centralseries") {
      CentralSeriesReport r = verify_central_series(n);
      sec.add("step", std::to_string(r.step));
      for (const auto& g : r.groups) {
        sec.add("Trans" + std::to_string(g.height) + ".order", g.order());
        if (!g.complete) sec.status = Verdict::Indeterminate;
      }
      sec.add("commutators_checked", r.commutators_checked);
      sec.add("nontrivial_commutators", r.nontrivial_commutators);
      if (!r.example.empty()) sec.add("example", r.example);
      sec.add("series", r.ok ? "ok" : "failed");
      if (!r.ok) {
        sec.status = Verdict::Fail;
        sec.add("witness", r.witness);
      }
    } else if (c.func == "cohomology") {
      const int d = static_cast<int>(a[1]->number);
      CohomologyGroup h = cohomology(n, d, coefficients(a[2]));
      sec.add("degree", std::to_string(d));
      sec.add("coefficients", coefficients(a[2]).to_string());
      sec.add("H", h.group.to_string());
      sec.add("order", h.group.order());
      sec.add("cocycles", h.cocycles.order());
      sec.add("coboundaries", h.coboundary_order);
      sec.add("representatives", h.representatives.size());
    } else if (c.func == "compare") {
      const Cubespace& b = space(a[1]);
      const int ka = nilspace_step(n), kb = nilspace_step(b);
      const int maxdim = static_cast<int>(option(c, "maxdim").value_or(std::min(std::max(ka, kb) + 1, 3)));
      const auto ga = bundle_decomposition(n, ka, 0).structure_groups();
      const auto gb = bundle_decomposition(b, kb, 0).structure_groups();
      sec.add("left.points", n.size());
      sec.add("right.points", b.size());
      sec.add("left.step", std::to_string(ka));
      sec.add("right.step", std::to_string(kb));
      sec.add("left.structure_groups", join_groups(ga));
      sec.add("right.structure_groups", join_groups(gb));
      bool same_counts = n.size() == b.size();
      for (int d = 1; d <= maxdim; ++d) {
        const auto ca = count_cubes(n, d), cb = count_cubes(b, d);
        sec.add("C" + std::to_string(d), std::to_string(ca) + " " + std::to_string(cb));
        same_counts = same_counts && ca == cb;
      }
      std::optional<std::vector<Point>> iso;
      if (same_counts) iso = find_isomorphism(n, b, maxdim);
      sec.add("isomorphic", iso ? "yes" : "no");
      if (iso) sec.add("map", join_ids(*iso));
    }
  }
};

}  // namespace

Report run_workspace(const Workspace& ws, const RunOptions& options) { return Runner(ws, options).run(); }

}  // namespace nilspace
