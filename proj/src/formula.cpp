#include "palkit/formula.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <unordered_set>

namespace palkit {

namespace {

bool valid_identifier(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

}  // namespace

AgentGroup::AgentGroup(std::vector<AgentId> members) : members_(std::move(members)) {
  if (members_.empty()) throw std::invalid_argument("agent group must be non-empty");
  for (const auto& m : members_) {
    if (!valid_identifier(m)) throw std::invalid_argument("invalid agent name: '" + m + "'");
  }
  std::set<AgentId> seen(members_.begin(), members_.end());
  if (seen.size() != members_.size())
    throw std::invalid_argument("duplicate agent in group");
}

using detail::FormulaNode;

Formula Formula::make(FormulaKind kind, std::string name, std::vector<AgentId> group,
                      std::vector<Formula> children) {
  return Formula(std::make_shared<FormulaNode>(
      FormulaNode{kind, std::move(name), std::move(group), std::move(children)}));
}

Formula Formula::atom(std::string prop) {
  if (!valid_identifier(prop)) throw std::invalid_argument("invalid atom name: '" + prop + "'");
  return make(FormulaKind::Atom, std::move(prop), {}, {});
}
Formula Formula::schematic(std::string name) {
  if (!valid_identifier(name))
    throw std::invalid_argument("invalid schematic name: '" + name + "'");
  return make(FormulaKind::Schematic, std::move(name), {}, {});
}
Formula Formula::top() { return make(FormulaKind::Top, {}, {}, {}); }
Formula Formula::neg(Formula f) { return make(FormulaKind::Neg, {}, {}, {std::move(f)}); }
Formula Formula::conj(Formula a, Formula b) {
  return make(FormulaKind::And, {}, {}, {std::move(a), std::move(b)});
}
Formula Formula::disj(Formula a, Formula b) {
  return make(FormulaKind::Or, {}, {}, {std::move(a), std::move(b)});
}
Formula Formula::imp(Formula a, Formula b) {
  return make(FormulaKind::Imp, {}, {}, {std::move(a), std::move(b)});
}
Formula Formula::iff(Formula a, Formula b) {
  return make(FormulaKind::Iff, {}, {}, {std::move(a), std::move(b)});
}
Formula Formula::know(AgentId agent, Formula f) {
  AgentGroup g({std::move(agent)});
  return make(FormulaKind::Know, {}, g.members(), {std::move(f)});
}
Formula Formula::ev_know(AgentGroup group, Formula f) {
  return make(FormulaKind::EvKnow, {}, group.members(), {std::move(f)});
}
Formula Formula::dist_know(AgentGroup group, Formula f) {
  return make(FormulaKind::DistKnow, {}, group.members(), {std::move(f)});
}
Formula Formula::common_know(AgentGroup group, Formula f) {
  return make(FormulaKind::CommonKnow, {}, group.members(), {std::move(f)});
}
Formula Formula::rck(AgentGroup group, Formula antecedent, Formula consequent) {
  return make(FormulaKind::Rck, {}, group.members(),
              {std::move(antecedent), std::move(consequent)});
}
Formula Formula::announce(Formula announced, Formula body) {
  return make(FormulaKind::Announce, {}, {}, {std::move(announced), std::move(body)});
}

FormulaKind Formula::kind() const { return node_->kind; }

const std::string& Formula::name() const { return node_->name; }

AgentGroup Formula::group() const { return AgentGroup(node_->group); }

int Formula::arity() const { return static_cast<int>(node_->children.size()); }

const Formula& Formula::child(int i) const { return node_->children.at(static_cast<size_t>(i)); }

std::size_t Formula::size() const {
  std::size_t n = 1;
  for (const auto& c : node_->children) n += c.size();
  return n;
}

int Formula::depth() const {
  int d = 0;
  for (const auto& c : node_->children) d = std::max(d, c.depth());
  return d + 1;
}

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  const FormulaNode& a = *node_;
  const FormulaNode& b = *other.node_;
  if (a.kind != b.kind || a.name != b.name || a.group != b.group ||
      a.children.size() != b.children.size())
    return false;
  for (size_t i = 0; i < a.children.size(); ++i)
    if (a.children[i] != b.children[i]) return false;
  return true;
}

namespace {
void collect(const Formula& f, std::set<std::string>& atoms, std::set<std::string>& schems,
             std::set<std::string>& agents) {
  switch (f.kind()) {
    case FormulaKind::Atom: atoms.insert(f.name()); break;
    case FormulaKind::Schematic: schems.insert(f.name()); break;
    default: break;
  }
  if (f.kind() == FormulaKind::Know || f.kind() == FormulaKind::EvKnow ||
      f.kind() == FormulaKind::DistKnow || f.kind() == FormulaKind::CommonKnow ||
      f.kind() == FormulaKind::Rck) {
    for (const auto& a : f.node()->group) agents.insert(a);
  }
  for (int i = 0; i < f.arity(); ++i) collect(f.child(i), atoms, schems, agents);
}
}  // namespace

std::vector<std::string> Formula::atoms() const {
  std::set<std::string> a, s, g;
  collect(*this, a, s, g);
  return {a.begin(), a.end()};
}
std::vector<std::string> Formula::schematics() const {
  std::set<std::string> a, s, g;
  collect(*this, a, s, g);
  return {s.begin(), s.end()};
}
std::vector<AgentId> Formula::agents() const {
  std::set<std::string> a, s, g;
  collect(*this, a, s, g);
  return {g.begin(), g.end()};
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

std::string join_expected(const std::vector<std::string>& expected) {
  std::string out;
  for (size_t i = 0; i < expected.size(); ++i) {
    if (i > 0) out += (i + 1 == expected.size()) ? " or " : ", ";
    out += expected[i];
  }
  return out;
}

}  // namespace

ParseError::ParseError(std::size_t offset_1based, std::vector<std::string> expected_tokens,
                       const std::string& message)
    : std::runtime_error(message), offset(offset_1based), expected(std::move(expected_tokens)) {}

namespace {

enum class Tok {
  Ident, Schematic, Top,
  LBrace, RBrace, LParen, RParen, LBracket, RBracket,
  Bang, Tilde, Amp, Pipe, Arrow, IffArrow, Comma,
  End,
};

struct Token {
  Tok type;
  std::string text;
  size_t offset;  // 0-based byte offset
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  size_t i = 0;
  auto fail = [&](size_t at, const std::string& what) {
    throw ParseError(at + 1, {},
                     "syntax error at byte " + std::to_string(at + 1) + ": " + what);
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
    size_t at = i;
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      std::string word(src.substr(i, j - i));
      out.push_back({word == "top" ? Tok::Top : Tok::Ident, std::move(word), at});
      i = j;
      continue;
    }
    if (c == '?') {
      size_t j = i + 1;
      if (j >= src.size() || !std::isalpha(static_cast<unsigned char>(src[j])))
        fail(at, "expected identifier after '?'");
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      out.push_back({Tok::Schematic, std::string(src.substr(i + 1, j - i - 1)), at});
      i = j;
      continue;
    }
    if (src.compare(i, 3, "<->") == 0) { out.push_back({Tok::IffArrow, "<->", at}); i += 3; continue; }
    if (src.compare(i, 2, "->") == 0) { out.push_back({Tok::Arrow, "->", at}); i += 2; continue; }
    switch (c) {
      case '{': out.push_back({Tok::LBrace, "{", at}); break;
      case '}': out.push_back({Tok::RBrace, "}", at}); break;
      case '(': out.push_back({Tok::LParen, "(", at}); break;
      case ')': out.push_back({Tok::RParen, ")", at}); break;
      case '[': out.push_back({Tok::LBracket, "[", at}); break;
      case ']': out.push_back({Tok::RBracket, "]", at}); break;
      case '!': out.push_back({Tok::Bang, "!", at}); break;
      case '~': out.push_back({Tok::Tilde, "~", at}); break;
      case '&': out.push_back({Tok::Amp, "&", at}); break;
      case '|': out.push_back({Tok::Pipe, "|", at}); break;
      case ',': out.push_back({Tok::Comma, ",", at}); break;
      default: fail(at, std::string("unexpected character '") + c + "'");
    }
    ++i;
  }
  out.push_back({Tok::End, "", src.size()});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  Formula parse() {
    Formula f = formula(false);
    expect(Tok::End, "end of input");
    return f;
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;

  const Token& peek(size_t ahead = 0) const {
    size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  Token advance() { return toks_[pos_ == toks_.size() - 1 ? pos_ : pos_++]; }

  [[noreturn]] void unexpected(std::vector<std::string> expected) {
    const Token& t = peek();
    std::string got = t.type == Tok::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(t.offset + 1, expected,
                     "syntax error at byte " + std::to_string(t.offset + 1) + ": expected " +
                         join_expected(expected) + ", found " + got);
  }

  void expect(Tok type, const std::string& shown) {
    if (peek().type != type) unexpected({shown});
    advance();
  }

  // stop_pipe suppresses the or-production's '|' so that the first argument of
  // Cr{G}(phi|psi) ends at the separator; parentheses reset it.
  Formula formula(bool stop_pipe) { return iff(stop_pipe); }

  Formula iff(bool stop_pipe) {
    Formula f = imp(stop_pipe);
    while (peek().type == Tok::IffArrow) {
      advance();
      f = Formula::iff(std::move(f), imp(stop_pipe));
    }
    return f;
  }

  Formula imp(bool stop_pipe) {
    Formula f = or_chain(stop_pipe);
    if (peek().type == Tok::Arrow) {
      advance();
      return Formula::imp(std::move(f), imp(stop_pipe));
    }
    return f;
  }

  Formula or_chain(bool stop_pipe) {
    Formula f = and_chain(stop_pipe);
    while (peek().type == Tok::Pipe && !stop_pipe) {
      advance();
      f = Formula::disj(std::move(f), and_chain(stop_pipe));
    }
    return f;
  }

  Formula and_chain(bool stop_pipe) {
    Formula f = unary(stop_pipe);
    while (peek().type == Tok::Amp) {
      advance();
      f = Formula::conj(std::move(f), unary(stop_pipe));
    }
    return f;
  }

  AgentGroup group() {
    size_t at = peek().offset;
    expect(Tok::LBrace, "'{'");
    std::vector<AgentId> members;
    for (;;) {
      if (peek().type != Tok::Ident) unexpected({"agent name"});
      members.push_back(advance().text);
      if (peek().type == Tok::Comma) { advance(); continue; }
      break;
    }
    expect(Tok::RBrace, "'}'");
    try {
      return AgentGroup(std::move(members));
    } catch (const std::invalid_argument& e) {
      throw ParseError(at + 1, {"distinct agent names"},
                       "syntax error at byte " + std::to_string(at + 1) + ": " + e.what());
    }
  }

  Formula unary(bool stop_pipe) {
    const Token& t = peek();
    switch (t.type) {
      case Tok::Tilde:
        advance();
        return Formula::neg(unary(stop_pipe));
      case Tok::LBracket: {
        advance();
        expect(Tok::Bang, "'!'");
        Formula announced = formula(false);
        expect(Tok::RBracket, "']'");
        return Formula::announce(std::move(announced), unary(stop_pipe));
      }
      case Tok::LParen: {
        advance();
        Formula f = formula(false);
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::Top:
        advance();
        return Formula::top();
      case Tok::Schematic:
        return Formula::schematic(advance().text);
      case Tok::Ident: {
        bool modal = peek(1).type == Tok::LBrace;
        if (modal && t.text == "K") {
          advance();
          AgentGroup g = group();
          if (g.size() != 1) {
            throw ParseError(t.offset + 1, {"single agent"},
                             "syntax error at byte " + std::to_string(t.offset + 1) +
                                 ": K takes exactly one agent");
          }
          return Formula::know(g.members()[0], unary(stop_pipe));
        }
        if (modal && t.text == "E") {
          advance();
          AgentGroup g = group();
          return Formula::ev_know(std::move(g), unary(stop_pipe));
        }
        if (modal && t.text == "D") {
          advance();
          AgentGroup g = group();
          return Formula::dist_know(std::move(g), unary(stop_pipe));
        }
        if (modal && t.text == "C") {
          advance();
          AgentGroup g = group();
          return Formula::common_know(std::move(g), unary(stop_pipe));
        }
        if (modal && t.text == "Cr") {
          advance();
          AgentGroup g = group();
          expect(Tok::LParen, "'('");
          Formula a = formula(true);
          expect(Tok::Pipe, "'|'");
          Formula b = formula(false);
          expect(Tok::RParen, "')'");
          return Formula::rck(std::move(g), std::move(a), std::move(b));
        }
        return Formula::atom(advance().text);
      }
      default:
        unexpected({"'~'", "'K'", "'E'", "'D'", "'C'", "'Cr'", "'['", "'('", "'top'",
                    "identifier"});
    }
  }
};

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(text).parse(); }

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

namespace {

// Looser operators get lower levels; prefix operators bind tighter than any
// binary connective; Cr/atoms/top are self-delimiting.
int prec(FormulaKind k) {
  switch (k) {
    case FormulaKind::Iff: return 0;
    case FormulaKind::Imp: return 1;
    case FormulaKind::Or: return 2;
    case FormulaKind::And: return 3;
    case FormulaKind::Neg:
    case FormulaKind::Know:
    case FormulaKind::EvKnow:
    case FormulaKind::DistKnow:
    case FormulaKind::CommonKnow:
    case FormulaKind::Announce: return 4;
    default: return 5;
  }
}

void print_rec(const Formula& f, std::string& out);

void print_operand(const Formula& f, std::string& out) {
  if (prec(f.kind()) < 4) {
    out += '(';
    print_rec(f, out);
    out += ')';
  } else {
    print_rec(f, out);
  }
}

void print_group(const Formula& f, std::string& out) {
  out += '{';
  const auto& g = f.node()->group;
  for (size_t i = 0; i < g.size(); ++i) {
    if (i) out += ',';
    out += g[i];
  }
  out += '}';
}

void print_binary(const Formula& f, const char* op, bool right_assoc, std::string& out) {
  int p = prec(f.kind());
  const Formula& l = f.child(0);
  const Formula& r = f.child(1);
  bool lp = prec(l.kind()) < p || (prec(l.kind()) == p && right_assoc);
  bool rp = prec(r.kind()) < p || (prec(r.kind()) == p && !right_assoc);
  if (lp) out += '(';
  print_rec(l, out);
  if (lp) out += ')';
  out += op;
  if (rp) out += '(';
  print_rec(r, out);
  if (rp) out += ')';
}

bool has_toplevel_pipe(const std::string& s) {
  int depth = 0;
  for (char c : s) {
    if (c == '(' || c == '[' || c == '{') ++depth;
    else if (c == ')' || c == ']' || c == '}') --depth;
    else if (c == '|' && depth == 0) return true;
  }
  return false;
}

void print_rec(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case FormulaKind::Atom: out += f.name(); return;
    case FormulaKind::Schematic: out += '?'; out += f.name(); return;
    case FormulaKind::Top: out += "top"; return;
    case FormulaKind::Neg: out += '~'; print_operand(f.child(0), out); return;
    case FormulaKind::And: print_binary(f, " & ", false, out); return;
    case FormulaKind::Or: print_binary(f, " | ", false, out); return;
    case FormulaKind::Imp: print_binary(f, " -> ", true, out); return;
    case FormulaKind::Iff: print_binary(f, " <-> ", false, out); return;
    case FormulaKind::Know: out += 'K'; break;
    case FormulaKind::EvKnow: out += 'E'; break;
    case FormulaKind::DistKnow: out += 'D'; break;
    case FormulaKind::CommonKnow: out += 'C'; break;
    case FormulaKind::Rck: {
      out += "Cr";
      print_group(f, out);
      out += '(';
      std::string ant;
      print_rec(f.child(0), ant);
      if (has_toplevel_pipe(ant)) {
        out += '(';
        out += ant;
        out += ')';
      } else {
        out += ant;
      }
      out += '|';
      print_rec(f.child(1), out);
      out += ')';
      return;
    }
    case FormulaKind::Announce:
      out += "[!";
      print_rec(f.child(0), out);
      out += ']';
      print_operand(f.child(1), out);
      return;
  }
  // K/E/D/C share the "OP{group} operand" shape.
  print_group(f, out);
  out += ' ';
  print_operand(f.child(0), out);
}

}  // namespace

std::string print_formula(const Formula& f) {
  std::string out;
  print_rec(f, out);
  return out;
}

std::vector<Formula> subformulas(const Formula& f) {
  std::vector<Formula> out;
  std::unordered_set<std::string> seen;
  // Recursion keyed on the printed form; printing is injective on ASTs since
  // parse(print(f)) == f.
  auto walk = [&](auto&& self, const Formula& g) -> void {
    for (int i = 0; i < g.arity(); ++i) self(self, g.child(i));
    std::string key = print_formula(g);
    if (seen.insert(std::move(key)).second) out.push_back(g);
  };
  walk(walk, f);
  return out;
}

}  // namespace palkit
