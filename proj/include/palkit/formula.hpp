#ifndef PALKIT_FORMULA_HPP
#define PALKIT_FORMULA_HPP

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace palkit {

using AgentId = std::string;

/// Non-empty ordered set of agent names, duplicates rejected.
class AgentGroup {
 public:
  explicit AgentGroup(std::vector<AgentId> members);
  const std::vector<AgentId>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool operator==(const AgentGroup& other) const { return members_ == other.members_; }

 private:
  std::vector<AgentId> members_;
};

enum class FormulaKind {
  Atom,        // propositional symbol
  Schematic,   // ?name — denotation variable, only meaningful to the SSE evaluator
  Top,
  Neg,
  And,
  Or,
  Imp,
  Iff,
  Know,        // K{a} f
  EvKnow,      // E{G} f — everyone in G knows
  DistKnow,    // D{G} f — distributed knowledge
  CommonKnow,  // C{G} f — sugar for Cr{G}(top|f), kept distinct for printing
  Rck,         // Cr{G}(antecedent|consequent)
  Announce,    // [!announced] body
};

namespace detail {
struct FormulaNode;
}

/// Immutable formula tree with shared structure; cheap to copy and safe to
/// share across threads.
class Formula {
 public:
  static Formula atom(std::string prop);
  static Formula schematic(std::string name);  // name without the '?' prefix
  static Formula top();
  static Formula neg(Formula f);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula imp(Formula a, Formula b);
  static Formula iff(Formula a, Formula b);
  static Formula know(AgentId agent, Formula f);
  static Formula ev_know(AgentGroup group, Formula f);
  static Formula dist_know(AgentGroup group, Formula f);
  static Formula common_know(AgentGroup group, Formula f);
  static Formula rck(AgentGroup group, Formula antecedent, Formula consequent);
  static Formula announce(Formula announced, Formula body);

  FormulaKind kind() const;
  const std::string& name() const;  // Atom / Schematic only
  AgentGroup group() const;         // modal operators only
  int arity() const;
  const Formula& child(int i) const;

  std::size_t size() const;  // node count, >= 1
  int depth() const;
  bool operator==(const Formula& other) const;
  bool operator!=(const Formula& other) const { return !(*this == other); }

  std::vector<std::string> atoms() const;       // sorted, unique
  std::vector<std::string> schematics() const;  // sorted, unique
  std::vector<AgentId> agents() const;          // sorted, unique

  const detail::FormulaNode* node() const { return node_.get(); }

 private:
  explicit Formula(std::shared_ptr<const detail::FormulaNode> node) : node_(std::move(node)) {}
  static Formula make(FormulaKind kind, std::string name, std::vector<AgentId> group,
                      std::vector<Formula> children);
  std::shared_ptr<const detail::FormulaNode> node_;
};

namespace detail {
struct FormulaNode {
  FormulaKind kind;
  std::string name;               // Atom / Schematic
  std::vector<AgentId> group;     // modal operators
  std::vector<Formula> children;  // 0..2
};
}  // namespace detail

struct ParseError : std::runtime_error {
  ParseError(std::size_t offset_1based, std::vector<std::string> expected_tokens,
             const std::string& message);
  std::size_t offset;                 // 1-based byte offset of the offending input
  std::vector<std::string> expected;  // tokens that would have been accepted
};

/// Parses the ASCII concrete syntax (whitespace-insensitive):
///   formula := iff ; iff := imp ("<->" imp)* ; imp := or ("->" imp)? ;
///   or := and ("|" and)* ; and := unary ("&" unary)*
///   unary := "~" unary | "K" group1 unary | "E" group unary | "D" group unary
///          | "C" group unary | "Cr" group "(" formula "|" formula ")"
///          | "[" "!" formula "]" unary | "(" formula ")" | "top" | IDENT | "?" IDENT
///   group := "{" IDENT ("," IDENT)* "}"
Formula parse_formula(std::string_view text);

/// Minimal-parentheses rendering; parse_formula(print_formula(f)) == f.
std::string print_formula(const Formula& f);

/// Post-order traversal with structural duplicates removed; f itself is last.
std::vector<Formula> subformulas(const Formula& f);

}  // namespace palkit

#endif
