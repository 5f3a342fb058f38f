#pragma once

#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pnpl/errors.hpp"

namespace pnpl {

// Total truth assignment: feature name -> value. Domain must equal the
// declared feature set of the governing feature model.
using Assignment = std::map<std::string, bool>;

enum class FormulaKind : std::uint8_t { True, False, Var, Not, And, Or, Implies, Iff };

// Immutable propositional formula over named features. Copies share structure;
// all operations are pure, so formulas can be read from any number of threads.
class Formula {
 public:
  Formula() : node_(true_node()) {}

  static Formula truth() { return Formula(true_node()); }
  static Formula falsity() { return Formula(false_node()); }
  static Formula constant(bool v) { return v ? truth() : falsity(); }

  static Formula var(std::string name) {
    return Formula(std::make_shared<const Node>(
        Node{FormulaKind::Var, std::move(name), nullptr, nullptr}));
  }
  static Formula negation(const Formula& f) { return make(FormulaKind::Not, f.node_, nullptr); }
  static Formula conjunction(const Formula& a, const Formula& b) {
    return make(FormulaKind::And, a.node_, b.node_);
  }
  static Formula disjunction(const Formula& a, const Formula& b) {
    return make(FormulaKind::Or, a.node_, b.node_);
  }
  static Formula implication(const Formula& a, const Formula& b) {
    return make(FormulaKind::Implies, a.node_, b.node_);
  }
  static Formula biconditional(const Formula& a, const Formula& b) {
    return make(FormulaKind::Iff, a.node_, b.node_);
  }

  Formula operator!() const { return negation(*this); }
  Formula operator&&(const Formula& other) const { return conjunction(*this, other); }
  Formula operator||(const Formula& other) const { return disjunction(*this, other); }

  // Conjunction with the shallow simplifications needed for readable
  // annotations: flattens nested conjunctions, drops `true`, deduplicates
  // structurally equal conjuncts, and collapses to `false` on any `false`
  // conjunct. Result is a left-leaning chain in first-occurrence order.
  static Formula conjoin_all(std::span<const Formula> parts) {
    std::vector<Formula> kept;
    bool contradiction = false;
    for (const Formula& part : parts) {
      flatten_conjunct(part, kept, contradiction);
      if (contradiction) return falsity();
    }
    if (kept.empty()) return truth();
    Formula acc = kept.front();
    for (std::size_t i = 1; i < kept.size(); ++i) acc = conjunction(acc, kept[i]);
    return acc;
  }
  static Formula conjoin(const Formula& a, const Formula& b) {
    const Formula parts[] = {a, b};
    return conjoin_all(parts);
  }

  // Dual of conjoin_all.
  static Formula disjoin_all(std::span<const Formula> parts) {
    std::vector<Formula> kept;
    bool tautology = false;
    for (const Formula& part : parts) {
      flatten_disjunct(part, kept, tautology);
      if (tautology) return truth();
    }
    if (kept.empty()) return falsity();
    Formula acc = kept.front();
    for (std::size_t i = 1; i < kept.size(); ++i) acc = disjunction(acc, kept[i]);
    return acc;
  }

  FormulaKind kind() const { return node_->kind; }
  bool is_true() const { return node_->kind == FormulaKind::True; }
  bool is_false() const { return node_->kind == FormulaKind::False; }
  bool is_constant() const { return is_true() || is_false(); }

  const std::string& var_name() const { return node_->name; }
  Formula lhs() const { return Formula(node_->a); }
  Formula rhs() const { return Formula(node_->b); }

  bool evaluate(const Assignment& a) const { return eval(node_.get(), a); }

  void collect_variables(std::set<std::string>& out) const { collect(node_.get(), out); }
  std::set<std::string> variables() const {
    std::set<std::string> out;
    collect_variables(out);
    return out;
  }

  std::string to_string() const {
    std::string out;
    print(node_.get(), 0, out);
    return out;
  }

  friend bool operator==(const Formula& x, const Formula& y) {
    return structurally_equal(x.node_.get(), y.node_.get());
  }
  friend bool operator!=(const Formula& x, const Formula& y) { return !(x == y); }

 private:
  struct Node {
    FormulaKind kind;
    std::string name;                // Var only
    std::shared_ptr<const Node> a;   // unary/binary operand
    std::shared_ptr<const Node> b;   // second binary operand
  };
  using NodePtr = std::shared_ptr<const Node>;

  explicit Formula(NodePtr n) : node_(std::move(n)) {}

  static Formula make(FormulaKind kind, NodePtr a, NodePtr b) {
    return Formula(std::make_shared<const Node>(Node{kind, {}, std::move(a), std::move(b)}));
  }

  static const NodePtr& true_node() {
    static const NodePtr n = std::make_shared<const Node>(Node{FormulaKind::True, {}, nullptr, nullptr});
    return n;
  }
  static const NodePtr& false_node() {
    static const NodePtr n = std::make_shared<const Node>(Node{FormulaKind::False, {}, nullptr, nullptr});
    return n;
  }

  static bool structurally_equal(const Node* x, const Node* y) {
    if (x == y) return true;
    if (x->kind != y->kind) return false;
    switch (x->kind) {
      case FormulaKind::True:
      case FormulaKind::False:
        return true;
      case FormulaKind::Var:
        return x->name == y->name;
      case FormulaKind::Not:
        return structurally_equal(x->a.get(), y->a.get());
      default:
        return structurally_equal(x->a.get(), y->a.get()) &&
               structurally_equal(x->b.get(), y->b.get());
    }
  }

  static void flatten_conjunct(const Formula& f, std::vector<Formula>& kept, bool& contradiction) {
    if (f.is_true()) return;
    if (f.is_false()) {
      contradiction = true;
      return;
    }
    if (f.kind() == FormulaKind::And) {
      flatten_conjunct(f.lhs(), kept, contradiction);
      if (!contradiction) flatten_conjunct(f.rhs(), kept, contradiction);
      return;
    }
    for (const Formula& seen : kept)
      if (seen == f) return;
    kept.push_back(f);
  }

  static void flatten_disjunct(const Formula& f, std::vector<Formula>& kept, bool& tautology) {
    if (f.is_false()) return;
    if (f.is_true()) {
      tautology = true;
      return;
    }
    if (f.kind() == FormulaKind::Or) {
      flatten_disjunct(f.lhs(), kept, tautology);
      if (!tautology) flatten_disjunct(f.rhs(), kept, tautology);
      return;
    }
    for (const Formula& seen : kept)
      if (seen == f) return;
    kept.push_back(f);
  }

  static bool eval(const Node* n, const Assignment& a) {
    switch (n->kind) {
      case FormulaKind::True:
        return true;
      case FormulaKind::False:
        return false;
      case FormulaKind::Var: {
        auto it = a.find(n->name);
        if (it == a.end()) throw Error("assignment does not cover feature: " + n->name);
        return it->second;
      }
      case FormulaKind::Not:
        return !eval(n->a.get(), a);
      case FormulaKind::And:
        return eval(n->a.get(), a) && eval(n->b.get(), a);
      case FormulaKind::Or:
        return eval(n->a.get(), a) || eval(n->b.get(), a);
      case FormulaKind::Implies:
        return !eval(n->a.get(), a) || eval(n->b.get(), a);
      case FormulaKind::Iff:
        return eval(n->a.get(), a) == eval(n->b.get(), a);
    }
    return false;
  }

  static void collect(const Node* n, std::set<std::string>& out) {
    switch (n->kind) {
      case FormulaKind::Var:
        out.insert(n->name);
        return;
      case FormulaKind::Not:
        collect(n->a.get(), out);
        return;
      case FormulaKind::And:
      case FormulaKind::Or:
      case FormulaKind::Implies:
      case FormulaKind::Iff:
        collect(n->a.get(), out);
        collect(n->b.get(), out);
        return;
      default:
        return;
    }
  }

  // Precedence, loosest to tightest: <-> (0), -> (1), | (2), & (3), ! (4).
  // & and | print as left-associative chains; -> and <-> are right-associative.
  static int precedence(FormulaKind k) {
    switch (k) {
      case FormulaKind::Iff:
        return 0;
      case FormulaKind::Implies:
        return 1;
      case FormulaKind::Or:
        return 2;
      case FormulaKind::And:
        return 3;
      case FormulaKind::Not:
        return 4;
      default:
        return 5;
    }
  }

  static void print(const Node* n, int min_prec, std::string& out) {
    const int prec = precedence(n->kind);
    const bool parens = prec < min_prec;
    if (parens) out += '(';
    switch (n->kind) {
      case FormulaKind::True:
        out += "true";
        break;
      case FormulaKind::False:
        out += "false";
        break;
      case FormulaKind::Var:
        out += n->name;
        break;
      case FormulaKind::Not:
        out += '!';
        print(n->a.get(), 4, out);
        break;
      case FormulaKind::And:
        print(n->a.get(), 3, out);
        out += " & ";
        print(n->b.get(), 4, out);
        break;
      case FormulaKind::Or:
        print(n->a.get(), 2, out);
        out += " | ";
        print(n->b.get(), 3, out);
        break;
      case FormulaKind::Implies:
        print(n->a.get(), 2, out);
        out += " -> ";
        print(n->b.get(), 1, out);
        break;
      case FormulaKind::Iff:
        print(n->a.get(), 1, out);
        out += " <-> ";
        print(n->b.get(), 0, out);
        break;
    }
    if (parens) out += ')';
  }

  friend std::optional<bool> eval_partial(const Formula&, const Assignment&);

  NodePtr node_;
};

namespace detail {

class FormulaLexer {
 public:
  enum class Tok { End, LParen, RParen, Not, And, Or, Implies, Iff, True, False, Ident };

  explicit FormulaLexer(std::string_view text) : text_(text) { advance(); }

  Tok tok() const { return tok_; }
  const std::string& ident() const { return ident_; }
  int column() const { return static_cast<int>(tok_start_) + 1; }

  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    tok_start_ = pos_;
    if (pos_ >= text_.size()) {
      tok_ = Tok::End;
      return;
    }
    const char c = text_[pos_];
    switch (c) {
      case '(':
        ++pos_;
        tok_ = Tok::LParen;
        return;
      case ')':
        ++pos_;
        tok_ = Tok::RParen;
        return;
      case '!':
        ++pos_;
        tok_ = Tok::Not;
        return;
      case '&':
        ++pos_;
        tok_ = Tok::And;
        return;
      case '|':
        ++pos_;
        tok_ = Tok::Or;
        return;
      case '-':
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
          pos_ += 2;
          tok_ = Tok::Implies;
          return;
        }
        throw ParseError("expected '->'", 1, column());
      case '<':
        if (text_.substr(pos_, 3) == "<->") {
          pos_ += 3;
          tok_ = Tok::Iff;
          return;
        }
        throw ParseError("expected '<->'", 1, column());
      default:
        break;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
        ++end;
      ident_.assign(text_.substr(pos_, end - pos_));
      pos_ = end;
      if (ident_ == "true") {
        tok_ = Tok::True;
      } else if (ident_ == "false") {
        tok_ = Tok::False;
      } else {
        tok_ = Tok::Ident;
      }
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", 1, column());
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t tok_start_ = 0;
  Tok tok_ = Tok::End;
  std::string ident_;
};

class FormulaParser {
 public:
  FormulaParser(std::string_view text, const std::set<std::string>& features)
      : lex_(text), features_(features) {}

  Formula parse() {
    Formula f = parse_iff();
    if (lex_.tok() != FormulaLexer::Tok::End)
      throw ParseError("unexpected trailing input", 1, lex_.column());
    return f;
  }

 private:
  using Tok = FormulaLexer::Tok;

  Formula parse_iff() {
    Formula lhs = parse_implies();
    if (lex_.tok() == Tok::Iff) {
      lex_.advance();
      return Formula::biconditional(lhs, parse_iff());
    }
    return lhs;
  }

  Formula parse_implies() {
    Formula lhs = parse_or();
    if (lex_.tok() == Tok::Implies) {
      lex_.advance();
      return Formula::implication(lhs, parse_implies());
    }
    return lhs;
  }

  Formula parse_or() {
    Formula acc = parse_and();
    while (lex_.tok() == Tok::Or) {
      lex_.advance();
      acc = Formula::disjunction(acc, parse_and());
    }
    return acc;
  }

  Formula parse_and() {
    Formula acc = parse_unary();
    while (lex_.tok() == Tok::And) {
      lex_.advance();
      acc = Formula::conjunction(acc, parse_unary());
    }
    return acc;
  }

  Formula parse_unary() {
    if (lex_.tok() == Tok::Not) {
      lex_.advance();
      return Formula::negation(parse_unary());
    }
    return parse_primary();
  }

  Formula parse_primary() {
    switch (lex_.tok()) {
      case Tok::True:
        lex_.advance();
        return Formula::truth();
      case Tok::False:
        lex_.advance();
        return Formula::falsity();
      case Tok::Ident: {
        const std::string name = lex_.ident();
        const int col = lex_.column();
        if (!features_.contains(name)) throw UndeclaredFeatureError(name, 1, col);
        lex_.advance();
        return Formula::var(name);
      }
      case Tok::LParen: {
        lex_.advance();
        Formula inner = parse_iff();
        if (lex_.tok() != Tok::RParen) throw ParseError("expected ')'", 1, lex_.column());
        lex_.advance();
        return inner;
      }
      default:
        throw ParseError("expected formula", 1, lex_.column());
    }
  }

  FormulaLexer lex_;
  const std::set<std::string>& features_;
};

}  // namespace detail

// Parses the ASCII formula grammar: `!` not, `&` and, `|` or, `->` implies
// (right-associative), `<->` iff (right-associative), constants `true` and
// `false`, parentheses, identifiers [A-Za-z_][A-Za-z0-9_]*. Every identifier
// must be a declared feature.
inline Formula parse_formula(std::string_view text, const std::set<std::string>& features) {
  return detail::FormulaParser(text, features).parse();
}

// Three-valued evaluation under a partial assignment; nullopt = undetermined.
inline std::optional<bool> eval_partial(const Formula& f, const Assignment& partial) {
  using K = FormulaKind;
  switch (f.kind()) {
    case K::True:
      return true;
    case K::False:
      return false;
    case K::Var: {
      auto it = partial.find(f.var_name());
      if (it == partial.end()) return std::nullopt;
      return it->second;
    }
    case K::Not: {
      auto v = eval_partial(f.lhs(), partial);
      if (!v) return std::nullopt;
      return !*v;
    }
    case K::And: {
      auto a = eval_partial(f.lhs(), partial);
      if (a && !*a) return false;
      auto b = eval_partial(f.rhs(), partial);
      if (b && !*b) return false;
      if (a && b) return true;
      return std::nullopt;
    }
    case K::Or: {
      auto a = eval_partial(f.lhs(), partial);
      if (a && *a) return true;
      auto b = eval_partial(f.rhs(), partial);
      if (b && *b) return true;
      if (a && b) return false;
      return std::nullopt;
    }
    case K::Implies: {
      auto a = eval_partial(f.lhs(), partial);
      if (a && !*a) return true;
      auto b = eval_partial(f.rhs(), partial);
      if (b && *b) return true;
      if (a && b) return *b;  // a is true here
      return std::nullopt;
    }
    case K::Iff: {
      auto a = eval_partial(f.lhs(), partial);
      auto b = eval_partial(f.rhs(), partial);
      if (a && b) return *a == *b;
      return std::nullopt;
    }
  }
  return std::nullopt;
}

// Satisfiability by variable branching with early three-valued pruning.
// Independent of the configuration-set machinery; used as a cross-check and
// as a drop-in decision procedure for formulas outside any feature model.
inline bool satisfiable_by_branching(const Formula& f) {
  const std::set<std::string> var_set = f.variables();
  const std::vector<std::string> vars(var_set.begin(), var_set.end());
  Assignment partial;

  const auto recurse = [&](const auto& self, std::size_t depth) -> bool {
    if (auto v = eval_partial(f, partial)) return *v;
    // eval_partial returned nullopt, so some variable is still unassigned
    const std::string& var = vars[depth];
    for (bool value : {false, true}) {
      partial[var] = value;
      if (self(self, depth + 1)) return true;
      partial.erase(var);
    }
    return false;
  };
  return recurse(recurse, 0);
}

}  // namespace pnpl
