#include "lstar/formula.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "lstar/error.hpp"

namespace lstar {

namespace {

bool is_atom_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

// Operands of a slash are printed bare only when they are primaries.
std::string operand_text(const Formula& f) {
  if (f.is(Formula::Kind::Under) || f.is(Formula::Kind::Over)) return "(" + f.text() + ")";
  return f.text();
}

std::string render(Formula::Kind kind, const std::string& name,
                   const std::vector<Formula>& children) {
  switch (kind) {
    case Formula::Kind::Atom:
      return name;
    case Formula::Kind::Unit:
      return "()";
    case Formula::Kind::Bang:
      return "!" + operand_text(children[0]);
    case Formula::Kind::Under:
      return operand_text(children[0]) + "\\" + operand_text(children[1]);
    case Formula::Kind::Over:
      return operand_text(children[0]) + "/" + operand_text(children[1]);
    case Formula::Kind::Product: {
      // Right-nested products print as one flat tuple.
      std::string out = "(" + children[0].text();
      const Formula* rest = &children[1];
      while (rest->is(Formula::Kind::Product)) {
        out += ", " + rest->left().text();
        rest = &rest->right();
      }
      return out + ", " + rest->text() + ")";
    }
  }
  return {};
}

class Parser {
 public:
  explicit Parser(std::string_view text, std::size_t offset = 0)
      : text_(text), offset_(offset) {}

  Formula parse_all() {
    skip_space();
    if (pos_ >= text_.size()) fail("empty formula");
    Formula f = formula();
    skip_space();
    if (pos_ < text_.size()) {
      if (text_[pos_] == ')') fail("unbalanced ')'");
      fail(std::string("unexpected '") + text_[pos_] + "'");
    }
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, offset_ + pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_space();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  // formula := operand (('\' | '/') operand)?
  Formula formula() {
    Formula lhs = operand();
    skip_space();
    if (pos_ < text_.size() && (text_[pos_] == '\\' || text_[pos_] == '/')) {
      char op = text_[pos_++];
      skip_space();
      if (pos_ >= text_.size() || text_[pos_] == ')' || text_[pos_] == ',')
        fail(std::string("dangling '") + op + "'");
      Formula rhs = operand();
      skip_space();
      if (pos_ < text_.size() && (text_[pos_] == '\\' || text_[pos_] == '/'))
        fail("ambiguous slash nesting; parenthesize");
      return op == '\\' ? Formula::under(lhs, rhs) : Formula::over(lhs, rhs);
    }
    return lhs;
  }

  // operand := '!' operand | atom | '(' ')' | '(' formula (',' formula)* ')'
  Formula operand() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '!') {
      ++pos_;
      skip_space();
      if (pos_ >= text_.size() || text_[pos_] == ')' || text_[pos_] == ',' ||
          text_[pos_] == '\\' || text_[pos_] == '/')
        fail("empty '!' body");
      return Formula::bang(operand());
    }
    if (c == '(') {
      std::size_t open = pos_++;
      if (peek(')')) {
        ++pos_;
        return Formula::unit();
      }
      std::vector<Formula> items{formula()};
      while (peek(',')) {
        ++pos_;
        items.push_back(formula());
      }
      if (!peek(')')) {
        if (pos_ >= text_.size()) {
          pos_ = open;
          fail("unbalanced '('");
        }
        fail(std::string("expected ')' but found '") + text_[pos_] + "'");
      }
      ++pos_;
      Formula out = items.back();
      for (std::size_t i = items.size() - 1; i-- > 0;) out = Formula::product(items[i], out);
      return out;
    }
    if (is_atom_char(c)) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && is_atom_char(text_[pos_])) ++pos_;
      return Formula::atom(std::string(text_.substr(start, pos_ - start)));
    }
    if (c == ')') fail("unbalanced ')'");
    if (c == '\\' || c == '/') fail(std::string("dangling '") + c + "'");
    fail(std::string("unexpected '") + c + "'");
  }

  std::string_view text_;
  std::size_t offset_;
  std::size_t pos_ = 0;
};

void collect_atoms(const Formula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
      out.insert(f.name());
      break;
    case Formula::Kind::Unit:
      break;
    case Formula::Kind::Bang:
      collect_atoms(f.body(), out);
      break;
    default:
      collect_atoms(f.left(), out);
      collect_atoms(f.right(), out);
  }
}

}  // namespace

Formula Formula::make(Kind kind, std::string name, std::vector<Formula> children) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  node->size = kind == Kind::Atom || kind == Kind::Unit ? 0 : 1;
  for (const auto& c : children) node->size += c.size();
  node->text = render(kind, name, children);
  node->name = std::move(name);
  node->children = std::move(children);
  return Formula(std::move(node));
}

Formula Formula::atom(std::string name) {
  if (!valid_atom_name(name)) throw ParseError("invalid atom name '" + name + "'", 0);
  return make(Kind::Atom, std::move(name), {});
}

Formula Formula::unit() {
  static const Formula u = make(Kind::Unit, {}, {});
  return u;
}

Formula Formula::product(const Formula& left, const Formula& right) {
  if (left.is(Kind::Unit)) return right;
  if (right.is(Kind::Unit)) return left;
  if (left.is(Kind::Product)) return product(left.left(), product(left.right(), right));
  return make(Kind::Product, {}, {left, right});
}

Formula Formula::under(const Formula& left, const Formula& right) {
  return make(Kind::Under, {}, {left, right});
}

Formula Formula::over(const Formula& left, const Formula& right) {
  return make(Kind::Over, {}, {left, right});
}

Formula Formula::bang(const Formula& body) { return make(Kind::Bang, {}, {body}); }

const std::string& Formula::name() const { return node_->name; }
const Formula& Formula::left() const { return node_->children.at(0); }
const Formula& Formula::right() const { return node_->children.at(1); }
const Formula& Formula::body() const { return node_->children.at(0); }

const Formula& Formula::argument() const { return is(Kind::Under) ? left() : right(); }
const Formula& Formula::result() const { return is(Kind::Under) ? right() : left(); }

std::string Sequent::text() const {
  std::string out;
  for (std::size_t i = 0; i < antecedent.size(); ++i) {
    if (i) out += ", ";
    out += antecedent[i].text();
  }
  return out.empty() ? "=> " + succedent.text() : out + " => " + succedent.text();
}

bool Sequent::operator==(const Sequent& other) const {
  return succedent == other.succedent && antecedent == other.antecedent;
}

Formula parse_formula(std::string_view text) { return Parser(text).parse_all(); }

std::string print_formula(const Formula& f) { return f.text(); }

Sequent parse_sequent(std::string_view text) {
  static constexpr std::string_view kTurnstile = "\xE2\x8A\xA2";  // U+22A2
  std::size_t turn = std::string_view::npos;
  std::size_t turn_len = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    std::size_t len = 0;
    if (text.compare(i, 2, "=>") == 0) len = 2;
    else if (text.compare(i, kTurnstile.size(), kTurnstile) == 0) len = kTurnstile.size();
    if (len == 0) continue;
    if (turn != std::string_view::npos) throw ParseError("more than one turnstile", i);
    turn = i;
    turn_len = len;
    i += len - 1;
  }
  if (turn == std::string_view::npos) throw ParseError("missing turnstile '=>'", text.size());

  Sequent s{{}, Formula::unit()};
  std::string_view lhs = text.substr(0, turn);
  bool blank = std::all_of(lhs.begin(), lhs.end(),
                           [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
  if (!blank) {
    std::size_t start = 0;
    int depth = 0;
    for (std::size_t i = 0; i <= lhs.size(); ++i) {
      if (i < lhs.size()) {
        if (lhs[i] == '(') ++depth;
        if (lhs[i] == ')') --depth;
        if (lhs[i] != ',' || depth != 0) continue;
      }
      std::string_view item = lhs.substr(start, i - start);
      Formula f = Parser(item, start).parse_all();
      if (!f.is(Formula::Kind::Unit)) s.antecedent.push_back(f);
      start = i + 1;
    }
  }
  s.succedent = Parser(text.substr(turn + turn_len), turn + turn_len).parse_all();
  return s;
}

bool valid_atom_name(std::string_view name) {
  return !name.empty() && std::all_of(name.begin(), name.end(), is_atom_char);
}

std::vector<std::string> atoms_of(const Formula& f) {
  std::set<std::string> out;
  collect_atoms(f, out);
  return {out.begin(), out.end()};
}

bool contains_bang(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Bang:
      return true;
    case Formula::Kind::Atom:
    case Formula::Kind::Unit:
      return false;
    default:
      return contains_bang(f.left()) || contains_bang(f.right());
  }
}

}  // namespace lstar
