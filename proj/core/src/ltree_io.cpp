#include "ltsx/ltree_io.hpp"

#include <cctype>

namespace ltsx {

namespace {

inline bool bare_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
}

class Cursor {
 public:
  explicit Cursor(std::string_view s) : s_(s) {}

  size_t pos() const { return pos_; }
  bool eof() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }
  char take() { return s_[pos_++]; }

  void skip_ws() {
    while (!eof() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

 private:
  std::string_view s_;
  size_t pos_ = 0;
};

std::string read_token(Cursor& c) {
  if (c.eof()) c.fail("expected token");
  if (c.peek() == '"') {
    c.take();
    std::string out;
    while (true) {
      if (c.eof()) c.fail("unterminated quoted token");
      char ch = c.take();
      if (ch == '"') break;
      if (ch == '\\') {
        if (c.eof()) c.fail("dangling escape in quoted token");
        char esc = c.take();
        if (esc != '"' && esc != '\\') c.fail("unknown escape in quoted token");
        out.push_back(esc);
      } else {
        out.push_back(ch);
      }
    }
    if (out.empty()) c.fail("empty quoted token");
    return out;
  }
  std::string out;
  while (!c.eof() && bare_char(c.peek())) out.push_back(c.take());
  if (out.empty()) c.fail("expected token");
  return out;
}

}  // namespace

LabeledTree parse_ltree(std::string_view text) {
  Cursor c(text);
  LabeledTree t;
  std::vector<node_t> stack;

  c.skip_ws();
  if (c.eof()) c.fail("empty document");
  while (true) {
    c.skip_ws();
    if (c.eof()) {
      if (!stack.empty()) c.fail("unbalanced '(': document ended early");
      break;
    }
    char ch = c.peek();
    if (ch == '(') {
      if (stack.empty() && !t.empty()) c.fail("trailing content after root tree");
      c.take();
      c.skip_ws();
      std::string tok = read_token(c);
      node_t parent = stack.empty() ? NO_NODE : stack.back();
      node_t id = t.append_preorder(parent, t.alphabet().intern(tok));
      stack.push_back(id);
    } else if (ch == ')') {
      if (stack.empty()) c.fail("unbalanced ')'");
      c.take();
      stack.pop_back();
    } else {
      c.fail("expected '(' or ')'");
    }
  }
  if (t.empty()) c.fail("empty document");
  return t;
}

namespace {

bool is_bare(const std::string& tok) {
  if (tok.empty()) return false;
  for (char c : tok)
    if (!bare_char(c)) return false;
  return true;
}

void write_token(std::string& out, const std::string& tok) {
  if (is_bare(tok)) {
    out += tok;
    return;
  }
  out.push_back('"');
  for (char c : tok) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
}

void write_subtree(std::string& out, const LabeledTree& t, node_t v) {
  out.push_back('(');
  write_token(out, t.token(v));
  for (node_t c = t.first_child(v); c != NO_NODE; c = t.next_sibling(c)) {
    out.push_back(' ');
    write_subtree(out, t, c);
  }
  out.push_back(')');
}

}  // namespace

std::string serialize_ltree(const LabeledTree& t) {
  if (t.empty()) throw std::invalid_argument("serialize_ltree: empty tree");
  std::string out;
  // Iterative emit to keep deep paths off the call stack.
  struct Frame {
    node_t v;
    bool entered;
  };
  std::vector<Frame> stack{{0, false}};
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (!f.entered) {
      if (t.parent(f.v) != NO_NODE) out.push_back(' ');
      out.push_back('(');
      write_token(out, t.token(f.v));
      f.entered = true;
      std::vector<node_t> cs;
      for (node_t c = t.first_child(f.v); c != NO_NODE; c = t.next_sibling(c)) cs.push_back(c);
      for (size_t i = cs.size(); i-- > 0;) stack.push_back({cs[i], false});
      if (!cs.empty()) continue;
    }
    out.push_back(')');
    stack.pop_back();
  }
  return out;
}

}  // namespace ltsx
