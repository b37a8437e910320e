#include <cctype>

#include "ltsx/ltree_io.hpp"

namespace ltsx {

namespace {

inline bool name_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':';
}
inline bool name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == ':' ||
         c == '-' || c == '.';
}

}  // namespace

LabeledTree parse_xml_skeleton(std::string_view s) {
  LabeledTree t;
  std::vector<std::pair<node_t, std::string>> open;  // (node, tag)
  size_t i = 0;
  const size_t n = s.size();
  auto fail = [&](const std::string& msg, size_t at) -> void { throw ParseError(msg, at); };
  auto expect = [&](bool cond, const std::string& msg, size_t at) {
    if (!cond) fail(msg, at);
  };

  while (i < n) {
    if (s[i] != '<') {
      // Text content: meaningful only inside an element; stray non-space
      // text outside the root is rejected.
      if (!std::isspace(static_cast<unsigned char>(s[i])) && open.empty())
        fail("text outside of root element", i);
      ++i;
      continue;
    }
    size_t tag_at = i;
    ++i;
    expect(i < n, "dangling '<'", tag_at);

    if (s[i] == '?') {  // processing instruction / XML declaration
      size_t end = s.find("?>", i);
      expect(end != std::string_view::npos, "unterminated processing instruction", tag_at);
      i = end + 2;
      continue;
    }
    if (s.compare(i, 3, "!--") == 0) {  // comment
      size_t end = s.find("-->", i + 3);
      expect(end != std::string_view::npos, "unterminated comment", tag_at);
      i = end + 3;
      continue;
    }
    if (s.compare(i, 8, "![CDATA[") == 0) {
      size_t end = s.find("]]>", i + 8);
      expect(end != std::string_view::npos, "unterminated CDATA section", tag_at);
      expect(!open.empty(), "CDATA outside of root element", tag_at);
      i = end + 3;
      continue;
    }
    if (s[i] == '!') {  // DOCTYPE and friends: skip to matching '>'
      int depth = 1;    // the '<' that got us here is already consumed
      while (i < n) {
        if (s[i] == '<') ++depth;
        if (s[i] == '>') {
          if (--depth == 0) break;
        }
        ++i;
      }
      expect(i < n, "unterminated '<!' declaration", tag_at);
      ++i;
      continue;
    }

    bool closing = false;
    if (s[i] == '/') {
      closing = true;
      ++i;
    }
    expect(i < n && name_start(s[i]), "expected tag name", i);
    size_t name_begin = i;
    while (i < n && name_char(s[i])) ++i;
    std::string tag(s.substr(name_begin, i - name_begin));

    if (closing) {
      while (i < n && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
      expect(i < n && s[i] == '>', "malformed closing tag", i);
      ++i;
      expect(!open.empty(), "closing tag without an open element", tag_at);
      if (open.back().second != tag)
        fail("mismatched closing tag </" + tag + ">, expected </" + open.back().second + ">",
             tag_at);
      open.pop_back();
      continue;
    }

    // Opening or self-closing tag; skip attributes (quote-aware).
    bool self_close = false;
    while (i < n) {
      char c = s[i];
      if (c == '"' || c == '\'') {
        size_t end = s.find(c, i + 1);
        expect(end != std::string_view::npos, "unterminated attribute value", i);
        i = end + 1;
        continue;
      }
      if (c == '/' && i + 1 < n && s[i + 1] == '>') {
        self_close = true;
        i += 2;
        break;
      }
      if (c == '>') {
        ++i;
        break;
      }
      expect(c != '<', "'<' inside tag", i);
      ++i;
    }
    expect(self_close || (i <= n && i > 0 && s[i - 1] == '>'), "unterminated tag", tag_at);

    if (open.empty() && !t.empty()) fail("multiple root elements", tag_at);
    node_t parent = open.empty() ? NO_NODE : open.back().first;
    node_t id = t.append_preorder(parent, t.alphabet().intern(tag));
    if (!self_close) open.emplace_back(id, tag);
  }

  if (!open.empty()) fail("unclosed element <" + open.back().second + ">", n);
  if (t.empty()) fail("no root element found", n);
  return t;
}

}  // namespace ltsx
