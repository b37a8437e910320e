#pragma once

#include <string>
#include <string_view>

#include "ltsx/labeled_tree.hpp"

namespace ltsx {

// Parse/format error carrying a 0-based byte offset into the input.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, size_t offset)
      : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}
  size_t offset() const { return offset_; }

 private:
  size_t offset_;
};

// S-expression tree text:  tree := '(' token tree* ')'.  Tokens are either
// bare [A-Za-z0-9_.-]+ or double-quoted strings ("\\" and "\"" escapes);
// any other byte sequence inside quotes passes through verbatim (UTF-8 ok).
LabeledTree parse_ltree(std::string_view text);

// Inverse of parse_ltree: "(a (b) (a (c)))" style, single spaces, tokens
// quoted only when they are not bare-safe.  parse(serialize(t)) == t.
std::string serialize_ltree(const LabeledTree& t);

// Element skeleton of an XML document: element tags become labels, nesting
// becomes the tree; text, attributes, comments, PIs and DOCTYPE are dropped.
// Requires a single root element; mismatched tags raise ParseError.
LabeledTree parse_xml_skeleton(std::string_view text);

}  // namespace ltsx
