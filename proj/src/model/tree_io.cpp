//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#include "mpa/model/tree_io.hpp"

#include <algorithm>

namespace mpa {
namespace {

class TreeParser {
 public:
  explicit TreeParser(std::string_view text) : text_(text) {}

  RootedTree parse() {
    skip_ws();
    parse_node(std::nullopt);
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input after tree");
    return RootedTree::validate(candidate_);
  }

 private:
  void parse_node(std::optional<NodeId> parent) {
    expect('(');
    auto id = static_cast<NodeId>(candidate_.labels.size());
    candidate_.labels.push_back(parse_labelset());
    if (parent) candidate_.edges.emplace_back(*parent, id);
    skip_ws();
    while (peek() == '(') {
      parse_node(id);
      skip_ws();
    }
    expect(')');
  }

  LabelSet parse_labelset() {
    skip_ws();
    expect('{');
    LabelSet out;
    skip_ws();
    if (peek() == '}') {
      ++pos_;
      return out;
    }
    while (true) {
      skip_ws();
      auto name = parse_name();
      out = out.with(intern_symbol(name));
      skip_ws();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      expect('}');
      return out;
    }
  }

  std::string parse_name() {
    auto start = pos_;
    auto ident_char = [](char c, bool first) {
      bool alpha = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
      return first ? alpha : alpha || (c >= '0' && c <= '9');
    };
    if (pos_ + 1 < text_.size() && (text_[pos_] == 'x' || text_[pos_] == 'X') &&
        text_[pos_ + 1] == ':')
      pos_ += 2;
    if (pos_ >= text_.size() || !ident_char(text_[pos_], true))
      fail("expected label name");
    while (pos_ < text_.size() && ident_char(text_[pos_], false)) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
            text_[pos_] == '\r'))
      ++pos_;
  }

  [[noreturn]] void fail(const std::string &msg) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw SyntaxError(msg, line, col);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  TreeCandidate candidate_;
};

}  // namespace

RootedTree parse_tree(std::string_view text) { return TreeParser(text).parse(); }

std::string serialize_subtree(const RootedTree &tree, NodeId v) {
  std::vector<std::string> kids;
  for (auto c : tree.children(v)) kids.push_back(serialize_subtree(tree, c));
  std::sort(kids.begin(), kids.end());
  std::string out = "(" + tree.label(v).to_string();
  for (auto &k : kids) out += " " + k;
  return out + ")";
}

std::string serialize_tree(const RootedTree &tree) {
  return serialize_subtree(tree, tree.root());
}

}  // namespace mpa
