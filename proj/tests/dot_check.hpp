#pragma once

// Recursive-descent check of a DOT document against the undirected subset of
// the Graphviz grammar:
//   graph    : [strict] graph [ID] '{' stmt_list '}'
//   stmt     : node_stmt | edge_stmt | attr_stmt | ID '=' ID
//   attr_list: '[' [a_list] ']' [attr_list]
// IDs are identifiers, numerals or double-quoted strings.

#include <cctype>
#include <optional>
#include <string>

namespace dotcheck {

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  /// Empty string when the document parses, else a message with the offset.
  std::string run() {
    try {
      ws();
      if (peek_word("strict")) word();
      if (word() != "graph") return fail("expected 'graph'");
      ws();
      if (!at('{')) id();
      expect('{');
      stmt_list();
      expect('}');
      ws();
      if (pos_ != s_.size()) return fail("trailing input");
    } catch (const std::string& e) {
      return e;
    }
    return "";
  }

  std::size_t edges() const { return edges_; }
  std::size_t nodes() const { return nodes_; }

 private:
  std::string fail(const std::string& why) const { return why + " at offset " + std::to_string(pos_); }
  [[noreturn]] void die(const std::string& why) const { throw fail(why); }

  void ws() {
    while (pos_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[pos_]))) {
        ++pos_;
      } else if (s_.compare(pos_, 2, "//") == 0) {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }
  bool at(char c) {
    ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  void expect(char c) {
    if (!at(c)) die(std::string("expected '") + c + "'");
    ++pos_;
  }
  bool peek_word(const std::string& w) {
    ws();
    return s_.compare(pos_, w.size(), w) == 0;
  }
  std::string word() {
    ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    return s_.substr(start, pos_ - start);
  }
  std::string id() {
    ws();
    if (pos_ >= s_.size()) die("expected ID");
    const char c = s_[pos_];
    if (c == '"') {
      ++pos_;
      std::string out;
      while (pos_ < s_.size() && s_[pos_] != '"') {
        if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
        out += s_[pos_++];
      }
      if (pos_ >= s_.size()) die("unterminated string");
      ++pos_;
      return out;
    }
    if (c == '-' || c == '.' || std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      if (c == '-') ++pos_;
      bool digit = false;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) {
        digit = digit || s_[pos_] != '.';
        ++pos_;
      }
      if (!digit) die("bad numeral");
      return s_.substr(start, pos_ - start);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return word();
    die("expected ID");
  }
  void attr_list() {
    while (at('[')) {
      ++pos_;
      while (!at(']')) {
        id();
        expect('=');
        id();
        if (at(',') || at(';')) ++pos_;
      }
      ++pos_;
    }
  }
  void stmt_list() {
    while (!at('}')) {
      if (pos_ >= s_.size()) die("unexpected end");
      stmt();
      if (at(';')) ++pos_;
    }
  }
  void stmt() {
    if (peek_word("node") || peek_word("edge") || peek_word("graph")) {
      const std::size_t save = pos_;
      const std::string w = word();
      if (at('[')) {
        attr_list();
        return;
      }
      pos_ = save;
      (void)w;
    }
    id();
    if (at('=')) {
      ++pos_;
      id();
      return;
    }
    if (s_.compare(pos_, 2, "--") == 0) {
      while (true) {
        ws();
        if (s_.compare(pos_, 2, "--") != 0) break;
        pos_ += 2;
        id();
        ++edges_;
      }
      attr_list();
      return;
    }
    if (s_.compare(pos_, 2, "->") == 0) die("directed edge in undirected graph");
    attr_list();
    ++nodes_;
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  std::size_t edges_ = 0;
  std::size_t nodes_ = 0;
};

}  // namespace dotcheck
