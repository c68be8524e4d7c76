/*
 * Copyright 2026 The Sentinel Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include "sentinel/pipeline/toml.h"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "sentinel/core/error.h"

namespace sentinel::pipeline {

using nlohmann::json;

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  json Parse() {
    json root = json::object();
    json* table = &root;
    while (true) {
      SkipBlankAndComments();
      if (AtEnd()) break;
      if (Peek() == '[') {
        table = ParseHeader(root);
      } else {
        ParseKeyValue(*table);
      }
      ExpectLineEnd();
    }
    return root;
  }

 private:
  [[noreturn]] void Fail(const std::string& why) const { throw ParseError(line_, why); }

  bool AtEnd() const { return pos_ >= text_.size(); }
  char Peek() const { return AtEnd() ? '\0' : text_[pos_]; }
  char Next() {
    const char c = text_[pos_++];
    if (c == '\n') ++line_;
    return c;
  }

  void SkipSpaces() {
    while (!AtEnd() && (Peek() == ' ' || Peek() == '\t')) ++pos_;
  }

  void SkipComment() {
    if (Peek() == '#') {
      while (!AtEnd() && Peek() != '\n') ++pos_;
    }
  }

  // Whitespace, newlines and comments, as allowed between statements and
  // inside arrays.
  void SkipBlankAndComments() {
    while (!AtEnd()) {
      const char c = Peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        Next();
      } else if (c == '#') {
        SkipComment();
      } else {
        break;
      }
    }
  }

  void ExpectLineEnd() {
    SkipSpaces();
    SkipComment();
    if (Peek() == '\r') ++pos_;
    if (AtEnd()) return;
    if (Peek() != '\n') Fail(std::string("unexpected '") + Peek() + "' after value");
    Next();
  }

  std::vector<std::string> ParseKeyPath() {
    std::vector<std::string> path;
    while (true) {
      SkipSpaces();
      path.push_back(ParseKeyPart());
      SkipSpaces();
      if (Peek() != '.') break;
      ++pos_;
    }
    return path;
  }

  std::string ParseKeyPart() {
    if (Peek() == '"') return ParseBasicString();
    if (Peek() == '\'') return ParseLiteralString();
    std::string key;
    while (!AtEnd()) {
      const char c = Peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') {
        key += c;
        ++pos_;
      } else {
        break;
      }
    }
    if (key.empty()) Fail("expected a key");
    return key;
  }

  json* Descend(json& from, const std::vector<std::string>& path, std::size_t count) {
    json* node = &from;
    for (std::size_t i = 0; i < count; ++i) {
      json& child = (*node)[path[i]];
      if (child.is_null()) child = json::object();
      if (child.is_array()) {
        if (child.empty() || !child.back().is_object()) Fail("key '" + path[i] + "' is not a table");
        node = &child.back();
      } else if (child.is_object()) {
        node = &child;
      } else {
        Fail("key '" + path[i] + "' is not a table");
      }
    }
    return node;
  }

  json* ParseHeader(json& root) {
    ++pos_;
    const bool array = Peek() == '[';
    if (array) ++pos_;
    auto path = ParseKeyPath();
    if (Peek() != ']') Fail("expected ']'");
    ++pos_;
    if (array) {
      if (Peek() != ']') Fail("expected ']]'");
      ++pos_;
    }
    json* parent = Descend(root, path, path.size() - 1);
    json& target = (*parent)[path.back()];
    if (array) {
      if (target.is_null()) target = json::array();
      if (!target.is_array()) Fail("'" + path.back() + "' is not an array of tables");
      target.push_back(json::object());
      return &target.back();
    }
    if (target.is_null()) target = json::object();
    if (!target.is_object()) Fail("'" + path.back() + "' is already a value");
    return &target;
  }

  void ParseKeyValue(json& table) {
    auto path = ParseKeyPath();
    SkipSpaces();
    if (Peek() != '=') Fail("expected '=' after key");
    ++pos_;
    SkipSpaces();
    json value = ParseValue();
    json* parent = Descend(table, path, path.size() - 1);
    if (parent->contains(path.back())) Fail("duplicate key '" + path.back() + "'");
    (*parent)[path.back()] = std::move(value);
  }

  json ParseValue() {
    const char c = Peek();
    if (c == '"') return ParseBasicString();
    if (c == '\'') return ParseLiteralString();
    if (c == '[') return ParseArray();
    if (c == '{') return ParseInlineTable();
    if (text_.substr(pos_, 4) == "true") {
      pos_ += 4;
      return true;
    }
    if (text_.substr(pos_, 5) == "false") {
      pos_ += 5;
      return false;
    }
    return ParseNumber();
  }

  std::string ParseBasicString() {
    ++pos_;
    std::string out;
    while (true) {
      if (AtEnd() || Peek() == '\n') Fail("unterminated string");
      char c = text_[pos_++];
      if (c == '"') break;
      if (c != '\\') {
        out += c;
        continue;
      }
      if (AtEnd()) Fail("unterminated escape");
      c = text_[pos_++];
      switch (c) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        default: Fail(std::string("unsupported escape \\") + c);
      }
    }
    return out;
  }

  std::string ParseLiteralString() {
    ++pos_;
    std::string out;
    while (true) {
      if (AtEnd() || Peek() == '\n') Fail("unterminated string");
      const char c = text_[pos_++];
      if (c == '\'') break;
      out += c;
    }
    return out;
  }

  json ParseArray() {
    ++pos_;
    json out = json::array();
    while (true) {
      SkipBlankAndComments();
      if (AtEnd()) Fail("unterminated array");
      if (Peek() == ']') {
        ++pos_;
        return out;
      }
      out.push_back(ParseValue());
      SkipBlankAndComments();
      if (Peek() == ',') {
        ++pos_;
      } else if (Peek() != ']') {
        Fail("expected ',' or ']' in array");
      }
    }
  }

  json ParseInlineTable() {
    ++pos_;
    json out = json::object();
    SkipSpaces();
    if (Peek() == '}') {
      ++pos_;
      return out;
    }
    while (true) {
      SkipSpaces();
      ParseKeyValue(out);
      SkipSpaces();
      if (Peek() == ',') {
        ++pos_;
      } else if (Peek() == '}') {
        ++pos_;
        return out;
      } else {
        Fail("expected ',' or '}' in inline table");
      }
    }
  }

  json ParseNumber() {
    std::string token;
    while (!AtEnd()) {
      const char c = Peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.' ||
          c == '_') {
        if (c != '_') token += c;
        ++pos_;
      } else {
        break;
      }
    }
    if (token.empty()) Fail("expected a value");
    const bool is_float = token.find_first_of(".eE") != std::string::npos &&
                          token.rfind("0x", 0) != 0;
    try {
      std::size_t used = 0;
      if (is_float) {
        const double v = std::stod(token, &used);
        if (used == token.size() && std::isfinite(v)) return v;
      } else {
        const long long v = std::stoll(token, &used, 10);
        if (used == token.size()) return v;
      }
    } catch (const std::exception&) {
    }
    Fail("invalid value '" + token + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

}  // namespace

json ParseToml(std::string_view text) { return Parser(text).Parse(); }

json ParseTomlFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot read config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseToml(buffer.str());
}

}  // namespace sentinel::pipeline
