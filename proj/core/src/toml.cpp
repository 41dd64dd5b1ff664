#include "wildfire/toml.hpp"

#include <cctype>
#include <charconv>
#include <istream>
#include <sstream>
#include <variant>

#include "wildfire/error.hpp"

namespace wildfire::toml {

namespace {

[[noreturn]] void fail(int line, const std::string& message) {
  throw Error(ErrorCode::ConfigError,
              "toml line " + std::to_string(line) + ": " + message);
}

}  // namespace

const std::string& Value::as_string() const {
  if (!is_string()) throw Error(ErrorCode::ConfigError, "expected a string value");
  return std::get<std::string>(data_);
}

std::int64_t Value::as_integer() const {
  if (!is_integer()) throw Error(ErrorCode::ConfigError, "expected an integer value");
  return std::get<std::int64_t>(data_);
}

double Value::as_double() const {
  if (is_integer()) return double(std::get<std::int64_t>(data_));
  if (!is_float()) throw Error(ErrorCode::ConfigError, "expected a number value");
  return std::get<double>(data_);
}

bool Value::as_bool() const {
  if (!is_bool()) throw Error(ErrorCode::ConfigError, "expected a boolean value");
  return std::get<bool>(data_);
}

const Array& Value::as_array() const {
  if (!is_array()) throw Error(ErrorCode::ConfigError, "expected an array value");
  return std::get<Array>(data_);
}

const Table& Value::as_table() const {
  if (!is_table()) throw Error(ErrorCode::ConfigError, "expected a table value");
  return *std::get<std::shared_ptr<Table>>(data_);
}

Table& Value::mutable_table() {
  if (!is_table()) throw Error(ErrorCode::ConfigError, "expected a table value");
  return *std::get<std::shared_ptr<Table>>(data_);
}

namespace {

struct Parser {
  std::istream& in;
  int line_no = 0;
  Table root;
  Table* current = nullptr;

  void run() {
    current = &root;
    std::string line;
    std::string pending;
    while (next_logical_line(line)) {
      const std::string trimmed = trim(line);
      if (trimmed.empty() || trimmed[0] == '#') continue;
      if (trimmed[0] == '[')
        open_table(trimmed);
      else
        key_value(trimmed);
    }
  }

  /// Reads one line, joining continuation lines of an unclosed array.
  bool next_logical_line(std::string& out) {
    std::string line;
    if (!std::getline(in, line)) return false;
    ++line_no;
    while (bracket_depth(line) > 0) {
      std::string more;
      if (!std::getline(in, more)) fail(line_no, "unterminated array");
      ++line_no;
      line += ' ';
      line += more;
    }
    out = line;
    return true;
  }

  static int bracket_depth(const std::string& line) {
    int depth = 0;
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (in_string) {
        if (c == '\\' && i + 1 < line.size())
          ++i;
        else if (c == '"')
          in_string = false;
        continue;
      }
      if (c == '"')
        in_string = true;
      else if (c == '#')
        break;
      else if (c == '[')
        ++depth;
      else if (c == ']')
        --depth;
    }
    return depth;
  }

  static std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
  }

  std::vector<std::string> split_key(const std::string& key) {
    std::vector<std::string> parts;
    std::string part;
    std::stringstream ss(key);
    while (std::getline(ss, part, '.')) {
      part = trim(part);
      if (part.empty()) fail(line_no, "empty key segment in '" + key + "'");
      parts.push_back(part);
    }
    if (parts.empty()) fail(line_no, "empty key");
    return parts;
  }

  Table* descend(Table& from, const std::vector<std::string>& parts,
                 std::size_t count) {
    Table* t = &from;
    for (std::size_t i = 0; i < count; ++i) {
      auto it = t->find(parts[i]);
      if (it == t->end())
        it = t->emplace(parts[i], Value(Table{})).first;
      else if (it->second.is_array()) {
        // descend into the last element of an array of tables
        Array& arr = const_cast<Array&>(it->second.as_array());
        if (arr.empty() || !arr.back().is_table())
          fail(line_no, "'" + parts[i] + "' is not a table");
        t = &arr.back().mutable_table();
        continue;
      } else if (!it->second.is_table()) {
        fail(line_no, "'" + parts[i] + "' is not a table");
      }
      t = &it->second.mutable_table();
    }
    return t;
  }

  void open_table(const std::string& header) {
    const bool array_of_tables = header.size() > 1 && header[1] == '[';
    const std::size_t open = array_of_tables ? 2 : 1;
    const std::size_t close = header.find(array_of_tables ? "]]" : "]", open);
    if (close == std::string::npos) fail(line_no, "unterminated table header");
    const std::string rest = trim(header.substr(close + (array_of_tables ? 2 : 1)));
    if (!rest.empty() && rest[0] != '#') fail(line_no, "junk after table header");
    const auto parts = split_key(trim(header.substr(open, close - open)));

    Table* parent = descend(root, parts, parts.size() - 1);
    const std::string& leaf = parts.back();
    if (array_of_tables) {
      auto it = parent->find(leaf);
      if (it == parent->end()) it = parent->emplace(leaf, Value(Array{})).first;
      if (!it->second.is_array()) fail(line_no, "'" + leaf + "' is not an array");
      Array& arr = const_cast<Array&>(it->second.as_array());
      arr.emplace_back(Value(Table{}));
      current = &arr.back().mutable_table();
    } else {
      auto it = parent->find(leaf);
      if (it == parent->end()) it = parent->emplace(leaf, Value(Table{})).first;
      if (!it->second.is_table()) fail(line_no, "'" + leaf + "' is not a table");
      current = &it->second.mutable_table();
    }
  }

  void key_value(const std::string& line) {
    const std::size_t eq = find_equals(line);
    if (eq == std::string::npos) fail(line_no, "expected key = value");
    const auto parts = split_key(trim(line.substr(0, eq)));
    std::size_t pos = eq + 1;
    const Value v = parse_value(line, pos);
    const std::string rest = trim(line.substr(pos));
    if (!rest.empty() && rest[0] != '#') fail(line_no, "junk after value");

    Table* parent = descend(*current, parts, parts.size() - 1);
    if (!parent->emplace(parts.back(), v).second)
      fail(line_no, "duplicate key '" + parts.back() + "'");
  }

  static std::size_t find_equals(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (in_string) {
        if (line[i] == '"') in_string = false;
      } else if (line[i] == '"') {
        in_string = true;
      } else if (line[i] == '=') {
        return i;
      }
    }
    return std::string::npos;
  }

  Value parse_value(const std::string& line, std::size_t& pos) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos])))
      ++pos;
    if (pos >= line.size()) fail(line_no, "missing value");
    const char c = line[pos];
    if (c == '"') return parse_basic_string(line, pos);
    if (c == '[') return parse_array(line, pos);
    return parse_scalar(line, pos);
  }

  Value parse_basic_string(const std::string& line, std::size_t& pos) {
    std::string out;
    ++pos;  // opening quote
    while (pos < line.size() && line[pos] != '"') {
      char c = line[pos];
      if (c == '\\') {
        ++pos;
        if (pos >= line.size()) fail(line_no, "bad escape");
        switch (line[pos]) {
          case 'n': c = '\n'; break;
          case 't': c = '\t'; break;
          case 'r': c = '\r'; break;
          case '\\': c = '\\'; break;
          case '"': c = '"'; break;
          default: fail(line_no, "unsupported escape sequence");
        }
      }
      out.push_back(c);
      ++pos;
    }
    if (pos >= line.size()) fail(line_no, "unterminated string");
    ++pos;  // closing quote
    return Value(out);
  }

  Value parse_array(const std::string& line, std::size_t& pos) {
    Array items;
    ++pos;  // '['
    for (;;) {
      while (pos < line.size() &&
             (std::isspace(static_cast<unsigned char>(line[pos])) || line[pos] == ','))
        ++pos;
      if (pos >= line.size()) fail(line_no, "unterminated array");
      if (line[pos] == ']') {
        ++pos;
        return Value(items);
      }
      items.push_back(parse_value(line, pos));
    }
  }

  Value parse_scalar(const std::string& line, std::size_t& pos) {
    std::size_t end = pos;
    while (end < line.size() && line[end] != ',' && line[end] != ']' &&
           line[end] != '#')
      ++end;
    std::string token = trim(line.substr(pos, end - pos));
    pos = end;
    if (token == "true") return Value(true);
    if (token == "false") return Value(false);
    if (token.empty()) fail(line_no, "empty value");

    const bool looks_float = token.find_first_of(".eE") != std::string::npos &&
                             token.find_first_not_of("+-0123456789.eE") ==
                                 std::string::npos;
    if (!looks_float) {
      std::int64_t iv = 0;
      auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), iv);
      if (ec == std::errc() && p == token.data() + token.size()) return Value(iv);
    }
    double dv = 0.0;
    auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), dv);
    if (ec == std::errc() && p == token.data() + token.size()) return Value(dv);
    fail(line_no, "cannot parse value '" + token + "'");
  }
};

}  // namespace

Table parse(std::istream& in) {
  Parser parser{in};
  parser.run();
  return std::move(parser.root);
}

Table parse_string(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

const Value* find(const Table& table, const std::string& path) {
  const Table* t = &table;
  std::string part;
  std::stringstream ss(path);
  const Value* found = nullptr;
  while (std::getline(ss, part, '.')) {
    if (t == nullptr) return nullptr;
    auto it = t->find(part);
    if (it == t->end()) return nullptr;
    found = &it->second;
    t = found->is_table() ? &found->as_table() : nullptr;
  }
  return found;
}

}  // namespace wildfire::toml
