#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace wildfire::toml {

/// Minimal TOML reader covering the subset the pipeline config uses:
/// [tables], [[arrays of tables]], dotted keys, strings, integers,
/// floats, booleans, and (possibly multiline) arrays. No datetimes or
/// inline tables.
class Value;
using Table = std::map<std::string, Value>;
using Array = std::vector<Value>;

class Value {
 public:
  Value() : data_(std::monostate{}) {}
  explicit Value(std::string v) : data_(std::move(v)) {}
  explicit Value(std::int64_t v) : data_(v) {}
  explicit Value(double v) : data_(v) {}
  explicit Value(bool v) : data_(v) {}
  explicit Value(Array v) : data_(std::move(v)) {}
  explicit Value(Table v) : data_(std::make_shared<Table>(std::move(v))) {}

  bool is_string() const { return std::holds_alternative<std::string>(data_); }
  bool is_integer() const { return std::holds_alternative<std::int64_t>(data_); }
  bool is_float() const { return std::holds_alternative<double>(data_); }
  bool is_bool() const { return std::holds_alternative<bool>(data_); }
  bool is_array() const { return std::holds_alternative<Array>(data_); }
  bool is_table() const {
    return std::holds_alternative<std::shared_ptr<Table>>(data_);
  }

  const std::string& as_string() const;
  std::int64_t as_integer() const;
  /// Accepts both integer and float tokens.
  double as_double() const;
  bool as_bool() const;
  const Array& as_array() const;
  const Table& as_table() const;
  Table& mutable_table();

 private:
  std::variant<std::monostate, std::string, std::int64_t, double, bool, Array,
               std::shared_ptr<Table>>
      data_;
};

Table parse(std::istream& in);
Table parse_string(const std::string& text);

/// Dotted-path lookup ("a.b.c"); nullptr when absent.
const Value* find(const Table& table, const std::string& path);

}  // namespace wildfire::toml
