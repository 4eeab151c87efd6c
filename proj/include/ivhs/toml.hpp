#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace ivhs::toml {

// Minimal TOML subset used by scenario files: [tables], [[arrays of tables]],
// integers, booleans, quoted strings, single-line arrays, '#' comments.

class Value;
using Table = std::map<std::string, Value>;

class Value {
  public:
    enum class Kind { Int, Bool, Str, Array, Table };

    Value() : kind_(Kind::Int), int_(0) {}
    static Value make_int(std::int64_t v);
    static Value make_bool(bool v);
    static Value make_str(std::string v);
    static Value make_array(std::vector<Value> v);
    static Value make_table();

    Kind kind() const { return kind_; }
    bool is_int() const { return kind_ == Kind::Int; }
    bool is_bool() const { return kind_ == Kind::Bool; }
    bool is_str() const { return kind_ == Kind::Str; }
    bool is_array() const { return kind_ == Kind::Array; }
    bool is_table() const { return kind_ == Kind::Table; }

    std::int64_t as_int() const;
    bool as_bool() const;
    const std::string& as_str() const;
    const std::vector<Value>& as_array() const;
    const Table& as_table() const;
    Table& table();
    std::vector<Value>& array();

  private:
    Kind kind_;
    std::int64_t int_;
    bool bool_ = false;
    std::string str_;
    std::vector<Value> array_;
    std::shared_ptr<Table> table_;
};

Table parse(const std::string& text);

// lookup helpers; all throw ParseError with a readable message on bad types
bool has(const Table& t, const std::string& key);
std::int64_t get_int(const Table& t, const std::string& key, std::int64_t fallback);
std::int64_t require_int(const Table& t, const std::string& key);
std::string get_str(const Table& t, const std::string& key, const std::string& fallback);
std::string require_str(const Table& t, const std::string& key);
bool get_bool(const Table& t, const std::string& key, bool fallback);
std::vector<std::string> get_str_array(const Table& t, const std::string& key);
std::vector<std::int64_t> get_int_array(const Table& t, const std::string& key);
std::vector<Table> get_table_array(const Table& t, const std::string& key);
const Table* get_table(const Table& t, const std::string& key);

}  // namespace ivhs::toml
