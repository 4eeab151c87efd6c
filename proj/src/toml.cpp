#include "ivhs/toml.hpp"

#include <cctype>

#include "ivhs/errors.hpp"

namespace ivhs::toml {

Value Value::make_int(std::int64_t v) {
    Value x;
    x.kind_ = Kind::Int;
    x.int_ = v;
    return x;
}
Value Value::make_bool(bool v) {
    Value x;
    x.kind_ = Kind::Bool;
    x.bool_ = v;
    return x;
}
Value Value::make_str(std::string v) {
    Value x;
    x.kind_ = Kind::Str;
    x.str_ = std::move(v);
    return x;
}
Value Value::make_array(std::vector<Value> v) {
    Value x;
    x.kind_ = Kind::Array;
    x.array_ = std::move(v);
    return x;
}
Value Value::make_table() {
    Value x;
    x.kind_ = Kind::Table;
    x.table_ = std::make_shared<Table>();
    return x;
}

std::int64_t Value::as_int() const {
    if (kind_ != Kind::Int) throw ParseError("expected integer value");
    return int_;
}
bool Value::as_bool() const {
    if (kind_ != Kind::Bool) throw ParseError("expected boolean value");
    return bool_;
}
const std::string& Value::as_str() const {
    if (kind_ != Kind::Str) throw ParseError("expected string value");
    return str_;
}
const std::vector<Value>& Value::as_array() const {
    if (kind_ != Kind::Array) throw ParseError("expected array value");
    return array_;
}
const Table& Value::as_table() const {
    if (kind_ != Kind::Table || !table_) throw ParseError("expected table value");
    return *table_;
}
Table& Value::table() {
    if (kind_ != Kind::Table || !table_) throw ParseError("expected table value");
    return *table_;
}
std::vector<Value>& Value::array() {
    if (kind_ != Kind::Array) throw ParseError("expected array value");
    return array_;
}

namespace {

struct Cursor {
    const std::string& s;
    std::size_t i = 0;
    int line = 1;

    bool done() const { return i >= s.size(); }
    char peek() const { return s[i]; }
    char take() {
        char c = s[i++];
        if (c == '\n') ++line;
        return c;
    }
    void skip_spaces() {
        while (!done() && (peek() == ' ' || peek() == '\t')) ++i;
    }
    void skip_ws_comments() {
        while (!done()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
                take();
            } else if (c == '#') {
                while (!done() && peek() != '\n') take();
            } else {
                break;
            }
        }
    }
    [[noreturn]] void fail(const std::string& why) const {
        throw ParseError("TOML line " + std::to_string(line) + ": " + why);
    }
};

bool is_key_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

std::string parse_key(Cursor& c) {
    c.skip_spaces();
    std::string k;
    while (!c.done() && is_key_char(c.peek())) k += c.take();
    if (k.empty()) c.fail("expected key");
    return k;
}

std::vector<std::string> parse_key_path(Cursor& c) {
    std::vector<std::string> path{parse_key(c)};
    c.skip_spaces();
    while (!c.done() && c.peek() == '.') {
        c.take();
        path.push_back(parse_key(c));
        c.skip_spaces();
    }
    return path;
}

Value parse_value(Cursor& c);

Value parse_scalar(Cursor& c) {
    c.skip_spaces();
    if (c.done()) c.fail("expected value");
    char ch = c.peek();
    if (ch == '"') {
        c.take();
        std::string s;
        while (!c.done() && c.peek() != '"') {
            char x = c.take();
            if (x == '\\' && !c.done()) {
                char e = c.take();
                switch (e) {
                    case 'n': s += '\n'; break;
                    case 't': s += '\t'; break;
                    case '"': s += '"'; break;
                    case '\\': s += '\\'; break;
                    default: c.fail("unsupported escape");
                }
            } else if (x == '\n') {
                c.fail("newline in string");
            } else {
                s += x;
            }
        }
        if (c.done()) c.fail("unterminated string");
        c.take();
        return Value::make_str(std::move(s));
    }
    if (ch == '-' || std::isdigit(static_cast<unsigned char>(ch))) {
        bool neg = false;
        if (ch == '-') {
            neg = true;
            c.take();
        }
        if (c.done() || !std::isdigit(static_cast<unsigned char>(c.peek()))) c.fail("expected digits");
        std::int64_t v = 0;
        while (!c.done() && std::isdigit(static_cast<unsigned char>(c.peek()))) {
            v = v * 10 + (c.take() - '0');
            if (v > (1LL << 60)) c.fail("integer too large");
        }
        return Value::make_int(neg ? -v : v);
    }
    if (std::isalpha(static_cast<unsigned char>(ch))) {
        std::string word;
        while (!c.done() && std::isalpha(static_cast<unsigned char>(c.peek()))) word += c.take();
        if (word == "true") return Value::make_bool(true);
        if (word == "false") return Value::make_bool(false);
        c.fail("unknown literal '" + word + "'");
    }
    c.fail("unsupported value syntax");
}

Value parse_value(Cursor& c) {
    c.skip_spaces();
    if (!c.done() && c.peek() == '[') {
        c.take();
        std::vector<Value> items;
        while (true) {
            c.skip_ws_comments();
            if (c.done()) c.fail("unterminated array");
            if (c.peek() == ']') {
                c.take();
                break;
            }
            items.push_back(parse_value(c));
            c.skip_ws_comments();
            if (!c.done() && c.peek() == ',') {
                c.take();
                continue;
            }
            if (!c.done() && c.peek() == ']') {
                c.take();
                break;
            }
            c.fail("expected ',' or ']' in array");
        }
        return Value::make_array(std::move(items));
    }
    return parse_scalar(c);
}

Table* descend(Table& root, const std::vector<std::string>& path, Cursor& c, bool create_leaf_table) {
    Table* t = &root;
    for (std::size_t k = 0; k + (create_leaf_table ? 0 : 1) < path.size(); ++k) {
        const std::string& key = path[k];
        auto it = t->find(key);
        if (it == t->end()) {
            auto [pos, ok] = t->emplace(key, Value::make_table());
            (void)ok;
            t = &pos->second.table();
        } else if (it->second.is_table()) {
            t = &it->second.table();
        } else if (it->second.is_array() && !it->second.as_array().empty() &&
                   it->second.as_array().back().is_table()) {
            t = &it->second.array().back().table();
        } else {
            c.fail("key '" + key + "' is not a table");
        }
    }
    return t;
}

}  // namespace

Table parse(const std::string& text) {
    Cursor c{text};
    Table root;
    Table* current = &root;
    while (true) {
        c.skip_ws_comments();
        if (c.done()) break;
        if (c.peek() == '[') {
            c.take();
            bool is_array = false;
            if (!c.done() && c.peek() == '[') {
                c.take();
                is_array = true;
            }
            auto path = parse_key_path(c);
            c.skip_spaces();
            if (c.done() || c.peek() != ']') c.fail("expected ']'");
            c.take();
            if (is_array) {
                if (c.done() || c.peek() != ']') c.fail("expected ']]'");
                c.take();
            }
            Table* parent = descend(root, path, c, false);
            const std::string& leaf = path.back();
            if (is_array) {
                auto it = parent->find(leaf);
                if (it == parent->end()) {
                    auto [pos, ok] = parent->emplace(leaf, Value::make_array({}));
                    (void)ok;
                    it = pos;
                }
                if (!it->second.is_array()) c.fail("key '" + leaf + "' is not an array of tables");
                it->second.array().push_back(Value::make_table());
                current = &it->second.array().back().table();
            } else {
                auto it = parent->find(leaf);
                if (it == parent->end()) {
                    auto [pos, ok] = parent->emplace(leaf, Value::make_table());
                    (void)ok;
                    it = pos;
                }
                if (!it->second.is_table()) c.fail("key '" + leaf + "' is not a table");
                current = &it->second.table();
            }
            continue;
        }
        auto path = parse_key_path(c);
        c.skip_spaces();
        if (c.done() || c.peek() != '=') c.fail("expected '='");
        c.take();
        Value v = parse_value(c);
        Table* target = current;
        if (path.size() > 1) {
            // dotted key: descend inside the current table
            Table* t = target;
            for (std::size_t k = 0; k + 1 < path.size(); ++k) {
                auto it = t->find(path[k]);
                if (it == t->end()) {
                    auto [pos, ok] = t->emplace(path[k], Value::make_table());
                    (void)ok;
                    t = &pos->second.table();
                } else if (it->second.is_table()) {
                    t = &it->second.table();
                } else {
                    c.fail("key '" + path[k] + "' is not a table");
                }
            }
            target = t;
        }
        if (target->count(path.back())) c.fail("duplicate key '" + path.back() + "'");
        target->emplace(path.back(), std::move(v));
        c.skip_spaces();
        if (!c.done() && c.peek() == '#')
            while (!c.done() && c.peek() != '\n') c.take();
        if (!c.done() && c.peek() != '\n' && c.peek() != '\r') c.fail("trailing characters after value");
    }
    return root;
}

bool has(const Table& t, const std::string& key) { return t.count(key) > 0; }

std::int64_t get_int(const Table& t, const std::string& key, std::int64_t fallback) {
    auto it = t.find(key);
    return it == t.end() ? fallback : it->second.as_int();
}
std::int64_t require_int(const Table& t, const std::string& key) {
    auto it = t.find(key);
    if (it == t.end()) throw ParseError("missing required key '" + key + "'");
    return it->second.as_int();
}
std::string get_str(const Table& t, const std::string& key, const std::string& fallback) {
    auto it = t.find(key);
    return it == t.end() ? fallback : it->second.as_str();
}
std::string require_str(const Table& t, const std::string& key) {
    auto it = t.find(key);
    if (it == t.end()) throw ParseError("missing required key '" + key + "'");
    return it->second.as_str();
}
bool get_bool(const Table& t, const std::string& key, bool fallback) {
    auto it = t.find(key);
    return it == t.end() ? fallback : it->second.as_bool();
}
std::vector<std::string> get_str_array(const Table& t, const std::string& key) {
    std::vector<std::string> out;
    auto it = t.find(key);
    if (it == t.end()) return out;
    for (auto& v : it->second.as_array()) out.push_back(v.as_str());
    return out;
}
std::vector<std::int64_t> get_int_array(const Table& t, const std::string& key) {
    std::vector<std::int64_t> out;
    auto it = t.find(key);
    if (it == t.end()) return out;
    for (auto& v : it->second.as_array()) out.push_back(v.as_int());
    return out;
}
std::vector<Table> get_table_array(const Table& t, const std::string& key) {
    std::vector<Table> out;
    auto it = t.find(key);
    if (it == t.end()) return out;
    for (auto& v : it->second.as_array()) out.push_back(v.as_table());
    return out;
}
const Table* get_table(const Table& t, const std::string& key) {
    auto it = t.find(key);
    if (it == t.end()) return nullptr;
    return &it->second.as_table();
}

}  // namespace ivhs::toml
