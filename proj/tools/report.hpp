#pragma once

#include <charconv>
#include <cmath>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace sqz::report {

// Ordered JSON-like tree with locale-independent 17-digit numbers.
class Value {
public:
    using Object = std::vector<std::pair<std::string, Value>>;
    using Array = std::vector<Value>;

    Value() = default;
    Value(double v) : v_(v) {}
    Value(int v) : v_(static_cast<long long>(v)) {}
    Value(long v) : v_(static_cast<long long>(v)) {}
    Value(long long v) : v_(v) {}
    Value(bool v) : v_(v) {}
    Value(const char* s) : v_(std::string(s)) {}
    Value(std::string s) : v_(std::move(s)) {}
    Value(std::string_view s) : v_(std::string(s)) {}
    Value(Array a) : v_(std::make_shared<Array>(std::move(a))) {}
    Value(Object o) : v_(std::make_shared<Object>(std::move(o))) {}

    static Value object() { return Value(Object{}); }
    static Value array() { return Value(Array{}); }

    Value& set(const std::string& key, Value v) {
        auto& o = *std::get<std::shared_ptr<Object>>(v_);
        o.emplace_back(key, std::move(v));
        return *this;
    }
    Value& push(Value v) {
        std::get<std::shared_ptr<Array>>(v_)->push_back(std::move(v));
        return *this;
    }
    const Object* as_object() const {
        auto p = std::get_if<std::shared_ptr<Object>>(&v_);
        return p ? p->get() : nullptr;
    }
    const Array* as_array() const {
        auto p = std::get_if<std::shared_ptr<Array>>(&v_);
        return p ? p->get() : nullptr;
    }

    void write_json(std::ostream& os, int indent = 0) const {
        const std::string pad(static_cast<std::size_t>(indent + 2), ' '), end(static_cast<std::size_t>(indent), ' ');
        if (auto o = as_object()) {
            if (o->empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            for (std::size_t i = 0; i < o->size(); ++i) {
                os << pad;
                write_string(os, (*o)[i].first);
                os << ": ";
                (*o)[i].second.write_json(os, indent + 2);
                os << (i + 1 < o->size() ? ",\n" : "\n");
            }
            os << end << "}";
        } else if (auto a = as_array()) {
            if (a->empty()) {
                os << "[]";
                return;
            }
            os << "[\n";
            for (std::size_t i = 0; i < a->size(); ++i) {
                os << pad;
                (*a)[i].write_json(os, indent + 2);
                os << (i + 1 < a->size() ? ",\n" : "\n");
            }
            os << end << "]";
        } else {
            write_scalar(os, true);
        }
    }

    // Scalar as CSV cell.
    void write_cell(std::ostream& os) const { write_scalar(os, false); }

    static std::string number(double v) {
        if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
        char buf[64];
        auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
        return std::string(buf, r.ptr);
    }

private:
    void write_scalar(std::ostream& os, bool json) const {
        std::visit(
            [&](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, std::monostate>) os << (json ? "null" : "");
                else if constexpr (std::is_same_v<T, double>) {
                    if (json && !std::isfinite(x)) os << "null";
                    else os << number(x);
                } else if constexpr (std::is_same_v<T, long long>) os << std::to_string(x);
                else if constexpr (std::is_same_v<T, bool>) os << (x ? "true" : "false");
                else if constexpr (std::is_same_v<T, std::string>) {
                    if (json) write_string(os, x);
                    else os << x;
                }
            },
            v_);
    }
    static void write_string(std::ostream& os, const std::string& s) {
        os << '"';
        for (char c : s) {
            if (c == '"' || c == '\\') os << '\\' << c;
            else if (c == '\n') os << "\\n";
            else os << c;
        }
        os << '"';
    }

    std::variant<std::monostate, double, long long, bool, std::string, std::shared_ptr<Array>, std::shared_ptr<Object>> v_;
};

namespace detail {
inline void flatten(const Value& v, const std::string& prefix, Value::Object& out) {
    if (auto o = v.as_object()) {
        for (const auto& [k, c] : *o) flatten(c, prefix.empty() ? k : prefix + "." + k, out);
    } else if (auto a = v.as_array()) {
        for (std::size_t i = 0; i < a->size(); ++i) flatten((*a)[i], prefix + "." + std::to_string(i), out);
    } else {
        out.emplace_back(prefix, v);
    }
}
} // namespace detail

// Each table prints as one CSV block; the remaining fields follow as key,value lines.
inline void write_csv(std::ostream& os, const Value& v) {
    const Value::Array* tables = nullptr;
    Value::Object rest;
    if (auto o = v.as_object()) {
        for (const auto& [k, c] : *o) {
            if (k == "tables") tables = c.as_array();
            else detail::flatten(c, k, rest);
        }
    } else {
        detail::flatten(v, "", rest);
    }
    bool first = true;
    const Value::Array none;
    for (const auto& t : tables ? *tables : none) {
        const auto* to = t.as_object();
        std::string name;
        const Value::Array* rows = nullptr;
        for (const auto& [k, c] : *to) {
            if (k == "name") {
                std::ostringstream s;
                c.write_cell(s);
                name = s.str();
            }
            if (k == "rows") rows = c.as_array();
        }
        if (!rows || rows->empty()) continue;
        if (!first) os << '\n';
        first = false;
        Value::Object head;
        detail::flatten((*rows)[0], "", head);
        os << "table";
        for (const auto& [k, c] : head) os << ',' << k;
        os << '\n';
        for (const auto& r : *rows) {
            Value::Object flat;
            detail::flatten(r, "", flat);
            os << name;
            for (const auto& [k, c] : flat) {
                os << ',';
                c.write_cell(os);
            }
            os << '\n';
        }
    }
    if (rest.empty()) return;
    if (!first) os << '\n';
    os << "key,value\n";
    for (const auto& [k, c] : rest) {
        os << k << ',';
        c.write_cell(os);
        os << '\n';
    }
}

} // namespace sqz::report
