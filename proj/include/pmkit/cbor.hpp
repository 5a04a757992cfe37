#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "pmkit/bytes.hpp"

namespace pmkit::cbor {

struct CborError : Error {
    using Error::Error;
};

/// Canonical CBOR value (RFC 8949 core deterministic encoding): integers
/// use the shortest form, lengths are definite, and map keys are ordered
/// by their encoded bytes. Every digest-bearing structure in the repo is
/// encoded through this type so byte-identical round trips hold.
class Value {
public:
    using Array = std::vector<Value>;
    using Map = std::vector<std::pair<Value, Value>>;

    Value() : v_(nullptr) {}
    Value(std::nullptr_t) : v_(nullptr) {}
    Value(bool b) : v_(b) {}
    Value(std::uint64_t u) : v_(u) {}
    Value(int v) : Value(static_cast<std::int64_t>(v)) {}
    Value(std::int64_t v) {
        if (v >= 0) v_ = static_cast<std::uint64_t>(v);
        else v_ = v;
    }
    Value(std::string s) : v_(std::move(s)) {}
    Value(std::string_view s) : v_(std::string(s)) {}
    Value(const char* s) : v_(std::string(s)) {}
    Value(Bytes b) : v_(std::move(b)) {}
    Value(Array a) : v_(std::move(a)) {}
    Value(Map m) : v_(std::move(m)) {}

    static Value bytes(ByteSpan b) { return Value(Bytes(b.begin(), b.end())); }
    static Value array(Array a) { return Value(std::move(a)); }
    static Value map(Map m) { return Value(std::move(m)); }

    [[nodiscard]] bool is_null() const { return std::holds_alternative<std::nullptr_t>(v_); }
    [[nodiscard]] bool is_bool() const { return std::holds_alternative<bool>(v_); }
    [[nodiscard]] bool is_uint() const { return std::holds_alternative<std::uint64_t>(v_); }
    [[nodiscard]] bool is_nint() const { return std::holds_alternative<std::int64_t>(v_); }
    [[nodiscard]] bool is_bytes() const { return std::holds_alternative<Bytes>(v_); }
    [[nodiscard]] bool is_text() const { return std::holds_alternative<std::string>(v_); }
    [[nodiscard]] bool is_array() const { return std::holds_alternative<Array>(v_); }
    [[nodiscard]] bool is_map() const { return std::holds_alternative<Map>(v_); }

    [[nodiscard]] bool as_bool() const { return get<bool>("bool"); }
    [[nodiscard]] std::uint64_t as_uint() const { return get<std::uint64_t>("unsigned"); }
    [[nodiscard]] std::int64_t as_int() const {
        if (is_uint()) return static_cast<std::int64_t>(as_uint());
        return get<std::int64_t>("integer");
    }
    [[nodiscard]] const Bytes& as_bytes() const { return get<Bytes>("byte string"); }
    [[nodiscard]] const std::string& as_text() const { return get<std::string>("text string"); }
    [[nodiscard]] const Array& as_array() const { return get<Array>("array"); }
    [[nodiscard]] const Map& as_map() const { return get<Map>("map"); }

    /// Map lookup by text key; throws CborError when absent.
    [[nodiscard]] const Value& at(std::string_view key) const;
    [[nodiscard]] const Value* find(std::string_view key) const;

    bool operator==(const Value& other) const;

private:
    template <typename T>
    const T& get(const char* what) const {
        if (const T* p = std::get_if<T>(&v_)) return *p;
        throw CborError(std::string("cbor value is not a ") + what);
    }

    std::variant<std::nullptr_t, bool, std::uint64_t, std::int64_t, std::string, Bytes, Array, Map> v_;
};

/// Deterministic encoding; map entries are sorted by encoded key bytes
/// regardless of insertion order.
Bytes encode(const Value& value);

/// Strict decode: definite lengths only, no trailing bytes, minimal-length
/// integer headers required (so encode(decode(b)) == b).
Value decode(ByteSpan data);

} // namespace pmkit::cbor
