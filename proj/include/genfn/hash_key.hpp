#pragma once

#include <genfn/value.hpp>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace genfn {

/// Key contributed by a class generalizer: the class name plus its wrapper version.
struct ClassVersionKey {
    Symbol name;
    std::uint64_t version = 0;
    friend bool operator==(const ClassVersionKey&, const ClassVersionKey&) = default;
};

/// Floats compare by bit pattern so that every key is equal to itself.
struct FloatKey {
    std::uint64_t bits = 0;
    friend bool operator==(const FloatKey&, const FloatKey&) = default;
};

/// Structural cache key. Equality is deep and total; integer 1 and float 1.0
/// are different keys.
class HashKey {
public:
    using List = std::vector<HashKey>;

    /// Placeholder (the invalid symbol); only for filling buffers.
    HashKey() = default;
    HashKey(Symbol s) : v_(s) {}
    HashKey(std::int64_t i) : v_(i) {}
    HashKey(double d) : v_(FloatKey{std::bit_cast<std::uint64_t>(d)}) {}
    HashKey(std::string s) : v_(std::move(s)) {}
    HashKey(ClassVersionKey k) : v_(k) {}
    HashKey(List items) : v_(std::move(items)) {}

    /// Key for a number value; throws TypeError for non-numbers.
    static HashKey of_number(const Value& v);

    bool is_list() const { return std::holds_alternative<List>(v_); }
    const List& as_list() const { return std::get<List>(v_); }

    std::size_t hash() const {
        if (auto* i = std::get_if<std::int64_t>(&v_)) return mix(v_.index(), static_cast<std::size_t>(*i));
        if (auto* s = std::get_if<Symbol>(&v_)) return mix(v_.index(), std::hash<Symbol>()(*s));
        return hash_other();
    }
    /// Equals List(parts).hash() without building the list.
    static std::size_t hash_list(std::span<const HashKey> parts);
    std::string describe() const;

    friend bool operator==(const HashKey& a, const HashKey& b);

private:
    static std::size_t mix(std::size_t seed, std::size_t h) {
        return seed ^ (h + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
    }
    std::size_t hash_other() const;

    static constexpr std::size_t list_index = 5;
    std::variant<Symbol, std::int64_t, FloatKey, std::string, ClassVersionKey, List> v_;
};

/// Hash and equality that also accept a span of keys standing for the list of
/// those keys, so a list key can be probed without allocating it.
struct HashKeyHash {
    using is_transparent = void;
    std::size_t operator()(const HashKey& k) const noexcept { return k.hash(); }
    std::size_t operator()(std::span<const HashKey> parts) const noexcept { return HashKey::hash_list(parts); }
};

struct HashKeyEqual {
    using is_transparent = void;
    bool operator()(const HashKey& a, const HashKey& b) const { return a == b; }
    bool operator()(std::span<const HashKey> parts, const HashKey& k) const { return equal_list(k, parts); }
    bool operator()(const HashKey& k, std::span<const HashKey> parts) const { return equal_list(k, parts); }

private:
    static bool equal_list(const HashKey& k, std::span<const HashKey> parts) {
        return k.is_list() && std::equal(parts.begin(), parts.end(), k.as_list().begin(), k.as_list().end());
    }
};

} // namespace genfn
