#include <genfn/hash_key.hpp>

#include <functional>

namespace genfn {

HashKey HashKey::of_number(const Value& v) {
    if (v.is_integer()) return HashKey(v.as_integer());
    if (v.is_float()) return HashKey(v.as_float());
    throw TypeError("hash key: not a number");
}

std::size_t HashKey::hash_other() const {
    static_assert(std::is_same_v<std::variant_alternative_t<list_index, decltype(v_)>, List>);
    std::size_t seed = v_.index();
    if (auto* f = std::get_if<FloatKey>(&v_)) return mix(seed, std::hash<std::uint64_t>()(f->bits));
    if (auto* k = std::get_if<ClassVersionKey>(&v_))
        return mix(mix(seed, std::hash<Symbol>()(k->name)), std::hash<std::uint64_t>()(k->version));
    if (auto* l = std::get_if<List>(&v_)) return hash_list(*l);
    return mix(seed, std::hash<std::string>()(std::get<std::string>(v_)));
}

bool operator==(const HashKey& a, const HashKey& b) {
    if (a.v_.index() != b.v_.index()) return false;
    if (auto* i = std::get_if<std::int64_t>(&a.v_)) return *i == *std::get_if<std::int64_t>(&b.v_);
    if (auto* s = std::get_if<Symbol>(&a.v_)) return *s == *std::get_if<Symbol>(&b.v_);
    return a.v_ == b.v_;
}

std::size_t HashKey::hash_list(std::span<const HashKey> parts) {
    std::size_t seed = list_index;
    if (parts.size() == 1) return mix(seed, parts.front().hash());
    for (const auto& item : parts) seed = mix(seed, item.hash());
    return seed;
}

std::string HashKey::describe() const {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Symbol>) {
                return std::string(x.name());
            } else if constexpr (std::is_same_v<T, std::int64_t>) {
                return std::to_string(x);
            } else if constexpr (std::is_same_v<T, FloatKey>) {
                return std::to_string(std::bit_cast<double>(x.bits));
            } else if constexpr (std::is_same_v<T, std::string>) {
                return "\"" + x + "\"";
            } else if constexpr (std::is_same_v<T, ClassVersionKey>) {
                return "(" + std::string(x.name.name()) + " " + std::to_string(x.version) + ")";
            } else {
                std::string out = "(";
                for (std::size_t i = 0; i < x.size(); ++i) {
                    if (i) out += ' ';
                    out += x[i].describe();
                }
                return out + ")";
            }
        },
        v_);
}

} // namespace genfn
