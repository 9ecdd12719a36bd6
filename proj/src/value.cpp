#include <genfn/value.hpp>

#include <algorithm>
#include <bit>
#include <cctype>
#include <unordered_set>

namespace genfn {

namespace {

std::string lowercase(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](unsigned char x, unsigned char y) {
               return std::tolower(x) == std::tolower(y);
           });
}

std::unordered_set<std::string>& symbol_table() {
    static std::unordered_set<std::string> table;
    return table;
}

[[noreturn, gnu::cold, gnu::noinline]] void throw_not_real(const char* op) {
    throw TypeError(std::string(op) + ": argument is not a real");
}

inline void require_real(const Value& v, const char* op) {
    if (!v.is_real()) throw_not_real(op);
}

} // namespace

Symbol intern(std::string_view name) {
    auto [it, inserted] = symbol_table().insert(lowercase(name));
    return Symbol(&*it);
}

void Value::wrong_kind(Kind expected) const {
    static constexpr const char* names[] = {"nil", "symbol", "integer", "float", "string", "cons", "instance", "request"};
    throw TypeError(std::string("expected ") + names[static_cast<int>(expected)] + ", got " +
                    names[static_cast<int>(kind_)]);
}

Value Value::string(std::string text) {
    return Value(Kind::string, std::make_shared<const std::string>(std::move(text)));
}

Value Instance::slot(Symbol name) const {
    for (const auto& [k, v] : slots)
        if (k == name) return v;
    return Nil{};
}

void Instance::set_slot(Symbol name, Value value) {
    for (auto& [k, v] : slots) {
        if (k == name) {
            v = std::move(value);
            return;
        }
    }
    slots.emplace_back(name, std::move(value));
}

std::optional<std::string_view> Request::header(std::string_view name) const {
    for (const auto& [k, v] : headers)
        if (iequals(k, name)) return std::string_view(v);
    return std::nullopt;
}

std::string Request::accept() const {
    auto h = header("accept");
    return h ? std::string(*h) : std::string("*/*");
}

Value cons(Value car, Value cdr) {
    return Value(std::make_shared<const Cons>(Cons{std::move(car), std::move(cdr)}));
}

Value list(std::initializer_list<Value> items) {
    Value out;
    for (auto it = std::rbegin(items); it != std::rend(items); ++it) out = cons(*it, out);
    return out;
}

Value list_from(const std::vector<Value>& items) {
    Value out;
    for (auto it = items.rbegin(); it != items.rend(); ++it) out = cons(*it, out);
    return out;
}

Value make_request(Request request) {
    return Value(std::make_shared<const Request>(std::move(request)));
}

Value make_instance(ClassRef klass, std::vector<std::pair<Symbol, Value>> slots) {
    return Value(std::make_shared<Instance>(Instance{klass, std::move(slots)}));
}

std::vector<Value> list_elements(const Value& list) {
    std::vector<Value> out;
    for (const Value* p = &list; p->is_cons(); p = &cdr(*p)) out.push_back(car(*p));
    return out;
}

bool is_proper_list(const Value& v) {
    const Value* p = &v;
    while (p->is_cons()) p = &cdr(*p);
    return p->is_nil();
}

bool eql(const Value& a, const Value& b) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
    case Value::Kind::nil:
        return true;
    case Value::Kind::symbol:
        return a.as_symbol() == b.as_symbol();
    case Value::Kind::integer:
        return a.as_integer() == b.as_integer();
    case Value::Kind::real:
        // eql on floats distinguishes -0.0 from 0.0 and treats a NaN as eql to itself.
        return std::bit_cast<std::uint64_t>(a.as_float()) == std::bit_cast<std::uint64_t>(b.as_float());
    default:
        return a.object_identity() == b.object_identity();
    }
}

bool equal(const Value& a, const Value& b) {
    if (a.is_string() && b.is_string()) return a.as_string() == b.as_string();
    if (a.is_cons() && b.is_cons())
        return equal(car(a), car(b)) && equal(cdr(a), cdr(b));
    return eql(a, b);
}

bool numeric_equal(const Value& a, const Value& b) {
    require_real(a, "=");
    require_real(b, "=");
    if (a.is_integer() && b.is_integer()) return a.as_integer() == b.as_integer();
    return a.as_double() == b.as_double();
}

bool numeric_less(const Value& a, const Value& b) {
    require_real(a, "<");
    require_real(b, "<");
    if (a.is_integer() && b.is_integer()) return a.as_integer() < b.as_integer();
    return a.as_double() < b.as_double();
}

Value multiply(const Value& a, const Value& b) {
    require_real(a, "*");
    require_real(b, "*");
    if (a.is_integer() && b.is_integer()) return Value(a.as_integer() * b.as_integer());
    return Value(a.as_double() * b.as_double());
}

Value subtract(const Value& a, const Value& b) {
    require_real(a, "-");
    require_real(b, "-");
    if (a.is_integer() && b.is_integer()) return Value(a.as_integer() - b.as_integer());
    return Value(a.as_double() - b.as_double());
}

Value signum(const Value& x) {
    require_real(x, "signum");
    if (x.is_integer()) {
        auto i = x.as_integer();
        return Value(std::int64_t{(i > 0) - (i < 0)});
    }
    double d = x.as_float();
    if (d > 0) return Value(1.0);
    if (d < 0) return Value(-1.0);
    return Value(d); // preserves -0.0 and NaN
}

} // namespace genfn
