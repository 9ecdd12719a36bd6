#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace genfn {

class Class;
using ClassRef = const Class*;

/// Interned, case-folded symbol. Two symbols with the same name are the same
/// object, so comparison is a pointer compare.
class Symbol {
public:
    Symbol() = default;

    std::string_view name() const { return name_ ? std::string_view(*name_) : std::string_view(); }
    bool valid() const { return name_ != nullptr; }
    const void* identity() const { return name_; }

    friend bool operator==(Symbol a, Symbol b) { return a.name_ == b.name_; }

private:
    friend Symbol intern(std::string_view);
    explicit Symbol(const std::string* name) : name_(name) {}

    const std::string* name_ = nullptr;
};

/// Returns the unique symbol named `name` folded to lower case.
Symbol intern(std::string_view name);

class Value;
struct Cons;
struct Instance;
struct Request;

struct Nil {
    friend bool operator==(Nil, Nil) { return true; }
};

/// A dynamically typed datum. Heap alternatives (strings, conses, instances,
/// requests) are shared handles, so copying a Value never copies the object
/// and identity (`eql`) is preserved across copies.
class Value {
public:
    /// Discriminator, in the order class_of dispatches on it.
    enum class Kind : std::uint8_t { nil, symbol, integer, real, string, cons, instance, request };

    Value() noexcept { scalar_.integer = 0; }
    Value(Nil) noexcept : Value() {}
    Value(Symbol s) noexcept : kind_(Kind::symbol) { scalar_.symbol = s; }
    Value(std::int64_t i) noexcept : kind_(Kind::integer) { scalar_.integer = i; }
    Value(int i) noexcept : Value(static_cast<std::int64_t>(i)) {}
    Value(double d) noexcept : kind_(Kind::real) { scalar_.real = d; }
    Value(std::shared_ptr<const Cons> c) : Value(Kind::cons, std::move(c)) {}
    Value(std::shared_ptr<Instance> i) : Value(Kind::instance, std::move(i)) {}
    Value(std::shared_ptr<const Request> r) : Value(Kind::request, std::move(r)) {}

    static Value string(std::string text);

    Kind kind() const { return kind_; }
    bool is_nil() const { return kind_ == Kind::nil; }
    bool is_symbol() const { return kind_ == Kind::symbol; }
    bool is_integer() const { return kind_ == Kind::integer; }
    bool is_float() const { return kind_ == Kind::real; }
    bool is_real() const { return is_integer() || is_float(); }
    bool is_string() const { return kind_ == Kind::string; }
    bool is_cons() const { return kind_ == Kind::cons; }
    bool is_instance() const { return kind_ == Kind::instance; }
    bool is_request() const { return kind_ == Kind::request; }
    /// Lisp truthiness: everything but nil.
    explicit operator bool() const { return !is_nil(); }

    // The accessors throw TypeError when the value is of another kind.
    Symbol as_symbol() const { return expect(Kind::symbol).scalar_.symbol; }
    std::int64_t as_integer() const { return expect(Kind::integer).scalar_.integer; }
    double as_float() const { return expect(Kind::real).scalar_.real; }
    double as_double() const { return is_integer() ? static_cast<double>(as_integer()) : as_float(); }
    const std::string& as_string() const { return heap<std::string>(Kind::string); }
    const Cons& as_cons() const { return heap<Cons>(Kind::cons); }
    Instance& as_instance() const { return const_cast<Instance&>(heap<Instance>(Kind::instance)); }
    const Request& as_request() const { return heap<Request>(Kind::request); }

    /// Address of the shared object for heap kinds, null otherwise.
    const void* object_identity() const { return object_.get(); }

private:
    Value(Kind kind, std::shared_ptr<const void> object) : kind_(kind), object_(std::move(object)) {
        scalar_.integer = 0;
    }

    const Value& expect(Kind expected) const {
        if (kind_ != expected) wrong_kind(expected);
        return *this;
    }
    [[noreturn]] void wrong_kind(Kind expected) const;
    template <class T>
    const T& heap(Kind expected) const {
        return *static_cast<const T*>(expect(expected).object_.get());
    }

    union Scalar {
        Symbol symbol;
        std::int64_t integer;
        double real;
        Scalar() : integer(0) {}
    };

    Kind kind_ = Kind::nil;
    Scalar scalar_;
    std::shared_ptr<const void> object_;
};

struct Cons {
    Value car;
    Value cdr;
};

/// Instance of a user-defined class. Slots are mutable through the handle.
struct Instance {
    ClassRef klass = nullptr;
    std::vector<std::pair<Symbol, Value>> slots;

    Value slot(Symbol name) const;
    void set_slot(Symbol name, Value value);
};

/// Minimal HTTP request. Header names compare case-insensitively.
struct Request {
    std::string method;
    std::string path;
    std::vector<std::pair<std::string, std::string>> headers;

    std::optional<std::string_view> header(std::string_view name) const;
    /// The Accept header, or "*/*" when the request carries none.
    std::string accept() const;
};

Value cons(Value car, Value cdr);
Value list(std::initializer_list<Value> items);
Value list_from(const std::vector<Value>& items);
Value make_request(Request request);
Value make_instance(ClassRef klass, std::vector<std::pair<Symbol, Value>> slots = {});

inline const Value& car(const Value& v) { return v.as_cons().car; }
inline const Value& cdr(const Value& v) { return v.as_cons().cdr; }

/// Elements of a proper list; stops at the first non-cons tail.
std::vector<Value> list_elements(const Value& list);
bool is_proper_list(const Value& v);

/// Identity comparison: same symbol, same number of the same kind, or same heap object.
bool eql(const Value& a, const Value& b);
/// Structural comparison: like eql, but strings by content and conses recursively.
bool equal(const Value& a, const Value& b);

// Arithmetic on reals. Integer op integer stays integer; any float operand
// yields a float. Integer overflow is out of contract.
bool numeric_equal(const Value& a, const Value& b);
bool numeric_less(const Value& a, const Value& b);
Value multiply(const Value& a, const Value& b);
Value subtract(const Value& a, const Value& b);
/// -1, 0 or 1 of the same numeric kind as `x`.
Value signum(const Value& x);

class TypeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace genfn

template <>
struct std::hash<genfn::Symbol> {
    std::size_t operator()(genfn::Symbol s) const noexcept { return std::hash<const void*>()(s.identity()); }
};
