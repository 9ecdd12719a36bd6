#include <genfn/sexpr.hpp>
#include <genfn/signum.hpp>

#include <array>
#include <cmath>
#include <stdexcept>

namespace genfn {

SignumSpecializer::SignumSpecializer(Value signum) : signum_(std::move(signum)) {
    if (!signum_.is_real() || !numeric_equal(genfn::signum(signum_), signum_))
        throw std::invalid_argument("signum specializer needs -1, 0 or 1, got " + print_sexpr(signum_));
}

bool SignumSpecializer::accepts(const Value& arg) const {
    return arg.is_real() && numeric_equal(genfn::signum(arg), signum_);
}

bool SignumSpecializer::same_as(const Specializer& other) const {
    auto* o = exact_cast<SignumSpecializer>(&other);
    return o && numeric_equal(o->signum_, signum_);
}

std::string SignumSpecializer::describe() const { return "(signum " + print_sexpr(signum_) + ")"; }

std::string SignumGeneralizer::describe() const { return "#<signum-generalizer " + print_sexpr(signum_) + ">"; }

SpecializerPtr make_signum_specializer(Value signum) {
    return std::make_shared<const SignumSpecializer>(std::move(signum));
}

namespace {

// Interned generalizers for the six ordinary signum values.
struct InternedSignums {
    std::array<GeneralizerPtr, 3> integers{std::make_shared<const SignumGeneralizer>(Value(-1)),
                                           std::make_shared<const SignumGeneralizer>(Value(0)),
                                           std::make_shared<const SignumGeneralizer>(Value(1))};
    std::array<GeneralizerPtr, 3> floats{std::make_shared<const SignumGeneralizer>(Value(-1.0)),
                                         std::make_shared<const SignumGeneralizer>(Value(0.0)),
                                         std::make_shared<const SignumGeneralizer>(Value(1.0))};
};

const InternedSignums interned;

GeneralizerPtr interned_signum_generalizer(const Value& arg) {
    if (arg.is_integer()) {
        auto i = arg.as_integer();
        return borrow_interned(interned.integers[static_cast<std::size_t>((i > 0) - (i < 0) + 1)]);
    }
    double d = arg.as_float();
    if (d > 0) return borrow_interned(interned.floats[2]);
    if (d < 0) return borrow_interned(interned.floats[0]);
    if (!std::signbit(d) && d == 0) return borrow_interned(interned.floats[1]);
    return std::make_shared<const SignumGeneralizer>(signum(arg)); // -0.0, NaN
}

} // namespace

GeneralizerPtr signum_generalizer_of(const Value& arg) {
    if (arg.is_real()) return interned_signum_generalizer(arg);
    return class_generalizer(class_of(arg));
}

Symbol SignumStrategy::kind() const { return intern("signum"); }

GeneralizerPtr SignumStrategy::generalizer_of(const GenericFunction& gf, const Value& arg,
                                              std::size_t position) const {
    if (arg.is_real()) return interned_signum_generalizer(arg);
    return DispatchStrategy::generalizer_of(gf, arg, position);
}

HashKey SignumStrategy::hash_key(const GenericFunction& gf, const Generalizer& g) const {
    if (auto* sg = exact_cast<SignumGeneralizer>(&g)) return sg->key();
    return DispatchStrategy::hash_key(gf, g);
}

Applicability SignumStrategy::accepts_generalizer(const GenericFunction& gf, const Specializer& s,
                                                  const Generalizer& g) const {
    auto* ss = exact_cast<SignumSpecializer>(&s);
    if (auto* sg = exact_cast<SignumGeneralizer>(&g)) {
        if (ss) return {numeric_equal(ss->signum(), sg->signum()), true};
        return DispatchStrategy::accepts_generalizer(gf, s, *class_generalizer(class_of(sg->signum())));
    }
    // Every real gets a SignumGeneralizer.
    if (ss) return {false, true};
    return DispatchStrategy::accepts_generalizer(gf, s, g);
}

Ordering SignumStrategy::compare(const GenericFunction& gf, const Specializer& s1, const Specializer& s2,
                                 const Generalizer& g) const {
    if (auto* sg = exact_cast<SignumGeneralizer>(&g))
        return DispatchStrategy::compare(gf, s1, s2, *class_generalizer(class_of(sg->signum())));
    return DispatchStrategy::compare(gf, s1, s2, g);
}

StrategyPtr signum_strategy() {
    static const StrategyPtr s = std::make_shared<const SignumStrategy>();
    return s;
}

std::unique_ptr<GenericFunction> make_fact_gf(CacheMode mode) {
    auto gf = std::make_unique<GenericFunction>(intern("fact"), 1, signum_strategy());
    gf->set_cache_mode(mode);
    GenericFunction* self = gf.get();
    gf->add_method(make_method({make_signum_specializer(Value(0))},
                               [](std::span<const Value>, const NextMethod&) { return Value(1); }));
    gf->add_method(make_method({make_signum_specializer(Value(1))}, [self](std::span<const Value> a, const NextMethod&) {
        const Value& n = a[0];
        return multiply(n, (*self)({subtract(n, Value(1))}));
    }));
    return gf;
}

std::unique_ptr<GenericFunction> make_standard_fact_gf(CacheMode mode) {
    auto gf = std::make_unique<GenericFunction>(intern("standard-fact"), 1, standard_strategy());
    gf->set_cache_mode(mode);
    GenericFunction* self = gf.get();
    gf->add_method(make_method({class_specializer(builtin::integer())}, [self](std::span<const Value> a, const NextMethod&) {
        const Value& n = a[0];
        if (n.as_integer() == 0) return Value(1);
        if (n.as_integer() < 0) throw std::domain_error("standard-fact: negative argument");
        return multiply(n, (*self)({subtract(n, Value(1))}));
    }));
    return gf;
}

} // namespace genfn
