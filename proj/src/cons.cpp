#include <genfn/cons.hpp>

#include <unordered_map>

namespace genfn {

bool ConsSpecializer::accepts(const Value& arg) const {
    return arg.is_cons() && genfn::car(arg).is_symbol() && genfn::car(arg).as_symbol() == car_;
}

bool ConsSpecializer::same_as(const Specializer& other) const {
    auto* o = exact_cast<ConsSpecializer>(&other);
    return o && o->car_ == car_;
}

std::string ConsSpecializer::describe() const { return "(cons " + std::string(car_.name()) + ")"; }

std::string ConsGeneralizer::describe() const { return "#<cons-generalizer " + std::string(car_.name()) + ">"; }

SpecializerPtr make_cons_specializer(Symbol car) { return std::make_shared<const ConsSpecializer>(car); }

namespace {

GeneralizerPtr interned_cons_generalizer(Symbol car) {
    static std::unordered_map<Symbol, GeneralizerPtr> interned;
    auto& slot = interned[car];
    if (!slot) slot = std::make_shared<const ConsGeneralizer>(car);
    return borrow_interned(slot);
}

} // namespace

GeneralizerPtr cons_generalizer_of(const Value& arg) {
    if (arg.is_cons() && car(arg).is_symbol()) return interned_cons_generalizer(car(arg).as_symbol());
    return class_generalizer(class_of(arg));
}

Symbol ConsStrategy::kind() const { return intern("cons"); }

GeneralizerPtr ConsStrategy::generalizer_of(const GenericFunction& gf, const Value& arg, std::size_t position) const {
    if (arg.is_cons() && car(arg).is_symbol()) return interned_cons_generalizer(car(arg).as_symbol());
    return DispatchStrategy::generalizer_of(gf, arg, position);
}

HashKey ConsStrategy::hash_key(const GenericFunction& gf, const Generalizer& g) const {
    if (auto* cg = exact_cast<ConsGeneralizer>(&g)) return HashKey(cg->car());
    return DispatchStrategy::hash_key(gf, g);
}

Applicability ConsStrategy::accepts_generalizer(const GenericFunction& gf, const Specializer& s,
                                                const Generalizer& g) const {
    auto* cs = exact_cast<ConsSpecializer>(&s);
    if (auto* cg = exact_cast<ConsGeneralizer>(&g)) {
        if (cs) return {cs->car() == cg->car(), true};
        return DispatchStrategy::accepts_generalizer(gf, s, *class_generalizer(builtin::cons()));
    }
    // Every cons with a symbol car gets a ConsGeneralizer, so no other
    // generalizer can describe an argument a cons specializer accepts.
    if (cs) return {false, true};
    return DispatchStrategy::accepts_generalizer(gf, s, g);
}

Ordering ConsStrategy::compare(const GenericFunction& gf, const Specializer& s1, const Specializer& s2,
                               const Generalizer& g) const {
    if (exact_cast<ConsGeneralizer>(&g))
        return DispatchStrategy::compare(gf, s1, s2, *class_generalizer(builtin::cons()));
    return DispatchStrategy::compare(gf, s1, s2, g);
}

StrategyPtr cons_strategy() {
    static const StrategyPtr s = std::make_shared<const ConsStrategy>();
    return s;
}

} // namespace genfn
