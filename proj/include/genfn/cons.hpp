#pragma once

#include <genfn/dispatch.hpp>

namespace genfn {

/// Accepts conses whose car is a given symbol. More specific than the `cons`
/// class, less specific than an eql specializer.
class ConsSpecializer final : public Specializer {
public:
    explicit ConsSpecializer(Symbol car) : car_(car) {}

    Symbol car() const { return car_; }

    bool accepts(const Value& arg) const override;
    bool same_as(const Specializer& other) const override;
    std::string describe() const override;

private:
    Symbol car_;
};

class ConsGeneralizer final : public Generalizer {
public:
    explicit ConsGeneralizer(Symbol car) : car_(car) {}

    Symbol car() const { return car_; }
    std::string describe() const override;

private:
    Symbol car_;
};

SpecializerPtr make_cons_specializer(Symbol car);

/// Generalizer for cons dispatch: a ConsGeneralizer for conses with a symbol
/// car, otherwise the class generalizer.
GeneralizerPtr cons_generalizer_of(const Value& arg);

/// gf-kind `cons`. At most one cons specializer is applicable to any
/// argument, so cons specializers compare equal among themselves.
class ConsStrategy : public DispatchStrategy {
public:
    Symbol kind() const override;
    GeneralizerPtr generalizer_of(const GenericFunction& gf, const Value& arg, std::size_t position) const override;
    HashKey hash_key(const GenericFunction& gf, const Generalizer& g) const override;
    Applicability accepts_generalizer(const GenericFunction& gf, const Specializer& s,
                                      const Generalizer& g) const override;
    Ordering compare(const GenericFunction& gf, const Specializer& s1, const Specializer& s2,
                     const Generalizer& g) const override;
};

StrategyPtr cons_strategy();

} // namespace genfn
