#pragma once

#include <genfn/dispatch.hpp>

#include <memory>

namespace genfn {

/// Accepts reals whose signum is numerically equal (`=`) to the stored value,
/// so (signum 1) accepts positive floats as well as positive integers.
class SignumSpecializer final : public Specializer {
public:
    /// Throws std::invalid_argument unless `signum` is -1, 0 or 1 (integer or float).
    explicit SignumSpecializer(Value signum);

    const Value& signum() const { return signum_; }

    bool accepts(const Value& arg) const override;
    bool same_as(const Specializer& other) const override;
    std::string describe() const override;

private:
    Value signum_;
};

/// Holds only the signum of the argument, preserving integer vs float.
class SignumGeneralizer final : public Generalizer {
public:
    explicit SignumGeneralizer(Value signum) : signum_(std::move(signum)), key_(HashKey::of_number(signum_)) {}

    const Value& signum() const { return signum_; }
    const HashKey& key() const { return key_; }
    std::string describe() const override;

private:
    Value signum_;
    HashKey key_;
};

SpecializerPtr make_signum_specializer(Value signum);

/// SignumGeneralizer for reals, class generalizer otherwise.
GeneralizerPtr signum_generalizer_of(const Value& arg);

/// gf-kind `signum`. Non-signum specializers asked about a SignumGeneralizer
/// are answered by the class rule on the class of the stored signum value,
/// which keeps integer and float arguments apart.
class SignumStrategy : public DispatchStrategy {
public:
    Symbol kind() const override;
    GeneralizerPtr generalizer_of(const GenericFunction& gf, const Value& arg, std::size_t position) const override;
    HashKey hash_key(const GenericFunction& gf, const Generalizer& g) const override;
    Applicability accepts_generalizer(const GenericFunction& gf, const Specializer& s,
                                      const Generalizer& g) const override;
    Ordering compare(const GenericFunction& gf, const Specializer& s1, const Specializer& s2,
                     const Generalizer& g) const override;
};

StrategyPtr signum_strategy();

/// Factorial by signum dispatch: (signum 0) returns 1, (signum 1) returns
/// n * fact(n - 1). Negative and non-real arguments have no applicable method.
/// Results beyond 20! overflow and are out of contract.
std::unique_ptr<GenericFunction> make_fact_gf(CacheMode mode = CacheMode::one_arg);

/// Same factorial on a standard generic function with one method on `integer`.
std::unique_ptr<GenericFunction> make_standard_fact_gf(CacheMode mode = CacheMode::one_arg);

} // namespace genfn
