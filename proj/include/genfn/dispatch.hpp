#pragma once

#include <genfn/classes.hpp>
#include <genfn/hash_key.hpp>
#include <genfn/value.hpp>

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <typeinfo>
#include <unordered_map>
#include <vector>

#include <absl/container/flat_hash_map.h>

namespace genfn {

class GenericFunction;

enum class Ordering { less, equal, greater };

/// Fallback order between specializers of different kinds: an eql specializer
/// is more specific than any extension specializer, which in turn is more
/// specific than any class specializer.
enum class SpecializerTier { eql = 0, extension = 1, class_ = 2 };

// ---------------------------------------------------------------------------
// Specializers

/// Per-argument applicability test attached to a method.
class Specializer {
public:
    virtual ~Specializer() = default;

    /// Applicability against an actual argument.
    virtual bool accepts(const Value& arg) const = 0;
    virtual bool same_as(const Specializer& other) const = 0;
    virtual SpecializerTier tier() const { return SpecializerTier::extension; }
    virtual std::string describe() const = 0;
};

using SpecializerPtr = std::shared_ptr<const Specializer>;

class ClassSpecializer final : public Specializer {
public:
    explicit ClassSpecializer(ClassRef klass) : klass_(klass) {}

    ClassRef klass() const { return klass_; }
    /// A specializer on `t` accepts everything.
    bool universal() const { return klass_ == builtin::t(); }

    bool accepts(const Value& arg) const override;
    bool same_as(const Specializer& other) const override;
    SpecializerTier tier() const override { return SpecializerTier::class_; }
    std::string describe() const override;

private:
    ClassRef klass_;
};

class EqlSpecializer final : public Specializer {
public:
    explicit EqlSpecializer(Value object) : object_(std::move(object)) {}

    const Value& object() const { return object_; }

    bool accepts(const Value& arg) const override;
    bool same_as(const Specializer& other) const override;
    SpecializerTier tier() const override { return SpecializerTier::eql; }
    std::string describe() const override;

private:
    Value object_;
};

SpecializerPtr class_specializer(ClassRef klass);
SpecializerPtr eql_specializer(Value object);
/// Shared `t` specializer.
const SpecializerPtr& universal_specializer();

// ---------------------------------------------------------------------------
// Generalizers

/// Equivalence-class token computed from an argument.
class Generalizer {
public:
    virtual ~Generalizer() = default;
    virtual std::string describe() const = 0;
};

using GeneralizerPtr = std::shared_ptr<const Generalizer>;

/// Non-owning handle to an interned generalizer that is never freed; copies
/// of it do not touch a reference count.
inline GeneralizerPtr borrow_interned(const GeneralizerPtr& interned) {
    return GeneralizerPtr(GeneralizerPtr(), interned.get());
}

/// Downcast to a final specializer or generalizer class, or nullptr. Cheaper
/// than dynamic_cast on the dispatch path because no hierarchy walk is needed.
template <class T, class Base>
const T* exact_cast(const Base* p) {
    static_assert(std::is_final_v<T> && std::is_base_of_v<Base, T>);
    return p && typeid(*p) == typeid(T) ? static_cast<const T*>(p) : nullptr;
}

class ClassGeneralizer final : public Generalizer {
public:
    explicit ClassGeneralizer(ClassRef klass) : klass_(klass), version_(klass->version()) {}

    ClassRef klass() const { return klass_; }
    std::uint64_t version() const { return version_; }
    std::string describe() const override;

private:
    ClassRef klass_;
    std::uint64_t version_;
};

/// Interned class generalizer; one object per class.
GeneralizerPtr class_generalizer(ClassRef klass);

// ---------------------------------------------------------------------------
// Methods and effective methods

enum class Qualifier { primary, before, after, around };

class EffectiveMethod;

/// Continuation handed to a method body: the rest of the effective method.
class NextMethod {
public:
    bool has_next() const;
    /// Calls the next method with the current arguments.
    Value operator()() const { return (*this)(args_); }
    Value operator()(std::span<const Value> args) const;

private:
    friend class EffectiveMethod;
    enum class Stage { around, primary, none };
    NextMethod(const EffectiveMethod* em, Stage stage, std::size_t index, std::span<const Value> args)
        : em_(em), stage_(stage), index_(index), args_(args) {}

    const EffectiveMethod* em_;
    Stage stage_;
    std::size_t index_; // index of the method that would run next
    std::span<const Value> args_;
};

using MethodBody = std::function<Value(std::span<const Value> args, const NextMethod& next)>;

class Method {
public:
    Method(std::vector<SpecializerPtr> specializers, MethodBody body, Qualifier qualifier = Qualifier::primary);

    std::span<const SpecializerPtr> specializers() const { return specializers_; }
    const Specializer& specializer(std::size_t i) const { return *specializers_[i]; }
    Qualifier qualifier() const { return qualifier_; }
    const MethodBody& body() const { return body_; }
    std::string describe() const;

private:
    std::vector<SpecializerPtr> specializers_;
    MethodBody body_;
    Qualifier qualifier_;
};

using MethodPtr = std::shared_ptr<const Method>;

MethodPtr make_method(std::vector<SpecializerPtr> specializers, MethodBody body,
                      Qualifier qualifier = Qualifier::primary);

/// Standard method combination over an ordered applicable-method list:
/// arounds (most specific first, chained), then befores (most specific first),
/// the primary chain, then afters (least specific first). Returns the value of
/// the primary chain, or of the outermost around.
class EffectiveMethod {
public:
    EffectiveMethod(Symbol gf_name, std::vector<MethodPtr> ordered_methods);

    std::span<const MethodPtr> methods() const { return methods_; }
    Value operator()(std::span<const Value> args) const;

private:
    friend class NextMethod;
    Value run_around(std::size_t i, std::span<const Value> args) const;
    Value run_inner(std::span<const Value> args) const;
    Value run_primary(std::size_t i, std::span<const Value> args) const;

    Symbol gf_name_;
    std::vector<MethodPtr> methods_;
    std::vector<const Method*> arounds_, befores_, primaries_, afters_;
};

// ---------------------------------------------------------------------------
// Errors

class DispatchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoApplicableMethod : public DispatchError {
public:
    NoApplicableMethod(Symbol gf_name, std::vector<Value> args);
    Symbol gf_name() const { return gf_name_; }
    const std::vector<Value>& args() const { return args_; }

private:
    Symbol gf_name_;
    std::vector<Value> args_;
};

class NoPrimaryMethod : public DispatchError {
public:
    explicit NoPrimaryMethod(Symbol gf_name);
};

class NoNextMethod : public DispatchError {
public:
    explicit NoNextMethod(Symbol gf_name);
};

class MethodNotFound : public DispatchError {
public:
    explicit MethodNotFound(Symbol gf_name);
};

// ---------------------------------------------------------------------------
// Dispatch strategy: the protocol functions of one gf-kind

struct Applicability {
    bool accepts = false;
    bool definitive = false;
    friend bool operator==(const Applicability&, const Applicability&) = default;
};

/// Protocol functions for one kind of generic function. Extension kinds
/// derive from this class and call the base implementation for arguments and
/// specializers they do not handle themselves.
class DispatchStrategy {
public:
    virtual ~DispatchStrategy() = default;

    virtual Symbol kind() const;
    /// Default: the interned class generalizer of class_of(arg).
    virtual GeneralizerPtr generalizer_of(const GenericFunction& gf, const Value& arg, std::size_t position) const;
    /// Default: (class name, version) for class generalizers.
    virtual HashKey hash_key(const GenericFunction& gf, const Generalizer& g) const;
    /// Default: class and eql specializers against class generalizers. An eql
    /// specializer whose object has exactly the generalizer's class is
    /// undecidable from the class alone, so that case is non-definitive.
    /// Pairs this strategy does not know are reported as non-definitive.
    virtual Applicability accepts_generalizer(const GenericFunction& gf, const Specializer& s,
                                              const Generalizer& g) const;
    /// `less` means s1 is more specific than s2 for arguments described by g.
    virtual Ordering compare(const GenericFunction& gf, const Specializer& s1, const Specializer& s2,
                             const Generalizer& g) const;
};

using StrategyPtr = std::shared_ptr<const DispatchStrategy>;

StrategyPtr standard_strategy();

// ---------------------------------------------------------------------------
// Generic functions

enum class CacheMode {
    /// Full protocol on every call.
    disabled,
    /// Key is the list of the hash keys of every required argument.
    list_key,
    /// Like list_key, but when only one argument takes part in selection its
    /// hash key is used directly and the other arguments are not examined.
    one_arg,
};

/// Single-threaded: callers sharing a generic function across threads must
/// serialize access.
class GenericFunction {
public:
    GenericFunction(Symbol name, std::size_t required_args, StrategyPtr strategy = standard_strategy());
    GenericFunction(const GenericFunction&) = delete;
    GenericFunction& operator=(const GenericFunction&) = delete;

    Symbol name() const { return name_; }
    std::size_t required_args() const { return required_args_; }
    const DispatchStrategy& strategy() const { return *strategy_; }
    std::span<const MethodPtr> methods() const { return methods_; }
    /// Argument positions where some method has a specializer other than `t`.
    std::span<const std::size_t> dispatch_positions() const { return dispatch_positions_; }

    CacheMode cache_mode() const { return cache_mode_; }
    void set_cache_mode(CacheMode mode);
    std::size_t cache_size() const { return cache_.size(); }

    /// Replaces a method with the same qualifier and pairwise-same specializers,
    /// otherwise appends. Flushes the cache.
    void add_method(MethodPtr method);
    /// Throws MethodNotFound when `method` is not present.
    void remove_method(const MethodPtr& method);

    /// Selects the effective method for `args`, going through the cache when
    /// enabled. Throws NoApplicableMethod on an empty applicable set.
    std::shared_ptr<const EffectiveMethod> resolve(std::span<const Value> args);

    Value operator()(std::span<const Value> args);
    Value operator()(std::initializer_list<Value> args) { return (*this)(std::span<const Value>(args.begin(), args.size())); }

private:
    void check_arity(std::size_t n) const {
        if (n != required_args_) throw_arity_error(n);
    }
    [[noreturn, gnu::cold]] void throw_arity_error(std::size_t n) const;
    void invalidate();
    void flush_cache();

    // A cache hit points at the cache entry; a miss carries its own owner.
    struct Selection {
        const std::shared_ptr<const EffectiveMethod>* cached = nullptr;
        std::shared_ptr<const EffectiveMethod> fresh;
        const EffectiveMethod* get() const { return cached ? cached->get() : fresh.get(); }
    };
    Selection select(std::span<const Value> args);
    std::shared_ptr<const EffectiveMethod> compute_uncached(std::span<const Value> args,
                                                           std::vector<GeneralizerPtr> generalizers,
                                                           bool& cacheable);

    Symbol name_;
    std::size_t required_args_;
    StrategyPtr strategy_;
    std::vector<MethodPtr> methods_;
    std::vector<std::size_t> dispatch_positions_;
    CacheMode cache_mode_ = CacheMode::one_arg;
    absl::flat_hash_map<HashKey, std::shared_ptr<const EffectiveMethod>, HashKeyHash, HashKeyEqual> cache_;
    // Calls in progress borrow cached effective methods without taking a
    // reference; entries flushed meanwhile are parked here until they finish.
    std::size_t active_calls_ = 0;
    std::vector<std::shared_ptr<const EffectiveMethod>> retired_;
};

// ---------------------------------------------------------------------------
// Protocol functions

GeneralizerPtr generalizer_of_using_class(const GenericFunction& gf, const Value& arg, std::size_t position);
HashKey generalizer_equal_hash_key(const GenericFunction& gf, const Generalizer& g);
bool specializer_accepts_p(const Specializer& s, const Value& arg);
Applicability specializer_accepts_generalizer_p(const GenericFunction& gf, const Specializer& s, const Generalizer& g);
Ordering specializer_less(const GenericFunction& gf, const Specializer& s1, const Specializer& s2,
                          const Generalizer& g);
bool same_specializer_p(const Specializer& s1, const Specializer& s2);

/// Applicable methods on the raw arguments, most specific first.
std::vector<MethodPtr> compute_applicable_methods(const GenericFunction& gf, std::span<const Value> args);

struct ApplicableMethods {
    std::vector<MethodPtr> methods;
    bool definitive = false;
};

/// Applicable methods from generalizers alone. `definitive` is the conjunction
/// of the flags from every method and position evaluated.
ApplicableMethods compute_applicable_methods_using_generalizers(const GenericFunction& gf,
                                                                std::span<const GeneralizerPtr> generalizers);

std::shared_ptr<const EffectiveMethod> compute_effective_method(const GenericFunction& gf,
                                                                std::vector<MethodPtr> ordered_methods);

Value invoke_generic(GenericFunction& gf, std::span<const Value> args);
void add_method(GenericFunction& gf, MethodPtr method);
void remove_method(GenericFunction& gf, const MethodPtr& method);

/// Sorts applicable methods most-specific-first; ties keep definition order.
void sort_methods(const GenericFunction& gf, std::vector<MethodPtr>& methods,
                  std::span<const GeneralizerPtr> generalizers);

} // namespace genfn
