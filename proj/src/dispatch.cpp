#include <genfn/dispatch.hpp>
#include <genfn/sexpr.hpp>

#include <algorithm>
#include <optional>

#include <boost/container/small_vector.hpp>

namespace genfn {

// ---------------------------------------------------------------------------
// Specializers and generalizers

bool ClassSpecializer::accepts(const Value& arg) const { return universal() || subclass_p(class_of(arg), klass_); }

bool ClassSpecializer::same_as(const Specializer& other) const {
    auto* o = exact_cast<ClassSpecializer>(&other);
    return o && o->klass_ == klass_;
}

std::string ClassSpecializer::describe() const { return std::string(klass_->name().name()); }

bool EqlSpecializer::accepts(const Value& arg) const { return eql(arg, object_); }

bool EqlSpecializer::same_as(const Specializer& other) const {
    auto* o = exact_cast<EqlSpecializer>(&other);
    return o && eql(o->object_, object_);
}

std::string EqlSpecializer::describe() const { return "(eql " + print_sexpr(object_) + ")"; }

SpecializerPtr class_specializer(ClassRef klass) {
    if (klass == builtin::t()) return universal_specializer();
    return std::make_shared<const ClassSpecializer>(klass);
}

SpecializerPtr eql_specializer(Value object) { return std::make_shared<const EqlSpecializer>(std::move(object)); }

const SpecializerPtr& universal_specializer() {
    static const SpecializerPtr t = std::make_shared<const ClassSpecializer>(builtin::t());
    return t;
}

std::string ClassGeneralizer::describe() const { return "#<class-generalizer " + std::string(klass_->name().name()) + ">"; }

GeneralizerPtr class_generalizer(ClassRef klass) {
    // Superseded versions stay alive: borrowed handles to them may still exist.
    static std::unordered_map<ClassRef, std::vector<GeneralizerPtr>> interned;
    auto& versions = interned[klass];
    if (versions.empty() || static_cast<const ClassGeneralizer&>(*versions.back()).version() != klass->version())
        versions.push_back(std::make_shared<const ClassGeneralizer>(klass));
    return borrow_interned(versions.back());
}

// ---------------------------------------------------------------------------
// Methods and the standard method combination

Method::Method(std::vector<SpecializerPtr> specializers, MethodBody body, Qualifier qualifier)
    : specializers_(std::move(specializers)), body_(std::move(body)), qualifier_(qualifier) {
    for (auto& s : specializers_)
        if (!s) s = universal_specializer();
}

std::string Method::describe() const {
    std::string out;
    switch (qualifier_) {
    case Qualifier::primary: break;
    case Qualifier::before: out = ":before "; break;
    case Qualifier::after: out = ":after "; break;
    case Qualifier::around: out = ":around "; break;
    }
    out += '(';
    for (std::size_t i = 0; i < specializers_.size(); ++i) {
        if (i) out += ' ';
        out += specializers_[i]->describe();
    }
    return out + ')';
}

MethodPtr make_method(std::vector<SpecializerPtr> specializers, MethodBody body, Qualifier qualifier) {
    return std::make_shared<const Method>(std::move(specializers), std::move(body), qualifier);
}

EffectiveMethod::EffectiveMethod(Symbol gf_name, std::vector<MethodPtr> ordered_methods)
    : gf_name_(gf_name), methods_(std::move(ordered_methods)) {
    for (const auto& m : methods_) {
        switch (m->qualifier()) {
        case Qualifier::primary: primaries_.push_back(m.get()); break;
        case Qualifier::before: befores_.push_back(m.get()); break;
        case Qualifier::after: afters_.push_back(m.get()); break;
        case Qualifier::around: arounds_.push_back(m.get()); break;
        }
    }
    std::reverse(afters_.begin(), afters_.end());
}

Value EffectiveMethod::operator()(std::span<const Value> args) const {
    if (primaries_.empty()) throw NoPrimaryMethod(gf_name_);
    if (!arounds_.empty()) return run_around(0, args);
    if (befores_.empty() && afters_.empty()) return run_primary(0, args);
    return run_inner(args);
}

Value EffectiveMethod::run_around(std::size_t i, std::span<const Value> args) const {
    return arounds_[i]->body()(args, NextMethod(this, NextMethod::Stage::around, i + 1, args));
}

Value EffectiveMethod::run_inner(std::span<const Value> args) const {
    const NextMethod none(this, NextMethod::Stage::none, 0, args);
    for (const Method* m : befores_) m->body()(args, none);
    Value result = run_primary(0, args);
    for (const Method* m : afters_) m->body()(args, none);
    return result;
}

Value EffectiveMethod::run_primary(std::size_t i, std::span<const Value> args) const {
    return primaries_[i]->body()(args, NextMethod(this, NextMethod::Stage::primary, i + 1, args));
}

bool NextMethod::has_next() const {
    switch (stage_) {
    case Stage::around: return true;
    case Stage::primary: return index_ < em_->primaries_.size();
    case Stage::none: return false;
    }
    return false;
}

Value NextMethod::operator()(std::span<const Value> args) const {
    switch (stage_) {
    case Stage::around:
        return index_ < em_->arounds_.size() ? em_->run_around(index_, args) : em_->run_inner(args);
    case Stage::primary:
        if (index_ < em_->primaries_.size()) return em_->run_primary(index_, args);
        break;
    case Stage::none: break;
    }
    throw NoNextMethod(em_->gf_name_);
}

// ---------------------------------------------------------------------------
// Errors

namespace {

std::string describe_args(const std::vector<Value>& args) {
    std::string out;
    for (const auto& a : args) {
        if (!out.empty()) out += ' ';
        out += print_sexpr(a);
    }
    return out;
}

} // namespace

NoApplicableMethod::NoApplicableMethod(Symbol gf_name, std::vector<Value> args)
    : DispatchError("no applicable method for " + std::string(gf_name.name()) + " on (" + describe_args(args) + ")"),
      gf_name_(gf_name),
      args_(std::move(args)) {}

NoPrimaryMethod::NoPrimaryMethod(Symbol gf_name)
    : DispatchError("no primary method for " + std::string(gf_name.name())) {}

NoNextMethod::NoNextMethod(Symbol gf_name) : DispatchError("no next method in " + std::string(gf_name.name())) {}

MethodNotFound::MethodNotFound(Symbol gf_name)
    : DispatchError("method not found in " + std::string(gf_name.name())) {}

// ---------------------------------------------------------------------------
// Standard strategy

Symbol DispatchStrategy::kind() const { return intern("standard"); }

GeneralizerPtr DispatchStrategy::generalizer_of(const GenericFunction&, const Value& arg, std::size_t) const {
    return class_generalizer(class_of(arg));
}

HashKey DispatchStrategy::hash_key(const GenericFunction&, const Generalizer& g) const {
    if (auto* cg = exact_cast<ClassGeneralizer>(&g))
        return HashKey(ClassVersionKey{cg->klass()->name(), cg->version()});
    throw DispatchError("no hash key for generalizer " + g.describe());
}

Applicability DispatchStrategy::accepts_generalizer(const GenericFunction&, const Specializer& s,
                                                    const Generalizer& g) const {
    auto* cs = exact_cast<ClassSpecializer>(&s);
    if (cs && cs->universal()) return {true, true};
    auto* cg = exact_cast<ClassGeneralizer>(&g);
    if (!cg) return {false, false};
    if (cs) return {subclass_p(cg->klass(), cs->klass()), true};
    if (auto* es = exact_cast<EqlSpecializer>(&s)) {
        if (class_of(es->object()) == cg->klass()) return {false, false};
        return {false, true};
    }
    return {false, false};
}

Ordering DispatchStrategy::compare(const GenericFunction&, const Specializer& s1, const Specializer& s2,
                                   const Generalizer& g) const {
    if (&s1 == &s2 || s1.same_as(s2)) return Ordering::equal;
    auto t1 = s1.tier(), t2 = s2.tier();
    if (t1 != t2) return t1 < t2 ? Ordering::less : Ordering::greater;
    if (t1 != SpecializerTier::class_) return Ordering::equal;

    auto* cg = exact_cast<ClassGeneralizer>(&g);
    if (!cg) return Ordering::equal;
    auto cpl = cg->klass()->precedence_list();
    auto index = [&](const Specializer& s) {
        auto k = static_cast<const ClassSpecializer&>(s).klass();
        return std::find(cpl.begin(), cpl.end(), k) - cpl.begin();
    };
    auto i1 = index(s1), i2 = index(s2);
    if (i1 == i2) return Ordering::equal;
    return i1 < i2 ? Ordering::less : Ordering::greater;
}

StrategyPtr standard_strategy() {
    static const StrategyPtr s = std::make_shared<const DispatchStrategy>();
    return s;
}

// ---------------------------------------------------------------------------
// Protocol functions

GeneralizerPtr generalizer_of_using_class(const GenericFunction& gf, const Value& arg, std::size_t position) {
    return gf.strategy().generalizer_of(gf, arg, position);
}

HashKey generalizer_equal_hash_key(const GenericFunction& gf, const Generalizer& g) {
    return gf.strategy().hash_key(gf, g);
}

bool specializer_accepts_p(const Specializer& s, const Value& arg) { return s.accepts(arg); }

Applicability specializer_accepts_generalizer_p(const GenericFunction& gf, const Specializer& s,
                                                const Generalizer& g) {
    return gf.strategy().accepts_generalizer(gf, s, g);
}

Ordering specializer_less(const GenericFunction& gf, const Specializer& s1, const Specializer& s2,
                          const Generalizer& g) {
    return gf.strategy().compare(gf, s1, s2, g);
}

bool same_specializer_p(const Specializer& s1, const Specializer& s2) { return s1.same_as(s2); }

void sort_methods(const GenericFunction& gf, std::vector<MethodPtr>& methods,
                  std::span<const GeneralizerPtr> generalizers) {
    if (methods.size() < 2) return;
    const auto& strategy = gf.strategy();
    std::stable_sort(methods.begin(), methods.end(), [&](const MethodPtr& a, const MethodPtr& b) {
        for (std::size_t i = 0; i < generalizers.size(); ++i) {
            const auto& sa = a->specializer(i);
            const auto& sb = b->specializer(i);
            if (&sa == &sb) continue;
            auto r = strategy.compare(gf, sa, sb, *generalizers[i]);
            if (r != Ordering::equal) return r == Ordering::less;
        }
        return false;
    });
}

namespace {

std::vector<MethodPtr> applicable_on_args(const GenericFunction& gf, std::span<const Value> args,
                                          std::span<const GeneralizerPtr> generalizers) {
    std::vector<MethodPtr> out;
    for (const auto& m : gf.methods()) {
        bool ok = true;
        for (std::size_t i = 0; ok && i < args.size(); ++i) ok = m->specializer(i).accepts(args[i]);
        if (ok) out.push_back(m);
    }
    sort_methods(gf, out, generalizers);
    return out;
}

} // namespace

std::vector<MethodPtr> compute_applicable_methods(const GenericFunction& gf, std::span<const Value> args) {
    if (args.size() != gf.required_args())
        throw DispatchError("wrong number of arguments to " + std::string(gf.name().name()));
    std::vector<GeneralizerPtr> generalizers;
    generalizers.reserve(args.size());
    for (std::size_t i = 0; i < args.size(); ++i) generalizers.push_back(gf.strategy().generalizer_of(gf, args[i], i));
    return applicable_on_args(gf, args, generalizers);
}

ApplicableMethods compute_applicable_methods_using_generalizers(const GenericFunction& gf,
                                                                std::span<const GeneralizerPtr> generalizers) {
    if (generalizers.size() != gf.required_args())
        throw DispatchError("wrong number of generalizers for " + std::string(gf.name().name()));
    const auto& strategy = gf.strategy();
    ApplicableMethods result;
    result.definitive = true;
    for (const auto& m : gf.methods()) {
        // Every position is evaluated so that definitiveness does not depend on evaluation order.
        bool accepted = true;
        for (std::size_t i = 0; i < generalizers.size(); ++i) {
            auto a = strategy.accepts_generalizer(gf, m->specializer(i), *generalizers[i]);
            accepted = accepted && a.accepts;
            result.definitive = result.definitive && a.definitive;
        }
        if (accepted) result.methods.push_back(m);
    }
    sort_methods(gf, result.methods, generalizers);
    return result;
}

std::shared_ptr<const EffectiveMethod> compute_effective_method(const GenericFunction& gf,
                                                                std::vector<MethodPtr> ordered_methods) {
    return std::make_shared<const EffectiveMethod>(gf.name(), std::move(ordered_methods));
}

Value invoke_generic(GenericFunction& gf, std::span<const Value> args) { return gf(args); }

void add_method(GenericFunction& gf, MethodPtr method) { gf.add_method(std::move(method)); }

void remove_method(GenericFunction& gf, const MethodPtr& method) { gf.remove_method(method); }

// ---------------------------------------------------------------------------
// GenericFunction

GenericFunction::GenericFunction(Symbol name, std::size_t required_args, StrategyPtr strategy)
    : name_(name), required_args_(required_args), strategy_(std::move(strategy)) {}

void GenericFunction::set_cache_mode(CacheMode mode) {
    cache_mode_ = mode;
    flush_cache();
}

void GenericFunction::flush_cache() {
    if (active_calls_ > 0)
        for (auto& entry : cache_) retired_.push_back(std::move(entry.second));
    cache_.clear();
}

void GenericFunction::throw_arity_error(std::size_t n) const {
    throw DispatchError("wrong number of arguments to " + std::string(name_.name()) + ": expected " +
                        std::to_string(required_args_) + ", got " + std::to_string(n));
}

void GenericFunction::invalidate() {
    flush_cache();
    dispatch_positions_.clear();
    for (std::size_t i = 0; i < required_args_; ++i) {
        bool active = std::any_of(methods_.begin(), methods_.end(), [&](const MethodPtr& m) {
            auto* cs = exact_cast<ClassSpecializer>(&m->specializer(i));
            return !(cs && cs->universal());
        });
        if (active) dispatch_positions_.push_back(i);
    }
}

void GenericFunction::add_method(MethodPtr method) {
    if (method->specializers().size() != required_args_)
        throw DispatchError("method specializer count does not match " + std::string(name_.name()));
    auto same = [&](const MethodPtr& m) {
        if (m->qualifier() != method->qualifier()) return false;
        for (std::size_t i = 0; i < required_args_; ++i)
            if (!m->specializer(i).same_as(method->specializer(i))) return false;
        return true;
    };
    auto it = std::find_if(methods_.begin(), methods_.end(), same);
    if (it != methods_.end())
        *it = std::move(method);
    else
        methods_.push_back(std::move(method));
    invalidate();
}

void GenericFunction::remove_method(const MethodPtr& method) {
    auto it = std::find(methods_.begin(), methods_.end(), method);
    if (it == methods_.end()) throw MethodNotFound(name_);
    methods_.erase(it);
    invalidate();
}

std::shared_ptr<const EffectiveMethod> GenericFunction::compute_uncached(std::span<const Value> args,
                                                                         std::vector<GeneralizerPtr> generalizers,
                                                                         bool& cacheable) {
    auto applicable = compute_applicable_methods_using_generalizers(*this, generalizers);
    cacheable = applicable.definitive;
    if (!applicable.definitive) applicable.methods = applicable_on_args(*this, args, generalizers);
    if (applicable.methods.empty()) throw NoApplicableMethod(name_, std::vector<Value>(args.begin(), args.end()));
    return compute_effective_method(*this, std::move(applicable.methods));
}

GenericFunction::Selection GenericFunction::select(std::span<const Value> args) {
    check_arity(args.size());

    auto miss = [&](std::vector<GeneralizerPtr> gs, std::optional<HashKey> key) {
        bool cacheable = false;
        auto em = compute_uncached(args, std::move(gs), cacheable);
        if (cacheable && key) cache_.emplace(std::move(*key), em);
        return Selection{nullptr, std::move(em)};
    };

    // Only one argument takes part in selection: its key is the cache key.
    if (cache_mode_ == CacheMode::one_arg && dispatch_positions_.size() == 1) {
        std::size_t p = dispatch_positions_.front();
        auto g = strategy_->generalizer_of(*this, args[p], p);
        HashKey key = strategy_->hash_key(*this, *g);
        if (auto it = cache_.find(key); it != cache_.end()) return Selection{&it->second, nullptr};
        std::vector<GeneralizerPtr> gs;
        gs.reserve(required_args_);
        for (std::size_t i = 0; i < required_args_; ++i)
            gs.push_back(i == p ? g : strategy_->generalizer_of(*this, args[i], i));
        return miss(std::move(gs), std::move(key));
    }

    constexpr std::size_t inline_args = 4;
    boost::container::small_vector<GeneralizerPtr, inline_args> gs;
    for (std::size_t i = 0; i < required_args_; ++i) gs.push_back(strategy_->generalizer_of(*this, args[i], i));
    auto all_generalizers = [&] { return std::vector<GeneralizerPtr>(gs.begin(), gs.end()); };

    if (cache_mode_ == CacheMode::disabled) return miss(all_generalizers(), std::nullopt);

    // The key is the list of every required argument's key. It is probed in
    // place and only built as a list on a miss.
    boost::container::small_vector<HashKey, inline_args> parts;
    for (const auto& g : gs) parts.push_back(strategy_->hash_key(*this, *g));
    if (auto it = cache_.find(std::span<const HashKey>(parts.data(), parts.size())); it != cache_.end())
        return Selection{&it->second, nullptr};
    return miss(all_generalizers(), HashKey(HashKey::List(std::make_move_iterator(parts.begin()),
                                                          std::make_move_iterator(parts.end()))));
}

std::shared_ptr<const EffectiveMethod> GenericFunction::resolve(std::span<const Value> args) {
    Selection s = select(args);
    return s.cached ? *s.cached : std::move(s.fresh);
}

Value GenericFunction::operator()(std::span<const Value> args) {
    struct CallScope {
        GenericFunction& gf;
        explicit CallScope(GenericFunction& g) : gf(g) { ++gf.active_calls_; }
        ~CallScope() {
            if (--gf.active_calls_ == 0 && !gf.retired_.empty()) gf.retired_.clear();
        }
    } scope(*this);
    Selection s = select(args);
    return (*s.get())(args);
}

} // namespace genfn
