#include <genfn/cons.hpp>
#include <genfn/sexpr.hpp>
#include <genfn/walker.hpp>

#include <algorithm>

namespace genfn {

namespace {

struct WalkerSymbols {
    Symbol lambda = intern("lambda");
    Symbol let = intern("let");
    Symbol t = intern("t");
    Symbol used = intern("used");
    Symbol ordinal = intern("ordinal");
    Symbol walk = intern("walk");
};

const WalkerSymbols& sym() {
    static const WalkerSymbols s;
    return s;
}

ClassRef binding_class() {
    static ClassRegistry registry;
    static ClassRef c = registry.define_class(intern("binding"));
    return c;
}

bool is_constant(Symbol s) { return s == sym().t || (!s.name().empty() && s.name().front() == ':'); }

// Second element and rest-after-second of a list, tolerating short lists.
const Value& second(const Value& form) { return car(cdr(form)); }
const Value& rest2(const Value& form) { return cdr(cdr(form)); }
bool has_second(const Value& form) { return cdr(form).is_cons(); }

} // namespace

std::string_view to_string(DiagnosticKind kind) {
    switch (kind) {
    case DiagnosticKind::unused_binding: return "unused-binding";
    case DiagnosticKind::unbound_variable: return "unbound-variable";
    case DiagnosticKind::malformed_form: return "malformed-form";
    }
    return "unknown";
}

std::string Diagnostic::to_string() const {
    return std::string(genfn::to_string(kind)) + " " + std::string(variable.name());
}

Binding Binding::make(std::int64_t ordinal) {
    return Binding(make_instance(binding_class(), {{sym().used, Value()}, {sym().ordinal, Value(ordinal)}}));
}

bool Binding::used() const { return static_cast<bool>(instance_.as_instance().slot(sym().used)); }

void Binding::mark_used() const { instance_.as_instance().set_slot(sym().used, Value(sym().t)); }

std::int64_t Binding::ordinal() const { return instance_.as_instance().slot(sym().ordinal).as_integer(); }

std::optional<Binding> Environment::lookup(Symbol name) const {
    for (const Value* f = &frames_; f->is_cons(); f = &cdr(*f))
        for (const Value* e = &car(*f); e->is_cons(); e = &cdr(*e)) {
            const Value& entry = car(*e);
            if (car(entry).as_symbol() == name) return Binding(cdr(entry));
        }
    return std::nullopt;
}

struct Walker::Session {
    std::vector<std::pair<std::int64_t, Diagnostic>> found;
    std::int64_t ordinal = 0;
};

Walker::Walker(Implementation impl, CacheMode mode) : impl_(impl) {
    switch (impl) {
    case Implementation::function: break;
    case Implementation::standard_gf:
        gf_ = std::make_unique<GenericFunction>(sym().walk, 3, standard_strategy());
        install_standard_methods();
        break;
    case Implementation::cons_gf:
        gf_ = std::make_unique<GenericFunction>(sym().walk, 3, cons_strategy());
        install_cons_methods();
        break;
    }
    if (gf_) gf_->set_cache_mode(mode);
}

Walker::~Walker() = default;

std::vector<Diagnostic> Walker::check(const Value& form) {
    Session session;
    Session* outer = std::exchange(session_, &session);
    try {
        walk(form, Environment(), list({form}));
    } catch (...) {
        session_ = outer;
        throw;
    }
    session_ = outer;

    std::stable_sort(session.found.begin(), session.found.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Diagnostic> out;
    out.reserve(session.found.size());
    for (auto& [ordinal, d] : session.found) out.push_back(std::move(d));
    return out;
}

std::int64_t Walker::next_ordinal() { return session_->ordinal++; }

void Walker::report(DiagnosticKind kind, Symbol variable, std::int64_t ordinal, const Value& stack) {
    session_->found.emplace_back(ordinal, Diagnostic{kind, variable, stack});
}

void Walker::walk(const Value& form, const Environment& env, const Value& stack) {
    if (gf_) {
        const Value args[] = {form, env.frames(), stack};
        (*gf_)(args);
        return;
    }
    if (form.is_cons()) {
        const Value& head = car(form);
        if (head.is_symbol() && head.as_symbol() == sym().lambda)
            walk_lambda(form, env, stack);
        else if (head.is_symbol() && head.as_symbol() == sym().let)
            walk_let(form, env, stack);
        else
            walk_call(form, env, stack);
    } else if (form.is_symbol()) {
        walk_symbol(form, env, stack);
    }
}

void Walker::walk_body(const Value& forms, const Environment& env, const Value& stack) {
    for (const Value* p = &forms; p->is_cons(); p = &cdr(*p)) walk(car(*p), env, cons(car(*p), stack));
}

void Walker::check_bindings(const Value& frame, const Value& stack) {
    for (const Value* e = &frame; e->is_cons(); e = &cdr(*e)) {
        const Value& entry = car(*e);
        Binding b(cdr(entry));
        if (!b.used()) report(DiagnosticKind::unused_binding, car(entry).as_symbol(), b.ordinal(), stack);
    }
}

void Walker::walk_lambda(const Value& form, const Environment& env, const Value& stack) {
    if (!has_second(form) || !is_proper_list(second(form)) || !is_proper_list(form)) {
        report(DiagnosticKind::malformed_form, sym().lambda, next_ordinal(), stack);
        return;
    }
    std::vector<Value> entries;
    for (const auto& name : list_elements(second(form))) {
        if (!name.is_symbol() || name.is_nil()) {
            report(DiagnosticKind::malformed_form, sym().lambda, next_ordinal(), stack);
            return;
        }
    }
    for (const auto& name : list_elements(second(form)))
        entries.push_back(cons(name, Binding::make(next_ordinal()).value()));
    Value frame = list_from(entries);
    walk_body(rest2(form), env.extend(frame), stack);
    check_bindings(frame, stack);
}

void Walker::walk_let(const Value& form, const Environment& env, const Value& stack) {
    if (!has_second(form) || !is_proper_list(second(form)) || !is_proper_list(form)) {
        report(DiagnosticKind::malformed_form, sym().let, next_ordinal(), stack);
        return;
    }
    auto clauses = list_elements(second(form));
    for (const auto& clause : clauses) {
        bool ok = (clause.is_symbol() && !clause.is_nil()) ||
                  (clause.is_cons() && car(clause).is_symbol() && !car(clause).is_nil() && is_proper_list(clause) &&
                   (cdr(clause).is_nil() || cdr(cdr(clause)).is_nil()));
        if (!ok) {
            report(DiagnosticKind::malformed_form, sym().let, next_ordinal(), stack);
            return;
        }
    }
    // Init forms are walked in the outer environment.
    std::vector<Value> entries;
    for (const auto& clause : clauses) {
        const Value& name = clause.is_cons() ? car(clause) : clause;
        std::int64_t ordinal = next_ordinal();
        if (clause.is_cons() && has_second(clause)) walk(second(clause), env, cons(second(clause), stack));
        entries.push_back(cons(name, Binding::make(ordinal).value()));
    }
    Value frame = list_from(entries);
    walk_body(rest2(form), env.extend(frame), stack);
    check_bindings(frame, stack);
}

void Walker::walk_call(const Value& form, const Environment& env, const Value& stack) {
    const Value& head = car(form);
    if (!head.is_symbol()) walk(head, env, cons(head, stack));
    walk_body(cdr(form), env, stack);
}

void Walker::walk_symbol(const Value& form, const Environment& env, const Value& stack) {
    if (form.is_nil()) return;
    Symbol s = form.as_symbol();
    if (is_constant(s)) return;
    std::int64_t ordinal = next_ordinal();
    if (auto b = env.lookup(s))
        b->mark_used();
    else
        report(DiagnosticKind::unbound_variable, s, ordinal, stack);
}

void Walker::install_standard_methods() {
    auto t = universal_specializer();
    auto method = [&](ClassRef klass, void (Walker::*fn)(const Value&, const Environment&, const Value&)) {
        gf_->add_method(make_method({class_specializer(klass), t, t}, [this, fn](std::span<const Value> a, const NextMethod&) {
            (this->*fn)(a[0], Environment(a[1]), a[2]);
            return Value();
        }));
    };
    gf_->add_method(make_method({t, t, t}, [](std::span<const Value>, const NextMethod&) { return Value(); }));
    gf_->add_method(make_method({class_specializer(builtin::cons()), t, t},
                                [this](std::span<const Value> a, const NextMethod&) {
                                    const Value& head = car(a[0]);
                                    Environment env(a[1]);
                                    if (head.is_symbol() && head.as_symbol() == sym().lambda)
                                        walk_lambda(a[0], env, a[2]);
                                    else if (head.is_symbol() && head.as_symbol() == sym().let)
                                        walk_let(a[0], env, a[2]);
                                    else
                                        walk_call(a[0], env, a[2]);
                                    return Value();
                                }));
    method(builtin::symbol(), &Walker::walk_symbol);
    gf_->add_method(make_method({class_specializer(builtin::null()), t, t},
                                [](std::span<const Value>, const NextMethod&) { return Value(); }));
}

void Walker::install_cons_methods() {
    auto t = universal_specializer();
    auto method = [&](SpecializerPtr s, void (Walker::*fn)(const Value&, const Environment&, const Value&)) {
        gf_->add_method(make_method({std::move(s), t, t}, [this, fn](std::span<const Value> a, const NextMethod&) {
            (this->*fn)(a[0], Environment(a[1]), a[2]);
            return Value();
        }));
    };
    gf_->add_method(make_method({t, t, t}, [](std::span<const Value>, const NextMethod&) { return Value(); }));
    method(class_specializer(builtin::cons()), &Walker::walk_call);
    method(make_cons_specializer(sym().lambda), &Walker::walk_lambda);
    method(make_cons_specializer(sym().let), &Walker::walk_let);
    method(class_specializer(builtin::symbol()), &Walker::walk_symbol);
    gf_->add_method(make_method({class_specializer(builtin::null()), t, t},
                                [](std::span<const Value>, const NextMethod&) { return Value(); }));
}

std::vector<Diagnostic> walk_check(std::string_view text) {
    Value form = read_sexpr(text);
    Walker walker(Walker::Implementation::cons_gf);
    return walker.check(form);
}

} // namespace genfn
