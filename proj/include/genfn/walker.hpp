#pragma once

#include <genfn/dispatch.hpp>

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace genfn {

enum class DiagnosticKind { unused_binding, unbound_variable, malformed_form };

std::string_view to_string(DiagnosticKind kind);

struct Diagnostic {
    DiagnosticKind kind;
    Symbol variable;
    /// The form being walked when the diagnostic arose, then its enclosing
    /// forms, innermost first.
    Value context;

    /// "<kind> <variable>"
    std::string to_string() const;
};

/// A lexical variable binding. Handle onto an instance of class `binding`
/// whose `used` flag only ever goes from false to true.
class Binding {
public:
    static Binding make(std::int64_t ordinal);
    explicit Binding(Value instance) : instance_(std::move(instance)) {}

    bool used() const;
    void mark_used() const;
    /// Source-encounter position of the binding's name.
    std::int64_t ordinal() const;
    const Value& value() const { return instance_; }

private:
    Value instance_;
};

/// Lexical environment: a list of frames, innermost first; each frame is a
/// list of (name . binding) conses.
class Environment {
public:
    Environment() = default;
    explicit Environment(Value frames) : frames_(std::move(frames)) {}

    const Value& frames() const { return frames_; }
    std::optional<Binding> lookup(Symbol name) const;
    Environment extend(const Value& frame) const { return Environment(cons(frame, frames_)); }

private:
    Value frames_;
};

/// Code walker reporting unused bindings and unbound variables. `lambda` and
/// `let` are special forms; every other cons is a call whose argument forms
/// are walked (and whose head is walked too when it is not a symbol).
class Walker {
public:
    enum class Implementation {
        /// One function branching on form shape.
        function,
        /// Standard generic function on classes; the cons method branches on the head.
        standard_gf,
        /// Generic function with cons specializers, one method per special form.
        cons_gf,
    };

    explicit Walker(Implementation impl = Implementation::cons_gf, CacheMode mode = CacheMode::one_arg);
    ~Walker();
    Walker(const Walker&) = delete;
    Walker& operator=(const Walker&) = delete;

    /// Diagnostics in source-encounter order.
    std::vector<Diagnostic> check(const Value& form);

    Implementation implementation() const { return impl_; }
    /// The `walk` generic function, or null for the function implementation.
    GenericFunction* generic_function() { return gf_.get(); }

private:
    struct Session;

    void walk(const Value& form, const Environment& env, const Value& stack);
    void walk_lambda(const Value& form, const Environment& env, const Value& stack);
    void walk_let(const Value& form, const Environment& env, const Value& stack);
    void walk_call(const Value& form, const Environment& env, const Value& stack);
    void walk_symbol(const Value& form, const Environment& env, const Value& stack);
    void walk_body(const Value& forms, const Environment& env, const Value& stack);
    void check_bindings(const Value& frame, const Value& stack);
    void report(DiagnosticKind kind, Symbol variable, std::int64_t ordinal, const Value& stack);
    std::int64_t next_ordinal();

    void install_standard_methods();
    void install_cons_methods();

    Implementation impl_;
    std::unique_ptr<GenericFunction> gf_;
    Session* session_ = nullptr;
};

/// Reads `text` and walks it with a cons-specializer walker.
std::vector<Diagnostic> walk_check(std::string_view text);

} // namespace genfn
