#pragma once

#include <genfn/value.hpp>

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace genfn {

/// A class in the dispatch universe. The precedence list is computed once at
/// definition time with C3 and starts with the class itself, ending with `t`.
class Class {
public:
    /// `superclass_precedence` is the linearization without the class itself.
    Class(Symbol name, std::vector<ClassRef> direct_superclasses, std::span<const ClassRef> superclass_precedence);

    Symbol name() const { return name_; }
    std::span<const ClassRef> direct_superclasses() const { return direct_superclasses_; }
    std::span<const ClassRef> precedence_list() const { return precedence_list_; }
    /// Wrapper token; changes only on redefinition, which this runtime does not model.
    std::uint64_t version() const { return version_; }

    /// Position of `other` in this class's precedence list, or -1.
    std::ptrdiff_t precedence_index(ClassRef other) const;

private:
    Symbol name_;
    std::vector<ClassRef> direct_superclasses_;
    std::vector<ClassRef> precedence_list_;
    std::uint64_t version_ = 0;
};

class ClassError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace builtin {
ClassRef t();
ClassRef number();
ClassRef real();
ClassRef integer();
ClassRef float_();
ClassRef symbol();
ClassRef null();
ClassRef list();
ClassRef cons();
ClassRef string();
ClassRef standard_object();
ClassRef request();
/// All built-in classes, in definition order.
std::span<const ClassRef> all();
} // namespace builtin

/// Most specific class of `v`. Total.
ClassRef class_of(const Value& v);

/// true iff `super` appears in the precedence list of `sub`.
bool subclass_p(ClassRef sub, ClassRef super);

/// C3 linearization of a class named `name` with the given direct superclasses,
/// excluding the class itself.
/// Throws ClassError naming the conflicting classes when no linearization exists.
std::vector<ClassRef> compute_class_precedence_list(Symbol name, std::span<const ClassRef> direct_superclasses);
/// Recomputes the precedence list of an existing class from its direct superclasses.
std::vector<ClassRef> compute_class_precedence_list(ClassRef c);

/// Registry of user-defined classes layered over the fixed built-in graph.
class ClassRegistry {
public:
    ClassRegistry();

    /// Defines a class. Superclasses default to `standard-object` when empty.
    ClassRef define_class(Symbol name, std::vector<ClassRef> direct_superclasses = {});
    ClassRef find(Symbol name) const;

private:
    std::unordered_map<Symbol, ClassRef> by_name_;
    std::vector<std::unique_ptr<Class>> owned_;
};

} // namespace genfn
