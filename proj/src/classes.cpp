#include <genfn/classes.hpp>

#include <algorithm>
#include <array>
#include <string>

namespace genfn {

Class::Class(Symbol name, std::vector<ClassRef> direct_superclasses, std::span<const ClassRef> superclass_precedence)
    : name_(name), direct_superclasses_(std::move(direct_superclasses)) {
    precedence_list_.reserve(superclass_precedence.size() + 1);
    precedence_list_.push_back(this);
    precedence_list_.insert(precedence_list_.end(), superclass_precedence.begin(), superclass_precedence.end());
}

std::ptrdiff_t Class::precedence_index(ClassRef other) const {
    auto it = std::find(precedence_list_.begin(), precedence_list_.end(), other);
    return it == precedence_list_.end() ? -1 : it - precedence_list_.begin();
}

namespace {

std::string class_names(std::span<const ClassRef> classes) {
    std::string out;
    for (ClassRef c : classes) {
        if (!out.empty()) out += ", ";
        out += c->name().name();
    }
    return out;
}

// C3 merge. The result excludes the class being linearized.
std::vector<ClassRef> c3_tail(Symbol name, std::span<const ClassRef> direct) {
    std::vector<std::vector<ClassRef>> sequences;
    for (ClassRef s : direct) {
        auto cpl = s->precedence_list();
        sequences.emplace_back(cpl.begin(), cpl.end());
    }
    sequences.emplace_back(direct.begin(), direct.end());

    std::vector<ClassRef> out;
    for (;;) {
        std::erase_if(sequences, [](const auto& s) { return s.empty(); });
        if (sequences.empty()) return out;

        ClassRef candidate = nullptr;
        for (const auto& seq : sequences) {
            ClassRef head = seq.front();
            bool in_tail = std::any_of(sequences.begin(), sequences.end(), [&](const auto& other) {
                return std::find(other.begin() + 1, other.end(), head) != other.end();
            });
            if (!in_tail) {
                candidate = head;
                break;
            }
        }
        if (!candidate) {
            std::vector<ClassRef> heads;
            for (const auto& seq : sequences) heads.push_back(seq.front());
            throw ClassError("cannot linearize class " + std::string(name.name()) +
                             ": conflicting precedence between " + class_names(heads));
        }
        out.push_back(candidate);
        for (auto& seq : sequences)
            if (seq.front() == candidate) seq.erase(seq.begin());
    }
}

struct BuiltinGraph {
    std::vector<std::unique_ptr<Class>> owned;
    std::vector<ClassRef> all;

    ClassRef add(std::string_view name, std::initializer_list<ClassRef> supers) {
        std::vector<ClassRef> direct(supers);
        auto tail = c3_tail(intern(name), direct);
        owned.push_back(std::make_unique<Class>(intern(name), std::move(direct), tail));
        all.push_back(owned.back().get());
        return owned.back().get();
    }

    ClassRef t, number, real, integer, float_, symbol, list, null, cons, string, standard_object, request;

    BuiltinGraph() {
        t = add("t", {});
        number = add("number", {t});
        real = add("real", {number});
        integer = add("integer", {real});
        float_ = add("float", {real});
        symbol = add("symbol", {t});
        list = add("list", {t});
        null = add("null", {symbol, list});
        cons = add("cons", {list});
        string = add("string", {t});
        standard_object = add("standard-object", {t});
        request = add("request", {standard_object});
    }
};

const BuiltinGraph& graph() {
    static const BuiltinGraph g;
    return g;
}

} // namespace

namespace builtin {
ClassRef t() { return graph().t; }
ClassRef number() { return graph().number; }
ClassRef real() { return graph().real; }
ClassRef integer() { return graph().integer; }
ClassRef float_() { return graph().float_; }
ClassRef symbol() { return graph().symbol; }
ClassRef null() { return graph().null; }
ClassRef list() { return graph().list; }
ClassRef cons() { return graph().cons; }
ClassRef string() { return graph().string; }
ClassRef standard_object() { return graph().standard_object; }
ClassRef request() { return graph().request; }
std::span<const ClassRef> all() { return graph().all; }
} // namespace builtin

ClassRef class_of(const Value& v) {
    const auto& g = graph();
    switch (v.kind()) {
    case Value::Kind::nil: return g.null;
    case Value::Kind::symbol: return g.symbol;
    case Value::Kind::integer: return g.integer;
    case Value::Kind::real: return g.float_;
    case Value::Kind::string: return g.string;
    case Value::Kind::cons: return g.cons;
    case Value::Kind::instance: return v.as_instance().klass ? v.as_instance().klass : g.standard_object;
    case Value::Kind::request: return g.request;
    }
    return g.t;
}

bool subclass_p(ClassRef sub, ClassRef super) {
    auto cpl = sub->precedence_list();
    return std::find(cpl.begin(), cpl.end(), super) != cpl.end();
}

std::vector<ClassRef> compute_class_precedence_list(Symbol name, std::span<const ClassRef> direct_superclasses) {
    // A class being defined cannot already appear among its superclasses' precedence lists.
    for (ClassRef s : direct_superclasses)
        for (ClassRef c : s->precedence_list())
            if (c->name() == name)
                throw ClassError("class " + std::string(name.name()) + " would be its own superclass");
    return c3_tail(name, direct_superclasses);
}

std::vector<ClassRef> compute_class_precedence_list(ClassRef c) {
    auto tail = c3_tail(c->name(), c->direct_superclasses());
    tail.insert(tail.begin(), c);
    return tail;
}

ClassRegistry::ClassRegistry() {
    for (ClassRef c : builtin::all()) by_name_.emplace(c->name(), c);
}

ClassRef ClassRegistry::define_class(Symbol name, std::vector<ClassRef> direct_superclasses) {
    if (by_name_.count(name))
        throw ClassError("class " + std::string(name.name()) + " is already defined");
    for (ClassRef s : direct_superclasses)
        if (!s) throw ClassError("undefined superclass for " + std::string(name.name()));
    if (direct_superclasses.empty()) direct_superclasses.push_back(builtin::standard_object());
    std::vector<ClassRef> seen;
    for (ClassRef s : direct_superclasses) {
        if (std::find(seen.begin(), seen.end(), s) != seen.end())
            throw ClassError("duplicate direct superclass " + std::string(s->name().name()));
        seen.push_back(s);
    }

    auto tail = compute_class_precedence_list(name, direct_superclasses);
    owned_.push_back(std::make_unique<Class>(name, std::move(direct_superclasses), tail));
    ClassRef c = owned_.back().get();
    by_name_.emplace(name, c);
    return c;
}

ClassRef ClassRegistry::find(Symbol name) const {
    auto it = by_name_.find(name);
    return it == by_name_.end() ? nullptr : it->second;
}

} // namespace genfn
