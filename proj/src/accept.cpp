#include <genfn/accept.hpp>

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace genfn {

namespace {

std::string_view trim(std::string_view s) {
    auto ws = [](char c) { return c == ' ' || c == '\t'; };
    while (!s.empty() && ws(s.front())) s.remove_prefix(1);
    while (!s.empty() && ws(s.back())) s.remove_suffix(1);
    return s;
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

bool is_tchar(char c) {
    if (std::isalnum(static_cast<unsigned char>(c))) return true;
    return std::string_view("!#$%&'*+-.^_`|~").find(c) != std::string_view::npos;
}

bool is_token(std::string_view s) { return !s.empty() && std::all_of(s.begin(), s.end(), is_tchar); }

// "type/subtype" with token parts; '*' only as a whole part.
bool split_media_type(std::string_view text, std::string_view& type, std::string_view& subtype) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return false;
    type = text.substr(0, slash);
    subtype = text.substr(slash + 1);
    if (!is_token(type) || !is_token(subtype)) return false;
    if (type != "*" && type.find('*') != std::string_view::npos) return false;
    if (subtype != "*" && subtype.find('*') != std::string_view::npos) return false;
    return true;
}

std::optional<MediaRange> parse_element(std::string_view element) {
    std::size_t semi = element.find(';');
    std::string_view range = trim(element.substr(0, semi));
    std::string_view type, subtype;
    if (!split_media_type(range, type, subtype)) return std::nullopt;
    if (type == "*" && subtype != "*") return std::nullopt;

    MediaRange out{lower(type), lower(subtype), Quality::one()};
    while (semi != std::string_view::npos) {
        std::size_t start = semi + 1;
        semi = element.find(';', start);
        std::string_view param = trim(element.substr(start, semi == std::string_view::npos ? semi : semi - start));
        auto eq = param.find('=');
        if (eq == std::string_view::npos) continue;
        std::string_view name = trim(param.substr(0, eq));
        if (name != "q" && name != "Q") continue;
        auto quality = Quality::parse(trim(param.substr(eq + 1)));
        if (!quality) return std::nullopt;
        out.q = *quality;
        // Anything after q is an accept-extension.
        break;
    }
    return out;
}

} // namespace

std::optional<Quality> Quality::parse(std::string_view text) {
    if (text.empty() || (text[0] != '0' && text[0] != '1')) return std::nullopt;
    int whole = text[0] - '0';
    int frac = 0;
    if (text.size() > 1) {
        if (text[1] != '.' || text.size() > 5) return std::nullopt;
        int scale = 100;
        for (char c : text.substr(2)) {
            if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
            frac += (c - '0') * scale;
            scale /= 10;
        }
    }
    if (whole == 1 && frac != 0) return std::nullopt;
    return Quality(whole * 1000 + frac);
}

std::string Quality::to_string() const {
    if (thousandths_ == 1000) return "1";
    if (thousandths_ == 0) return "0";
    std::string digits = std::to_string(thousandths_ + 1000).substr(1);
    while (digits.back() == '0') digits.pop_back();
    return "0." + digits;
}

AcceptTree parse_accept_string(std::string_view header) {
    AcceptTree tree;
    std::size_t start = 0;
    while (start <= header.size()) {
        std::size_t comma = header.find(',', start);
        std::string_view element = header.substr(start, comma == std::string_view::npos ? comma : comma - start);
        if (auto range = parse_element(element)) tree.ranges.push_back(std::move(*range));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return tree;
}

std::optional<Quality> q(std::string_view media_type, const AcceptTree& tree) {
    std::string_view type, subtype;
    if (!split_media_type(media_type, type, subtype)) return std::nullopt;
    std::string t = lower(type), s = lower(subtype);

    int best_specificity = -1;
    std::optional<Quality> best;
    for (const auto& r : tree.ranges) {
        int specificity;
        if (r.type == t && r.subtype == s)
            specificity = 2;
        else if (r.type == t && r.subtype == "*")
            specificity = 1;
        else if (r.type == "*")
            specificity = 0;
        else
            continue;
        if (specificity > best_specificity) {
            best_specificity = specificity;
            best = r.q;
        }
    }
    return best;
}

AcceptSpecializer::AcceptSpecializer(std::string_view media_type) {
    std::string_view type, subtype;
    if (!split_media_type(media_type, type, subtype) || type == "*" || subtype == "*")
        throw std::invalid_argument("accept specializer needs a concrete media type, got \"" +
                                    std::string(media_type) + "\"");
    media_type_ = lower(media_type);
}

bool AcceptSpecializer::accepts(const Value& arg) const {
    std::optional<Quality> quality;
    if (arg.is_string())
        quality = q(media_type_, parse_accept_string(arg.as_string()));
    else if (arg.is_request())
        quality = q(media_type_, parse_accept_string(arg.as_request().accept()));
    return quality && *quality > Quality();
}

bool AcceptSpecializer::same_as(const Specializer& other) const {
    auto* o = exact_cast<AcceptSpecializer>(&other);
    return o && o->media_type_ == media_type_;
}

std::string AcceptSpecializer::describe() const { return "(accept " + media_type_ + ")"; }

const AcceptTree& AcceptGeneralizer::tree() const {
    if (!tree_) tree_ = parse_accept_string(header_);
    return *tree_;
}

std::string AcceptGeneralizer::describe() const { return "#<accept-generalizer \"" + header_ + "\">"; }

SpecializerPtr make_accept_specializer(std::string_view media_type) {
    return std::make_shared<const AcceptSpecializer>(media_type);
}

Symbol AcceptStrategy::kind() const { return intern("accept"); }

GeneralizerPtr AcceptStrategy::generalizer_of(const GenericFunction& gf, const Value& arg,
                                              std::size_t position) const {
    if (arg.is_string())
        return std::make_shared<const AcceptGeneralizer>(arg.as_string(),
                                                         DispatchStrategy::generalizer_of(gf, arg, position));
    if (arg.is_request())
        return std::make_shared<const AcceptGeneralizer>(arg.as_request().accept(),
                                                         DispatchStrategy::generalizer_of(gf, arg, position));
    return DispatchStrategy::generalizer_of(gf, arg, position);
}

HashKey AcceptStrategy::hash_key(const GenericFunction& gf, const Generalizer& g) const {
    if (auto* ag = exact_cast<AcceptGeneralizer>(&g)) {
        static const Symbol tag = intern("accept-generalizer");
        return HashKey(HashKey::List{HashKey(tag), HashKey(ag->header()), hash_key(gf, *ag->next())});
    }
    return DispatchStrategy::hash_key(gf, g);
}

Applicability AcceptStrategy::accepts_generalizer(const GenericFunction& gf, const Specializer& s,
                                                  const Generalizer& g) const {
    auto* as = exact_cast<AcceptSpecializer>(&s);
    if (auto* ag = exact_cast<AcceptGeneralizer>(&g)) {
        if (as) {
            auto quality = q(as->media_type(), ag->tree());
            return {quality && *quality > Quality(), true};
        }
        return accepts_generalizer(gf, s, *ag->next());
    }
    // Only strings and requests can satisfy an accept specializer, and both
    // always get an AcceptGeneralizer.
    if (as) return {false, true};
    return DispatchStrategy::accepts_generalizer(gf, s, g);
}

Ordering AcceptStrategy::compare(const GenericFunction& gf, const Specializer& s1, const Specializer& s2,
                                 const Generalizer& g) const {
    auto* ag = exact_cast<AcceptGeneralizer>(&g);
    if (!ag) return DispatchStrategy::compare(gf, s1, s2, g);
    auto* a1 = exact_cast<AcceptSpecializer>(&s1);
    auto* a2 = exact_cast<AcceptSpecializer>(&s2);
    if (a1 && a2) {
        if (a1->media_type() == a2->media_type()) return Ordering::equal;
        auto q1 = q(a1->media_type(), ag->tree()).value_or(Quality());
        auto q2 = q(a2->media_type(), ag->tree()).value_or(Quality());
        if (q1 == q2) return Ordering::equal;
        return q1 > q2 ? Ordering::less : Ordering::greater;
    }
    return compare(gf, s1, s2, *ag->next());
}

StrategyPtr accept_strategy() {
    static const StrategyPtr s = std::make_shared<const AcceptStrategy>();
    return s;
}

const std::vector<std::string>& default_media_types() {
    static const std::vector<std::string> types{"text/html", "application/xml", "text/plain"};
    return types;
}

std::unique_ptr<GenericFunction> make_negotiation_gf(const std::vector<std::string>& media_types, CacheMode mode) {
    auto gf = std::make_unique<GenericFunction>(intern("negotiate"), 1, accept_strategy());
    gf->set_cache_mode(mode);
    for (const auto& type : media_types) {
        auto spec = make_accept_specializer(type);
        Value result = Value::string(static_cast<const AcceptSpecializer&>(*spec).media_type());
        gf->add_method(make_method({spec}, [result](std::span<const Value>, const NextMethod&) { return result; }));
    }
    return gf;
}

std::optional<std::string> negotiate(std::string_view header, const std::vector<std::string>& media_types) {
    auto gf = make_negotiation_gf(media_types);
    try {
        return (*gf)({Value::string(std::string(header))}).as_string();
    } catch (const NoApplicableMethod&) {
        return std::nullopt;
    }
}

} // namespace genfn
