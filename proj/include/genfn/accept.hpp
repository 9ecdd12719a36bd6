#pragma once

#include <genfn/dispatch.hpp>

#include <compare>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace genfn {

/// RFC 2616 quality value, stored exactly as thousandths (0..1000).
class Quality {
public:
    constexpr Quality() = default;
    static constexpr Quality from_thousandths(int t) { return Quality(t); }
    static constexpr Quality one() { return Quality(1000); }
    /// Parses `qvalue = ("0" ["." 0*3DIGIT]) | ("1" ["." 0*3("0")])`.
    static std::optional<Quality> parse(std::string_view text);

    constexpr int thousandths() const { return thousandths_; }
    double to_double() const { return thousandths_ / 1000.0; }
    std::string to_string() const;

    friend constexpr auto operator<=>(Quality, Quality) = default;

private:
    constexpr explicit Quality(int t) : thousandths_(t) {}
    int thousandths_ = 0;
};

/// One Accept element. A `*` type always comes with a `*` subtype.
struct MediaRange {
    std::string type;    // lower case, or "*"
    std::string subtype; // lower case, or "*"
    Quality q = Quality::one();

    friend bool operator==(const MediaRange&, const MediaRange&) = default;
};

/// Parsed Accept header: media ranges in header order, duplicates kept.
struct AcceptTree {
    std::vector<MediaRange> ranges;
};

/// Total: malformed elements are dropped, never reported. Parameters other
/// than q are ignored.
AcceptTree parse_accept_string(std::string_view header);

/// Quality of a concrete media type under `tree`: the most specific matching
/// range wins (exact, then type/*, then */*), first occurrence on ties.
/// nullopt when nothing matches.
std::optional<Quality> q(std::string_view media_type, const AcceptTree& tree);

class AcceptSpecializer final : public Specializer {
public:
    /// Throws std::invalid_argument unless `media_type` is "type/subtype" without wildcards.
    explicit AcceptSpecializer(std::string_view media_type);

    const std::string& media_type() const { return media_type_; }

    /// Strings and requests whose Accept header gives this media type q > 0.
    bool accepts(const Value& arg) const override;
    bool same_as(const Specializer& other) const override;
    std::string describe() const override;

private:
    std::string media_type_;
};

/// Generalizer over an Accept header. `next` describes the argument's class
/// so that class-specialized methods stay applicable.
class AcceptGeneralizer final : public Generalizer {
public:
    AcceptGeneralizer(std::string header, GeneralizerPtr next) : header_(std::move(header)), next_(std::move(next)) {}

    const std::string& header() const { return header_; }
    /// Parsed at most once.
    const AcceptTree& tree() const;
    const GeneralizerPtr& next() const { return next_; }
    std::string describe() const override;

private:
    std::string header_;
    mutable std::optional<AcceptTree> tree_;
    GeneralizerPtr next_;
};

SpecializerPtr make_accept_specializer(std::string_view media_type);

/// gf-kind `accept`. Specializers ordered by descending q; non-accept
/// specializers are answered against the `next` generalizer.
class AcceptStrategy : public DispatchStrategy {
public:
    Symbol kind() const override;
    /// AcceptGeneralizer for strings (the string is the header) and requests
    /// (their Accept header); class generalizer otherwise.
    GeneralizerPtr generalizer_of(const GenericFunction& gf, const Value& arg, std::size_t position) const override;
    /// (accept-generalizer <header> <key of next>).
    HashKey hash_key(const GenericFunction& gf, const Generalizer& g) const override;
    Applicability accepts_generalizer(const GenericFunction& gf, const Specializer& s,
                                      const Generalizer& g) const override;
    Ordering compare(const GenericFunction& gf, const Specializer& s1, const Specializer& s2,
                     const Generalizer& g) const override;
};

StrategyPtr accept_strategy();

const std::vector<std::string>& default_media_types();

/// One-argument accept generic function with one method per media type; each
/// method returns its media type as a string.
std::unique_ptr<GenericFunction> make_negotiation_gf(const std::vector<std::string>& media_types,
                                                     CacheMode mode = CacheMode::one_arg);

/// Media type chosen for `header` among `media_types`, or nullopt (406).
std::optional<std::string> negotiate(std::string_view header, const std::vector<std::string>& media_types);

} // namespace genfn
