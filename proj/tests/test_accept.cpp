#include <genfn/accept.hpp>

#include <support/random_config.hpp>

#include <gtest/gtest.h>

#include <cctype>
#include <random>

namespace genfn {
namespace {

constexpr const char* example_header = "text/html,application/xml;q=0.9,*/*;q=0.8";

Quality thousandths(int t) { return Quality::from_thousandths(t); }

GeneralizerPtr header_generalizer(const GenericFunction& gf, std::string header) {
    return generalizer_of_using_class(gf, Value::string(std::move(header)), 0);
}

TEST(quality_test, should_parse_rfc_qvalues) {
    EXPECT_EQ(Quality::parse("1"), Quality::one());
    EXPECT_EQ(Quality::parse("1.000"), Quality::one());
    EXPECT_EQ(Quality::parse("0"), thousandths(0));
    EXPECT_EQ(Quality::parse("0.5"), thousandths(500));
    EXPECT_EQ(Quality::parse("0.001"), thousandths(1));
    EXPECT_EQ(Quality::parse("0."), thousandths(0));
    EXPECT_FALSE(Quality::parse("1.001"));
    EXPECT_FALSE(Quality::parse("0.1234"));
    EXPECT_FALSE(Quality::parse("2"));
    EXPECT_FALSE(Quality::parse(".5"));
    EXPECT_FALSE(Quality::parse(""));
    EXPECT_FALSE(Quality::parse("-0"));
    EXPECT_EQ(thousandths(250).to_string(), "0.25");
}

TEST(parse_accept_test, should_parse_the_example_header) {
    auto tree = parse_accept_string(example_header);
    ASSERT_EQ(tree.ranges.size(), 3u);
    EXPECT_EQ(tree.ranges[0], (MediaRange{"text", "html", Quality::one()}));
    EXPECT_EQ(tree.ranges[1], (MediaRange{"application", "xml", thousandths(900)}));
    EXPECT_EQ(tree.ranges[2], (MediaRange{"*", "*", thousandths(800)}));
}

TEST(parse_accept_test, should_parse_edge_cases) {
    EXPECT_TRUE(parse_accept_string("").ranges.empty());
    auto tree = parse_accept_string("text/*;q=0.5, text/plain");
    ASSERT_EQ(tree.ranges.size(), 2u);
    EXPECT_EQ(tree.ranges[0], (MediaRange{"text", "*", thousandths(500)}));
    EXPECT_EQ(tree.ranges[1], (MediaRange{"text", "plain", Quality::one()}));
    tree = parse_accept_string("TEXT/HTML ; level=1 ; Q=0.3");
    ASSERT_EQ(tree.ranges.size(), 1u);
    EXPECT_EQ(tree.ranges[0], (MediaRange{"text", "html", thousandths(300)}));
}

TEST(parse_accept_test, should_drop_malformed_elements) {
    auto tree = parse_accept_string("text, */html, text/html;q=2, ,image/png;q=0.2, a/b/c");
    ASSERT_EQ(tree.ranges.size(), 1u);
    EXPECT_EQ(tree.ranges[0], (MediaRange{"image", "png", thousandths(200)}));
}

TEST(parse_accept_test, should_be_total_on_random_bytes) {
    std::mt19937_64 rng(11);
    const std::string alphabet = "abc*/;,=q. 0123456789\t\"\\\x01\xff";
    for (int i = 0; i < 5000; ++i) {
        std::string header;
        int n = std::uniform_int_distribution<int>(0, 40)(rng);
        for (int k = 0; k < n; ++k) header += alphabet[rng() % alphabet.size()];
        AcceptTree tree;
        ASSERT_NO_THROW(tree = parse_accept_string(header)) << header;
        for (const auto& r : tree.ranges) {
            EXPECT_GE(r.q.thousandths(), 0);
            EXPECT_LE(r.q.thousandths(), 1000);
            EXPECT_FALSE(r.type.empty());
            EXPECT_FALSE(r.subtype.empty());
            if (r.type == "*") EXPECT_EQ(r.subtype, "*");
        }
    }
}

TEST(q_test, should_pick_the_most_specific_matching_range) {
    auto tree = parse_accept_string(example_header);
    EXPECT_EQ(q("text/html", tree), Quality::one());
    EXPECT_EQ(q("image/png", tree), thousandths(800));
    EXPECT_FALSE(q("image/png", parse_accept_string("text/html")));
    auto mixed = parse_accept_string("*/*;q=0.1, text/*;q=0.4, text/plain;q=0.7, text/plain;q=0.2");
    EXPECT_EQ(q("text/plain", mixed), thousandths(700));
    EXPECT_EQ(q("text/html", mixed), thousandths(400));
    EXPECT_EQ(q("Text/HTML", mixed), thousandths(400));
    EXPECT_EQ(q("video/mp4", mixed), thousandths(100));
}

TEST(accept_specializer_test, should_require_a_concrete_media_type) {
    EXPECT_THROW(AcceptSpecializer("text/*"), std::invalid_argument);
    EXPECT_THROW(AcceptSpecializer("html"), std::invalid_argument);
    EXPECT_NO_THROW(AcceptSpecializer("text/html"));
}

TEST(accept_specializer_test, should_accept_positive_quality_only) {
    auto html = make_accept_specializer("text/html");
    EXPECT_FALSE(specializer_accepts_p(*html, Value::string("text/html;q=0")));
    EXPECT_TRUE(specializer_accepts_p(*html, Value::string("*/*")));
    EXPECT_FALSE(specializer_accepts_p(*html, Value(3)));
    EXPECT_TRUE(specializer_accepts_p(*html, make_request(Request{"GET", "/", {}})));
    EXPECT_TRUE(same_specializer_p(*html, *make_accept_specializer("text/html")));
    EXPECT_FALSE(same_specializer_p(*html, *make_accept_specializer("text/plain")));
}

TEST(accept_strategy_test, should_build_generalizers_for_strings_and_requests) {
    auto gf = make_negotiation_gf(default_media_types());
    auto request = make_request(Request{"GET", "/", {{"accept", "text/html"}}});
    auto* rg = exact_cast<AcceptGeneralizer>(generalizer_of_using_class(*gf, request, 0).get());
    ASSERT_NE(rg, nullptr);
    EXPECT_EQ(rg->header(), "text/html");
    EXPECT_EQ(exact_cast<ClassGeneralizer>(rg->next().get())->klass(), builtin::request());
    auto* sg = exact_cast<AcceptGeneralizer>(header_generalizer(*gf, "text/html").get());
    ASSERT_NE(sg, nullptr);
    EXPECT_EQ(exact_cast<ClassGeneralizer>(sg->next().get())->klass(), builtin::string());
    auto* ig = exact_cast<ClassGeneralizer>(generalizer_of_using_class(*gf, Value(3), 0).get());
    ASSERT_NE(ig, nullptr);
    EXPECT_EQ(ig->klass(), builtin::integer());
}

TEST(accept_strategy_test, should_key_by_header_and_argument_class) {
    auto gf = make_negotiation_gf(default_media_types());
    auto a = generalizer_equal_hash_key(*gf, *header_generalizer(*gf, "text/html"));
    auto b = generalizer_equal_hash_key(*gf, *header_generalizer(*gf, "text/html"));
    auto c = generalizer_equal_hash_key(*gf, *header_generalizer(*gf, "text/plain"));
    auto r = generalizer_equal_hash_key(
        *gf, *generalizer_of_using_class(*gf, make_request(Request{"GET", "/", {{"Accept", "text/html"}}}), 0));
    EXPECT_TRUE(a == b);
    EXPECT_FALSE(a == c);
    EXPECT_FALSE(a == r);
    ASSERT_TRUE(a.is_list());
    EXPECT_TRUE(a.as_list()[0] == HashKey(intern("accept-generalizer")));
    EXPECT_TRUE(a.as_list()[1] == HashKey(std::string("text/html")));
}

TEST(accept_strategy_test, should_answer_applicability_from_the_header) {
    auto gf = make_negotiation_gf(default_media_types());
    auto example = header_generalizer(*gf, example_header);
    EXPECT_EQ(specializer_accepts_generalizer_p(*gf, *make_accept_specializer("text/html"), *example),
              (Applicability{true, true}));
    EXPECT_EQ(specializer_accepts_generalizer_p(*gf, *make_accept_specializer("video/mp4"),
                                                *header_generalizer(*gf, "text/html")),
              (Applicability{false, true}));
    EXPECT_EQ(specializer_accepts_generalizer_p(*gf, *class_specializer(builtin::string()), *example),
              (Applicability{true, true}));
    EXPECT_EQ(specializer_accepts_generalizer_p(*gf, *class_specializer(builtin::request()), *example),
              (Applicability{false, true}));
    EXPECT_EQ(specializer_accepts_generalizer_p(*gf, *make_accept_specializer("text/html"),
                                                *header_generalizer(*gf, "text/html;q=0")),
              (Applicability{false, true}));
}

TEST(accept_strategy_test, should_order_specializers_by_descending_quality) {
    auto gf = make_negotiation_gf(default_media_types());
    auto example = header_generalizer(*gf, example_header);
    auto html = make_accept_specializer("text/html");
    auto xml = make_accept_specializer("application/xml");
    EXPECT_EQ(specializer_less(*gf, *html, *xml, *example), Ordering::less);
    EXPECT_EQ(specializer_less(*gf, *xml, *html, *example), Ordering::greater);
    auto wildcard = header_generalizer(*gf, "*/*");
    EXPECT_EQ(specializer_less(*gf, *html, *xml, *wildcard), Ordering::equal);
}

TEST(negotiation_test, should_select_by_quality) {
    const auto& types = default_media_types();
    EXPECT_EQ(negotiate(example_header, types), "text/html");
    EXPECT_EQ(negotiate("application/xml;q=0.9", types), "application/xml");
    EXPECT_EQ(negotiate("text/html;q=0", types), std::nullopt);
    EXPECT_EQ(negotiate("video/mp4", types), std::nullopt);
    EXPECT_EQ(negotiate("text/plain;q=0.5, application/xml;q=0.6", types), "application/xml");
    EXPECT_EQ(negotiate("text/*;q=0.3, text/plain", types), "text/plain");
    EXPECT_EQ(negotiate("", types), std::nullopt);
}

TEST(negotiation_test, should_break_ties_by_method_order) {
    EXPECT_EQ(negotiate("*/*", {"text/plain", "text/html"}), "text/plain");
    EXPECT_EQ(negotiate("*/*", {"text/html", "text/plain"}), "text/html");
}

TEST(negotiation_test, should_sort_applicable_methods_by_descending_quality) {
    std::mt19937_64 rng(5);
    auto gf = make_negotiation_gf(testing::media_type_pool());
    for (int i = 0; i < 300; ++i) {
        std::string header = testing::random_accept_header(rng);
        std::vector<Value> args{Value::string(header)};
        auto tree = parse_accept_string(header);
        auto methods = compute_applicable_methods(*gf, args);
        int previous = 1001;
        for (const auto& m : methods) {
            auto& spec = static_cast<const AcceptSpecializer&>(m->specializer(0));
            int quality = q(spec.media_type(), tree).value_or(Quality()).thousandths();
            EXPECT_GT(quality, 0) << header;
            EXPECT_LE(quality, previous) << header;
            previous = quality;
        }
    }
}

} // namespace
} // namespace genfn
