#include <doctest.h>

#include <ccbench/prefixer.hpp>

#include <stdexcept>
#include <string>

using namespace ccbench;

TEST_CASE("prefix_boundary floors char_count * k / 10") {
    // n = 100: exact tenths
    for (int k = 1; k <= 9; ++k) CHECK(prefix_boundary(100, k) == std::size_t(10 * k));
    // n = 105: truncated, never rounded
    CHECK(prefix_boundary(105, 1) == 10);
    CHECK(prefix_boundary(105, 2) == 21);
    CHECK(prefix_boundary(105, 3) == 31);
    CHECK(prefix_boundary(105, 4) == 42);
    CHECK(prefix_boundary(105, 5) == 52);
    CHECK(prefix_boundary(105, 6) == 63);
    CHECK(prefix_boundary(105, 7) == 73);
    CHECK(prefix_boundary(105, 8) == 84);
    CHECK(prefix_boundary(105, 9) == 94);
    // tiny but eligible sample
    CHECK(prefix_boundary(10, 1) == 1);
    CHECK(prefix_boundary(19, 1) == 1);
}

TEST_CASE("prefix_boundary validates the ratio") {
    CHECK_THROWS_AS(prefix_boundary(100, 0), std::runtime_error);
    CHECK_THROWS_AS(prefix_boundary(100, 10), std::runtime_error);
    CHECK_THROWS_AS(prefix_boundary(100, -3), std::runtime_error);
}

TEST_CASE("generate_prefix_cases slices verbatim leading substrings") {
    SourceSample s{"demo.py", "uncategorized", "0123456789abcdefghij", 20};
    auto gen = generate_prefix_cases(s, {1, 5, 9});
    REQUIRE_FALSE(gen.too_short);
    REQUIRE(gen.cases.size() == 3);

    CHECK(gen.cases[0].ratio_tenths == 1);
    CHECK(gen.cases[0].boundary == 2);
    CHECK(gen.cases[0].prefix == "01");

    CHECK(gen.cases[1].ratio_tenths == 5);
    CHECK(gen.cases[1].prefix == "0123456789");

    CHECK(gen.cases[2].ratio_tenths == 9);
    CHECK(gen.cases[2].prefix == "0123456789abcdefgh");

    for (const auto& pc : gen.cases) {
        CHECK(pc.sample_id == "demo.py");
        CHECK(s.content.rfind(pc.prefix, 0) == 0);  // verbatim leading substring
        CHECK(pc.prefix + original_remainder(s, pc) == s.content);
    }
}

TEST_CASE("prefix slicing counts scalars, not bytes") {
    // 10 two-byte scalars
    const std::string body = "\xc3\xa9\xc3\xa9\xc3\xa9\xc3\xa9\xc3\xa9"
                             "\xc3\xa9\xc3\xa9\xc3\xa9\xc3\xa9\xc3\xa9";
    SourceSample s{"uni.py", "uncategorized", body, 10};
    auto gen = generate_prefix_cases(s, {3});
    REQUIRE(gen.cases.size() == 1);
    CHECK(gen.cases[0].boundary == 3);
    CHECK(gen.cases[0].prefix == "\xc3\xa9\xc3\xa9\xc3\xa9");  // whole scalars only
    CHECK(original_remainder(s, gen.cases[0]).size() == 14);
}

TEST_CASE("samples under 10 chars are marked too short") {
    SourceSample s{"tiny.py", "uncategorized", "x = 1\n", 6};
    auto gen = generate_prefix_cases(s, {1, 2, 3, 4, 5, 6, 7, 8, 9});
    CHECK(gen.too_short);
    CHECK(gen.cases.empty());

    SourceSample ok{"ok.py", "uncategorized", "x = 12345\n", 10};
    auto gen2 = generate_prefix_cases(ok, {1});
    CHECK_FALSE(gen2.too_short);
    REQUIRE(gen2.cases.size() == 1);
    CHECK(gen2.cases[0].boundary == 1);
}

TEST_CASE("merge_completion concatenates prefix and completion") {
    PrefixCase pc{"demo.py", 4, 4, "def "};
    auto dup = merge_completion(pc, "fib(n):\n    return n\n");
    CHECK(dup.sample_id == "demo.py");
    CHECK(dup.ratio_tenths == 4);
    CHECK(dup.content == "def fib(n):\n    return n\n");
    CHECK(dup.generated == "fib(n):\n    return n\n");

    auto empty = merge_completion(pc, "");
    CHECK(empty.content == "def ");
    CHECK(empty.generated.empty());
}
