#include <catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "gravlocc/subsets.hpp"

using namespace gravlocc;

TEST_CASE("exhaustive enumeration") {
    CHECK(enumerate_subsets(1, SubsetPolicy::exhaustive()).empty());
    const auto two = enumerate_subsets(2, SubsetPolicy::exhaustive());
    REQUIRE(two.size() == 2);
    CHECK(two[0].bitstring() == "10");
    CHECK(two[1].bitstring() == "01");
    for (int n = 2; n <= 10; ++n) {
        const auto subs = enumerate_subsets(n, SubsetPolicy::exhaustive());
        std::size_t expected = 0;
        for (int k = 1; k <= n / 2; ++k) {
            std::size_t b = 1;
            for (int i = 0; i < k; ++i) b = b * (n - i) / (i + 1);
            expected += b;
        }
        CHECK(subs.size() == expected);
        CHECK(std::is_sorted(subs.begin(), subs.end(), [](const auto& a, const auto& b) { return lex_less(a, b); }));
        std::set<std::string> seen;
        for (const auto& s : subs) {
            CHECK(s.size() >= 1);
            CHECK(s.size() <= n / 2);
            seen.insert(s.bitstring());
        }
        CHECK(seen.size() == subs.size());
    }
}

TEST_CASE("alternating and auto policies") {
    CHECK(enumerate_subsets(6, SubsetPolicy::alternating())[0].bitstring() == "101010");
    CHECK(enumerate_subsets(5, SubsetPolicy::alternating())[0].bitstring() == "01010");
    CHECK(enumerate_subsets(8, SubsetPolicy::automatic()).size() == 162);
    const auto big = enumerate_subsets(21, SubsetPolicy::automatic());
    REQUIRE(big.size() == 1);
    CHECK(big[0].size() == 10);
}

TEST_CASE("random policy is seeded") {
    const auto a = enumerate_subsets(12, SubsetPolicy::random(20, 7));
    const auto b = enumerate_subsets(12, SubsetPolicy::random(20, 7));
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
    CHECK(std::is_sorted(a.begin(), a.end(), [](const auto& x, const auto& y) { return lex_less(x, y); }));
}

TEST_CASE("user-supplied subsets and parsing") {
    const auto u = enumerate_subsets(4, SubsetPolicy::supplied({{2}, {0, 1}, {2}}));
    REQUIRE(u.size() == 2);
    CHECK(u[0].bitstring() == "1100");
    CHECK_THROWS_AS(enumerate_subsets(4, SubsetPolicy::supplied({})), Error);
    CHECK_THROWS_AS(enumerate_subsets(4, SubsetPolicy::supplied({{7}})), Error);
    CHECK(parse_subset_policy("random:5", 3) == SubsetPolicy::random(5, 3));
    CHECK(to_string(parse_subset_policy("alternating", 0)) == "alternating");
    CHECK_THROWS_AS(parse_subset_policy("random:", 0), Error);
    CHECK_THROWS_AS(parse_subset_policy("random:0", 0), Error);
    CHECK_THROWS_AS(parse_subset_policy("greedy", 0), Error);
}
