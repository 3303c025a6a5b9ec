#include "cachendt/core.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace cachendt;

TEST_CASE("mod_bar wraps into 1..b")
{
    CHECK(mod_bar(4, 3) == 1);
    CHECK(mod_bar(2, 3) == 2);
    CHECK(mod_bar(3, 3) == 3);
    CHECK(mod_bar(5, 3) == 2);

    for (int b = 1; b <= 12; ++b)
        for (int a = 1; a <= 2 * b - 1; ++a)
        {
            const int c = mod_bar(a, b);
            CHECK(c >= 1);
            CHECK(c <= b);
            CHECK((c - a) % b == 0);
        }
}

TEST_CASE("mod_bar rejects a = 2b and non-positive arguments")
{
    CHECK_THROWS_AS(mod_bar(6, 3), std::invalid_argument);
    CHECK_THROWS_AS(mod_bar(0, 3), std::invalid_argument);
    CHECK_THROWS_AS(mod_bar(1, 0), std::invalid_argument);
}

TEST_CASE("rational parsing and printing")
{
    CHECK(parse_rational("4/5") == Rational(4, 5));
    CHECK(parse_rational("8/10") == Rational(4, 5));
    CHECK(parse_rational("3") == Rational(3));
    CHECK(parse_rational("0.8") == Rational(4, 5));
    CHECK(parse_rational("-1.25") == Rational(-5, 4));
    CHECK(parse_rational("0") == Rational(0));
    CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);

    CHECK(to_string(Rational(8, 5)) == "8/5");
    CHECK(to_string(Rational(4)) == "4");
    CHECK(to_string(Rational(-3, 2)) == "-3/2");
    CHECK(to_decimal_string(Rational(8, 5)) == "1.6");
    CHECK(to_decimal_string(Rational(1, 3)) == "0.333333333333333");
}

TEST_CASE("rational arithmetic round-trips")
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> num(-200, 200);
    std::uniform_int_distribution<int> den(1, 200);
    for (int i = 0; i < 2000; ++i)
    {
        const Rational a(num(rng), den(rng));
        const Rational b(num(rng), den(rng));
        CHECK((a + b) - b == a);
        if (b != 0)
            CHECK((a * b) / b == a);
        CHECK(parse_rational(to_string(a)) == a);
    }
}

TEST_CASE("mixed comparisons against integer literals")
{
    const Rational zero(0);
    const Rational half(1, 2);
    CHECK(zero == 0);
    CHECK(0 == zero);
    CHECK(half != 0);
    CHECK(half < 1);
    CHECK(Rational(3) == std::int64_t(3));
}

TEST_CASE("network configuration validation")
{
    const NetworkConfig cfg(1, 3, 4, Rational(4, 5));
    CHECK(cfg.relays() == 1);
    CHECK(cfg.users() == 3);
    CHECK(cfg.files() == 4);
    CHECK(cfg.mu() == Rational(4, 5));
    CHECK(NetworkConfig::worst_case(2, 3).files() == 5);
    CHECK(cfg.with_mu(1).mu() == 1);

    CHECK_THROWS_AS(NetworkConfig(0, 3, 4, 0), std::invalid_argument);
    CHECK_THROWS_AS(NetworkConfig(1, 0, 4, 0), std::invalid_argument);
    CHECK_THROWS_AS(NetworkConfig(1, 3, 3, 0), std::invalid_argument);
    CHECK_THROWS_AS(NetworkConfig(1, 3, 4, Rational(-1, 5)), std::invalid_argument);
    CHECK_THROWS_AS(NetworkConfig(1, 3, 4, Rational(6, 5)), std::invalid_argument);
}

TEST_CASE("worst-case demand")
{
    CHECK(worst_case_demand(NetworkConfig(1, 3, 4, 0)).entries == std::vector<int>{1, 2, 3, 4});
    CHECK(worst_case_demand(NetworkConfig(1, 1, 2, 0)).entries == std::vector<int>{1, 2});
    CHECK(worst_case_demand(NetworkConfig(2, 2, 4, 0)).entries == std::vector<int>{1, 2, 3, 4});

    const auto d = worst_case_demand(NetworkConfig(1, 3, 4, 0));
    CHECK(d.file_of(Receiver::ue(2), 3) == 2);
    CHECK(d.file_of(Receiver::rn(1), 3) == 4);
    CHECK_THROWS_AS(d.file_of(Receiver::rn(2), 3), std::out_of_range);

    for (int M = 1; M <= 5; ++M)
        for (int K = 1; K <= 5; ++K)
            for (int N = M + K; N <= M + K + 2; ++N)
            {
                const auto e = worst_case_demand(NetworkConfig(M, K, N, 0)).entries;
                REQUIRE(e.size() == std::size_t(M + K));
                CHECK(std::set<int>(e.begin(), e.end()).size() == e.size());
                for (int f : e)
                    CHECK((f >= 1 && f <= N));
            }
}

TEST_CASE("channel set shape and coefficient checks")
{
    CMatrix f = CMatrix::Constant(2, 1, cplx(1, 0));
    CMatrix g = CMatrix::Constant(2, 3, cplx(0, 1));
    std::vector<CMatrix> h(2, CMatrix::Constant(3, 1, cplx(1, 1)));
    const ChannelSet ch(f, g, h);
    CHECK(ch.slots() == 2);
    CHECK(ch.relays() == 1);
    CHECK(ch.users() == 3);
    CHECK(ch.g(1, 3) == cplx(0, 1));
    CHECK(ch.slot(1).slots() == 1);

    CHECK_THROWS_AS(ChannelSet(f, g, std::vector<CMatrix>(1, h[0])), std::invalid_argument);
    CMatrix gz = g;
    gz(0, 0) = 0.0;
    CHECK_THROWS_AS(ChannelSet(f, gz, h), std::invalid_argument);
    CHECK(to_string(Receiver::ue(2)) == "UE2");
    CHECK(to_string(Receiver::rn(1)) == "RN1");
}
