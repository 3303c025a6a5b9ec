#include "cachendt/ndt_bounds.hpp"

#include <doctest.h>

#include <random>

using namespace cachendt;

namespace
{
    // Independent enumeration of the converse: numerator over 2s, kept in integers until the end.
    Rational oracle_lower_bound(int M, int K, const Rational &mu)
    {
        Rational best(1);
        for (int s = 1; s <= std::min(M + 1, K); ++s)
        {
            const int sb = M + 1 - s;
            for (int l = sb; l <= M; ++l)
            {
                // 2 * weight = sb*(2K - 2s + sb - 1) + l*(l + 1)
                const std::int64_t w2 = std::int64_t(sb) * (2 * K - 2 * s + sb - 1) + std::int64_t(l) * (l + 1);
                const Rational v = (Rational(2 * (K + l)) - mu * w2) / (2 * s);
                if (best < v)
                    best = v;
            }
        }
        return best;
    }

    std::vector<Rational> grid(int n)
    {
        std::vector<Rational> out;
        for (int i = 0; i <= n; ++i)
            out.emplace_back(i, n);
        return out;
    }

    Rational cfg_bound(int M, int K, const Rational &mu) { return lower_bound(NetworkConfig::worst_case(M, K, mu)); }

    std::vector<CurvePoint> pts(std::initializer_list<std::pair<Rational, Rational>> list)
    {
        std::vector<CurvePoint> out;
        for (const auto &[m, v] : list)
            out.push_back({m, v});
        return out;
    }
}

TEST_CASE("bound components at fixed points")
{
    CHECK(delta_lb_component(NetworkConfig::worst_case(1, 3, 0), {1, 1}) == 4);
    for (const Rational mu : {Rational(0), Rational(1, 7), Rational(2, 3), Rational(1)})
        CHECK(delta_lb_component(NetworkConfig::worst_case(2, 2, mu), {2, 1}) == 4 - 6 * mu);
    CHECK(delta_lb_component(NetworkConfig::worst_case(1, 3, Rational(4, 5)), {1, 2}) == Rational(8, 5));
    CHECK(delta_lb_component(NetworkConfig::worst_case(2, 2, 1), {1, 2}) == 1);

    for (int M = 1; M <= 6; ++M)
        for (int K = 1; K <= 6; ++K)
            CHECK(delta_lb_component(NetworkConfig::worst_case(M, K, 0), {M, 1}) == K + M);

    CHECK_THROWS_AS(delta_lb_branch(1, 3, {0, 1}), std::out_of_range);
    CHECK_THROWS_AS(delta_lb_branch(1, 3, {1, 3}), std::out_of_range);
    CHECK_THROWS_AS(delta_lb_branch(1, 1, {0, 2}), std::out_of_range);
}

TEST_CASE("lower bound point values")
{
    CHECK(cfg_bound(1, 3, Rational(4, 5)) == Rational(8, 5));
    CHECK(cfg_bound(2, 1, 0) == 3);
    CHECK(cfg_bound(1, 1, 1) == 1);
}

TEST_CASE("lower bound for M=3, K=4 at mu=1/3 matches enumeration")
{
    const Rational mu(1, 3);
    const Rational expected = oracle_lower_bound(3, 4, mu);
    // Frozen from the enumeration above; attained by (l, s) = (2, 2) and (3, 2).
    CHECK(expected == Rational(5, 3));
    CHECK(cfg_bound(3, 4, mu) == Rational(5, 3));
    CHECK(delta_lb_component(NetworkConfig::worst_case(3, 4, mu), {2, 2}) == Rational(5, 3));
    CHECK(delta_lb_component(NetworkConfig::worst_case(3, 4, mu), {3, 2}) == Rational(5, 3));
}

TEST_CASE("lower bound curves")
{
    CHECK(lower_bound_curve(1, 3).breakpoints() ==
          pts({{0, 4}, {Rational(4, 5), Rational(8, 5)}, {1, Rational(3, 2)}}));
    CHECK(lower_bound_curve(2, 2).breakpoints() ==
          pts({{0, 4}, {Rational(4, 9), Rational(4, 3)}, {Rational(1, 2), Rational(5, 4)}, {1, 1}}));
    CHECK(lower_bound_curve(1, 1).breakpoints() == pts({{0, 2}, {1, 1}}));
}

TEST_CASE("M=1 bound equals its four-term closed form")
{
    for (int K = 1; K <= 6; ++K)
        for (const auto &mu : grid(60))
        {
            Rational expect = max(Rational(1), K + 1 - mu * K);
            if (K >= 2)
                expect = max(expect, max((K + 1 - mu) / 2, Rational(K, 2)));
            CHECK(cfg_bound(1, K, mu) == expect);
        }
}

TEST_CASE("M=2 bound reproduces each closed-form branch on its interval")
{
    for (const auto &mu : grid(60))
    {
        CHECK(cfg_bound(2, 1, mu) == (mu <= Rational(1, 2) ? 3 - 4 * mu : Rational(1)));
        Rational expect;
        if (mu <= Rational(4, 9))
            expect = 4 - 6 * mu;
        else if (mu <= Rational(1, 2))
            expect = (4 - 3 * mu) / 2;
        else
            expect = (3 - mu) / 2;
        CHECK(cfg_bound(2, 2, mu) == expect);
    }
}

TEST_CASE("bound curve agrees with enumeration at random rational mu")
{
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> den(1, 997);
    for (int i = 0; i < 1000; ++i)
    {
        const int M = 1 + i % 4;
        const int K = 1 + (i / 4) % 5;
        const int q = den(rng);
        const Rational mu(std::uniform_int_distribution<int>(0, q)(rng), q);
        CHECK(lower_bound_curve(M, K).evaluate(mu) == oracle_lower_bound(M, K, mu));
        CHECK(cfg_bound(M, K, mu) == oracle_lower_bound(M, K, mu));
    }
}

TEST_CASE("optimal curves")
{
    CHECK(optimal_ndt(NetworkConfig::worst_case(1, 2, Rational(1, 2))) == 2);
    CHECK(optimal_ndt(NetworkConfig::worst_case(2, 1, Rational(1, 2))) == 1);
    CHECK(optimal_ndt(NetworkConfig::worst_case(2, 2, Rational(4, 9))) == Rational(4, 3));
    CHECK(optimal_ndt(NetworkConfig::worst_case(1, 3, 1)) == Rational(3, 2));

    CHECK_THROWS_AS(optimal_curve(3, 3), UncharacterizedConfiguration);
    CHECK_THROWS_AS(optimal_curve(1, 4), UncharacterizedConfiguration);
    CHECK_THROWS_AS(optimal_ndt(NetworkConfig::worst_case(2, 3, 0)), UncharacterizedConfiguration);
    try
    {
        optimal_curve(3, 3);
    }
    catch (const std::exception &e)
    {
        CHECK(std::string(e.what()).find("uncharacterized configuration") != std::string::npos);
    }
}

TEST_CASE("achievable catalog")
{
    auto has = [](int M, int K, Rational mu, Rational ndt, SchemeLabel label, bool proven) {
        for (const auto &p : achievable_catalog(M, K))
            if (p.mu == mu && p.ndt == ndt && p.scheme_label == label && p.proven_optimal == proven)
                return true;
        return false;
    };
    CHECK(has(1, 3, Rational(4, 5), Rational(8, 5), SchemeLabel::zf_ia_m1k3, true));
    CHECK(has(1, 4, Rational(1, 2), Rational(3), SchemeLabel::x_channel_catalog, false));
    CHECK(has(2, 2, 0, 4, SchemeLabel::unicast, true));
    CHECK(has(2, 2, 1, 1, SchemeLabel::miso_zf, true));
    CHECK(to_string(SchemeLabel::zf_ia_m1k3) == "zf-ia-m1k3");
    CHECK(to_string(SchemeLabel::x_channel_catalog) == "x-channel-catalog");

    for (int M = 1; M <= 4; ++M)
        for (int K = 1; K <= 4; ++K)
        {
            const auto cat = achievable_catalog(M, K);
            for (std::size_t i = 1; i < cat.size(); ++i)
                CHECK(cat[i - 1].mu <= cat[i].mu);
        }
}

TEST_CASE("memory sharing envelope")
{
    const auto line = memory_sharing_envelope({{0, 2, SchemeLabel::unicast, true}, {1, 1, SchemeLabel::miso_zf, true}});
    CHECK(line.breakpoints() == pts({{0, 2}, {1, 1}}));
    for (const auto &mu : grid(10))
        CHECK(line.evaluate(mu) == 2 - mu);

    const auto c13 = memory_sharing_envelope(achievable_catalog(1, 3));
    CHECK(c13.breakpoints() == pts({{0, 4}, {Rational(4, 5), Rational(8, 5)}, {1, Rational(3, 2)}}));
    CHECK(c13.is_convex());

    const auto c14 = memory_sharing_envelope(achievable_catalog(1, 4));
    const auto &bp = c14.breakpoints();
    REQUIRE(bp.size() == 3);
    CHECK((bp[1].ndt - bp[0].ndt) / (bp[1].mu - bp[0].mu) == -4);
    CHECK((bp[2].ndt - bp[1].ndt) / (bp[2].mu - bp[1].mu) == -2);

    // Oracle: minimum over all pairwise convex combinations of catalog points.
    const auto cat = achievable_catalog(1, 4);
    for (const auto &mu : grid(120))
    {
        Rational best = cat.front().ndt + 1000;
        for (const auto &a : cat)
            for (const auto &b : cat)
            {
                if (a.mu == mu)
                    best = min(best, a.ndt);
                if (a.mu < mu && mu < b.mu)
                {
                    const Rational w = (b.mu - mu) / (b.mu - a.mu);
                    best = min(best, w * a.ndt + (1 - w) * b.ndt);
                }
            }
        CHECK(c14.evaluate(mu) == best);
    }

    CHECK_THROWS_AS(memory_sharing_envelope({{Rational(1, 2), 3, SchemeLabel::unicast, true}}), std::invalid_argument);
}

TEST_CASE("dominance, convexity and monotonicity for M, K up to 4")
{
    for (int M = 1; M <= 4; ++M)
        for (int K = 1; K <= 4; ++K)
        {
            const auto lb = lower_bound_curve(M, K);
            const auto ach = memory_sharing_envelope(achievable_catalog(M, K));
            CHECK(lb.is_convex());
            CHECK(lb.is_non_increasing());
            CHECK(ach.is_convex());
            CHECK(ach.is_non_increasing());
            const auto g = grid(60);
            for (std::size_t i = 0; i < g.size(); ++i)
            {
                const Rational l = cfg_bound(M, K, g[i]);
                CHECK(l >= 1);
                CHECK(ach.evaluate(g[i]) >= l);
                if (i >= 2)
                {
                    const Rational a = cfg_bound(M, K, g[i - 2]);
                    const Rational b = cfg_bound(M, K, g[i - 1]);
                    CHECK(b <= a);
                    CHECK(2 * b <= a + l);
                }
            }
        }
}

TEST_CASE("characterized pairs: optimum, bound and envelope coincide")
{
    for (const auto &[M, K] : std::vector<std::pair<int, int>>{{1, 1}, {1, 2}, {1, 3}, {2, 1}, {2, 2}})
    {
        CHECK(is_characterized(M, K));
        const auto ach = memory_sharing_envelope(achievable_catalog(M, K));
        for (const auto &mu : grid(60))
        {
            const Rational opt = optimal_ndt(NetworkConfig::worst_case(M, K, mu));
            CHECK(opt == cfg_bound(M, K, mu));
            CHECK(opt == ach.evaluate(mu));
        }
    }
    CHECK_FALSE(is_characterized(1, 4));
    CHECK_FALSE(is_characterized(3, 1));
}

TEST_CASE("curve construction and evaluation errors")
{
    CHECK_THROWS_AS(NdtCurve(pts({{0, 1}})), std::invalid_argument);
    CHECK_THROWS_AS(NdtCurve(pts({{0, 2}, {Rational(1, 2), 1}})), std::invalid_argument);
    CHECK_THROWS_AS(NdtCurve(pts({{0, 2}, {Rational(1, 2), 1}, {Rational(1, 2), 1}, {1, 1}})), std::invalid_argument);
    const NdtCurve c(pts({{0, 2}, {Rational(1, 2), Rational(3, 2)}, {1, 1}}));
    CHECK(c.breakpoints().size() == 2);
    CHECK_THROWS_AS(c.evaluate(Rational(-1, 10)), std::out_of_range);
    CHECK_THROWS_AS(c.evaluate(Rational(11, 10)), std::out_of_range);
}
