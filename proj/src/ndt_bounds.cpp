// SPDX-License-Identifier: Apache-2.0
//
// cachendt: delivery-time bounds and precoding schemes for cache-aided relay networks
// ------------------------------------------------------------------------

#include "cachendt/ndt_bounds.hpp"

#include <algorithm>
#include <set>

namespace cachendt
{
    namespace
    {
        // Twice the signed area of (a, b, c); zero when collinear, positive for a left turn.
        Rational cross(const CurvePoint &a, const CurvePoint &b, const CurvePoint &c)
        {
            return (b.mu - a.mu) * (c.ndt - a.ndt) - (b.ndt - a.ndt) * (c.mu - a.mu);
        }

        Rational slope(const CurvePoint &a, const CurvePoint &b)
        {
            return (b.ndt - a.ndt) / (b.mu - a.mu);
        }
    }

    NdtCurve::NdtCurve(std::vector<CurvePoint> breakpoints)
    {
        if (breakpoints.size() < 2)
            throw std::invalid_argument("NDT curve needs at least two breakpoints");
        if (breakpoints.front().mu != 0 || breakpoints.back().mu != 1)
            throw std::invalid_argument("NDT curve must span mu in [0, 1]");
        for (std::size_t i = 1; i < breakpoints.size(); ++i)
            if (!(breakpoints[i - 1].mu < breakpoints[i].mu))
                throw std::invalid_argument("NDT curve breakpoints must be strictly increasing in mu");

        breakpoints_.reserve(breakpoints.size());
        for (const auto &p : breakpoints)
        {
            if (breakpoints_.size() >= 2 && cross(breakpoints_[breakpoints_.size() - 2], breakpoints_.back(), p) == 0)
                breakpoints_.back() = p;
            else
                breakpoints_.push_back(p);
        }
    }

    Rational NdtCurve::evaluate(const Rational &mu) const
    {
        if (mu < 0 || mu > 1)
            throw std::out_of_range("mu outside [0, 1]");
        auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), mu,
                                   [](const CurvePoint &p, const Rational &m) { return p.mu < m; });
        if (it->mu == mu)
            return it->ndt;
        const auto &hi = *it;
        const auto &lo = *(it - 1);
        return lo.ndt + slope(lo, hi) * (mu - lo.mu);
    }

    bool NdtCurve::is_convex() const
    {
        for (std::size_t i = 2; i < breakpoints_.size(); ++i)
            if (slope(breakpoints_[i - 2], breakpoints_[i - 1]) > slope(breakpoints_[i - 1], breakpoints_[i]))
                return false;
        return true;
    }

    bool NdtCurve::is_non_increasing() const
    {
        for (std::size_t i = 1; i < breakpoints_.size(); ++i)
            if (breakpoints_[i].ndt > breakpoints_[i - 1].ndt)
                return false;
        return true;
    }

    NdtCurve upper_envelope(const std::vector<AffineBranch> &branches)
    {
        if (branches.empty())
            throw std::invalid_argument("upper envelope of no branches");

        // The maximum of affine functions is linear between consecutive pairwise crossings.
        std::set<Rational> knots{Rational(0), Rational(1)};
        for (std::size_t i = 0; i < branches.size(); ++i)
            for (std::size_t j = i + 1; j < branches.size(); ++j)
            {
                if (branches[i].slope == branches[j].slope)
                    continue;
                const Rational x = (branches[j].intercept - branches[i].intercept) /
                                   (branches[i].slope - branches[j].slope);
                if (x > 0 && x < 1)
                    knots.insert(x);
            }

        std::vector<CurvePoint> pts;
        pts.reserve(knots.size());
        for (const auto &mu : knots)
        {
            Rational v = branches.front()(mu);
            for (const auto &b : branches)
                v = max(v, b(mu));
            pts.push_back({mu, v});
        }
        return NdtCurve(std::move(pts));
    }

    std::vector<BoundComponentIndex> bound_components(int relays, int users)
    {
        if (relays < 1 || users < 1)
            throw std::invalid_argument("M and K must be positive");
        std::vector<BoundComponentIndex> out;
        for (int s = 1; s <= std::min(relays + 1, users); ++s)
            for (int ell = relays + 1 - s; ell <= relays; ++ell)
                out.push_back({ell, s});
        return out;
    }

    AffineBranch delta_lb_branch(int relays, int users, BoundComponentIndex idx)
    {
        const int M = relays;
        const int K = users;
        if (idx.s < 1 || idx.s > std::min(M + 1, K) || idx.ell < M + 1 - idx.s || idx.ell > M)
            throw std::out_of_range("bound component index outside admissible range");

        const Rational s(idx.s);
        const Rational ell(idx.ell);
        const Rational sbar(M + 1 - idx.s);
        const Rational weight = sbar * (Rational(K) - s + (sbar - 1) / 2) + ell * (ell + 1) / 2;
        return {(Rational(K) + ell) / s, -weight / s};
    }

    Rational delta_lb_component(const NetworkConfig &cfg, BoundComponentIndex idx)
    {
        return delta_lb_branch(cfg.relays(), cfg.users(), idx)(cfg.mu());
    }

    Rational lower_bound(const NetworkConfig &cfg)
    {
        Rational best(1);
        for (const auto &idx : bound_components(cfg.relays(), cfg.users()))
            best = max(best, delta_lb_component(cfg, idx));
        return best;
    }

    NdtCurve lower_bound_curve(int relays, int users)
    {
        std::vector<AffineBranch> branches{{Rational(1), Rational(0)}};
        for (const auto &idx : bound_components(relays, users))
            branches.push_back(delta_lb_branch(relays, users, idx));
        return upper_envelope(branches);
    }

    UncharacterizedConfiguration::UncharacterizedConfiguration(int relays, int users)
        : std::invalid_argument("uncharacterized configuration: optimal NDT unknown for M=" +
                                std::to_string(relays) + ", K=" + std::to_string(users))
    {
    }

    bool is_characterized(int relays, int users)
    {
        return (relays == 1 && users >= 1 && users <= 3) || (relays == 2 && users >= 1 && users <= 2);
    }

    NdtCurve optimal_curve(int relays, int users)
    {
        if (!is_characterized(relays, users))
            throw UncharacterizedConfiguration(relays, users);

        const Rational K(users);
        std::vector<AffineBranch> branches;
        if (relays == 1 && users <= 2)
            branches = {{K + 1, -K}};
        else if (relays == 1)
            branches = {{Rational(4), Rational(-3)}, {Rational(2), Rational(-1, 2)}};
        else if (users == 1)
            branches = {{Rational(3), Rational(-4)}, {Rational(1), Rational(0)}};
        else
            branches = {{Rational(4), Rational(-6)}, {Rational(2), Rational(-3, 2)}, {Rational(3, 2), Rational(-1, 2)}};
        return upper_envelope(branches);
    }

    Rational optimal_ndt(const NetworkConfig &cfg)
    {
        return optimal_curve(cfg.relays(), cfg.users()).evaluate(cfg.mu());
    }

    std::string to_string(SchemeLabel label)
    {
        switch (label)
        {
        case SchemeLabel::unicast:
            return "unicast";
        case SchemeLabel::miso_zf:
            return "miso-zf";
        case SchemeLabel::zf_ia_m1k3:
            return "zf-ia-m1k3";
        case SchemeLabel::x_channel_catalog:
            return "x-channel-catalog";
        case SchemeLabel::m2_catalog:
            return "m2-catalog";
        }
        return "unknown";
    }

    std::vector<AchievablePoint> achievable_catalog(int relays, int users)
    {
        if (relays < 1 || users < 1)
            throw std::invalid_argument("M and K must be positive");
        const int M = relays;
        const int K = users;

        std::vector<AchievablePoint> out;
        out.push_back({Rational(0), Rational(K + M), SchemeLabel::unicast, true});
        out.push_back({Rational(1), max(Rational(K, M + 1), Rational(1)), SchemeLabel::miso_zf, true});

        if (M == 1 && K == 3)
            out.push_back({Rational(K + 1, 2 * K - 1), Rational(K * K - 1, 2 * K - 1), SchemeLabel::zf_ia_m1k3, true});
        if (M == 1 && K >= 3)
            out.push_back({Rational(1, 2), Rational(K + 2, 2), SchemeLabel::x_channel_catalog, false});
        if (M == 2 && K <= 2)
        {
            const NdtCurve opt = optimal_curve(M, K);
            const auto &bp = opt.breakpoints();
            for (std::size_t i = 1; i + 1 < bp.size(); ++i)
                out.push_back({bp[i].mu, bp[i].ndt, SchemeLabel::m2_catalog, true});
        }

        std::stable_sort(out.begin(), out.end(),
                         [](const AchievablePoint &a, const AchievablePoint &b) { return a.mu < b.mu; });
        return out;
    }

    NdtCurve memory_sharing_envelope(const std::vector<AchievablePoint> &points)
    {
        std::vector<CurvePoint> pts;
        pts.reserve(points.size());
        for (const auto &p : points)
        {
            if (p.mu < 0 || p.mu > 1)
                throw std::invalid_argument("achievable point with mu outside [0, 1]");
            pts.push_back({p.mu, p.ndt});
        }
        std::sort(pts.begin(), pts.end(), [](const CurvePoint &a, const CurvePoint &b) {
            return a.mu < b.mu || (a.mu == b.mu && a.ndt < b.ndt);
        });
        pts.erase(std::unique(pts.begin(), pts.end(),
                              [](const CurvePoint &a, const CurvePoint &b) { return a.mu == b.mu; }),
                  pts.end());
        if (pts.empty() || pts.front().mu != 0 || pts.back().mu != 1)
            throw std::invalid_argument("memory sharing needs achievable points at mu = 0 and mu = 1");

        // Lower hull, monotone chain.
        std::vector<CurvePoint> hull;
        for (const auto &p : pts)
        {
            while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) <= 0)
                hull.pop_back();
            hull.push_back(p);
        }
        return NdtCurve(std::move(hull));
    }
}
