// SPDX-License-Identifier: Apache-2.0
//
// cachendt: delivery-time bounds and precoding schemes for cache-aided relay networks
// ------------------------------------------------------------------------

#ifndef CACHENDT_NDT_BOUNDS_HPP
#define CACHENDT_NDT_BOUNDS_HPP

#include "cachendt/core.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace cachendt
{
    struct CurvePoint
    {
        Rational mu;
        Rational ndt;

        bool operator==(const CurvePoint &) const = default;
    };

    /// Piecewise-linear function of the cache size on [0, 1], stored by its breakpoints.
    ///
    /// Breakpoints are strictly increasing in mu, start at 0 and end at 1. The
    /// representation is canonical: interior breakpoints that lie on the segment
    /// joining their neighbours are dropped on construction, so two curves describing
    /// the same function compare equal.
    class NdtCurve
    {
    public:
        explicit NdtCurve(std::vector<CurvePoint> breakpoints);

        const std::vector<CurvePoint> &breakpoints() const { return breakpoints_; }

        // Exact linear interpolation; mu outside [0, 1] throws std::out_of_range.
        Rational evaluate(const Rational &mu) const;

        bool is_convex() const;
        bool is_non_increasing() const;

        bool operator==(const NdtCurve &) const = default;

    private:
        std::vector<CurvePoint> breakpoints_;
    };

    // Affine function intercept + slope * mu.
    struct AffineBranch
    {
        Rational intercept;
        Rational slope;

        Rational operator()(const Rational &mu) const { return intercept + slope * mu; }
    };

    // Exact upper envelope (pointwise maximum) of affine branches over [0, 1].
    NdtCurve upper_envelope(const std::vector<AffineBranch> &branches);

    // (ell, s) selecting one affine branch of the converse: s in [1, min{M+1, K}] output
    // signals, ell in [M+1-s, M] relay caches.
    struct BoundComponentIndex
    {
        int ell;
        int s;
    };

    std::vector<BoundComponentIndex> bound_components(int relays, int users);

    // [K + ell - mu (sbar (K - s + (sbar-1)/2) + ell (ell+1)/2)] / s with sbar = M+1-s.
    // Throws std::out_of_range when (ell, s) lies outside the admissible ranges.
    Rational delta_lb_component(const NetworkConfig &cfg, BoundComponentIndex idx);

    // The same branch as a function of mu.
    AffineBranch delta_lb_branch(int relays, int users, BoundComponentIndex idx);

    // max{1, max over admissible (ell, s) of delta_lb_component}.
    Rational lower_bound(const NetworkConfig &cfg);

    NdtCurve lower_bound_curve(int relays, int users);

    class UncharacterizedConfiguration : public std::invalid_argument
    {
    public:
        UncharacterizedConfiguration(int relays, int users);
    };

    // (M, K) pairs whose optimal tradeoff is known in closed form.
    bool is_characterized(int relays, int users);

    // Closed-form optimal NDT; throws UncharacterizedConfiguration outside
    // {(1,1), (1,2), (1,3), (2,1), (2,2)}.
    Rational optimal_ndt(const NetworkConfig &cfg);
    NdtCurve optimal_curve(int relays, int users);

    enum class SchemeLabel
    {
        unicast,
        miso_zf,
        zf_ia_m1k3,
        x_channel_catalog,
        m2_catalog
    };

    std::string to_string(SchemeLabel label);

    struct AchievablePoint
    {
        Rational mu;
        Rational ndt;
        SchemeLabel scheme_label;
        bool proven_optimal;
    };

    // Corner points with a known achievability argument, sorted by mu.
    std::vector<AchievablePoint> achievable_catalog(int relays, int users);

    // Lower convex envelope of the points over [0, 1]. Requires points at mu = 0 and
    // mu = 1 (std::invalid_argument otherwise).
    NdtCurve memory_sharing_envelope(const std::vector<AchievablePoint> &points);
}

#endif
