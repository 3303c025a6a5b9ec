// SPDX-License-Identifier: Apache-2.0
//
// cachendt: delivery-time bounds and precoding schemes for cache-aided relay networks
// ------------------------------------------------------------------------

#include "cachendt/scheme_m1k3.hpp"

#include <algorithm>
#include <cmath>

namespace cachendt::m1k3
{
    namespace
    {
        int wrap(int a) { return mod_bar(a, users); }

        bool contains(const std::vector<SymbolId> &v, const SymbolId &x)
        {
            return std::find(v.begin(), v.end(), x) != v.end();
        }

        // g_a nu + h_a beta = rhs and g_b nu + h_b beta = 0.
        std::pair<cplx, cplx> solve_with_null(cplx ga, cplx ha, cplx gb, cplx hb, cplx rhs)
        {
            const cplx det = ga * hb - ha * gb;
            return {rhs * hb / det, -rhs * gb / det};
        }

        double relative_gap(cplx a, cplx b)
        {
            const double den = std::abs(a) + std::abs(b);
            return den == 0.0 ? 0.0 : std::abs(a - b) / den;
        }

        void check_dims(const PrecoderPlan &plan, const ChannelSet &ch)
        {
            if (ch.relays() != 1 || ch.users() != users)
                throw std::invalid_argument("scheme needs a channel set with M = 1, K = 3");
            if (plan.nu.rows() != ch.slots() || plan.beta.rows() != ch.slots() ||
                plan.nu.cols() != transmitted_symbols || plan.beta.cols() != transmitted_symbols)
                throw std::invalid_argument("precoder plan does not match channel dimensions");
        }
    }

    std::string to_string(const SymbolId &x)
    {
        return "eta_" + std::to_string(x.file) + "_" + std::to_string(x.index);
    }

    const std::array<SymbolId, transmitted_symbols> &transmitted()
    {
        static const auto order = [] {
            std::array<SymbolId, transmitted_symbols> a{};
            int c = 0;
            for (int i = 1; i <= users; ++i)
                for (int j = 1; j <= symbols_per_file; ++j)
                    a[c++] = {i, j};
            a[c] = {4, 5};
            return a;
        }();
        return order;
    }

    int column_of(const SymbolId &x)
    {
        if (x.file >= 1 && x.file <= users && x.index >= 1 && x.index <= symbols_per_file)
            return (x.file - 1) * symbols_per_file + (x.index - 1);
        if (x == SymbolId{4, 5})
            return transmitted_symbols - 1;
        throw std::out_of_range(to_string(x) + " is not transmitted");
    }

    bool SymbolLayout::denb_sends(const SymbolId &x) const { return contains(denb_transmits, x); }
    bool SymbolLayout::rn_sends(const SymbolId &x) const { return contains(rn_transmits, x); }
    bool SymbolLayout::cached(const SymbolId &x) const { return contains(rn_cached, x); }

    SymbolLayout symbol_layout()
    {
        SymbolLayout layout;
        for (int i = 1; i <= users; ++i)
            for (int j : {1, 2, 3, 5})
                layout.denb_transmits.push_back({i, j});
        layout.denb_transmits.push_back({4, 5});

        for (int i = 1; i <= users; ++i)
            for (int j = 1; j <= 4; ++j)
                layout.rn_transmits.push_back({i, j});

        for (int i = 1; i <= 4; ++i)
            for (int j = 1; j <= 4; ++j)
                layout.rn_cached.push_back({i, j});
        return layout;
    }

    int ZfMap::ue_nulling(const SymbolId &x) const
    {
        for (int k = 0; k < users; ++k)
            if (std::find(zero_forced[k].begin(), zero_forced[k].end(), x) != zero_forced[k].end())
                return k + 1;
        return 0;
    }

    ZfMap zf_assignment()
    {
        ZfMap map;
        for (int k = 1; k <= users; ++k)
            map.zero_forced[k - 1] = {SymbolId{wrap(k + 1), 1}, SymbolId{wrap(k + 1), 2}, SymbolId{wrap(k + 2), 3}};
        return map;
    }

    AlignmentGraph alignment_graph()
    {
        AlignmentGraph graph;
        for (int k = 1; k <= users; ++k)
        {
            const int n1 = wrap(k + 1);
            const int n2 = wrap(k + 2);
            graph.layers[k - 1][0] = {{4, 5}, {n1, 4}};
            graph.layers[k - 1][1] = {{n2, 4}, {n2, 2}, {n1, 5}};
            graph.layers[k - 1][2] = {{n2, 5}, {n2, 1}, {n1, 3}};
        }
        return graph;
    }

    std::array<SymbolId, symbols_per_file> desired_at(int ue)
    {
        if (ue < 1 || ue > users)
            throw std::out_of_range("UE index out of range");
        std::array<SymbolId, symbols_per_file> out{};
        for (int j = 1; j <= symbols_per_file; ++j)
            out[j - 1] = {ue, j};
        return out;
    }

    std::vector<SymbolId> aligned_interference_at(int ue)
    {
        const auto graph = alignment_graph();
        std::vector<SymbolId> out;
        for (const auto &layer : graph.layers.at(ue - 1))
            out.insert(out.end(), layer.begin(), layer.end());
        return out;
    }

    SlotPrecoders solve_slot(const std::array<cplx, users> &g, const std::array<cplx, users> &h, double tol)
    {
        // One-based accessors to keep the index arithmetic readable.
        auto G = [&](int k) { return g[k - 1]; };
        auto H = [&](int k) { return h[k - 1]; };

        double ref = 0.0;
        for (int k = 1; k <= users; ++k)
            ref = std::max({ref, std::abs(G(k)), std::abs(H(k))});
        for (int k = 1; k <= users; ++k)
            if (!(std::abs(G(k)) > tol * ref) || !(std::abs(H(k)) > tol * ref))
                throw DegenerateChannel("vanishing channel coefficient");

        // j_{a3} = g_b h_c - g_c h_b over the cyclic triple (a, b, c); these are also the
        // determinants of every 2x2 system below.
        auto jterm = [&](int b, int c) {
            const cplx v = G(b) * H(c) - G(c) * H(b);
            const double mag = std::abs(G(b) * H(c)) + std::abs(G(c) * H(b));
            if (!(std::abs(v) > tol * mag))
                throw DegenerateChannel("vanishing j-term");
            return v;
        };
        const cplx j13 = jterm(2, 3);
        const cplx j23 = jterm(3, 1);
        const cplx j33 = jterm(1, 2);

        SlotPrecoders p;
        auto nu = [&](int i, int j) -> cplx & { return p.nu[column_of({i, j})]; };
        auto beta = [&](int i, int j) -> cplx & { return p.beta[column_of({i, j})]; };

        nu(4, 5) = j13 * j23 * j33 * G(1) * G(2) * G(3) * H(1) * H(2) * H(3);

        // Layer 1 at UE k: eta_{4,5} and eta_{k+1,4} arrive identically.
        for (int k = 1; k <= users; ++k)
            beta(wrap(k + 1), 4) = nu(4, 5) * G(k) / H(k);

        // Layer 2 at UE k, DeNB-only member: eta_{k+1,5} matches eta_{k+2,4}.
        for (int k = 1; k <= users; ++k)
            nu(wrap(k + 1), 5) = beta(wrap(k + 2), 4) * H(k) / G(k);

        for (int k = 1; k <= users; ++k)
        {
            const int n1 = wrap(k + 1);
            const int n2 = wrap(k + 2);

            // Layer 2: eta_{k+2,2} matches eta_{k+2,4} at UE k, nulled at UE k+1.
            std::tie(nu(n2, 2), beta(n2, 2)) = solve_with_null(G(k), H(k), G(n1), H(n1), beta(n2, 4) * H(k));

            // Layer 3: eta_{k+2,1} (nulled at UE k+1) and eta_{k+1,3} (nulled at UE k+2)
            // both match eta_{k+2,5} at UE k.
            const cplx target = nu(n2, 5) * G(k);
            std::tie(nu(n2, 1), beta(n2, 1)) = solve_with_null(G(k), H(k), G(n1), H(n1), target);
            std::tie(nu(n1, 3), beta(n1, 3)) = solve_with_null(G(k), H(k), G(n2), H(n2), target);
        }
        return p;
    }

    PrecoderPlan PrecoderPlan::unscaled() const
    {
        PrecoderPlan out = *this;
        for (int c = 0; c < transmitted_symbols; ++c)
        {
            out.nu.col(c) /= scale(c);
            out.beta.col(c) /= scale(c);
        }
        out.scale.setOnes();
        return out;
    }

    PrecoderPlan PrecoderPlan::zero()
    {
        return {CMatrix::Zero(slots, transmitted_symbols), CMatrix::Zero(slots, transmitted_symbols),
                Eigen::VectorXd::Ones(transmitted_symbols), Eigen::VectorXd::Ones(slots)};
    }

    PrecoderPlan solve_precoders(const ChannelSet &ch, double tol)
    {
        if (ch.slots() != slots || ch.relays() != 1 || ch.users() != users)
            throw std::invalid_argument("scheme needs a channel set with T = 8, M = 1, K = 3");
        if (!(tol > 0.0))
            throw std::invalid_argument("tolerance must be positive");

        PrecoderPlan plan = PrecoderPlan::zero();
        for (int t = 0; t < slots; ++t)
        {
            std::array<cplx, users> g{};
            std::array<cplx, users> h{};
            for (int k = 1; k <= users; ++k)
            {
                g[k - 1] = ch.g(t, k);
                h[k - 1] = ch.h(t, k, 1);
            }
            const SlotPrecoders raw = solve_slot(g, h, tol);

            double energy = 0.0;
            for (int c = 0; c < transmitted_symbols; ++c)
                energy += std::norm(raw.nu[c]) + std::norm(raw.beta[c]);
            if (!(energy > 0.0) || !std::isfinite(energy))
                throw DegenerateChannel("slot precoders not representable");

            plan.slot_gain(t) = 1.0 / std::sqrt(energy);
            for (int c = 0; c < transmitted_symbols; ++c)
            {
                plan.nu(t, c) = raw.nu[c] * plan.slot_gain(t);
                plan.beta(t, c) = raw.beta[c] * plan.slot_gain(t);
            }
        }

        for (int c = 0; c < transmitted_symbols; ++c)
        {
            const double peak = (plan.nu.col(c).cwiseAbs2() + plan.beta.col(c).cwiseAbs2()).maxCoeff();
            if (!(peak > 0.0))
                throw DegenerateChannel("symbol " + to_string(transmitted()[c]) + " is never transmitted");
            plan.scale(c) = 1.0 / std::sqrt(peak);
            plan.nu.col(c) *= plan.scale(c);
            plan.beta.col(c) *= plan.scale(c);
        }
        return plan;
    }

    double condition_residual(const PrecoderPlan &plan, const ChannelSet &ch)
    {
        check_dims(plan, ch);
        const auto zf = zf_assignment();
        const auto graph = alignment_graph();

        double worst = 0.0;
        for (int t = 0; t < ch.slots(); ++t)
            for (int k = 1; k <= users; ++k)
            {
                auto rx = [&](const SymbolId &x) {
                    const int c = column_of(x);
                    return ch.g(t, k) * plan.nu(t, c) + ch.h(t, k, 1) * plan.beta(t, c);
                };
                for (const auto &x : zf.zero_forced[k - 1])
                {
                    const int c = column_of(x);
                    const double den = std::abs(ch.g(t, k) * plan.nu(t, c)) + std::abs(ch.h(t, k, 1) * plan.beta(t, c));
                    if (den > 0.0)
                        worst = std::max(worst, std::abs(rx(x)) / den);
                }
                for (const auto &layer : graph.layers[k - 1])
                    for (std::size_t a = 1; a < layer.size(); ++a)
                        worst = std::max(worst, relative_gap(rx(layer[0]), rx(layer[a])));
            }
        return worst;
    }

    CMatrix effective_channel_matrix(const PrecoderPlan &plan, const ChannelSet &ch, const Receiver &rx)
    {
        check_dims(plan, ch);
        const int T = ch.slots();
        if (rx.kind == Receiver::Kind::ue)
        {
            if (rx.index < 1 || rx.index > users)
                throw std::out_of_range("UE index out of range");
            CMatrix A(T, transmitted_symbols);
            for (int t = 0; t < T; ++t)
                for (int c = 0; c < transmitted_symbols; ++c)
                    A(t, c) = ch.g(t, rx.index) * plan.nu(t, c) + ch.h(t, rx.index, 1) * plan.beta(t, c);
            return A;
        }

        if (rx.index != 1)
            throw std::out_of_range("RN index out of range");
        const auto layout = symbol_layout();
        CMatrix A(T, static_cast<Eigen::Index>(layout.denb_transmits.size()));
        for (int t = 0; t < T; ++t)
            for (std::size_t c = 0; c < layout.denb_transmits.size(); ++c)
                A(t, c) = ch.f(t, 1) * plan.nu(t, column_of(layout.denb_transmits[c]));
        return A;
    }

    std::vector<SymbolId> rn_uncached_unknowns(const SymbolLayout &layout)
    {
        std::vector<SymbolId> out;
        for (const auto &x : layout.denb_transmits)
            if (!layout.cached(x))
                out.push_back(x);
        return out;
    }

    CMatrix rn_cache_cancel(const CMatrix &rn_matrix, const SymbolLayout &layout)
    {
        if (rn_matrix.cols() != static_cast<Eigen::Index>(layout.denb_transmits.size()))
            throw std::invalid_argument("RN matrix must have one column per DeNB-transmitted symbol");
        const auto keep = rn_uncached_unknowns(layout);
        CMatrix out(rn_matrix.rows(), static_cast<Eigen::Index>(keep.size()));
        Eigen::Index dst = 0;
        for (std::size_t c = 0; c < layout.denb_transmits.size(); ++c)
            if (!layout.cached(layout.denb_transmits[c]))
                out.col(dst++) = rn_matrix.col(static_cast<Eigen::Index>(c));
        return out;
    }
}
