// SPDX-License-Identifier: Apache-2.0
//
// cachendt: delivery-time bounds and precoding schemes for cache-aided relay networks
// ------------------------------------------------------------------------

#ifndef CACHENDT_SCHEME_M1K3_HPP
#define CACHENDT_SCHEME_M1K3_HPP

#include "cachendt/core.hpp"

#include <array>
#include <vector>

// Zero-forcing plus subspace-alignment scheme for one relay and three users at
// cache size 4/5. Every file is split into five symbols; the relay caches symbols
// 1-4 of every file. Over T = 8 slots each user sees its 5 desired symbols in 5
// dimensions and all interference squeezed into the remaining 3, while the relay
// recovers the one symbol of its own file it does not cache.
namespace cachendt::m1k3
{
    inline constexpr int users = 3;
    inline constexpr int slots = 8;
    inline constexpr int symbols_per_file = 5;
    inline constexpr int transmitted_symbols = 16;

    // eta_{file, index}
    struct SymbolId
    {
        int file;
        int index;

        auto operator<=>(const SymbolId &) const = default;
    };

    std::string to_string(const SymbolId &x);

    // All transmitted symbols in canonical column order: eta_{1,1..5}, eta_{2,1..5},
    // eta_{3,1..5}, eta_{4,5}.
    const std::array<SymbolId, transmitted_symbols> &transmitted();

    // Column of x in the canonical order; throws std::out_of_range for symbols that
    // are never transmitted.
    int column_of(const SymbolId &x);

    struct SymbolLayout
    {
        std::vector<SymbolId> denb_transmits; // files 1-3 indices {1,2,3,5}, then eta_{4,5}
        std::vector<SymbolId> rn_transmits;   // files 1-3 indices {1,2,3,4}
        std::vector<SymbolId> rn_cached;      // files 1-4 indices 1-4

        bool denb_sends(const SymbolId &x) const;
        bool rn_sends(const SymbolId &x) const;
        bool cached(const SymbolId &x) const;
    };

    SymbolLayout symbol_layout();

    // Symbols forced to zero at each user: zero_forced[k-1] for UE k.
    struct ZfMap
    {
        std::array<std::array<SymbolId, 3>, users> zero_forced;

        // UE at which x is nulled, or 0 if x is never zero-forced.
        int ue_nulling(const SymbolId &x) const;
    };

    ZfMap zf_assignment();

    // Interference at UE k split into three one-dimensional groups:
    // layer 1 {eta_{4,5}, eta_{k+1,4}}, layer 2 {eta_{k+2,4}, eta_{k+2,2}, eta_{k+1,5}},
    // layer 3 {eta_{k+2,5}, eta_{k+2,1}, eta_{k+1,3}} (indices taken with mod_bar).
    struct AlignmentGraph
    {
        std::array<std::array<std::vector<SymbolId>, 3>, users> layers;
    };

    AlignmentGraph alignment_graph();

    // Desired symbols of UE k: eta_{k,1..5}.
    std::array<SymbolId, symbols_per_file> desired_at(int ue);

    // The 8 interfering symbols at UE k that are not zero-forced.
    std::vector<SymbolId> aligned_interference_at(int ue);

    // Raw per-slot precoders (DeNB nu, RN beta) in canonical column order.
    struct SlotPrecoders
    {
        std::array<cplx, transmitted_symbols> nu{};
        std::array<cplx, transmitted_symbols> beta{};

        cplx nu_of(const SymbolId &x) const { return nu[column_of(x)]; }
        cplx beta_of(const SymbolId &x) const { return beta[column_of(x)]; }
    };

    // Solves every ZF and alignment condition of one slot given g[k] (DeNB->UE k) and
    // h[k] (RN->UE k), k = 1..3 stored at [k-1]. The anchor precoder of eta_{4,5} is the
    // product j13 j23 j33 g1 g2 g3 h11 h21 h31; the remaining ones follow from chained
    // scalar and 2x2 solves. No normalization is applied.
    //
    // Throws DegenerateChannel when a coefficient or one of the j-terms is below tol
    // relative to the slot's channel magnitude.
    SlotPrecoders solve_slot(const std::array<cplx, users> &g, const std::array<cplx, users> &h, double tol);

    /// Precoders for all 8 slots.
    ///
    /// Raw slot solutions are first divided by their slot's total transmit amplitude
    /// (slot_gain), which keeps every per-slot equality intact, and then each symbol is
    /// multiplied by one positive scale shared by all slots so that its peak per-slot
    /// energy |nu|^2 + |beta|^2 is 1. Per-symbol scaling keeps zero-forcing and
    /// colinearity of effective channels, not the literal per-slot equalities; those
    /// hold for unscaled(x) instead.
    struct PrecoderPlan
    {
        CMatrix nu;             // slots x 16, zero for RN-only symbols
        CMatrix beta;           // slots x 16, zero for DeNB-only symbols
        Eigen::VectorXd scale;  // per symbol, positive
        Eigen::VectorXd slot_gain;

        CVector nu_of(const SymbolId &x) const { return nu.col(column_of(x)); }
        CVector beta_of(const SymbolId &x) const { return beta.col(column_of(x)); }

        // Slot-normalized precoders with the per-symbol scale removed.
        PrecoderPlan unscaled() const;

        static PrecoderPlan zero();
    };

    // Requires T = 8, M = 1, K = 3 (std::invalid_argument). Slots are solved
    // independently; DegenerateChannel propagates from solve_slot.
    PrecoderPlan solve_precoders(const ChannelSet &ch, double tol = 1e-9);

    // Largest violation of the per-slot ZF and alignment equalities by the given
    // precoders, each relative to the magnitude of the terms involved.
    double condition_residual(const PrecoderPlan &plan, const ChannelSet &ch);

    // UE k: 8 x 16 with entries g_k[t] nu_x[t] + h_k1[t] beta_x[t] in canonical column
    // order. RN: 8 x 13 with entries f_1[t] nu_x[t] over layout.denb_transmits order.
    CMatrix effective_channel_matrix(const PrecoderPlan &plan, const ChannelSet &ch, const Receiver &rx);

    // Drops the columns of symbols the relay has cached from its 8 x 13 matrix, leaving
    // the unknowns eta_{1,5}, eta_{2,5}, eta_{3,5}, eta_{4,5}.
    CMatrix rn_cache_cancel(const CMatrix &rn_matrix, const SymbolLayout &layout);

    std::vector<SymbolId> rn_uncached_unknowns(const SymbolLayout &layout);
}

#endif
