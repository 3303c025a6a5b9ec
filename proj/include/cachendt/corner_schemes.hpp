// SPDX-License-Identifier: Apache-2.0
//
// cachendt: delivery-time bounds and precoding schemes for cache-aided relay networks
// ------------------------------------------------------------------------

#ifndef CACHENDT_CORNER_SCHEMES_HPP
#define CACHENDT_CORNER_SCHEMES_HPP

#include "cachendt/core.hpp"

#include <vector>

namespace cachendt
{
    // mu = 0: the DeNB unicasts each of the K + M distinct demands in its own slot.
    struct TdmaSchedule
    {
        struct Slot
        {
            Receiver receiver;
            int file;
        };
        std::vector<Slot> slots;

        Rational ndt() const { return Rational(static_cast<std::int64_t>(slots.size())); }
    };

    // Throws std::invalid_argument unless cfg.mu() == 0.
    TdmaSchedule unicast_schedule(const NetworkConfig &cfg);

    /// mu = 1: DeNB and relays act as one (M+1)-antenna transmitter.
    ///
    /// When K <= M+1 every UE is served in every slot. Otherwise the schedule has a
    /// frame of K slots whose served sets are consecutive windows of M+1 UEs over the
    /// cyclic sequence 1..K, so each UE is served M+1 times per frame. Slot t of the
    /// channel set uses frame pattern t mod frame length.
    struct MisoZfPlan
    {
        struct Slot
        {
            std::vector<int> served; // UE indices, one-based
            CMatrix beamformers;     // (M+1) x |served|, unit-norm columns
        };
        std::vector<Slot> slots;
        int frame_length = 1;
        int serves_per_frame = 1;

        // frame_length / serves_per_frame = max{K/(M+1), 1}
        Rational ndt() const { return Rational(frame_length, serves_per_frame); }

        // Worst |h_j^T w_i| / (|h_j| |w_i|) over co-served pairs i != j.
        double nulling_residual(const ChannelSet &ch) const;
    };

    // Virtual-antenna channel row of UE k in slot t: [g_k, h_k1, ..., h_kM].
    CVector miso_channel_row(const ChannelSet &ch, int t, int ue);

    // Throws std::invalid_argument unless cfg.mu() == 1 and ch matches cfg; throws
    // DegenerateChannel when a served group's stacked channel has relative smallest
    // singular value below tol.
    MisoZfPlan miso_zf_plan(const ChannelSet &ch, const NetworkConfig &cfg, double tol = 1e-9);
}

#endif
