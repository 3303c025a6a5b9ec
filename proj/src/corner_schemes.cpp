// SPDX-License-Identifier: Apache-2.0
//
// cachendt: delivery-time bounds and precoding schemes for cache-aided relay networks
// ------------------------------------------------------------------------

#include "cachendt/corner_schemes.hpp"

#include <Eigen/SVD>

#include <algorithm>

namespace cachendt
{
    TdmaSchedule unicast_schedule(const NetworkConfig &cfg)
    {
        if (cfg.mu() != 0)
            throw std::invalid_argument("unicast schedule requires mu = 0");
        const auto demand = worst_case_demand(cfg);
        TdmaSchedule schedule;
        for (int u = 1; u <= cfg.users(); ++u)
            schedule.slots.push_back({Receiver::ue(u), demand.file_of(Receiver::ue(u), cfg.users())});
        for (int r = 1; r <= cfg.relays(); ++r)
            schedule.slots.push_back({Receiver::rn(r), demand.file_of(Receiver::rn(r), cfg.users())});
        return schedule;
    }

    CVector miso_channel_row(const ChannelSet &ch, int t, int ue)
    {
        CVector row(ch.relays() + 1);
        row(0) = ch.g(t, ue);
        for (int m = 1; m <= ch.relays(); ++m)
            row(m) = ch.h(t, ue, m);
        return row;
    }

    MisoZfPlan miso_zf_plan(const ChannelSet &ch, const NetworkConfig &cfg, double tol)
    {
        if (cfg.mu() != 1)
            throw std::invalid_argument("MISO zero-forcing requires mu = 1");
        if (ch.relays() != cfg.relays() || ch.users() != cfg.users())
            throw std::invalid_argument("channel set does not match network configuration");

        const int K = cfg.users();
        const int antennas = cfg.relays() + 1;

        MisoZfPlan plan;
        if (K <= antennas)
        {
            plan.frame_length = 1;
            plan.serves_per_frame = 1;
        }
        else
        {
            plan.frame_length = K;
            plan.serves_per_frame = antennas;
        }
        const int group = std::min(K, antennas);

        for (int t = 0; t < ch.slots(); ++t)
        {
            MisoZfPlan::Slot slot;
            const int start = (t % plan.frame_length) * group;
            for (int i = 0; i < group; ++i)
                slot.served.push_back((start + i) % K + 1);

            CMatrix stacked(group, antennas);
            for (int i = 0; i < group; ++i)
                stacked.row(i) = miso_channel_row(ch, t, slot.served[i]).transpose();

            Eigen::JacobiSVD<CMatrix> svd(stacked, Eigen::ComputeThinU | Eigen::ComputeThinV);
            const auto &sv = svd.singularValues();
            if (!(sv(sv.size() - 1) > tol * sv(0)))
                throw DegenerateChannel("co-scheduled UE channels are linearly dependent");

            // Right pseudo-inverse: stacked * W = I.
            CMatrix W = svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
            for (Eigen::Index c = 0; c < W.cols(); ++c)
                W.col(c).normalize();
            slot.beamformers = std::move(W);
            plan.slots.push_back(std::move(slot));
        }
        return plan;
    }

    double MisoZfPlan::nulling_residual(const ChannelSet &ch) const
    {
        double worst = 0.0;
        for (std::size_t t = 0; t < slots.size(); ++t)
        {
            const auto &slot = slots[t];
            for (std::size_t j = 0; j < slot.served.size(); ++j)
            {
                const CVector hj = miso_channel_row(ch, static_cast<int>(t), slot.served[j]);
                for (std::size_t i = 0; i < slot.served.size(); ++i)
                {
                    if (i == j)
                        continue;
                    const auto w = slot.beamformers.col(static_cast<Eigen::Index>(i));
                    const double leak = std::abs((hj.transpose() * w)(0));
                    worst = std::max(worst, leak / (hj.norm() * w.norm()));
                }
            }
        }
        return worst;
    }
}
