// SPDX-License-Identifier: Apache-2.0
//
// cachendt: delivery-time bounds and precoding schemes for cache-aided relay networks
// ------------------------------------------------------------------------

#ifndef CACHENDT_VERIFIER_HPP
#define CACHENDT_VERIFIER_HPP

#include "cachendt/core.hpp"
#include "cachendt/linalg.hpp"

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace cachendt
{
    // Pass thresholds of the randomized checks.
    namespace thresholds
    {
        inline constexpr double zf_residual = 1e-10;
        inline constexpr double alignment_residual = 1e-8;
        inline constexpr double decode_error = 1e-6;
        inline constexpr double gap_ratio = 1e6;
        inline constexpr double nulling_residual = 1e-10;
        inline constexpr int redraws_per_trial = 16;
    }

    // i.i.d. CN(0, 1) coefficients, fresh per slot. Deterministic in seed.
    ChannelSet draw_channels(std::uint64_t seed, int slots, int relays, int users);
    ChannelSet draw_channels(std::mt19937_64 &rng, int slots, int relays, int users);

    struct SubspaceReport
    {
        Receiver receiver;
        int desired_rank = 0;
        int interference_rank = 0;
        int total_rank = 0;
        double zf_residual = 0.0;        // worst over trials
        double alignment_residual = 0.0; // worst over trials
        double gap_ratio = 0.0;          // interference rank gap, worst over trials
        std::vector<double> singular_values;
    };

    struct VerificationReport
    {
        std::string scheme;
        int relays = 0;
        int users = 0;
        Rational mu;
        std::vector<SubspaceReport> receivers; // UE1..UE3 then RN1 for the m1k3 scheme
        int rn_rank = 0;                       // relay rank after cache cancellation
        double decode_max_error = 0.0;
        double nulling_residual = 0.0;
        Rational ndt;
        Rational per_ue_dof;
        Rational rn_dof;
        Rational sum_dof;
        int trials = 0;
        int failures = 0;
        int redraws = 0;
        std::string first_failure;

        bool passed() const { return failures == 0; }
    };

    class VerificationFailure : public std::runtime_error
    {
    public:
        explicit VerificationFailure(VerificationReport report);
        const VerificationReport &report() const { return report_; }

    private:
        VerificationReport report_;
    };

    // Worker threads for trial loops: CACHENDT_THREADS if set, else the hardware count.
    int default_thread_count();

    // Randomized check of the M=1, K=3 scheme. Trial i draws from an engine seeded with
    // seed + i, redrawing on degenerate channels. Throws VerificationFailure carrying the
    // report when any trial fails.
    VerificationReport verify_m1k3(std::uint64_t seed, int trials, double tol = 1e-9, int threads = 0);

    // mu = 0 unicast or mu = 1 MISO zero-forcing.
    VerificationReport verify_corner(std::uint64_t seed, int trials, const NetworkConfig &cfg, double tol = 1e-9,
                                     int threads = 0);

    struct RateEstimate
    {
        double snr_db;
        std::vector<Receiver> receivers;
        std::vector<double> per_receiver_rate; // bits per channel use, mean over trials
        std::vector<double> fitted_slope;      // rate / log2 SNR fitted over all points
    };

    // Gaussian-input rates of the M=1, K=3 scheme with projection receivers and unit
    // noise. Each transmitted symbol gets power SNR/16 at its peak slot. Needs at least
    // 3 positive SNR points spanning 20 dB (std::invalid_argument otherwise).
    std::vector<RateEstimate> finite_snr_rates(std::uint64_t seed, const std::vector<double> &snr_db, int trials,
                                               double tol = 1e-9, int threads = 0);
}

#endif
