// SPDX-License-Identifier: Apache-2.0
//
// cachendt: delivery-time bounds and precoding schemes for cache-aided relay networks
// ------------------------------------------------------------------------

#include "cachendt/verifier.hpp"

#include "cachendt/corner_schemes.hpp"
#include "cachendt/scheme_m1k3.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <thread>

namespace cachendt
{
    namespace
    {
        // Runs body(i) for i in [0, n) on up to `threads` workers. Each index is owned
        // by exactly one worker, so results written per index need no synchronization.
        void parallel_for(int n, int threads, const std::function<void(int)> &body)
        {
            if (threads <= 0)
                threads = default_thread_count();
            threads = std::clamp(threads, 1, std::max(n, 1));
            if (threads == 1)
            {
                for (int i = 0; i < n; ++i)
                    body(i);
                return;
            }
            std::vector<std::jthread> pool;
            pool.reserve(threads);
            for (int w = 0; w < threads; ++w)
                pool.emplace_back([&, w] {
                    for (int i = w; i < n; i += threads)
                        body(i);
                });
        }

        CVector draw_symbols(std::mt19937_64 &rng, int n)
        {
            std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
            CVector s(n);
            for (int i = 0; i < n; ++i)
            {
                const double re = normal(rng);
                const double im = normal(rng);
                s(i) = cplx(re, im);
            }
            return s;
        }

        double max_abs(const CMatrix &a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

        std::vector<int> columns(const std::vector<m1k3::SymbolId> &syms)
        {
            std::vector<int> out;
            for (const auto &x : syms)
                out.push_back(m1k3::column_of(x));
            return out;
        }

        struct M1k3Trial
        {
            std::vector<SubspaceReport> receivers;
            int rn_rank = 0;
            double decode_error = 0.0;
            int redraws = 0;
            std::string failure;
        };

        M1k3Trial run_m1k3_trial(std::uint64_t seed, double tol)
        {
            using namespace m1k3;
            std::mt19937_64 rng(seed);
            M1k3Trial out;

            ChannelSet ch = draw_channels(rng, slots, 1, users);
            PrecoderPlan plan;
            for (;;)
            {
                try
                {
                    plan = solve_precoders(ch, tol);
                    break;
                }
                catch (const DegenerateChannel &)
                {
                    if (++out.redraws > thresholds::redraws_per_trial)
                    {
                        out.failure = "too many degenerate channel draws";
                        return out;
                    }
                    ch = draw_channels(rng, slots, 1, users);
                }
            }
            const CVector s = draw_symbols(rng, transmitted_symbols);
            const double s_max = s.cwiseAbs().maxCoeff();
            const auto zf = zf_assignment();
            const auto graph = alignment_graph();

            auto fail = [&](const std::string &why) {
                if (out.failure.empty())
                    out.failure = why;
            };

            for (int k = 1; k <= users; ++k)
            {
                const std::string who = "UE" + std::to_string(k);
                const CMatrix A = equilibrate_rows(effective_channel_matrix(plan, ch, Receiver::ue(k)));

                const auto des = desired_at(k);
                std::vector<int> des_cols = columns({des.begin(), des.end()});
                std::vector<int> int_cols;
                for (int c = 0; c < transmitted_symbols; ++c)
                    if (std::find(des_cols.begin(), des_cols.end(), c) == des_cols.end())
                        int_cols.push_back(c);

                const CMatrix D = select_columns(A, des_cols);
                const CMatrix I = select_columns(A, int_cols);
                const RankInfo rd = rank_with_gap(D, tol);
                const RankInfo ri = rank_with_gap(I, tol);
                const RankInfo rt = rank_with_gap(A, tol);

                SubspaceReport rep;
                rep.receiver = Receiver::ue(k);
                rep.desired_rank = rd.rank;
                rep.interference_rank = ri.rank;
                rep.total_rank = rt.rank;
                rep.gap_ratio = ri.gap_ratio;
                rep.singular_values = ri.singular_values;

                const std::array<SymbolId, 3> &nulled = zf.zero_forced[k - 1];
                const double zf_res = max_abs(select_columns(A, columns({nulled.begin(), nulled.end()}))) / max_abs(A);
                rep.zf_residual = zf_res;
                for (const auto &group : graph.layers[k - 1])
                    rep.alignment_residual = std::max(rep.alignment_residual,
                                                      colinearity_residual(select_columns(A, columns(group))));

                if (rd.rank != symbols_per_file)
                    fail(who + " desired rank " + std::to_string(rd.rank));
                if (ri.rank != slots - symbols_per_file)
                    fail(who + " interference rank " + std::to_string(ri.rank));
                if (rt.rank != slots)
                    fail(who + " total rank " + std::to_string(rt.rank));
                if (ri.gap_ratio < thresholds::gap_ratio)
                    fail(who + " interference singular-value gap " + to_decimal_string(ri.gap_ratio));
                if (rep.zf_residual > thresholds::zf_residual)
                    fail(who + " zero-forcing residual " + to_decimal_string(rep.zf_residual));
                if (rep.alignment_residual > thresholds::alignment_residual)
                    fail(who + " alignment residual " + to_decimal_string(rep.alignment_residual));

                // Noiseless decoding: solve y = [D, U] [s_des; z] with U spanning interference.
                const CVector y = A * s;
                CMatrix B(slots, slots);
                B << D, column_basis(I, slots - symbols_per_file);
                const CVector x = B.fullPivLu().solve(y);
                double err = 0.0;
                for (int j = 0; j < symbols_per_file; ++j)
                    err = std::max(err, std::abs(x(j) - s(des_cols[j])) / s_max);
                if (!std::isfinite(err))
                    err = std::numeric_limits<double>::infinity();
                out.decode_error = std::max(out.decode_error, err);
                if (err > thresholds::decode_error)
                    fail(who + " decode error " + to_decimal_string(err));

                out.receivers.push_back(std::move(rep));
            }

            {
                const auto layout = symbol_layout();
                const auto unknowns = rn_uncached_unknowns(layout);
                const CMatrix R = equilibrate_rows(
                    rn_cache_cancel(effective_channel_matrix(plan, ch, Receiver::rn(1)), layout));
                const RankInfo rr = rank_with_gap(R, tol);
                out.rn_rank = rr.rank;

                // eta_{4,5} is the RN's own symbol; the remaining unknowns are interference there.
                std::vector<int> other;
                int own = -1;
                for (std::size_t c = 0; c < unknowns.size(); ++c)
                {
                    if (unknowns[c].file == 4)
                        own = static_cast<int>(c);
                    else
                        other.push_back(static_cast<int>(c));
                }

                SubspaceReport rep;
                rep.receiver = Receiver::rn(1);
                rep.desired_rank = rank_with_gap(R.col(own), tol).rank;
                const RankInfo ri = rank_with_gap(select_columns(R, other), tol);
                rep.interference_rank = ri.rank;
                rep.total_rank = rr.rank;
                rep.gap_ratio = ri.gap_ratio;
                rep.singular_values = rr.singular_values;

                if (rr.rank != static_cast<int>(unknowns.size()))
                    fail("RN post-cancellation rank " + std::to_string(rr.rank));

                CVector su(static_cast<Eigen::Index>(unknowns.size()));
                for (std::size_t c = 0; c < unknowns.size(); ++c)
                    su(c) = s(column_of(unknowns[c]));
                const CVector y = R * su;
                const CVector x = R.colPivHouseholderQr().solve(y);
                double err = (x - su).cwiseAbs().maxCoeff() / s_max;
                if (!std::isfinite(err))
                    err = std::numeric_limits<double>::infinity();
                out.decode_error = std::max(out.decode_error, err);
                if (err > thresholds::decode_error)
                    fail("RN decode error " + to_decimal_string(err));
                out.receivers.push_back(std::move(rep));
            }
            return out;
        }

        struct CornerTrial
        {
            double decode_error = 0.0;
            double nulling = 0.0;
            int redraws = 0;
            std::string failure;
        };

        CornerTrial run_unicast_trial(std::uint64_t seed, const NetworkConfig &cfg)
        {
            std::mt19937_64 rng(seed);
            const auto schedule = unicast_schedule(cfg);
            const int T = static_cast<int>(schedule.slots.size());
            const ChannelSet ch = draw_channels(rng, T, cfg.relays(), cfg.users());
            const CVector s = draw_symbols(rng, T);

            CornerTrial out;
            for (int t = 0; t < T; ++t)
            {
                const auto &rx = schedule.slots[t].receiver;
                const cplx c = rx.kind == Receiver::Kind::ue ? ch.g(t, rx.index) : ch.f(t, rx.index);
                const cplx y = c * s(t);
                out.decode_error = std::max(out.decode_error, std::abs(y / c - s(t)) / s.cwiseAbs().maxCoeff());
            }
            if (out.decode_error > thresholds::decode_error)
                out.failure = "unicast decode error " + to_decimal_string(out.decode_error);
            return out;
        }

        CornerTrial run_miso_trial(std::uint64_t seed, const NetworkConfig &cfg, double tol, int frame)
        {
            std::mt19937_64 rng(seed);
            CornerTrial out;
            ChannelSet ch = draw_channels(rng, frame, cfg.relays(), cfg.users());
            MisoZfPlan plan;
            for (;;)
            {
                try
                {
                    plan = miso_zf_plan(ch, cfg, tol);
                    break;
                }
                catch (const DegenerateChannel &)
                {
                    if (++out.redraws > thresholds::redraws_per_trial)
                    {
                        out.failure = "too many degenerate channel draws";
                        return out;
                    }
                    ch = draw_channels(rng, frame, cfg.relays(), cfg.users());
                }
            }

            out.nulling = plan.nulling_residual(ch);
            for (int t = 0; t < ch.slots(); ++t)
            {
                const auto &slot = plan.slots[t];
                const int n = static_cast<int>(slot.served.size());
                const CVector s = draw_symbols(rng, n);
                const CVector x = slot.beamformers * s;
                for (int j = 0; j < n; ++j)
                {
                    const CVector hj = miso_channel_row(ch, t, slot.served[j]);
                    const cplx y = (hj.transpose() * x)(0);
                    const cplx gain = (hj.transpose() * slot.beamformers.col(j))(0);
                    out.decode_error = std::max(out.decode_error, std::abs(y / gain - s(j)) / s.cwiseAbs().maxCoeff());
                }
            }
            if (out.nulling > thresholds::nulling_residual)
                out.failure = "nulling residual " + to_decimal_string(out.nulling);
            else if (!(out.decode_error <= thresholds::decode_error))
                out.failure = "MISO decode error " + to_decimal_string(out.decode_error);
            return out;
        }

        double fit_slope(const std::vector<double> &x, const std::vector<double> &y)
        {
            const double n = static_cast<double>(x.size());
            double mx = 0.0, my = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i)
            {
                mx += x[i];
                my += y[i];
            }
            mx /= n;
            my /= n;
            double sxy = 0.0, sxx = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i)
            {
                sxy += (x[i] - mx) * (y[i] - my);
                sxx += (x[i] - mx) * (x[i] - mx);
            }
            return sxy / sxx;
        }

        // log2 det(I + p E^H E) for a full-column-rank E.
        double log2_det_gain(const CMatrix &E, double p)
        {
            const CMatrix G = CMatrix::Identity(E.cols(), E.cols()) + p * (E.adjoint() * E);
            Eigen::LLT<CMatrix> llt(G);
            const CMatrix &L = llt.matrixL();
            double acc = 0.0;
            for (Eigen::Index i = 0; i < L.rows(); ++i)
                acc += std::log2(std::real(L(i, i)));
            return 2.0 * acc;
        }
    }

    ChannelSet draw_channels(std::mt19937_64 &rng, int slots, int relays, int users)
    {
        if (slots < 1 || relays < 1 || users < 1)
            throw std::invalid_argument("T, M and K must be positive");
        std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
        auto draw = [&] {
            const double re = normal(rng);
            const double im = normal(rng);
            return cplx(re, im);
        };

        CMatrix f(slots, relays);
        CMatrix g(slots, users);
        std::vector<CMatrix> h(slots, CMatrix(users, relays));
        for (int t = 0; t < slots; ++t)
        {
            for (int m = 0; m < relays; ++m)
                f(t, m) = draw();
            for (int k = 0; k < users; ++k)
                g(t, k) = draw();
            for (int k = 0; k < users; ++k)
                for (int m = 0; m < relays; ++m)
                    h[t](k, m) = draw();
        }
        return ChannelSet(std::move(f), std::move(g), std::move(h));
    }

    ChannelSet draw_channels(std::uint64_t seed, int slots, int relays, int users)
    {
        std::mt19937_64 rng(seed);
        return draw_channels(rng, slots, relays, users);
    }

    VerificationFailure::VerificationFailure(VerificationReport report)
        : std::runtime_error("verification failed: " + report.first_failure), report_(std::move(report))
    {
    }

    int default_thread_count()
    {
        if (const char *env = std::getenv("CACHENDT_THREADS"))
        {
            const int n = std::atoi(env);
            if (n > 0)
                return n;
        }
        return std::max(1u, std::thread::hardware_concurrency());
    }

    VerificationReport verify_m1k3(std::uint64_t seed, int trials, double tol, int threads)
    {
        using namespace m1k3;
        if (trials < 1)
            throw std::invalid_argument("trials must be positive");
        if (!(tol > 0.0))
            throw std::invalid_argument("tolerance must be positive");

        std::vector<M1k3Trial> results(trials);
        parallel_for(trials, threads, [&](int i) { results[i] = run_m1k3_trial(seed + static_cast<std::uint64_t>(i), tol); });

        VerificationReport report;
        report.scheme = "zf-ia-m1k3";
        report.relays = 1;
        report.users = users;
        report.mu = Rational(4, 5);
        report.trials = trials;

        int shown = -1;
        for (int i = 0; i < trials; ++i)
        {
            const auto &r = results[i];
            report.redraws += r.redraws;
            report.decode_max_error = std::max(report.decode_max_error, r.decode_error);
            if (!r.failure.empty())
            {
                if (report.failures == 0)
                {
                    report.first_failure = "trial " + std::to_string(i) + ": " + r.failure;
                    shown = i;
                }
                ++report.failures;
            }
        }
        if (shown < 0)
            shown = 0;

        // Ranks and spectra come from the first failing trial (or trial 0); residuals
        // and gaps are worst cases over all trials.
        report.receivers = results[shown].receivers;
        report.rn_rank = results[shown].rn_rank;
        for (std::size_t rx = 0; rx < report.receivers.size(); ++rx)
        {
            auto &agg = report.receivers[rx];
            for (const auto &r : results)
            {
                if (rx >= r.receivers.size())
                    continue;
                agg.zf_residual = std::max(agg.zf_residual, r.receivers[rx].zf_residual);
                agg.alignment_residual = std::max(agg.alignment_residual, r.receivers[rx].alignment_residual);
                agg.gap_ratio = std::min(agg.gap_ratio, r.receivers[rx].gap_ratio);
            }
        }

        const auto layout = symbol_layout();
        int rn_wanted = 0;
        for (const auto &x : rn_uncached_unknowns(layout))
            rn_wanted += x.file == 4 ? 1 : 0;
        report.ndt = Rational(slots, symbols_per_file);
        report.per_ue_dof = Rational(symbols_per_file, slots);
        report.rn_dof = Rational(rn_wanted, slots);
        report.sum_dof = report.per_ue_dof * users + report.rn_dof;

        if (!report.passed())
            throw VerificationFailure(report);
        return report;
    }

    VerificationReport verify_corner(std::uint64_t seed, int trials, const NetworkConfig &cfg, double tol, int threads)
    {
        if (trials < 1)
            throw std::invalid_argument("trials must be positive");
        if (!(tol > 0.0))
            throw std::invalid_argument("tolerance must be positive");
        if (cfg.mu() != 0 && cfg.mu() != 1)
            throw std::invalid_argument("corner schemes exist only for mu = 0 and mu = 1");

        const bool unicast = cfg.mu() == 0;
        const int K = cfg.users();
        const int M = cfg.relays();
        const int frame = K <= M + 1 ? 1 : K;

        std::vector<CornerTrial> results(trials);
        parallel_for(trials, threads, [&](int i) {
            const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
            results[i] = unicast ? run_unicast_trial(s, cfg) : run_miso_trial(s, cfg, tol, frame);
        });

        VerificationReport report;
        report.scheme = unicast ? "unicast" : "miso-zf";
        report.relays = M;
        report.users = K;
        report.mu = cfg.mu();
        report.trials = trials;
        for (int i = 0; i < trials; ++i)
        {
            const auto &r = results[i];
            report.redraws += r.redraws;
            report.decode_max_error = std::max(report.decode_max_error, r.decode_error);
            report.nulling_residual = std::max(report.nulling_residual, r.nulling);
            if (!r.failure.empty())
            {
                if (report.failures == 0)
                    report.first_failure = "trial " + std::to_string(i) + ": " + r.failure;
                ++report.failures;
            }
        }

        if (unicast)
        {
            report.ndt = unicast_schedule(cfg).ndt();
            report.per_ue_dof = 1 / report.ndt;
            report.rn_dof = 1 / report.ndt;
            report.sum_dof = report.per_ue_dof * (K + M);
        }
        else
        {
            report.ndt = K <= M + 1 ? Rational(1) : Rational(K, M + 1);
            report.per_ue_dof = 1 / report.ndt;
            report.rn_dof = 0;
            report.sum_dof = report.per_ue_dof * K;
        }

        if (!report.passed())
            throw VerificationFailure(report);
        return report;
    }

    std::vector<RateEstimate> finite_snr_rates(std::uint64_t seed, const std::vector<double> &snr_db, int trials,
                                               double tol, int threads)
    {
        using namespace m1k3;
        if (snr_db.size() < 3)
            throw std::invalid_argument("rate slope needs at least 3 SNR points");
        for (double v : snr_db)
            if (!std::isfinite(v) || !(v > 0.0))
                throw std::invalid_argument("SNR points must be positive and finite (dB)");
        const auto [lo, hi] = std::minmax_element(snr_db.begin(), snr_db.end());
        if (*hi - *lo < 20.0)
            throw std::invalid_argument("SNR points must span at least 20 dB");
        if (trials < 1)
            throw std::invalid_argument("trials must be positive");

        const std::size_t npts = snr_db.size();
        constexpr int nrx = users + 1;
        std::vector<std::vector<double>> per_trial(trials, std::vector<double>(npts * nrx, 0.0));

        parallel_for(trials, threads, [&](int i) {
            std::mt19937_64 rng(seed + static_cast<std::uint64_t>(i));
            ChannelSet ch = draw_channels(rng, slots, 1, users);
            PrecoderPlan plan;
            for (int attempt = 0;; ++attempt)
            {
                try
                {
                    plan = solve_precoders(ch, tol);
                    break;
                }
                catch (const DegenerateChannel &)
                {
                    if (attempt >= thresholds::redraws_per_trial)
                        throw;
                    ch = draw_channels(rng, slots, 1, users);
                }
            }

            // Effective desired channels after projecting interference away.
            std::vector<CMatrix> projected;
            for (int k = 1; k <= users; ++k)
            {
                const CMatrix A = effective_channel_matrix(plan, ch, Receiver::ue(k));
                std::vector<int> des, itf;
                for (int c = 0; c < transmitted_symbols; ++c)
                    (transmitted()[c].file == k ? des : itf).push_back(c);
                const CMatrix Q = complement_basis(select_columns(A, itf), slots - symbols_per_file);
                projected.push_back(Q.adjoint() * select_columns(A, des));
            }
            {
                const auto layout = symbol_layout();
                const auto unknowns = rn_uncached_unknowns(layout);
                const CMatrix R = rn_cache_cancel(effective_channel_matrix(plan, ch, Receiver::rn(1)), layout);
                std::vector<int> own, other;
                for (std::size_t c = 0; c < unknowns.size(); ++c)
                    (unknowns[c].file == 4 ? own : other).push_back(static_cast<int>(c));
                const CMatrix Q = complement_basis(select_columns(R, other), static_cast<int>(other.size()));
                projected.push_back(Q.adjoint() * select_columns(R, own));
            }

            for (std::size_t p = 0; p < npts; ++p)
            {
                const double power = std::pow(10.0, snr_db[p] / 10.0) / transmitted_symbols;
                for (int rx = 0; rx < nrx; ++rx)
                    per_trial[i][p * nrx + rx] = log2_det_gain(projected[rx], power) / slots;
            }
        });

        std::vector<RateEstimate> out(npts);
        std::vector<double> x(npts);
        for (std::size_t p = 0; p < npts; ++p)
        {
            out[p].snr_db = snr_db[p];
            for (int k = 1; k <= users; ++k)
                out[p].receivers.push_back(Receiver::ue(k));
            out[p].receivers.push_back(Receiver::rn(1));
            out[p].per_receiver_rate.assign(nrx, 0.0);
            for (int i = 0; i < trials; ++i)
                for (int rx = 0; rx < nrx; ++rx)
                    out[p].per_receiver_rate[rx] += per_trial[i][p * nrx + rx];
            for (auto &r : out[p].per_receiver_rate)
                r /= trials;
            x[p] = snr_db[p] / (10.0 * std::log10(2.0));
        }

        std::vector<double> slopes(nrx);
        for (int rx = 0; rx < nrx; ++rx)
        {
            std::vector<double> y(npts);
            for (std::size_t p = 0; p < npts; ++p)
                y[p] = out[p].per_receiver_rate[rx];
            slopes[rx] = fit_slope(x, y);
        }
        for (auto &e : out)
            e.fitted_slope = slopes;
        return out;
    }
}
