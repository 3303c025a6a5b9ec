// SPDX-License-Identifier: Apache-2.0
//
// cachendt: delivery-time bounds and precoding schemes for cache-aided relay networks
// ------------------------------------------------------------------------

#include "cachendt/run.hpp"

#include "cachendt/ndt_bounds.hpp"
#include "cachendt/verifier.hpp"

#include <set>

namespace cachendt
{
    namespace
    {
        class UsageError : public std::invalid_argument
        {
        public:
            using std::invalid_argument::invalid_argument;
        };

        std::pair<int, int> require_network(const RunConfig &cfg)
        {
            if (!cfg.relays || !cfg.users)
                throw UsageError("command '" + to_string(cfg.command) + "' needs --m and --k");
            if (*cfg.relays < 1 || *cfg.users < 1)
                throw UsageError("--m and --k must be positive");
            return {*cfg.relays, *cfg.users};
        }

        // Sample points: a single mu, a uniform grid, or the given breakpoints.
        std::vector<Rational> sample_points(const RunConfig &cfg, const std::set<Rational> &breakpoints)
        {
            if (cfg.mu)
                return {*cfg.mu};
            if (cfg.grid)
            {
                std::vector<Rational> pts;
                for (int i = 0; i <= *cfg.grid; ++i)
                    pts.emplace_back(i, *cfg.grid);
                return pts;
            }
            return {breakpoints.begin(), breakpoints.end()};
        }

        std::set<Rational> knots(const NdtCurve &c)
        {
            std::set<Rational> out;
            for (const auto &p : c.breakpoints())
                out.insert(p.mu);
            return out;
        }

        Table curve_table(const RunConfig &cfg, const NdtCurve &curve, const std::string &value_name, int M, int K)
        {
            Table t;
            t.meta.command = to_string(cfg.command);
            t.meta.relays = M;
            t.meta.users = K;
            t.columns = {{"mu", ColumnType::rational}, {value_name, ColumnType::rational}};
            for (const auto &mu : sample_points(cfg, knots(curve)))
                t.add_row({mu, curve.evaluate(mu)});
            return t;
        }

        Table tradeoff_table(const RunConfig &cfg, int M, int K)
        {
            const NdtCurve lb = lower_bound_curve(M, K);
            const NdtCurve ach = memory_sharing_envelope(achievable_catalog(M, K));
            std::set<Rational> all = knots(lb);
            all.merge(knots(ach));

            Table t;
            t.meta.command = to_string(cfg.command);
            t.meta.relays = M;
            t.meta.users = K;
            t.meta.summary = {{"characterized", is_characterized(M, K)}};
            t.columns = {{"mu", ColumnType::rational},
                         {"lower_bound", ColumnType::rational},
                         {"achievable", ColumnType::rational},
                         {"gap", ColumnType::rational}};
            for (const auto &mu : sample_points(cfg, all))
            {
                const Rational l = lb.evaluate(mu);
                const Rational a = ach.evaluate(mu);
                t.add_row({mu, l, a, a - l});
            }
            return t;
        }

        Table report_table(const RunConfig &cfg, const VerificationReport &rep)
        {
            Table t;
            t.meta.command = to_string(cfg.command);
            t.meta.relays = rep.relays;
            t.meta.users = rep.users;
            t.meta.seed = cfg.seed;
            t.meta.tol = cfg.tol;
            t.meta.summary = {{"scheme", rep.scheme},
                              {"mu", to_string(rep.mu)},
                              {"ndt", to_string(rep.ndt)},
                              {"per_ue_dof", to_string(rep.per_ue_dof)},
                              {"rn_dof", to_string(rep.rn_dof)},
                              {"sum_dof", to_string(rep.sum_dof)},
                              {"trials", rep.trials},
                              {"failures", rep.failures},
                              {"redraws", rep.redraws},
                              {"decode_max_error", rep.decode_max_error},
                              {"nulling_residual", rep.nulling_residual},
                              {"rn_rank", rep.rn_rank},
                              {"passed", rep.passed()},
                              {"first_failure", rep.first_failure}};
            t.columns = {{"receiver", ColumnType::text},
                         {"desired_rank", ColumnType::integer},
                         {"interference_rank", ColumnType::integer},
                         {"total_rank", ColumnType::integer},
                         {"gap_ratio", ColumnType::real},
                         {"zf_residual", ColumnType::real},
                         {"alignment_residual", ColumnType::real},
                         {"decode_max_error", ColumnType::real},
                         {"nulling_residual", ColumnType::real},
                         {"dof", ColumnType::rational},
                         {"ndt", ColumnType::rational},
                         {"trials", ColumnType::integer},
                         {"failures", ColumnType::integer},
                         {"redraws", ColumnType::integer}};
            const Cell none = std::monostate{};
            for (const auto &r : rep.receivers)
            {
                const Rational dof = r.receiver.kind == Receiver::Kind::ue ? rep.per_ue_dof : rep.rn_dof;
                t.add_row({to_string(r.receiver), std::int64_t(r.desired_rank), std::int64_t(r.interference_rank),
                           std::int64_t(r.total_rank), r.gap_ratio, r.zf_residual, r.alignment_residual, none, none,
                           dof, none, none, none, none});
            }
            t.add_row({std::string("all"), none, none, none, none, none, none, rep.decode_max_error,
                       rep.nulling_residual, rep.sum_dof, rep.ndt, std::int64_t(rep.trials),
                       std::int64_t(rep.failures), std::int64_t(rep.redraws)});
            return t;
        }

        Table rates_table(const RunConfig &cfg, const std::vector<RateEstimate> &est, int trials)
        {
            Table t;
            t.meta.command = to_string(cfg.command);
            t.meta.relays = 1;
            t.meta.users = 3;
            t.meta.seed = cfg.seed;
            t.meta.tol = cfg.tol;
            t.meta.summary = {{"trials", trials}};
            t.columns = {{"snr_db", ColumnType::real},
                         {"receiver", ColumnType::text},
                         {"rate", ColumnType::real},
                         {"fitted_slope", ColumnType::real},
                         {"dof", ColumnType::rational}};
            for (const auto &e : est)
                for (std::size_t i = 0; i < e.receivers.size(); ++i)
                {
                    const bool ue = e.receivers[i].kind == Receiver::Kind::ue;
                    t.add_row({e.snr_db, to_string(e.receivers[i]), e.per_receiver_rate[i], e.fitted_slope[i],
                               ue ? Rational(5, 8) : Rational(1, 8)});
                }
            return t;
        }

        Table dispatch(const RunConfig &cfg)
        {
            if (cfg.mu && cfg.grid)
                throw UsageError("--mu and --grid are mutually exclusive");
            if (cfg.grid && *cfg.grid < 1)
                throw UsageError("--grid must be positive");
            if (cfg.mu && (*cfg.mu < 0 || *cfg.mu > 1))
                throw UsageError("--mu must lie in [0, 1]");
            if (cfg.trials && *cfg.trials < 1)
                throw UsageError("--trials must be positive");
            if (!(cfg.tol > 0.0))
                throw UsageError("--tol must be positive");

            switch (cfg.command)
            {
            case Command::bounds:
            {
                const auto [M, K] = require_network(cfg);
                return curve_table(cfg, lower_bound_curve(M, K), "lower_bound", M, K);
            }
            case Command::optimal:
            {
                const auto [M, K] = require_network(cfg);
                return curve_table(cfg, optimal_curve(M, K), "optimal", M, K);
            }
            case Command::tradeoff:
            {
                const auto [M, K] = require_network(cfg);
                return tradeoff_table(cfg, M, K);
            }
            case Command::verify_m1k3:
            {
                if ((cfg.relays && *cfg.relays != 1) || (cfg.users && *cfg.users != 3))
                    throw UsageError("verify-m1k3 is defined for M = 1, K = 3 only");
                if (cfg.mu || cfg.grid)
                    throw UsageError("verify-m1k3 takes no --mu or --grid");
                return report_table(cfg, verify_m1k3(cfg.seed, cfg.trials.value_or(1000), cfg.tol, cfg.threads));
            }
            case Command::verify_corner:
            {
                const auto [M, K] = require_network(cfg);
                if (!cfg.mu || (*cfg.mu != 0 && *cfg.mu != 1))
                    throw UsageError("verify-corner needs --mu 0 or --mu 1");
                const auto net = NetworkConfig::worst_case(M, K, *cfg.mu);
                return report_table(cfg, verify_corner(cfg.seed, cfg.trials.value_or(200), net, cfg.tol, cfg.threads));
            }
            case Command::rates:
            {
                if ((cfg.relays && *cfg.relays != 1) || (cfg.users && *cfg.users != 3))
                    throw UsageError("rates is defined for the M = 1, K = 3 scheme only");
                const int trials = cfg.trials.value_or(200);
                return rates_table(cfg, finite_snr_rates(cfg.seed, cfg.snr_db, trials, cfg.tol, cfg.threads), trials);
            }
            }
            throw UsageError("unknown command");
        }
    }

    std::optional<Command> parse_command(const std::string &name)
    {
        for (Command c : {Command::bounds, Command::optimal, Command::tradeoff, Command::verify_m1k3,
                          Command::verify_corner, Command::rates})
            if (to_string(c) == name)
                return c;
        return std::nullopt;
    }

    std::string to_string(Command c)
    {
        switch (c)
        {
        case Command::bounds:
            return "bounds";
        case Command::optimal:
            return "optimal";
        case Command::tradeoff:
            return "tradeoff";
        case Command::verify_m1k3:
            return "verify-m1k3";
        case Command::verify_corner:
            return "verify-corner";
        case Command::rates:
            return "rates";
        }
        return "unknown";
    }

    std::string error_line(const std::string &code, const std::string &message)
    {
        return nlohmann::json{{"error", code}, {"message", message}}.dump();
    }

    RunResult run(const RunConfig &cfg)
    {
        RunResult result;
        auto finish = [&](Table t) {
            result.artifact = render(t, cfg.output_format);
            result.table = std::move(t);
        };
        try
        {
            finish(dispatch(cfg));
        }
        catch (const VerificationFailure &e)
        {
            finish(report_table(cfg, e.report()));
            result.exit_code = exit_verification_failure;
            result.diagnostic = error_line("verification-failure", e.report().first_failure);
        }
        catch (const UncharacterizedConfiguration &e)
        {
            result.exit_code = exit_uncharacterized;
            result.diagnostic = error_line("uncharacterized-configuration", e.what());
        }
        catch (const std::exception &e)
        {
            result.exit_code = exit_usage;
            result.diagnostic = error_line("usage", e.what());
        }
        return result;
    }
}
