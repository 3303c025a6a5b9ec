// SPDX-License-Identifier: Apache-2.0
//
// cachendt: delivery-time bounds and precoding schemes for cache-aided relay networks
// ------------------------------------------------------------------------

#include "cachendt/run.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace
{
    struct Flags
    {
        std::optional<int> m;
        std::optional<int> k;
        std::optional<std::string> mu;
        std::optional<int> grid;
        std::uint64_t seed = 1;
        std::optional<int> trials;
        double tol = 1e-9;
        std::string format = "csv";
        std::optional<std::string> output;
        std::vector<double> snr;
    };

    void add_common(CLI::App *sub, Flags &f, bool network, bool sampling, bool random)
    {
        if (network)
        {
            sub->add_option("--m", f.m, "Number of relays M");
            sub->add_option("--k", f.k, "Number of users K");
        }
        if (sampling)
        {
            auto *mu = sub->add_option("--mu", f.mu, "Cache size as p/q or decimal");
            auto *grid = sub->add_option("--grid", f.grid, "Evaluate at mu = i/grid, i = 0..grid");
            mu->excludes(grid);
        }
        if (random)
        {
            sub->add_option("--seed", f.seed, "Base seed; trial i uses seed + i");
            sub->add_option("--trials", f.trials, "Monte Carlo trials");
            sub->add_option("--tol", f.tol, "Relative degeneracy / rank tolerance");
        }
        sub->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("-o,--output", f.output, "Output file (stdout if omitted)");
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Delivery-time bounds and scheme verification for cache-aided relay networks"};
    app.require_subcommand(1);
    Flags f;

    add_common(app.add_subcommand("bounds", "Converse lower bound curve or value"), f, true, true, false);
    add_common(app.add_subcommand("optimal", "Closed-form optimal NDT for characterized (M, K)"), f, true, true, false);
    add_common(app.add_subcommand("tradeoff", "Lower bound vs. achievable envelope"), f, true, true, false);
    add_common(app.add_subcommand("verify-m1k3", "Randomized check of the M=1, K=3 scheme"), f, true, false, true);
    auto *corner = app.add_subcommand("verify-corner", "Randomized check of the mu=0 / mu=1 schemes");
    add_common(corner, f, true, false, true);
    corner->add_option("--mu", f.mu, "0 or 1")->required();
    auto *rates = app.add_subcommand("rates", "Finite-SNR rates and fitted DoF slopes");
    add_common(rates, f, true, false, true);
    rates->add_option("--snr", f.snr, "SNR points in dB")->delimiter(',');

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        std::cerr << cachendt::error_line("usage", e.what()) << '\n';
        return cachendt::exit_usage;
    }

    cachendt::RunConfig cfg;
    cfg.command = *cachendt::parse_command(app.get_subcommands().front()->get_name());
    cfg.relays = f.m;
    cfg.users = f.k;
    cfg.grid = f.grid;
    cfg.seed = f.seed;
    cfg.trials = f.trials;
    cfg.tol = f.tol;
    cfg.output_format = f.format == "json" ? cachendt::OutputFormat::json : cachendt::OutputFormat::csv;
    if (!f.snr.empty())
        cfg.snr_db = f.snr;
    try
    {
        if (f.mu)
            cfg.mu = cachendt::parse_rational(*f.mu);
    }
    catch (const std::exception &e)
    {
        std::cerr << cachendt::error_line("usage", e.what()) << '\n';
        return cachendt::exit_usage;
    }

    const auto result = cachendt::run(cfg);
    if (!result.artifact.empty())
    {
        if (f.output)
        {
            try
            {
                cachendt::emit(*result.table, cfg.output_format, *f.output);
            }
            catch (const std::exception &e)
            {
                std::cerr << cachendt::error_line("io", e.what()) << '\n';
                return cachendt::exit_usage;
            }
        }
        else
            std::cout << result.artifact;
    }
    if (!result.diagnostic.empty())
        std::cerr << result.diagnostic << '\n';
    return result.exit_code;
}
