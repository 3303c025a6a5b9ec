// SPDX-License-Identifier: Apache-2.0
//
// cachendt: delivery-time bounds and precoding schemes for cache-aided relay networks
// ------------------------------------------------------------------------

#ifndef CACHENDT_RUN_HPP
#define CACHENDT_RUN_HPP

#include "cachendt/rational.hpp"
#include "cachendt/table_io.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace cachendt
{
    enum class Command
    {
        bounds,
        optimal,
        tradeoff,
        verify_m1k3,
        verify_corner,
        rates
    };

    std::optional<Command> parse_command(const std::string &name);
    std::string to_string(Command c);

    inline constexpr int exit_ok = 0;
    inline constexpr int exit_usage = 1;
    inline constexpr int exit_verification_failure = 2;
    inline constexpr int exit_uncharacterized = 3;

    struct RunConfig
    {
        Command command = Command::bounds;
        std::optional<int> relays;
        std::optional<int> users;
        std::optional<Rational> mu;
        std::optional<int> grid;
        std::uint64_t seed = 1;
        std::optional<int> trials; // per-command default when unset
        double tol = 1e-9;
        OutputFormat output_format = OutputFormat::csv;
        std::optional<std::filesystem::path> output_path;
        std::vector<double> snr_db{40.0, 50.0, 60.0};
        int threads = 0; // 0: default_thread_count()
    };

    struct RunResult
    {
        int exit_code = exit_ok;
        std::optional<Table> table;
        std::string artifact;   // rendered table, empty when no table was produced
        std::string diagnostic; // one-line JSON reason on failure
    };

    // Executes one command without touching the filesystem; same config, same bytes.
    RunResult run(const RunConfig &cfg);

    // One-line machine-readable error: {"error": code, "message": message}.
    std::string error_line(const std::string &code, const std::string &message);
}

#endif
