#include "cachendt/run.hpp"

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace cachendt;

namespace
{
    struct Proc
    {
        int code;
        std::string out;
    };

    // Runs the CLI with stderr folded into a separate file; returns exit code and stdout.
    Proc cli(const std::string &args, std::string *err = nullptr)
    {
        const auto err_path = std::filesystem::temp_directory_path() / "cachendt_test_stderr.txt";
        const std::string cmd = std::string(CACHENDT_CLI_PATH) + " " + args + " 2>" + err_path.string();
        FILE *pipe = popen(cmd.c_str(), "r");
        REQUIRE(pipe != nullptr);
        std::string out;
        char buf[4096];
        std::size_t n;
        while ((n = fread(buf, 1, sizeof buf, pipe)) > 0)
            out.append(buf, n);
        const int status = pclose(pipe);
        if (err)
        {
            std::ifstream in(err_path);
            std::stringstream ss;
            ss << in.rdbuf();
            *err = ss.str();
        }
        return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
    }

    std::vector<std::string> lines(const std::string &s)
    {
        std::vector<std::string> out;
        std::stringstream ss(s);
        for (std::string l; std::getline(ss, l);)
            out.push_back(l);
        return out;
    }

    Table curve_13()
    {
        Table t;
        t.meta.command = "bounds";
        t.columns = {{"mu", ColumnType::rational}, {"lower_bound", ColumnType::rational}};
        t.add_row({Rational(0), Rational(4)});
        t.add_row({Rational(4, 5), Rational(8, 5)});
        t.add_row({Rational(1), Rational(3, 2)});
        return t;
    }
}

TEST_CASE("CSV rendering of a known curve")
{
    const auto csv = lines(render_csv(curve_13()));
    REQUIRE(csv.size() == 4);
    CHECK(csv[0] == "mu,mu_dec,lower_bound,lower_bound_dec");
    CHECK(csv[2] == "4/5,0.8,8/5,1.6");
    CHECK(csv[3] == "1,1,3/2,1.5");
}

TEST_CASE("empty table renders a header-only CSV")
{
    Table t;
    t.columns = {{"receiver", ColumnType::text}, {"rate", ColumnType::real}};
    CHECK(render_csv(t) == "receiver,rate\n");
}

TEST_CASE("CSV decimal columns agree with the rationals to 15 digits")
{
    RunConfig cfg;
    cfg.command = Command::tradeoff;
    cfg.relays = 3;
    cfg.users = 4;
    cfg.grid = 60;
    const auto res = run(cfg);
    REQUIRE(res.exit_code == exit_ok);
    for (const auto &row : res.table->rows)
        for (const auto &cell : row)
            if (const auto *r = std::get_if<Rational>(&cell))
            {
                const double d = std::stod(to_decimal_string(*r));
                CHECK(std::abs(d - to_double(*r)) <= 1e-14 * std::max(1.0, std::abs(d)));
            }
}

TEST_CASE("CSV quoting and nulls")
{
    Table t;
    t.columns = {{"name", ColumnType::text}, {"value", ColumnType::rational}, {"n", ColumnType::integer}};
    t.add_row({std::string("a,b"), std::monostate{}, std::int64_t(3)});
    t.add_row({std::string("say \"hi\""), Rational(1, 3), std::monostate{}});
    const auto csv = lines(render_csv(t));
    CHECK(csv[1] == "\"a,b\",,,3");
    CHECK(csv[2] == "\"say \"\"hi\"\"\",1/3,0.333333333333333,");
    CHECK_THROWS_AS(t.add_row({Rational(1), Rational(1), std::int64_t(1)}), std::invalid_argument);
    CHECK_THROWS_AS(t.add_row({std::string("x")}), std::invalid_argument);
}

TEST_CASE("JSON round trip")
{
    Table t = curve_13();
    t.meta.relays = 1;
    t.meta.users = 3;
    t.meta.seed = 9;
    t.meta.tol = 1e-9;
    t.meta.summary = {{"passed", true}};
    t.columns.push_back({"gap", ColumnType::real});
    t.columns.push_back({"who", ColumnType::text});
    t.columns.push_back({"count", ColumnType::integer});
    for (auto &row : t.rows)
    {
        row.push_back(std::numeric_limits<double>::infinity());
        row.push_back(std::string("UE1"));
        row.push_back(std::monostate{});
    }
    const std::string text = render_json(t);
    CHECK(text.back() == '\n');
    const auto doc = nlohmann::json::parse(text);
    CHECK(doc["meta"]["version"] == version);
    CHECK(doc["meta"]["command"] == "bounds");
    CHECK(doc["data"][1]["mu"] == "4/5");
    CHECK(doc["data"][1]["mu_dec"] == 0.8);
    CHECK(parse_json_table(text) == t);
}

TEST_CASE("emit writes files and reports unwritable paths")
{
    const auto path = std::filesystem::temp_directory_path() / "cachendt_emit_test.csv";
    const auto bytes = emit(curve_13(), OutputFormat::csv, path);
    CHECK(bytes == std::filesystem::file_size(path));
    CHECK_THROWS_AS(emit(curve_13(), OutputFormat::csv, "/nonexistent-dir/x.csv"), std::runtime_error);
    std::filesystem::remove(path);
}

TEST_CASE("run: curves and tradeoff")
{
    RunConfig cfg;
    cfg.command = Command::tradeoff;
    cfg.relays = 1;
    cfg.users = 3;
    cfg.grid = 20;
    auto res = run(cfg);
    REQUIRE(res.exit_code == exit_ok);
    bool found = false;
    for (const auto &l : lines(res.artifact))
        if (l.rfind("4/5,", 0) == 0)
        {
            CHECK(l == "4/5,0.8,8/5,1.6,8/5,1.6,0,0");
            found = true;
        }
    CHECK(found);

    cfg.command = Command::bounds;
    cfg.grid.reset();
    res = run(cfg);
    CHECK(lines(res.artifact).size() == 4);

    cfg.command = Command::optimal;
    cfg.relays = 3;
    res = run(cfg);
    CHECK(res.exit_code == exit_uncharacterized);
    CHECK(res.artifact.empty());
    CHECK(res.diagnostic.find("uncharacterized configuration") != std::string::npos);
    CHECK(nlohmann::json::parse(res.diagnostic)["error"] == "uncharacterized-configuration");
}

TEST_CASE("run: usage errors")
{
    RunConfig cfg;
    cfg.command = Command::bounds;
    CHECK(run(cfg).exit_code == exit_usage);
    cfg.relays = 1;
    cfg.users = 3;
    cfg.mu = Rational(1, 2);
    cfg.grid = 4;
    CHECK(run(cfg).exit_code == exit_usage);
    cfg.grid.reset();
    cfg.mu = Rational(3, 2);
    CHECK(run(cfg).exit_code == exit_usage);

    RunConfig v;
    v.command = Command::verify_corner;
    v.relays = 1;
    v.users = 3;
    v.mu = Rational(1, 2);
    const auto res = run(v);
    CHECK(res.exit_code == exit_usage);
    CHECK(res.diagnostic.find('\n') == std::string::npos);
    CHECK(nlohmann::json::parse(res.diagnostic).contains("error"));

    v.command = Command::verify_m1k3;
    v.mu.reset();
    v.relays = 2;
    CHECK(run(v).exit_code == exit_usage);
}

TEST_CASE("run: verification report")
{
    RunConfig cfg;
    cfg.command = Command::verify_m1k3;
    cfg.trials = 30;
    cfg.seed = 7;
    cfg.output_format = OutputFormat::json;
    const auto res = run(cfg);
    REQUIRE(res.exit_code == exit_ok);
    const auto doc = nlohmann::json::parse(res.artifact);
    CHECK(doc["meta"]["summary"]["failures"] == 0);
    CHECK(doc["meta"]["summary"]["ndt"] == "8/5");
    CHECK(doc["meta"]["summary"]["sum_dof"] == "2");
    CHECK(doc["data"].size() == 5);
    CHECK(doc["data"][4]["receiver"] == "all");
    CHECK(run(cfg).artifact == res.artifact);
}

TEST_CASE("CLI binary: exit codes and diagnostics")
{
    std::string err;
    auto p = cli("tradeoff --m 1 --k 3 --grid 20", &err);
    CHECK(p.code == 0);
    CHECK(p.out.find("4/5,0.8,8/5,1.6,8/5,1.6,0,0") != std::string::npos);
    CHECK(err.empty());

    p = cli("optimal --m 3 --k 3", &err);
    CHECK(p.code == 3);
    CHECK(err.find("uncharacterized configuration") != std::string::npos);
    CHECK(lines(err).size() == 1);

    p = cli("bounds --m 1 --k 3 --mu 1/2 --grid 3", &err);
    CHECK(p.code == 1);
    CHECK(nlohmann::json::parse(err).contains("error"));

    p = cli("bounds --m 1 --k 3 --mu 0.8");
    CHECK(p.code == 0);
    CHECK(lines(p.out).at(1) == "4/5,0.8,8/5,1.6");

    p = cli("frobnicate", &err);
    CHECK(p.code == 1);
    CHECK(lines(err).size() == 1);

    p = cli("bounds --m 1 --k 3 -o /nonexistent-dir/out.csv", &err);
    CHECK(p.code != 0);
    CHECK(lines(err).size() == 1);

    const auto path = std::filesystem::temp_directory_path() / "cachendt_cli_out.json";
    p = cli("verify-m1k3 --trials 20 --seed 7 --format json -o " + path.string());
    CHECK(p.code == 0);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(nlohmann::json::parse(ss.str())["meta"]["summary"]["passed"] == true);
    std::filesystem::remove(path);
}
