// Exercises the command-line contract of the ilhedge binary: exit codes,
// byte-identical reruns, and agreement with direct library calls.
// Usage: ilhedge_cli_test <path-to-ilhedge-binary>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ilhedge/amm.hpp"
#include "ilhedge/hedging.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int g_failures = 0;

void check(bool ok, const std::string& what) {
    if (!ok) {
        ++g_failures;
        std::cerr << "FAIL: " << what << "\n";
    }
}

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const fs::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    out << body;
}

RunResult run(const std::string& cli, const std::string& args, const fs::path& dir,
              const std::string& env_prefix = "") {
    const fs::path out_path = dir / "stdout.txt";
    const fs::path err_path = dir / "stderr.txt";
    const std::string command = env_prefix + cli + " " + args + " > " + out_path.string() +
                                " 2> " + err_path.string();
    const int status = std::system(command.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : 127;
    result.out = slurp(out_path);
    result.err = slurp(err_path);
    return result;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& body) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(body);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) {
            cells.push_back(cell);
        }
        rows.push_back(cells);
    }
    return rows;
}

const char* kWorkedScenario = R"({
  "pool": {"capital": 2000, "entry_price": 100},
  "band": {"lower": 64, "upper": 156.25},
  "pool_return_rate": 0.05,
  "quote_table": "quotes.csv",
  "output": {"price_from": 25, "price_to": 400, "steps": 100}
})";

const char* kQuotes = "kind,strike,premium\nput,64,2\ncall,156.25,3\n";

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: ilhedge_cli_test <path-to-ilhedge-binary>\n";
        return 2;
    }
    const std::string cli = fs::absolute(argv[1]).string();

    std::string tmpl = (fs::temp_directory_path() / "ilhedge_cli_XXXXXX").string();
    if (!mkdtemp(tmpl.data())) {
        std::cerr << "cannot create temp dir\n";
        return 1;
    }
    const fs::path dir = tmpl;
    const fs::path config = dir / "worked.json";
    write_file(config, kWorkedScenario);
    write_file(dir / "quotes.csv", kQuotes);

    const ilhedge::PoolPosition pool = ilhedge::PoolPosition::from_capital(2000.0, 100.0);

    // --- il-curve: golden rows and bit-exact agreement with the library ---
    {
        const RunResult r =
            run(cli, "il-curve --config " + config.string() + " --from 25 --to 400 --steps 4", dir);
        check(r.exit_code == 0, "il-curve exits 0, got " + std::to_string(r.exit_code));
        const auto rows = parse_csv(r.out);
        check(rows.size() == 6, "il-curve emits header + 5 rows");
        check(!rows.empty() && rows[0].size() == 5 && rows[0][0] == "price" &&
                  rows[0][4] == "il_slope",
              "il-curve header");
        const double expected_prices[] = {25.0, 50.0, 100.0, 200.0, 400.0};
        for (std::size_t i = 1; i < rows.size() && i <= 5; ++i) {
            const double p = std::strtod(rows[i][0].c_str(), nullptr);
            check(p == expected_prices[i - 1], "geometric ladder hits " +
                                                   std::to_string(expected_prices[i - 1]));
            const ilhedge::Price price(p);
            check(std::strtod(rows[i][1].c_str(), nullptr) == ilhedge::value_pool(pool, price),
                  "v_pool matches the library bit for bit");
            check(std::strtod(rows[i][2].c_str(), nullptr) == ilhedge::value_hold(pool, price),
                  "v_hold matches the library bit for bit");
            check(std::strtod(rows[i][3].c_str(), nullptr) == ilhedge::il(pool, price),
                  "il matches the library bit for bit");
            check(std::strtod(rows[i][4].c_str(), nullptr) == ilhedge::il_slope(pool, price),
                  "il_slope matches the library bit for bit");
        }
        check(rows.size() > 3 && rows[3][0] == "100" && rows[3][3] == "0",
              "row at price 100 reports zero impermanent loss");
        check(rows.size() > 5 && rows[5][0] == "400" && rows[5][3] == "-1000",
              "row at price 400 reports -1000 impermanent loss");

        const RunResult again =
            run(cli, "il-curve --config " + config.string() + " --from 25 --to 400 --steps 4", dir);
        check(again.out == r.out, "il-curve reruns are byte-identical");
    }

    // --- il-curve: usage errors ---
    {
        const RunResult r =
            run(cli, "il-curve --config " + config.string() + " --steps 1", dir);
        check(r.exit_code == 2, "steps=1 exits 2, got " + std::to_string(r.exit_code));
        const RunResult bad_range =
            run(cli, "il-curve --config " + config.string() + " --from 400 --to 25", dir);
        check(bad_range.exit_code == 2, "inverted range exits 2");
        const RunResult no_sub = run(cli, "", dir);
        check(no_sub.exit_code == 2, "missing subcommand exits 2");
    }

    // --- data errors ---
    {
        const RunResult missing =
            run(cli, "il-curve --config " + (dir / "absent.json").string(), dir);
        check(missing.exit_code == 3, "missing config exits 3");

        write_file(dir / "noband.json", R"({"pool": {"capital": 2000, "entry_price": 100},
            "band": {"lower": 110, "upper": 150}})");
        const RunResult bad_band = run(cli, "hedge --config " + (dir / "noband.json").string(), dir);
        check(bad_band.exit_code == 3, "band excluding the entry price exits 3");
        check(bad_band.err.find("band") != std::string::npos, "diagnostic names the band field");
    }

    // --- hedge: golden report, curve, determinism ---
    {
        const std::string args = "hedge --config " + config.string() + " --out " +
                                 (dir / "report.json").string() + " --curve " +
                                 (dir / "pnl.csv").string();
        const RunResult r = run(cli, args, dir);
        check(r.exit_code == 0, "hedge on the worked scenario exits 0, got " +
                                    std::to_string(r.exit_code));
        const json report = json::parse(slurp(dir / "report.json"));
        check(report["strangle_source"] == "solved", "strangle was solved from quotes");
        check(std::abs(report["strangle"]["put_qty"].get<double>() - 2.5) <= 1e-9,
              "solved put quantity is 2.5");
        check(std::abs(report["strangle"]["call_qty"].get<double>() - 2.0) <= 1e-9,
              "solved call quantity is 2.0");
        check(std::abs(report["required_pool_return"].get<double>() - 0.03675) <= 1e-9,
              "required pool return is 0.03675");
        check(report["feasible"] == true, "budget is feasible");
        check(std::abs(report["report"]["grid_min_pnl"].get<double>() - 26.5) <= 1e-9,
              "grid minimum PnL is 26.5");
        check(report["report"]["grid_argmin"] == 156.25, "grid argmin is 156.25");
        check(report["report"]["covered"] == true, "worked scenario is covered");
        const auto holds = report["report"]["inequalities_hold"];
        check(holds.size() == 3 && holds[0] == true && holds[1] == true && holds[2] == true,
              "all three inequalities hold");

        const auto rows = parse_csv(slurp(dir / "pnl.csv"));
        check(!rows.empty() && rows[0] == std::vector<std::string>{"price", "pnl_pool_hold",
                                                                   "pnl_strangle", "pnl_total"},
              "pnl curve header");
        check(rows.size() >= 100, "pnl curve has the scenario's resolution");
        const double width = 156.25 - 64.0;
        const double lo = std::strtod(rows[1][0].c_str(), nullptr);
        const double hi = std::strtod(rows.back()[0].c_str(), nullptr);
        check(std::abs(lo - (64.0 - 0.2 * width)) <= 1e-12, "curve starts 20% of a width below");
        check(std::abs(hi - (156.25 + 0.2 * width)) <= 1e-12, "curve ends 20% of a width above");

        const ilhedge::Strangle solved(64.0, 156.25,
                                       report["strangle"]["put_qty"].get<double>(),
                                       report["strangle"]["call_qty"].get<double>(), 2.0, 3.0);
        const ilhedge::HedgedPosition hp(pool, solved, 0.05);
        bool totals_match = true;
        bool columns_sum = true;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const double p = std::strtod(rows[i][0].c_str(), nullptr);
            const double pool_hold = std::strtod(rows[i][1].c_str(), nullptr);
            const double strangle_leg = std::strtod(rows[i][2].c_str(), nullptr);
            const double total = std::strtod(rows[i][3].c_str(), nullptr);
            totals_match &= total == ilhedge::total_pnl(hp, ilhedge::Price(p));
            columns_sum &= std::abs(pool_hold + strangle_leg - total) <= 1e-9;
        }
        check(totals_match, "pnl_total matches the library bit for bit");
        check(columns_sum, "pnl columns add up");

        const std::string report1 = slurp(dir / "report.json");
        const std::string curve1 = slurp(dir / "pnl.csv");
        const RunResult rerun = run(cli, args, dir);
        check(rerun.exit_code == 0 && slurp(dir / "report.json") == report1,
              "hedge report rerun is byte-identical");
        const RunResult rerun2 = run(cli, args, dir, "ILHEDGE_THREADS=3 ");
        check(rerun2.exit_code == 0, "hedge rerun exits 0");
        check(slurp(dir / "report.json") == report1,
              "hedge reports are byte-identical across runs and thread caps");
        check(slurp(dir / "pnl.csv") == curve1, "hedge curves are byte-identical");
    }

    // --- hedge: infeasible budget ---
    {
        std::string scenario(kWorkedScenario);
        const auto pos = scenario.find("0.05");
        scenario.replace(pos, 4, "0.01");
        write_file(dir / "infeasible.json", scenario);
        const RunResult r = run(cli,
                                "hedge --config " + (dir / "infeasible.json").string() + " --out " +
                                    (dir / "infeasible_report.json").string() + " --curve " +
                                    (dir / "infeasible_pnl.csv").string(),
                                dir);
        check(r.exit_code == 4, "infeasible budget exits 4, got " + std::to_string(r.exit_code));
        const json report = json::parse(slurp(dir / "infeasible_report.json"));
        check(report["feasible"] == false, "infeasible flag is reported");
        check(std::abs(report["required_pool_return"].get<double>() - 0.03675) <= 1e-9,
              "required pool return is carried in the report");
        check(report["report"]["covered"] == false, "coverage fails under the budget");
    }

    // --- hedge: strangle given in the scenario ---
    {
        write_file(dir / "given.json", R"({
            "pool": {"capital": 2000, "entry_price": 100},
            "band": {"lower": 64, "upper": 156.25},
            "pool_return_rate": 0.05,
            "strangle": {"put_strike": 64, "call_strike": 156.25, "put_qty": 2.5,
                         "call_qty": 2.0, "put_premium": 2, "call_premium": 3}
        })");
        const RunResult r = run(cli,
                                "hedge --config " + (dir / "given.json").string() + " --out " +
                                    (dir / "given_report.json").string() + " --curve " +
                                    (dir / "given_pnl.csv").string(),
                                dir);
        check(r.exit_code == 0, "scenario strangle exits 0");
        const json report = json::parse(slurp(dir / "given_report.json"));
        check(report["strangle_source"] == "scenario", "strangle came from the scenario");
        check(report["report"]["grid_min_pnl"] == 26.5, "literal strangle yields exactly 26.5");
    }

    // --- replicate: model pricer, sign rule, quadratic quality ---
    {
        write_file(dir / "model.json", R"({
            "pool": {"capital": 2000, "entry_price": 100},
            "band": {"lower": 50, "upper": 200},
            "market": {"spot": 100, "rate": 0.0, "volatility": 0.6, "expiry": 1.0}
        })");
        const RunResult il_run = run(
            cli, "replicate --config " + (dir / "model.json").string() + " --grid-cells 200", dir);
        check(il_run.exit_code == 0, "replicate exits 0");
        const json doc = json::parse(il_run.out);
        check(doc["payoff"] == "il", "default payoff is il");
        bool all_negative = true;
        for (const auto& leg : doc["portfolio"]["put_legs"]) {
            all_negative &= leg[1].get<double>() < 0.0;
        }
        for (const auto& leg : doc["portfolio"]["call_legs"]) {
            all_negative &= leg[1].get<double>() < 0.0;
        }
        check(all_negative, "il legs are all negative");

        const RunResult neg_run =
            run(cli,
                "replicate --config " + (dir / "model.json").string() +
                    " --grid-cells 200 --payoff neg-il",
                dir);
        const json neg_doc = json::parse(neg_run.out);
        bool all_positive = true;
        for (const auto& leg : neg_doc["portfolio"]["put_legs"]) {
            all_positive &= leg[1].get<double>() > 0.0;
        }
        check(all_positive && neg_run.exit_code == 0, "negated il legs are all positive");

        const RunResult quad =
            run(cli,
                "replicate --config " + (dir / "model.json").string() +
                    " --grid-cells 2000 --kmin 1 --kmax 1000 --payoff quadratic",
                dir);
        check(quad.exit_code == 0, "quadratic replicate exits 0");
        const json quad_doc = json::parse(quad.out);
        check(quad_doc["replication_error"]["max_abs_error"].get<double>() <= 0.5,
              "quadratic payoff replicates to within 0.5 over the band");

        const RunResult bad_kind =
            run(cli, "replicate --config " + (dir / "model.json").string() + " --payoff cubic",
                dir);
        check(bad_kind.exit_code == 2, "unknown payoff kind exits 2");
        const RunResult bad_grid =
            run(cli, "replicate --config " + (dir / "model.json").string() + " --kmin 150", dir);
        check(bad_grid.exit_code == 2, "kmin above the entry price exits 2");
    }

    // --- replicate: quote-table gaps ---
    {
        const RunResult r = run(
            cli, "replicate --config " + config.string() + " --grid-cells 4 --kmin 10", dir);
        check(r.exit_code == 3, "quote gaps exit 3, got " + std::to_string(r.exit_code));
        check(r.err.find("missing put strike") != std::string::npos,
              "missing strikes are listed");
    }

    std::error_code ignored;
    fs::remove_all(dir, ignored);
    if (g_failures == 0) {
        std::cout << "cli contract: all checks passed\n";
        return 0;
    }
    std::cerr << "cli contract: " << g_failures << " checks failed\n";
    return 1;
}
