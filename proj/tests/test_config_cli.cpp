// Config parsing, report serialization, and the in-process CLI driver.

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "svlab/cli.hpp"
#include "svlab/config.hpp"
#include "svlab/error.hpp"
#include "svlab/experiments.hpp"
#include "svlab/montecarlo.hpp"
#include "svlab/propositional.hpp"
#include "svlab/report_io.hpp"
#include "svlab/verifiers.hpp"

using namespace svlab;
using nlohmann::json;

namespace {

json verify_config() {
  return json{{"experiment", "verify"},
              {"alpha", "1/20"},
              {"n_max", 40},
              {"trials", 30},
              {"seed", 11},
              {"world", "coin:2/5"},
              {"hypothesis", "coin-over-half"}};
}

std::string write_temp_config(const std::string& name, const json& j) {
  std::string path = "/tmp/" + name;
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << j.dump(2) << "\n";
  return path;
}

struct CliRun {
  int exit_code = 0;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  CliRun r;
  r.exit_code = run_cli(std::move(args), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("verify config parses literals, snaps numeric rationals") {
    json j = verify_config();
    j["alpha"] = 0.05;  // plain double, snapped to 1/20
    j["claims"] = json::array({{{"kind", "sv3-bound"}, {"alpha", "1/20"}}});
    j["output"] = {{"path", "x.csv"}, {"format", "json"}};

    ExperimentConfig cfg = parse_config(j);
    CHECK(cfg.experiment == "verify");
    CHECK(cfg.alpha == Rational(1, 20));
    CHECK(cfg.n_max == 40);
    CHECK(cfg.trials == 30);
    CHECK(cfg.seed == 11);
    CHECK(cfg.threads == 1);
    REQUIRE(cfg.world.has_value());
    CHECK(cfg.world->label() == "coin(2/5)");
    REQUIRE(cfg.hypothesis.has_value());
    CHECK(cfg.hypothesis->kind() == HypKind::SubBasic);
    REQUIRE(cfg.claims.size() == 1);
    CHECK(cfg.claims[0].kind == "sv3-bound");
    CHECK(cfg.claims[0].alpha == Rational(1, 20));
    REQUIRE(cfg.output.has_value());
    CHECK(cfg.output->path == "x.csv");
    CHECK(cfg.output->format == "json");
  }

  TEST_CASE("unknown keys are rejected by full path") {
    json top = verify_config();
    top["bogus"] = 1;
    CHECK_THROWS_WITH_AS(parse_config(top),
                         doctest::Contains("config key \"bogus\" is not recognized"), Error);

    json nested = verify_config();
    nested["world"] = {{"kind", "coin"}, {"p", "1/2"}, {"extra", true}};
    CHECK_THROWS_WITH_AS(parse_config(nested),
                         doctest::Contains("config key \"world.extra\" is not recognized"),
                         Error);

    json claims = verify_config();
    claims["claims"] = json::array({{{"kind", "sv3-bound"}, {"alpha", "1/20"}},
                                    {{"kind", "sv3-bound"}, {"alpha", "1/20"}, {"oops", 1}}});
    CHECK_THROWS_WITH_AS(parse_config(claims),
                         doctest::Contains("config key \"claims[1].oops\" is not recognized"),
                         Error);
  }

  TEST_CASE("alpha must be a level strictly inside the unit interval") {
    json j = verify_config();
    j["alpha"] = "3/2";
    CHECK_THROWS_WITH_AS(parse_config(j), "alpha must lie in (0,1)", Error);
    j["alpha"] = 0;
    CHECK_THROWS_WITH_AS(parse_config(j), "alpha must lie in (0,1)", Error);
    j["alpha"] = "nonsense";
    CHECK_THROWS_WITH_AS(parse_config(j), doctest::Contains("config key \"alpha\""), Error);
  }

  TEST_CASE("missing required keys are named") {
    json j = verify_config();
    j.erase("trials");
    CHECK_THROWS_WITH_AS(parse_config(j),
                         doctest::Contains("config key \"trials\": is required"), Error);

    json k = verify_config();
    k.erase("world");
    CHECK_THROWS_WITH_AS(parse_config(k),
                         doctest::Contains("config key \"world\": is required"), Error);

    json p{{"experiment", "prop"}, {"pattern", "zeros"}};
    CHECK_THROWS_WITH_AS(parse_config(p),
                         doctest::Contains("config key \"method\": is required"), Error);
  }

  TEST_CASE("world literal errors") {
    json j = verify_config();
    j["world"] = "gaussian";
    CHECK_THROWS_WITH_AS(parse_config(j),
                         doctest::Contains("unknown world name \"gaussian\""), Error);

    j["world"] = {{"kind", "gauss"}};
    CHECK_THROWS_WITH_AS(
        parse_config(j),
        doctest::Contains("must be one of coin, finite, real-line (got \"gauss\")"), Error);

    j["world"] = {{"kind", "finite"},
                  {"symbols", json::array({"a", "b"})},
                  {"probs", json::array({"1/2"})}};
    CHECK_THROWS_WITH_AS(
        parse_config(j),
        doctest::Contains(
            "config key \"world.probs\": must be an array matching \"symbols\" in length"),
        Error);
  }

  TEST_CASE("claim, output, and experiment enums") {
    json j = verify_config();
    j["claims"] = json::array({{{"kind", "sv9"}}});
    CHECK_THROWS_WITH_AS(
        parse_config(j),
        doctest::Contains("config key \"claims[0].kind\": must be one of sv3-bound, "
                          "sv4-eventual, convergence, limsup-bound (got \"sv9\")"),
        Error);

    json o = verify_config();
    o["output"] = {{"path", "x"}, {"format", "yaml"}};
    CHECK_THROWS_WITH_AS(
        parse_config(o),
        doctest::Contains("config key \"output.format\": must be \"csv\" or \"json\""), Error);

    json e{{"experiment", "explore"}};
    CHECK_THROWS_WITH_AS(
        parse_config(e),
        doctest::Contains("must be one of verify, limit, solve, prop, weak-convergence "
                          "(got \"explore\")"),
        Error);
  }

  TEST_CASE("weak-convergence literals and full-algebra expansion") {
    json j{{"experiment", "weak-convergence"},
           {"sequence", json::array({"coin:1/2", "coin:1/2", "coin:1/2", "coin:1/2"})},
           {"limit", "coin:1/2"},
           {"events", "full-algebra"},
           {"tolerance", "1/10"}};

    ExperimentConfig cfg = parse_config(j);
    REQUIRE(cfg.events.size() == 4);  // every subset of {H, T}, empty set included
    std::set<std::string> names;
    for (const auto& ev : cfg.events) names.insert(ev.describe());
    CHECK(names == std::set<std::string>{"{}", "{H}", "{T}", "{H,T}"});
    CHECK(cfg.tolerance == Rational(1, 10));

    json bad_ev = j;
    bad_ev["events"] = json::array({{{"wrong", 1}}});
    CHECK_THROWS_WITH_AS(
        parse_config(bad_ev),
        doctest::Contains(
            "config key \"events[0]\": event literal needs \"symbols\" or \"intervals\""),
        Error);

    json bad_tol = j;
    bad_tol["tolerance"] = "0";
    CHECK_THROWS_WITH_AS(parse_config(bad_tol),
                         doctest::Contains("config key \"tolerance\": must be positive"), Error);

    json real = j;
    real["sequence"] = json::array(
        {json{{"kind", "real-line"},
              {"density", json::array({{{"lo", "0"}, {"hi", "1"}, {"coeffs", json::array({"1"})}}})}}});
    real["limit"] = real["sequence"][0];
    CHECK_THROWS_WITH_AS(
        parse_config(real),
        doctest::Contains("config key \"events\": \"full-algebra\" needs a finite-alphabet world"),
        Error);
  }

  TEST_CASE("builtins by name") {
    Hypothesis over = builtin_hypothesis("coin-over-half");
    CHECK(over.kind() == HypKind::SubBasic);
    CHECK(over.threshold() == Rational(1, 2));
    CHECK(builtin_hypothesis("coin-at-most-half").kind() == HypKind::FSigma);
    CHECK_THROWS_WITH_AS(
        builtin_hypothesis("nope"),
        doctest::Contains("(available: coin-over-half, coin-at-most-half)"), Error);
    CHECK(builtin_partition("bias-3cell").answers().size() == 3);
    CHECK_THROWS_WITH_AS(builtin_partition("nope"),
                         doctest::Contains("(available: bias-3cell)"), Error);
  }

  TEST_CASE("config files load, with parse errors located") {
    CHECK_THROWS_WITH_AS(
        load_config_file("/tmp/svlab_no_such_config.json"),
        doctest::Contains("cannot open config file: /tmp/svlab_no_such_config.json"), Error);

    {
      std::ofstream out("/tmp/svlab_bad_json.json", std::ios::binary);
      out << "{ this is not json";
    }
    CHECK_THROWS_WITH_AS(load_config_file("/tmp/svlab_bad_json.json"),
                         doctest::Contains("config parse error in /tmp/svlab_bad_json.json"),
                         Error);

    std::string path = write_temp_config("svlab_good_config.json", verify_config());
    ExperimentConfig cfg = load_config_file(path);
    CHECK(cfg.alpha == Rational(1, 20));
    CHECK(cfg.world->label() == "coin(2/5)");
  }
}

TEST_SUITE("report io") {
  TEST_CASE("trial report json round trip") {
    VerifierFamily fam =
        verifier_for(builtin_hypothesis("coin-over-half"), Rational(1, 20));
    TrialPlan plan{.family = fam,
                   .world = World::coin(Rational(3, 5)),
                   .n_max = 12,
                   .trials = 8,
                   .master_seed = 3};
    TrialReport report = run_trials(plan);

    json j = report_to_json(report);
    CHECK(j.at("accept_any").size() == 12);
    CHECK(j.at("target_payload").is_null());
    TrialReport back = report_from_json(j);
    CHECK(report_to_json(back) == j);

    json missing = j;
    missing.erase("master_seed");
    CHECK_THROWS_WITH_AS(report_from_json(missing),
                         "report field \"master_seed\" missing or not a number", Error);

    json short_counts = j;
    short_counts["accept_any"] = json::array({1, 2});
    CHECK_THROWS_WITH_AS(report_from_json(short_counts),
                         "report field \"accept_any\" has wrong length", Error);

    json bad_trials = j;
    bad_trials["trials"] = "eight";
    CHECK_THROWS_WITH_AS(report_from_json(bad_trials),
                         "report field \"trials\" missing or not an integer", Error);

    json negative = j;
    negative["n_max"] = -1;
    CHECK_THROWS_WITH_AS(report_from_json(negative),
                         "report field \"n_max\" must be non-negative", Error);
  }

  TEST_CASE("format_rate is fixed six-digit") {
    CHECK(format_rate(0.5) == "0.500000");
    CHECK(format_rate(0.0) == "0.000000");
    CHECK(format_rate(1.0) == "1.000000");
    CHECK(format_rate(1.0 / 3.0) == "0.333333");
  }

  TEST_CASE("trial report csv layout") {
    VerifierFamily fam =
        verifier_for(builtin_hypothesis("coin-over-half"), Rational(1, 20));
    TrialPlan plan{.family = fam,
                   .world = World::coin(Rational(3, 5)),
                   .n_max = 15,
                   .trials = 10,
                   .master_seed = 21};
    TrialReport report = run_trials(plan);

    std::ostringstream table;
    write_report_csv(table, report);
    std::istringstream lines(table.str());
    std::string line;
    REQUIRE(std::getline(lines, line));
    CHECK(line == "n,accept_rate,ci_low,ci_high,cum_error");
    int rows = 0;
    std::string last;
    while (std::getline(lines, line)) {
      ++rows;
      last = line;
    }
    CHECK(rows == 15);
    CHECK(last.rfind("15,", 0) == 0);
    // The cumulative column accumulates in the same order as cum_error().
    CHECK(last.substr(last.rfind(',') + 1) == format_rate(report.cum_error()));
  }

  TEST_CASE("inquiry csv lists one row per stage") {
    auto stages = simulate_inquiry(prop_method_by_name("constant-zero"),
                                   parse_binary_world("zeros"), 3);
    std::ostringstream table;
    write_inquiry_csv(table, stages);
    std::istringstream lines(table.str());
    std::string line;
    REQUIRE(std::getline(lines, line));
    CHECK(line == "stage,conclusion");
    std::size_t rows = 0;
    while (std::getline(lines, line)) {
      CHECK(line.rfind(std::to_string(rows) + ",", 0) == 0);
      ++rows;
    }
    CHECK(rows == stages.size());
  }

  TEST_CASE("weak-convergence csv quotes event names with commas") {
    std::vector<World> seq;
    for (int m = 3; m <= 12; ++m) seq.push_back(World::coin(Rational(1, 2) + Rational(1, m)));
    World limit = World::coin(Rational(1, 2));
    Event both = Event::of_symbols(limit.space(), {"H", "T"});
    Event heads = Event::of_symbols(limit.space(), {"H"});
    WeakConvergenceReport report =
        weak_convergence_check(seq, limit, {both, heads}, Rational(1, 4));

    std::ostringstream table;
    write_weak_convergence_csv(table, report);
    std::istringstream lines(table.str());
    std::string line;
    REQUIRE(std::getline(lines, line));
    CHECK(line == "event,max_tail_deviation,within_tolerance");
    REQUIRE(std::getline(lines, line));
    CHECK(line.rfind("\"{H,T}\",", 0) == 0);  // comma inside the cell forces quoting
    CHECK(line.find(",true") != std::string::npos);
    REQUIRE(std::getline(lines, line));
    CHECK(line.rfind("{H},", 0) == 0);
  }
}

TEST_SUITE("cli") {
  TEST_CASE("verify runs are byte-identical and overrides bite") {
    json j = verify_config();
    j["claims"] = json::array({{{"kind", "sv3-bound"}, {"alpha", "1/20"}},
                               {{"kind", "limsup-bound"}, {"alpha", "1/20"}}});
    std::string path = write_temp_config("svlab_cli_verify.json", j);

    CliRun first = cli({"--config", path});
    CliRun second = cli({"--config", path});
    CHECK(first.exit_code == 0);
    CHECK(first.err.empty());
    CHECK(first.out == second.out);
    CHECK(first.out.find("experiment: verify\n") != std::string::npos);
    CHECK(first.out.find("world: coin(2/5)\n") != std::string::npos);
    CHECK(first.out.find("family: hoeffding at alpha=1/20\n") != std::string::npos);
    CHECK(first.out.find("n_max=40 trials=30 seed=11\n") != std::string::npos);
    CHECK(first.out.find("claim sv3-bound: PASS") != std::string::npos);
    CHECK(first.out.find("claim limsup-bound: PASS") != std::string::npos);
    CHECK(first.out.find("n,accept_rate,ci_low,ci_high,cum_error\n") != std::string::npos);

    CliRun reseeded = cli({"--config", path, "--seed", "999"});
    CHECK(reseeded.exit_code == 0);
    CHECK(reseeded.out != first.out);
    CHECK(reseeded.out.find("seed=999") != std::string::npos);

    CliRun fewer = cli({"--config", path, "--trials", "5"});
    CHECK(fewer.out.find("n_max=40 trials=5 seed=11") != std::string::npos);

    CliRun zero = cli({"--config", path, "--trials", "0"});
    CHECK(zero.exit_code == 1);
    CHECK(zero.err == "error: --trials must be at least 1\n");
  }

  TEST_CASE("json format produces a parseable document") {
    std::string path = write_temp_config("svlab_cli_json.json", verify_config());
    CliRun run = cli({"--config", path, "--format", "json"});
    CliRun again = cli({"--config", path, "--format", "json"});
    CHECK(run.exit_code == 0);
    CHECK(run.out == again.out);

    auto start = run.out.find('{');
    REQUIRE(start != std::string::npos);
    json doc = json::parse(run.out.substr(start));
    CHECK(doc.at("experiment") == "verify");
    CHECK(doc.at("world") == "coin(2/5)");
    CHECK(doc.at("alpha") == "1/20");
    TrialReport report = report_from_json(doc.at("report"));
    CHECK(report.trials == 30);
    CHECK(report.n_max == 40);
  }

  TEST_CASE("output files are written and announced") {
    std::string path = write_temp_config("svlab_cli_outfile.json", verify_config());
    const char* out_path = "/tmp/svlab_cli_report.csv";
    std::remove(out_path);

    CliRun run = cli({"--config", path, "--output", out_path});
    CHECK(run.exit_code == 0);
    CHECK(run.out.find(std::string("report written to ") + out_path + "\n") !=
          std::string::npos);
    CHECK(run.out.find("n,accept_rate") == std::string::npos);  // table went to the file

    std::ifstream in(out_path);
    REQUIRE(in.good());
    std::string header;
    REQUIRE(std::getline(in, header));
    CHECK(header == "n,accept_rate,ci_low,ci_high,cum_error");

    CliRun bad = cli({"--config", path, "--output", "/tmp/no_such_dir_svlab/x.csv"});
    CHECK(bad.exit_code == 1);
    CHECK(bad.err.find("error: cannot write output file: /tmp/no_such_dir_svlab/x.csv") !=
          std::string::npos);
  }

  TEST_CASE("solve experiment picks the true answer as target") {
    json j{{"experiment", "solve"}, {"alpha", "1/100"},      {"n_max", 60},
           {"trials", 10},          {"seed", 4},             {"world", "coin:1/5"},
           {"partition", "bias-3cell"}};
    std::string path = write_temp_config("svlab_cli_solve.json", j);
    CliRun run = cli({"--config", path});
    CHECK(run.exit_code == 0);
    CHECK(run.out.find("family: solver at alpha=1/100\n") != std::string::npos);
    CHECK(run.out.find("target payload: low\n") != std::string::npos);
  }

  TEST_CASE("prop subcommand with parent flags after it") {
    CliRun run = cli({"prop", "--method", "zero-solver", "--world", "10", "--stages", "6",
                      "--format", "json"});
    CliRun again = cli({"prop", "--method", "zero-solver", "--world", "10", "--stages", "6",
                        "--format", "json"});
    CHECK(run.exit_code == 0);
    CHECK(run.out == again.out);
    CHECK(run.out.find("method: solve[some zero|no zeros]\n") != std::string::npos);
    CHECK(run.out.find("final conclusion: some zero\n") != std::string::npos);

    auto start = run.out.find('{');
    REQUIRE(start != std::string::npos);
    // The table is a JSON object whose "stages" array carries the trace.
    json doc = json::parse(run.out.substr(start));
    CHECK(doc.at("method") == "solve[some zero|no zeros]");
    CHECK(doc.at("stages").size() == 7);

    CliRun missing = cli({"prop", "--world", "10"});
    CHECK(missing.exit_code != 0);
    CHECK(missing.err.find("--method") != std::string::npos);
  }

  TEST_CASE("error paths and exit codes") {
    CliRun none = cli({});
    CHECK(none.exit_code == 1);
    CHECK(none.err == "error: no config file given (use --config, or the prop subcommand)\n");

    json bad_alpha = verify_config();
    bad_alpha["alpha"] = "3/2";
    std::string path = write_temp_config("svlab_cli_bad_alpha.json", bad_alpha);
    CliRun alpha = cli({"--config", path});
    CHECK(alpha.exit_code == 1);
    CHECK(alpha.err == "error: alpha must lie in (0,1)\n");

    CliRun unknown = cli({"--bogus"});
    CHECK(unknown.exit_code != 0);
    CHECK(!unknown.err.empty());

    CliRun help = cli({"--help"});
    CHECK(help.exit_code == 0);
    CHECK(help.out.find("svlab") != std::string::npos);

    // A claim that cannot hold makes the run exit 2 without throwing.
    json failing{{"experiment", "verify"},
                 {"alpha", "1/20"},
                 {"n_max", 30},
                 {"trials", 20},
                 {"seed", 9},
                 {"world", "coin:3/5"},
                 {"hypothesis", "coin-over-half"},
                 {"claims", json::array({{{"kind", "sv4-eventual"}, {"target", 1.1}}})}};
    std::string fail_path = write_temp_config("svlab_cli_failing.json", failing);
    CliRun failed = cli({"--config", fail_path});
    CHECK(failed.exit_code == 2);
    CHECK(failed.out.find("claim sv4-eventual: FAIL") != std::string::npos);
  }

  TEST_CASE("weak-convergence through the driver") {
    json good{{"experiment", "weak-convergence"},
              {"sequence", json::array({"coin:5/6", "coin:3/4", "coin:7/10", "coin:2/3",
                                        "coin:9/14", "coin:5/8", "coin:11/18", "coin:3/5"})},
              {"limit", "coin:1/2"},
              {"events", "full-algebra"},
              {"tolerance", "1/4"}};
    std::string path = write_temp_config("svlab_cli_weak.json", good);
    CliRun run = cli({"--config", path});
    CHECK(run.exit_code == 0);
    CHECK(run.out.find("sequence length: 8\n") != std::string::npos);
    CHECK(run.out.find("limit: coin(1/2)\n") != std::string::npos);
    CHECK(run.out.find("converged: yes\n") != std::string::npos);
    CHECK(run.out.find("event,max_tail_deviation,within_tolerance\n") != std::string::npos);
    CHECK(run.out.find("\"{H,T}\",") != std::string::npos);

    json stalled = good;
    stalled["sequence"] = json::array({"coin:3/4", "coin:3/4", "coin:3/4", "coin:3/4"});
    stalled["tolerance"] = "1/10";
    std::string stalled_path = write_temp_config("svlab_cli_weak_stalled.json", stalled);
    CliRun no = cli({"--config", stalled_path});
    CHECK(no.exit_code == 2);
    CHECK(no.out.find("converged: no\n") != std::string::npos);
  }
}
