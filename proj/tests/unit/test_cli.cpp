#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "krf/cli/commands.hpp"
#include "krf/cli/config.hpp"
#include "krf/error.hpp"

using namespace krf;
using namespace krf::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("krf_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void spit(const fs::path& p, const std::string& text)
{
    std::ofstream(p, std::ios::binary) << text;
}

int run_binary(const std::string& args)
{
    const int status = std::system((std::string(KRF_BINARY) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

json small_run(const fs::path& out)
{
    json j = json::parse(R"({
      "run": { "topology": "OnePuncture", "grid": {"x_min": -2, "x_max": 20, "N": 128},
               "initial": {"kind": "carlson_griffiths", "c": 1, "bump": {"volume": 10}},
               "mode": "unnormalized", "t_end": 0.3 },
      "seed": 1 })");
    j["output_dir"] = out.string();
    return j;
}

}   // namespace

TEST_CASE("malformed JSON reports line and column")
{
    try
    {
        parse_json_text("{\n  \"manifold\": \"s2-1pt\",\n  \"omega0\": [1,,2]\n}", "cfg.json");
        FAIL("expected an error");
    }
    catch (const Error& e)
    {
        CHECK(e.code() == ErrorCode::ConfigError);
        CHECK(std::string(e.what()).find("cfg.json:3:") != std::string::npos);
        CHECK(exit_code_for(e) == ExitInputError);
    }
}

TEST_CASE("config parsing")
{
    const auto c = parse_config(json::parse(R"({
      "manifold": {"builtin": "cpn-k", "n": 2, "k": 3}, "omega0": ["6pi"], "output_dir": "x", "seed": 9,
      "run": {"topology": "TwoPuncture", "grid": {"x_min": -5, "x_max": 5, "N": 32}, "ends": {"left": "flat", "right": "flat"},
              "initial": {"kind": "flat_perturbed"}, "mode": "flat_longtime", "t_end": 3, "cfl": 0.1,
              "tolerances": {"solver": 1e-6}, "stencil_order": 2, "classify": {"G": 4, "B": 2}}})"));
    CHECK(c.manifold->divisors.size() == 3);
    CHECK(c.output_dir == "x");
    CHECK(c.seed == 9);
    REQUIRE(c.run);
    CHECK(c.run->model.grid().n == 32);
    CHECK(c.run->flow.mode == flow::FlowMode::FlatLongtime);
    CHECK(c.run->flow.tol == 1e-6);
    CHECK(c.run->flow.order == flow::StencilOrder::Second);
    CHECK(c.run->classify.growth_factor == 4.0);
    CHECK(c.run->t_end_given);

    CHECK_THROWS_AS(parse_config(json::parse(R"({"run": {"ends": {"left": "hole"}}})")), Error);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"run": {"stencil_order": 3}})")), Error);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"manifold": "torus"})")), Error);
    CHECK_THROWS_AS(parse_config(json::parse(R"([1, 2])")), Error);

    json j = json::object();
    set_path(j, "run.initial.c", 2.0);
    CHECK(j["run"]["initial"]["c"] == 2.0);
    const auto p = parse_sweep_parameter("run.initial.kind=poincare,round");
    CHECK(p.values == std::vector<json>{"poincare", "round"});
    CHECK(parse_sweep_parameter("seed=1,2,3").values.size() == 3);
    CHECK_THROWS_AS(parse_sweep_parameter("seed"), Error);
}

TEST_CASE("flat perturbations are reproducible from the seed")
{
    auto c = parse_config(json::parse(R"({"run": {"topology": "TwoPuncture", "grid": {"x_min": -5, "x_max": 5, "N": 32},
        "ends": {"left": "flat", "right": "flat"}, "initial": {"kind": "flat_perturbed", "noise": 0.05}}})"));
    CHECK(build_initial(*c.run, 4).f == build_initial(*c.run, 4).f);
    CHECK(build_initial(*c.run, 4).f != build_initial(*c.run, 5).f);
}

TEST_CASE("predict writes the verdict")
{
    const auto dir = scratch("predict");
    auto c = parse_config(json::parse(R"({"manifold": "s2xs2", "omega0": ["8pi", "2pi"]})"));
    c.output_dir = dir.string();
    std::ostringstream log;
    const auto r = cmd_predict(c, log);
    CHECK(r.status == ExitOk);
    const auto v = json::parse(slurp(dir / "verdict.json"));
    CHECK(v["t_pred"]["exact"] == "1");
    CHECK(v["classification"] == "Inconclusive");

    auto k = parse_config(json::parse(R"({"manifold": {"builtin": "cpn-k", "n": 1, "k": 1}, "omega0": ["10"]})"));
    k.output_dir = dir.string();
    CHECK(cmd_predict(k, log).verdict["t_pred"]["exact"] == "5/pi");
    CHECK_THROWS_AS(cmd_predict(parse_config(json::parse(R"({"manifold": "s2xs2"})")), log), Error);
}

TEST_CASE("runs are deterministic and write all artifacts")
{
    const auto a = scratch("run_a"), b = scratch("run_b");
    std::ostringstream log;
    const auto ra = cmd_run(parse_config(small_run(a)), log);
    const auto rb = cmd_run(parse_config(small_run(b)), log);
    CHECK(ra.status == ExitOk);
    CHECK(ra.verdict["stop"] == "Completed");
    CHECK(slurp(a / "series.csv") == slurp(b / "series.csv"));
    CHECK(slurp(a / "series.csv").size() > 100);
    for (const char* f : {"verdict.json", "summary.txt"})
        CHECK(fs::exists(a / f));
    const auto v = json::parse(slurp(a / "verdict.json"));
    for (const char* key : {"t_pred", "t_empirical", "verdict", "indicator_series_ref", "cigar_series_ref"})
        CHECK(v.contains(key));
    CHECK(v["t_pred"].get<double>() == doctest::Approx(geometry::volume(build_initial(*parse_config(small_run(a)).run, 1),
                                                                         parse_config(small_run(a)).run->model) /
                                                        (2 * M_PI)));
}

TEST_CASE("flat cylinder run: no singularity")
{
    const auto dir = scratch("flat");
    auto j = json::parse(R"({"manifold": "cstar", "omega0": ["1"], "seed": 2,
      "run": {"topology": "TwoPuncture", "grid": {"x_min": -10, "x_max": 10, "N": 64}, "ends": {"left": "flat", "right": "flat"},
              "initial": {"kind": "flat_perturbed"}, "mode": "flat_longtime", "t_end": 5}})");
    j["output_dir"] = dir.string();
    std::ostringstream log;
    const auto r = cmd_run(parse_config(j), log);
    CHECK(r.status == ExitOk);
    CHECK(r.verdict["verdict"] == "NoSingularity");
    CHECK(r.verdict["t_pred"] == "inf");
}

TEST_CASE("reproduce matches every golden verdict and flags a mismatch")
{
    std::ostringstream log;
    for (const auto& id : reproduce_ids())
        CHECK(cmd_reproduce(id, log) == ExitOk);

    const auto dir = scratch("golden");
    fs::copy(fs::path(KRF_DATA_DIR), dir, fs::copy_options::recursive);
    auto golden = json::parse(slurp(dir / "golden" / "9.3b.json"));
    golden["classification"] = "Inconclusive";
    spit(dir / "golden" / "9.3b.json", golden.dump());
    std::ostringstream diff;
    CHECK(cmd_reproduce("9.3b", diff, dir.string()) == ExitGoldenMismatch);
    CHECK(diff.str().find("classification") != std::string::npos);
    CHECK_THROWS_AS(cmd_reproduce("9.9", log), Error);
}

TEST_CASE("sweeps fan out into separate directories")
{
    const auto dir = scratch("sweep");
    std::ostringstream log;
    const int status = cmd_sweep(small_run(dir), {parse_sweep_parameter("run.initial.bump.volume=8,12")}, 2, log);
    CHECK(status == ExitOk);
    CHECK(fs::exists(dir / "sweep_000" / "series.csv"));
    CHECK(fs::exists(dir / "sweep_001" / "series.csv"));
    CHECK(json::parse(slurp(dir / "sweep.json")).size() == 2);
    const auto v8 = json::parse(slurp(dir / "sweep_000" / "verdict.json"));
    const auto v12 = json::parse(slurp(dir / "sweep_001" / "verdict.json"));
    CHECK(v12["t_pred"].get<double>() / v8["t_pred"].get<double>() == doctest::Approx(1.5).epsilon(1e-3));
}

TEST_CASE("executable exit codes and the output directory override")
{
    const auto dir = scratch("exe");
    spit(dir / "bad.json", "{ \"manifold\": \"s2-1pt\", ");
    CHECK(run_binary("predict " + (dir / "bad.json").string()) == ExitInputError);
    spit(dir / "notkahler.json", R"({"manifold": "s2xs2", "omega0": ["-1", "1"]})");
    CHECK(run_binary("predict " + (dir / "notkahler.json").string()) == ExitInputError);
    spit(dir / "mismatch.json", R"({"manifold": "s2xs2", "omega0": ["1"]})");
    CHECK(run_binary("predict " + (dir / "mismatch.json").string()) == ExitInputError);
    CHECK(run_binary("reproduce 9.3a") == ExitOk);
    CHECK(run_binary("reproduce nope") == ExitInputError);

    spit(dir / "ok.json", R"({"manifold": "s2-1pt", "omega0": ["10"], "output_dir": "unused_default"})");
    const auto target = dir / "override";
    const std::string env = "KRF_OUTPUT_DIR=" + target.string() + " ";
    const int status = std::system((env + KRF_BINARY + " predict " + (dir / "ok.json").string() + " >/dev/null").c_str());
    CHECK(WEXITSTATUS(status) == ExitOk);
    CHECK(fs::exists(target / "verdict.json"));
}
