#include "krf/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "krf/cohomology/builtins.hpp"
#include "krf/cohomology/json_io.hpp"
#include "krf/diagnostics/diagnostics.hpp"
#include "krf/error.hpp"
#include "krf/geometry/metric.hpp"

namespace krf::cli {

namespace fs = std::filesystem;
using nlohmann::json;

int exit_code_for(const Error& e)
{
    switch (e.code())
    {
        case ErrorCode::NonDecreasingVolume:
        case ErrorCode::InsufficientResolution:
        case ErrorCode::ProfileUndefined:
            return ExitNumericalFailure;
        default:
            return ExitInputError;
    }
}

namespace {

json number_or_null(double v)
{
    return std::isfinite(v) ? json(v) : json(nullptr);
}

std::string format(const char* fmt, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorCode::ConfigError, "cannot write " + path.string());
    out << text;
}

fs::path prepare_dir(const std::string& dir)
{
    fs::path p(dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec)
        throw Error(ErrorCode::ConfigError, "cannot create output directory " + dir + ": " + ec.message());
    return p;
}

diagnostics::Prediction prediction_for(const ExperimentConfig& config)
{
    if (!config.manifold)
        throw Error(ErrorCode::ConfigError, "missing \"manifold\" block");
    if (!config.omega0)
        throw Error(ErrorCode::ConfigError, "missing \"omega0\" class");
    return diagnostics::predict(*config.manifold, *config.omega0);
}

json prediction_json(const diagnostics::Prediction& p)
{
    json out = cohomology::verdict_to_json(p.verdict);
    out["t_pred"] = out["t_sing_unnormalized"];
    return out;
}

}   // namespace

CommandResult cmd_predict(const ExperimentConfig& config, std::ostream& log)
{
    const auto p = prediction_for(config);
    CommandResult result;
    result.verdict = prediction_json(p);
    const fs::path dir = prepare_dir(config.output_dir);
    write_text(dir / "verdict.json", result.verdict.dump(2) + "\n");
    log << "T_sing = " << p.verdict.t_sing_unnormalized.to_string() << "  ("
        << cohomology::to_string(p.verdict.classification) << ")\n";
    return result;
}

CommandResult cmd_run(const ExperimentConfig& config, std::ostream& log)
{
    if (!config.run)
        throw Error(ErrorCode::ConfigError, "missing \"run\" block");
    const RunSpec& spec = *config.run;
    const geometry::SurfaceModel& model = spec.model;
    const geometry::ConformalMetric initial = build_initial(spec, config.seed);

    const bool flat_ends = model.left().kind == geometry::EndKind::FlatEnd || model.right().kind == geometry::EndKind::FlatEnd;
    const double volume0 = flat_ends ? geometry::window_volume(initial, model) : geometry::volume(initial, model);

    // An explicit class overrides the class read off the initial metric.
    diagnostics::Prediction prediction;
    if (config.manifold && config.omega0)
        prediction = diagnostics::predict(*config.manifold, *config.omega0);
    else if (flat_ends)
        prediction = diagnostics::predict(cohomology::cstar(),
                                          cohomology::CohomologyClass{cohomology::ExactReal(cohomology::Rational(volume0))});
    else
        prediction = diagnostics::predict_for_model(model.topology(), volume0);
    const double t_pred = prediction.t_pred;

    flow::RunConfig rc = spec.flow;
    if (!spec.t_end_given)
    {
        if (!std::isfinite(t_pred))
            throw Error(ErrorCode::ConfigError, "\"t_end\" is required when no singularity is predicted");
        const double s_end = spec.t_end_factor * t_pred;
        rc.t_end = rc.mode == flow::FlowMode::Normalized ? std::log1p(s_end) : s_end;
    }
    if (rc.mode == flow::FlowMode::FlatLongtime && !flat_ends)
        throw Error(ErrorCode::ConfigError, "flat_longtime mode needs flat ends");

    const flow::RunReport report =
        rc.mode == flow::FlowMode::FlatLongtime ? flow::run_longtime_flat(model, initial, rc) : flow::run(model, initial, rc);

    const fs::path dir = prepare_dir(config.output_dir);
    {
        std::ostringstream csv;
        flow::write_series_csv(csv, report.series);
        write_text(dir / "series.csv", csv.str());
    }

    // Classification against the predicted time.
    std::string verdict = "Unresolved";
    std::string verdict_note;
    diagnostics::RunClassification cls;
    try
    {
        cls = diagnostics::classify_run(report, t_pred, spec.classify);
        verdict = diagnostics::to_string(cls.verdict);
    }
    catch (const Error& e)
    {
        verdict_note = e.what();
    }
    json indicator_ref = nullptr;
    if (!cls.indicator.empty())
    {
        std::ostringstream csv;
        diagnostics::write_indicator_csv(csv, cls.indicator);
        write_text(dir / "indicator.csv", csv.str());
        indicator_ref = "indicator.csv";
    }

    double t_empirical = std::numeric_limits<double>::quiet_NaN();
    double t_curvature = std::numeric_limits<double>::quiet_NaN();
    double volume_slope = std::numeric_limits<double>::quiet_NaN();
    if (std::isfinite(t_pred))
    {
        try
        {
            const auto est = diagnostics::empirical_t_sing(report);
            t_empirical = est.from_volume;
            t_curvature = est.from_curvature;
            volume_slope = est.volume_slope;
        }
        catch (const Error& e)
        {
            if (verdict_note.empty())
                verdict_note = e.what();
        }
    }

    // Cigar comparison over the snapshots in the last decade before T (informational).
    json cigar_ref = nullptr;
    if (std::isfinite(t_pred) && !report.snapshots.empty() && cls.decade_hi > 0)
    {
        std::string csv = "s,tau,distance\n";
        std::size_t rows = 0;
        for (const auto& snap : report.snapshots)
        {
            const double s = report.mode == flow::FlowMode::Normalized ? std::expm1(snap.t) : snap.t;
            if (t_pred - s > cls.decade_hi || s >= t_pred)
                continue;
            try
            {
                const double d = diagnostics::cigar_profile_distance(snap);
                char buf[128];
                std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", s, t_pred - s, d);
                csv += buf;
                ++rows;
            }
            catch (const Error&)
            {
            }
        }
        if (rows > 0)
        {
            write_text(dir / "cigar.csv", csv);
            cigar_ref = "cigar.csv";
        }
    }

    CommandResult result;
    json& v = result.verdict;
    v["t_pred"] = std::isinf(t_pred) ? json("inf") : json(t_pred);
    v["t_pred_exact"] = prediction.verdict.t_sing_unnormalized.to_string();
    v["t_empirical"] = number_or_null(t_empirical);
    v["t_empirical_curvature"] = number_or_null(t_curvature);
    v["volume_slope"] = number_or_null(volume_slope);
    v["verdict"] = verdict;
    if (!verdict_note.empty())
        v["verdict_note"] = verdict_note;
    v["indicator_growth"] = number_or_null(cls.growth);
    v["indicator_series_ref"] = indicator_ref;
    v["cigar_series_ref"] = cigar_ref;
    v["predicted_classification"] = cohomology::to_string(prediction.verdict.classification);
    v["initial_volume"] = volume0;
    v["stop"] = flow::to_string(report.stop);
    v["stop_detail"] = report.stop_detail;
    v["steps"] = report.steps;
    v["monitor_violations"] = report.monitors.violations;
    write_text(dir / "verdict.json", v.dump(2) + "\n");

    const bool predicted_singular = std::isfinite(t_pred);
    if (!report.monitors.ok())
        result.status = ExitMonitorViolation;
    else if (report.stop == flow::StopReason::NonFinite || report.stop == flow::StopReason::StepBudget ||
             (!predicted_singular && report.stop != flow::StopReason::Completed))
        result.status = ExitNumericalFailure;

    std::ostringstream summary;
    summary << "model            " << model.describe() << "\n"
            << "mode             " << flow::to_string(report.mode) << "\n"
            << "initial volume   " << format("%.10g", volume0) << "\n"
            << "T predicted      " << prediction.verdict.t_sing_unnormalized.to_string() << " = "
            << format("%.10g", t_pred) << " (" << cohomology::to_string(prediction.verdict.classification) << ")\n"
            << "T empirical      " << format("%.10g", t_empirical) << " (volume fit), " << format("%.10g", t_curvature)
            << " (curvature fit)\n"
            << "volume slope     " << format("%.10g", volume_slope) << "\n"
            << "stop             " << flow::to_string(report.stop)
            << (report.stop_detail.empty() ? "" : " - " + report.stop_detail) << "\n"
            << "steps            " << report.steps << " (" << report.rebases << " rebases, " << report.trims
            << " trims)\n"
            << "verdict          " << verdict << (verdict_note.empty() ? "" : " - " + verdict_note) << "\n"
            << "indicator growth " << format("%.6g", cls.growth) << "\n"
            << "monitors         " << (report.monitors.ok() ? "ok" : "VIOLATED") << ", worst margins uupper "
            << format("%.3g", report.monitors.worst_uupper) << ", uprime " << format("%.3g", report.monitors.worst_uprime)
            << ", voldec " << format("%.3g", report.monitors.worst_voldec) << ", voleqn "
            << format("%.3g", report.monitors.worst_voleqn) << " (slack " << format("%.3g", report.monitors.slack)
            << ")\n"
            << "exit status      " << result.status << "\n";
    write_text(dir / "summary.txt", summary.str());
    log << summary.str();
    return result;
}

std::vector<std::string> reproduce_ids()
{
    return {"9.2", "9.3a", "9.3b", "9.3c", "9.4-klt", "9.4-keq", "9.4-kgt"};
}

int cmd_reproduce(const std::string& id, std::ostream& log, const std::string& data_dir)
{
    const auto ids = reproduce_ids();
    if (std::find(ids.begin(), ids.end(), id) == ids.end())
        throw Error(ErrorCode::ConfigError, "unknown example '" + id + "'");
    const fs::path root(data_dir);
    const ExperimentConfig config = parse_config(load_json_file((root / "configs" / (id + ".json")).string()));
    const json golden = load_json_file((root / "golden" / (id + ".json")).string());
    const json actual = prediction_json(prediction_for(config));
    const auto diffs = cohomology::verdict_diff(golden, actual);
    if (!diffs.empty())
    {
        log << id << ": MISMATCH\n";
        for (const auto& d : diffs)
            log << "  " << d << "\n";
        return ExitGoldenMismatch;
    }
    log << id << ": ok  T = " << actual["t_sing_unnormalized"]["exact"].get<std::string>() << ", "
        << actual["classification"].get<std::string>() << "\n";
    return ExitOk;
}

SweepParameter parse_sweep_parameter(const std::string& text)
{
    const std::size_t eq = text.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == text.size())
        throw Error(ErrorCode::ConfigError, "sweep parameter must look like path=v1,v2,...");
    SweepParameter p;
    p.path = text.substr(0, eq);
    std::stringstream list(text.substr(eq + 1));
    std::string item;
    while (std::getline(list, item, ','))
    {
        const json parsed = json::parse(item, nullptr, false);
        p.values.push_back(parsed.is_discarded() ? json(item) : parsed);
    }
    if (p.values.empty())
        throw Error(ErrorCode::ConfigError, "empty value list for " + p.path);
    return p;
}

namespace {

int run_one(const json& j, std::ostream& log)
{
    try
    {
        const ExperimentConfig config = parse_config(j);
        return config.run ? cmd_run(config, log).status : cmd_predict(config, log).status;
    }
    catch (const Error& e)
    {
        log << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

}   // namespace

int cmd_sweep(const json& base, const std::vector<SweepParameter>& params, unsigned workers, std::ostream& log)
{
    ExperimentConfig base_config = parse_config(base);
    const fs::path root = effective_output_dir(base_config);

    std::vector<json> configs{base};
    std::vector<std::string> labels{""};
    for (const auto& p : params)
    {
        std::vector<json> next;
        std::vector<std::string> next_labels;
        for (std::size_t i = 0; i < configs.size(); ++i)
            for (const auto& v : p.values)
            {
                json c = configs[i];
                set_path(c, p.path, v);
                next.push_back(std::move(c));
                next_labels.push_back(labels[i] + " " + p.path + "=" + v.dump());
            }
        configs = std::move(next);
        labels = std::move(next_labels);
    }
    for (std::size_t i = 0; i < configs.size(); ++i)
    {
        char name[32];
        std::snprintf(name, sizeof name, "sweep_%03zu", i);
        configs[i]["output_dir"] = (root / name).string();
    }

    std::vector<std::ostringstream> logs(configs.size());
    std::vector<int> status(configs.size(), ExitOk);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < configs.size(); i = next++)
            status[i] = run_one(configs[i], logs[i]);
    };
    std::vector<std::future<void>> pool;
    for (unsigned w = 0; w < std::max(1u, workers); ++w)
        pool.push_back(std::async(std::launch::async, worker));
    for (auto& f : pool)
        f.get();

    json index = json::array();
    int worst = ExitOk;
    for (std::size_t i = 0; i < configs.size(); ++i)
    {
        log << "[" << configs[i]["output_dir"].get<std::string>() << "]" << labels[i] << " -> exit " << status[i] << "\n"
            << logs[i].str();
        index.push_back({{"output_dir", configs[i]["output_dir"]}, {"parameters", labels[i]}, {"exit", status[i]}});
        worst = std::max(worst, status[i]);
    }
    prepare_dir(root.string());
    write_text(root / "sweep.json", index.dump(2) + "\n");
    return worst;
}

int main(int argc, char** argv)
{
    CLI::App app{"Kaehler-Ricci flow on quasiprojective surfaces: predictions, runs and diagnostics"};
    app.require_subcommand(1);

    std::string config_path;
    auto* predict = app.add_subcommand("predict", "Cohomological singularity time and classification");
    predict->add_option("config", config_path, "Experiment config (JSON)")->required();
    auto* run = app.add_subcommand("run", "Run the flow and diagnostics, writing CSV/JSON artifacts");
    run->add_option("config", config_path, "Experiment config (JSON)")->required();

    std::string example_id;
    auto* reproduce = app.add_subcommand("reproduce", "Re-run a canned example and diff against its golden verdict");
    reproduce->add_option("id", example_id, "Example id")->required()->check(CLI::IsMember(reproduce_ids()));

    std::vector<std::string> sweep_params;
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    auto* sweep = app.add_subcommand("sweep", "Fan out independent runs over parameter lists");
    sweep->add_option("config", config_path, "Base experiment config (JSON)")->required();
    sweep->add_option("--param", sweep_params, "path=v1,v2,... (repeatable)")->required();
    sweep->add_option("--workers", workers, "Concurrent runs");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? ExitOk : ExitInputError;
    }

    try
    {
        if (*reproduce)
            return cmd_reproduce(example_id, std::cout);
        const json raw = load_json_file(config_path);
        if (*sweep)
        {
            std::vector<SweepParameter> params;
            for (const auto& p : sweep_params)
                params.push_back(parse_sweep_parameter(p));
            return cmd_sweep(raw, params, workers, std::cout);
        }
        ExperimentConfig config = parse_config(raw);
        config.output_dir = effective_output_dir(config);
        if (*predict)
        {
            const auto result = cmd_predict(config, std::cout);
            std::cout << result.verdict.dump(2) << "\n";
            return result.status;
        }
        return cmd_run(config, std::cout).status;
    }
    catch (const Error& e)
    {
        std::cerr << "krf: " << e.what() << "\n";
        return exit_code_for(e);
    }
    catch (const std::exception& e)
    {
        std::cerr << "krf: " << e.what() << "\n";
        return ExitNumericalFailure;
    }
}

}   // namespace krf::cli
