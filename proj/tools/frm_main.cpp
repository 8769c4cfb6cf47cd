// Command-line interface for the financial risk meter toolkit.
//
// Subcommands:
//   compute       panel ingestion + penalty-selection grid -> index artifacts
//   classify      ratio-to-running-max risk levels for one or all dates
//   validate      granger / cointegration / ccf decision trail against
//                 another risk series
//   descriptives  extrema and mean of an index series
//
// Exit codes: 0 success, 2 input error, 3 solver failure, 1 internal error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cctype>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "frm/frm.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

struct RunConfig {
    double tau = 0.05;
    int window = 63;
    int workers = 0;  // 0: all available cores
    int grid_points = 50;
    long seed = 0;    // recorded in the manifest; the pipeline itself is deterministic
    std::string prices;
    std::string macro;
    std::string out = ".";
    bool skip_failures = false;
    frm::MacroSpec macro_spec;  // defaults to level for unlisted columns
    std::vector<std::string> macro_spec_raw;
};

/// Config file values sit under the command-line flags: flags win.
void apply_config_file(const std::string& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw frm::InputError("cannot open config '" + path + "'");
    nlohmann::json j;
    in >> j;
    if (j.contains("tau")) cfg.tau = j["tau"].get<double>();
    if (j.contains("window")) cfg.window = j["window"].get<int>();
    if (j.contains("workers")) cfg.workers = j["workers"].get<int>();
    if (j.contains("grid_points")) cfg.grid_points = j["grid_points"].get<int>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<long>();
    if (j.contains("prices")) cfg.prices = j["prices"].get<std::string>();
    if (j.contains("macro")) cfg.macro = j["macro"].get<std::string>();
    if (j.contains("out")) cfg.out = j["out"].get<std::string>();
    if (j.contains("skip_failures")) cfg.skip_failures = j["skip_failures"].get<bool>();
    if (j.contains("macro_spec")) {
        for (const auto& [label, tag] : j["macro_spec"].items()) {
            cfg.macro_spec.columns.emplace_back(label,
                                                frm::parse_macro_transform(tag.get<std::string>()));
        }
    }
}

frm::MacroSpec resolve_macro_spec(const RunConfig& cfg) {
    frm::MacroSpec spec = cfg.macro_spec;
    for (const auto& entry : cfg.macro_spec_raw) {
        const auto eq = entry.find('=');
        if (eq == std::string::npos) {
            throw frm::InputError("--macro-transform expects LABEL=TAG, got '" + entry + "'");
        }
        spec.columns.emplace_back(entry.substr(0, eq),
                                  frm::parse_macro_transform(entry.substr(eq + 1)));
    }
    if (cfg.macro.empty()) return spec;
    // unlisted macro columns default to level
    const frm::csv::Table table = frm::csv::read_table(cfg.macro);
    for (std::size_t c = 1; c < table.header.size(); ++c) {
        const auto& label = table.header[c];
        bool found = false;
        for (const auto& [name, tag] : spec.columns) {
            if (name == label) found = true;
        }
        if (!found) spec.columns.emplace_back(label, frm::MacroTransform::Level);
    }
    return spec;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw frm::InputError("cannot write '" + path + "'");
    out << text;
}

std::string json_dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

int cmd_compute(RunConfig cfg, bool progress) {
    if (cfg.prices.empty()) throw frm::InputError("compute: --prices is required");
    const frm::MacroSpec spec = resolve_macro_spec(cfg);
    std::vector<std::string> warnings;
    frm::IngestOptions ingest_options;
    ingest_options.warnings = &warnings;
    const frm::ReturnPanel panel = frm::load_panel(cfg.prices, cfg.macro, spec, ingest_options);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";

    frm::GridSettings settings;
    settings.tau = cfg.tau;
    settings.window_size = cfg.window;
    settings.workers = cfg.workers > 0
                           ? cfg.workers
                           : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    settings.grid_points = cfg.grid_points;
    settings.skip_failures = cfg.skip_failures;
    if (progress) {
        settings.event_sink = [](const frm::CellEvent& event) {
            std::cerr << "cell window=" << event.window << " firm=" << event.firm << " date="
                      << event.date.to_string() << " lambda=" << event.lambda_star << " ("
                      << event.millis << " ms)" << (event.success ? "" : " FAILED") << "\n";
        };
    }

    const auto t0 = std::chrono::steady_clock::now();
    const frm::FrmSeries series = frm::run_grid(panel, settings);
    const double total_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    std::filesystem::create_directories(cfg.out);
    const auto out = std::filesystem::path(cfg.out);
    frm::save_frm_csv(series, (out / "frm_series.csv").string());
    frm::save_lambda_matrix_csv(series, (out / "lambda_matrix.csv").string());

    int total_failures = 0;
    for (int f : series.failures_per_window) total_failures += f;
    nlohmann::json macro_spec_json = nlohmann::json::object();
    for (const auto& [label, tag] : spec.columns) macro_spec_json[label] = frm::to_string(tag);
    const nlohmann::json manifest{
        {"config",
         {{"tau", cfg.tau},
          {"window", cfg.window},
          {"workers", settings.workers},
          {"grid_points", cfg.grid_points},
          {"seed", cfg.seed},
          {"prices", cfg.prices},
          {"macro", cfg.macro},
          {"out", cfg.out},
          {"skip_failures", cfg.skip_failures},
          {"macro_spec", macro_spec_json}}},
        {"versions", {{"frm", kVersion}, {"artifact_format", 1}}},
        {"panel", {{"dates", panel.T()}, {"firms", panel.firms()}, {"macros", panel.macros()}}},
        {"timings",
         {{"total_ms", total_ms},
          {"cells", series.windows() * static_cast<Eigen::Index>(series.firm_ids.size())}}},
        {"failures", {{"total", total_failures}}},
        {"warnings", warnings},
    };
    write_text((out / "run_manifest.json").string(), json_dump(manifest));
    std::cerr << "computed " << series.windows() << " windows x " << series.firm_ids.size()
              << " firms in " << total_ms / 1000.0 << " s\n";
    return 0;
}

nlohmann::json assessment_json(const frm::RiskAssessment& reading) {
    std::string color = frm::to_string(reading.level);
    for (auto& c : color) c = static_cast<char>(std::tolower(c));
    return nlohmann::json{{"date", reading.date.to_string()},
                          {"frm", reading.frm_value},
                          {"ratio_percent", reading.ratio_percent},
                          {"level", frm::to_string(reading.level)},
                          {"color", color},
                          {"description", frm::level_description(reading.level)}};
}

int cmd_classify(const std::string& frm_csv, const std::string& date_text,
                 const std::string& out_path) {
    const frm::FrmSeries series = frm::load_frm_csv(frm_csv);
    nlohmann::json result;
    if (!date_text.empty()) {
        result = assessment_json(frm::assess(series, frm::Date::parse(date_text)));
    } else {
        result = nlohmann::json::array();
        for (const auto& date : series.dates) {
            result.push_back(assessment_json(frm::assess(series, date)));
        }
    }
    const std::string text = json_dump(result);
    if (!out_path.empty()) {
        write_text(out_path, text);
    } else {
        std::cout << text;
    }
    return 0;
}

int cmd_validate(const std::string& frm_csv, const std::string& other_csv,
                 const std::string& other_name, const std::string& mode, int max_order,
                 int max_lag, bool mackinnon, const std::string& adf_spec_name,
                 const std::string& out_path) {
    const auto frm_series = frm::csv::read_series(frm_csv);
    const auto other = frm::csv::read_series(other_csv);
    std::string name = other_name;
    if (name.empty()) name = std::filesystem::path(other_csv).stem().string();
    const frm::AlignedPair pair = frm::align_series(frm_series, other, name);

    frm::econ::AdfSpec adf_spec = frm::econ::AdfSpec::Trend;
    if (adf_spec_name == "drift") {
        adf_spec = frm::econ::AdfSpec::Drift;
    } else if (adf_spec_name != "trend") {
        throw frm::InputError("validate: --adf-spec expects trend or drift");
    }

    nlohmann::json trail;
    if (mode == "granger") {
        trail = frm::granger_flow(pair, max_order, adf_spec);
    } else if (mode == "cointegration") {
        frm::econ::EngleGrangerOptions options;
        if (mackinnon) options.critical = frm::econ::CointCriticalValues::MacKinnon;
        trail = frm::cointegration_flow(pair, options, adf_spec);
    } else if (mode == "ccf") {
        trail = frm::ccf_flow(pair, max_lag);
    } else {
        throw frm::InputError("validate: unknown mode '" + mode +
                              "' (expected granger, cointegration or ccf)");
    }
    const std::string text = json_dump(trail);
    if (!out_path.empty()) {
        write_text(out_path, text);
    } else {
        std::cout << text;
    }
    return 0;
}

int cmd_descriptives(const std::string& frm_csv, const std::string& out_path) {
    const frm::FrmSeries series = frm::load_frm_csv(frm_csv);
    const frm::Descriptives stats = frm::descriptives(series);
    const nlohmann::json result{{"min", stats.min},
                                {"max", stats.max},
                                {"mean", stats.mean},
                                {"argmin_date", stats.argmin_date.to_string()},
                                {"argmax_date", stats.argmax_date.to_string()}};
    const std::string text = json_dump(result);
    if (!out_path.empty()) {
        write_text(out_path, text);
    } else {
        std::cout << text;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"financial risk meter: moving-window quantile lasso penalty index"};
    app.require_subcommand(1);

    RunConfig cfg;
    // config file values are applied before flag parsing, so flags override
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                apply_config_file(argv[i + 1], cfg);
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return 2;
            }
        }
    }
    std::string config_path;

    auto* compute = app.add_subcommand("compute", "compute the index from price and macro data");
    compute->add_option("--config", config_path, "JSON config file (flags override it)");
    compute->add_option("--prices", cfg.prices, "long-format price CSV (date,ticker,adj_close)");
    compute->add_option("--macro", cfg.macro, "wide-format macro CSV (date + one column per variable)");
    compute->add_option("--out", cfg.out, "output directory");
    compute->add_option("--tau", cfg.tau, "tail level of the quantile regressions");
    compute->add_option("--window", cfg.window, "moving window length in trading days");
    compute->add_option("--workers", cfg.workers, "worker threads (0 = all cores)");
    compute->add_option("--grid-points", cfg.grid_points, "penalty grid size per cell");
    compute->add_option("--seed", cfg.seed, "run seed recorded in the manifest");
    compute->add_flag("--skip-failures", cfg.skip_failures,
                      "exclude failed cells from window means instead of aborting");
    compute->add_option("--macro-transform", cfg.macro_spec_raw,
                        "per-column macro transform LABEL=level|first_difference|log_return");
    bool progress = false;
    compute->add_flag("--progress", progress, "log every solved cell to stderr");

    std::string frm_csv, date_text, out_path, other_csv, other_name, mode = "granger";
    std::string adf_spec_name = "trend";
    int max_order = 20, max_lag = 30;
    bool mackinnon = false;

    auto* classify = app.add_subcommand("classify", "risk level of one date or the whole series");
    classify->add_option("--frm", frm_csv, "frm_series.csv artifact")->required();
    classify->add_option("--date", date_text, "date to assess (default: all dates)");
    classify->add_option("--out", out_path, "write JSON here instead of stdout");

    auto* validate = app.add_subcommand("validate", "compare the index against another risk series");
    validate->add_option("--frm", frm_csv, "frm_series.csv artifact")->required();
    validate->add_option("--other", other_csv, "comparison series CSV (date,value)")->required();
    validate->add_option("--other-name", other_name, "label for the comparison series");
    validate->add_option("--mode", mode, "granger | cointegration | ccf");
    validate->add_option("--max-order", max_order, "criterion search bound for the VAR order");
    validate->add_option("--max-lag", max_lag, "cross-correlation lag bound");
    validate->add_flag("--mackinnon", mackinnon,
                       "use MacKinnon cointegration critical values instead of -1.95");
    validate->add_option("--adf-spec", adf_spec_name,
                         "deterministic terms of the stationarity screen: trend | drift");
    validate->add_option("--out", out_path, "write JSON here instead of stdout");

    auto* descr = app.add_subcommand("descriptives", "extrema and mean of an index series");
    descr->add_option("--frm", frm_csv, "frm_series.csv artifact")->required();
    descr->add_option("--out", out_path, "write JSON here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (compute->parsed()) return cmd_compute(cfg, progress);
        if (classify->parsed()) return cmd_classify(frm_csv, date_text, out_path);
        if (validate->parsed()) {
            return cmd_validate(frm_csv, other_csv, other_name, mode, max_order, max_lag,
                                mackinnon, adf_spec_name, out_path);
        }
        if (descr->parsed()) return cmd_descriptives(frm_csv, out_path);
    } catch (const frm::SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const frm::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
