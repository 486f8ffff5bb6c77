#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kraken/fixtures.hpp"
#include "kraken/ledger.hpp"
#include "kraken/multiplier.hpp"
#include "kraken/output_table.hpp"
#include "kraken/simulation.hpp"
#include "kraken/verify.hpp"

namespace {

// exit codes: 0 success, 1 verification failure, 2 usage error, 3 i/o error
constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParamOptions {
    kraken::MultiplierParams values;
    std::string preset;
    CLI::Option* reserve = nullptr;
    CLI::Option* insurance = nullptr;
    CLI::Option* origination = nullptr;
    CLI::Option* tranche = nullptr;
    CLI::Option* iterations = nullptr;
    CLI::Option* depth = nullptr;
    CLI::Option* preset_opt = nullptr;
};

void add_param_options(CLI::App& cmd, ParamOptions& po,
                       const std::vector<std::string>& presets) {
    po.reserve = cmd.add_option("-R,--reserve", po.values.reserve,
                                "reserve fraction retained per deposit, (0,1)")
                     ->capture_default_str();
    po.insurance = cmd.add_option("-I,--insurance", po.values.insurance,
                                  "DIN premium as a fraction of insured value")
                       ->capture_default_str();
    po.origination = cmd.add_option("-O,--origination", po.values.origination,
                                    "origination factor, 1 + fee fraction")
                         ->capture_default_str();
    po.tranche = cmd.add_option("-T,--tranche", po.values.tranche,
                                "insured fraction of each loan, [0,1]")
                     ->capture_default_str();
    po.iterations = cmd.add_option("-n,--iterations", po.values.iterations,
                                   "lending cycles per nesting level")
                        ->capture_default_str();
    po.depth = cmd.add_option("-k,--depth", po.values.depth,
                              "number of DIN nesting levels")
                   ->capture_default_str();
    if (!presets.empty()) {
        po.preset_opt = cmd.add_option("--preset", po.preset,
                                       "start from a named parameter set")
                            ->check(CLI::IsMember(presets));
    }
}

kraken::MultiplierParams apply_explicit_flags(kraken::MultiplierParams params,
                                              const ParamOptions& po) {
    if (po.reserve->count() > 0) params.reserve = po.values.reserve;
    if (po.insurance->count() > 0) params.insurance = po.values.insurance;
    if (po.origination->count() > 0) params.origination = po.values.origination;
    if (po.tranche->count() > 0) params.tranche = po.values.tranche;
    if (po.iterations->count() > 0) params.iterations = po.values.iterations;
    if (po.depth->count() > 0) params.depth = po.values.depth;
    params.validate();
    return params;
}

// preset first, explicit flags override, then range checks
kraken::MultiplierParams resolve_params(const ParamOptions& po) {
    if (!po.preset.empty() && po.preset != "figure3") {
        const auto preset = kraken::preset_params(po.preset);
        if (!preset) throw std::domain_error("unknown preset '" + po.preset + "'");
        return apply_explicit_flags(*preset, po);
    }
    kraken::MultiplierParams params = po.values;
    params.validate();
    return params;
}

void emit(const kraken::OutputTable& table, const std::string& format) {
    std::cout << kraken::render(table, kraken::table_format_from_string(format));
}

std::string level_label(int level) { return std::to_string(level); }

int run_classic(double reserve, int iterations, bool include_initial,
                const std::string& format) {
    const kraken::MultiplierCurve curve =
        kraken::classic_curve(reserve, iterations, include_initial);
    kraken::OutputTable table;
    table.caption = "classic reserve multiplier, R=" + kraken::format_value(reserve);
    table.columns = {"iteration", "m"};
    for (const auto& p : curve.points) {
        table.rows.push_back({std::to_string(p.level), {p.m}});
    }
    table.rows.push_back({"limit", {kraken::classic_limit(reserve)}});
    emit(table, format);
    return kExitOk;
}

int run_kraken(const kraken::MultiplierParams& params, const std::string& format) {
    const kraken::MultiplierCurve curve = kraken::kraken_eval(params);
    kraken::OutputTable table;
    table.caption = "nested DIN multiplier per level";
    table.columns = {"level", "m"};
    for (const auto& p : curve.points) {
        table.rows.push_back({level_label(p.level), {p.m}});
    }
    emit(table, format);
    return kExitOk;
}

int run_tables(const std::string& format) {
    kraken::OutputTable table;
    table.caption = "reference multiplier tables";
    table.columns = {"table", "level", "m"};
    for (const auto& ref : kraken::reference_tables()) {
        const kraken::MultiplierCurve curve = kraken::kraken_eval(ref.params);
        for (const auto& p : curve.points) {
            table.rows.push_back({std::to_string(ref.id),
                                  {static_cast<double>(p.level), p.m}});
        }
    }
    emit(table, format);
    return kExitOk;
}

int run_curve(const ParamOptions& po, const std::string& axis_name,
              std::vector<double> axis_values, bool log_space,
              const std::string& format) {
    kraken::MultiplierParams base = resolve_params(po);
    std::string axis = axis_name;
    if (po.preset == "figure3" && axis.empty()) {
        // semi-log comparison: both published reserve fractions, fee-bearing
        base = apply_explicit_flags(kraken::preset_params("table3").value(), po);
        axis = "reserve";
        axis_values = {0.05, 0.025};
    }

    kraken::OutputTable table;
    table.caption = log_space ? "multiplier curve (log space)" : "multiplier curve";

    auto append_curve = [&](const kraken::MultiplierParams& params,
                            const std::string& label) {
        const std::vector<double> logs = kraken::kraken_eval_log10(params);
        if (log_space) {
            for (std::size_t i = 0; i < logs.size(); ++i) {
                if (label.empty()) {
                    table.rows.push_back(
                        {level_label(static_cast<int>(i) + 1), {logs[i]}});
                } else {
                    table.rows.push_back(
                        {label,
                         {static_cast<double>(i + 1), logs[i]}});
                }
            }
        } else {
            const kraken::MultiplierCurve curve = kraken::kraken_eval(params);
            for (std::size_t i = 0; i < curve.points.size(); ++i) {
                if (label.empty()) {
                    table.rows.push_back({level_label(curve.points[i].level),
                                          {curve.points[i].m, logs[i]}});
                } else {
                    table.rows.push_back(
                        {label,
                         {static_cast<double>(curve.points[i].level),
                          curve.points[i].m, logs[i]}});
                }
            }
        }
    };

    if (axis.empty()) {
        table.columns = log_space ? std::vector<std::string>{"level", "log10_m"}
                                  : std::vector<std::string>{"level", "m", "log10_m"};
        append_curve(base, "");
    } else {
        const kraken::SweepAxis sweep_axis = kraken::sweep_axis_from_string(axis);
        if (axis_values.empty()) {
            throw std::domain_error("curve over an axis needs --values");
        }
        const std::string column(kraken::to_string(sweep_axis));
        table.columns = log_space
                            ? std::vector<std::string>{column, "level", "log10_m"}
                            : std::vector<std::string>{column, "level", "m",
                                                       "log10_m"};
        for (double v : axis_values) {
            append_curve(kraken::with_axis_value(base, sweep_axis, v),
                         kraken::format_value(v));
        }
    }
    emit(table, format);
    return kExitOk;
}

int run_sweep(const ParamOptions& po, const std::string& axis_name,
              const std::vector<double>& axis_values, const std::string& format) {
    const kraken::MultiplierParams base = resolve_params(po);
    const kraken::SweepAxis axis = kraken::sweep_axis_from_string(axis_name);
    const auto entries = kraken::sweep(base, axis, axis_values);

    kraken::OutputTable table;
    table.caption = "multiplier sweep over " + std::string(kraken::to_string(axis));
    table.columns = {std::string(kraken::to_string(axis)), "level", "m"};
    for (const auto& entry : entries) {
        for (const auto& p : entry.curve.points) {
            table.rows.push_back({kraken::format_value(entry.value),
                                  {static_cast<double>(p.level), p.m}});
        }
    }
    emit(table, format);
    return kExitOk;
}

void write_events(const std::string& path, const std::vector<kraken::LedgerEvent>& events) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    const bool json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
    out << (json ? kraken::event_log_to_json(events)
                 : kraken::event_log_to_csv(events));
    out.flush();
    if (!out) throw IoError("failed writing event log to '" + path + "'");
}

int run_simulate(const ParamOptions& po, double seed_capital, double leak,
                 std::optional<int> skip_every, double min_loan,
                 std::optional<double> synthetic_cap, std::int64_t max_events,
                 const std::string& events_path, const std::string& format) {
    kraken::SimConfig config;
    config.params = resolve_params(po);
    config.seed_capital = seed_capital;
    config.leak = leak;
    config.skip_insurance_every = skip_every;
    config.min_loan = min_loan;
    config.synthetic_capital_cap = synthetic_cap;
    config.max_events = max_events;

    const kraken::SimResult result = kraken::run_simulation(config);
    if (!events_path.empty()) write_events(events_path, result.events);

    kraken::OutputTable table;
    table.caption = "simulation summary (halt=" +
                    std::string(kraken::to_string(result.halt)) + ")";
    table.columns = {"metric", "value"};
    auto add = [&](const std::string& name, double value) {
        table.rows.push_back({name, {value}});
    };

    add("empirical_multiplier", result.empirical_multiplier);
    const bool frictionless = config.leak == 0.0 && config.min_loan == 0.0 &&
                              !config.skip_insurance_every &&
                              !config.synthetic_capital_cap;
    if (frictionless) {
        const double analytic =
            kraken::kraken_eval(config.params).points.back().m;
        add("analytic_multiplier", analytic);
        add("rel_deviation",
            std::abs(result.empirical_multiplier - analytic) / analytic);
    }
    for (std::size_t i = 0; i < result.level_multipliers.size(); ++i) {
        add("level_" + std::to_string(i + 1), result.level_multipliers[i]);
    }
    const kraken::BankState& s = result.final_state;
    add("deposits", s.deposits);
    add("reserves", s.reserves);
    add("loans_outstanding", s.loans_outstanding);
    add("synthetic_capital", s.synthetic_capital);
    add("insured_notional", s.insured_notional);
    add("premiums_paid", s.premiums_paid);
    add("fees_collected", s.fees_collected);
    add("events", static_cast<double>(result.events.size()));
    add("halt_code", static_cast<double>(result.halt));

    if (s.synthetic_capital > 0.0) {
        add("deposits_per_synthetic",
            (s.deposits - config.seed_capital) / s.synthetic_capital);
    }
    const auto& p = config.params;
    if ((p.origination - p.insurance) * p.tranche > 0.0) {
        add("din_ratio", kraken::din_ratio(p.origination, p.insurance, p.tranche));
    }
    if (skip_every && *skip_every <= p.iterations && p.origination > p.insurance) {
        add("skipped_din_ratio",
            kraken::din_ratio_skipped(p.origination, p.insurance, p.reserve,
                                      {*skip_every, p.iterations}));
    }
    emit(table, format);
    return kExitOk;
}

int run_verify(int corrupt_fixture, const std::string& format) {
    kraken::VerifyOptions options;
    options.corrupt_fixture = corrupt_fixture;
    const kraken::VerifyReport report = kraken::run_verification(options);
    kraken::OutputTable table = kraken::verification_table(report);
    table.caption += report.all_passed()
                         ? ": all " + std::to_string(report.checks.size()) +
                               " checks passed"
                         : ": " + std::to_string(report.failures()) + " of " +
                               std::to_string(report.checks.size()) +
                               " checks FAILED";
    emit(table, format);
    return report.all_passed() ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "kraken: reserve-banking and nested default-insurance-note "
        "multiplier toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read options from an INI file");
    app.set_version_flag("--version", "kraken 1.0.0");

    const std::vector<std::string> param_presets = {"table1", "table2", "table3",
                                                    "table4", "eq7"};
    const std::vector<std::string> curve_presets = {"table1", "table2", "table3",
                                                    "table4", "eq7", "figure3"};

    int exit_code = kExitOk;

    // classic
    auto* classic = app.add_subcommand(
        "classic", "textbook reserve multiplier series and limit");
    double classic_reserve = 0.0;
    int classic_iterations = 100;
    bool include_initial = false;
    std::string classic_format = "csv";
    classic->add_option("-R,--reserve", classic_reserve, "reserve fraction, (0,1)")
        ->required();
    classic->add_option("-n,--iterations", classic_iterations,
                        "number of lending cycles")
        ->capture_default_str();
    classic->add_flag("--include-initial-deposit", include_initial,
                      "count the seed deposit, saturating at 1/R");
    classic->add_option("--format", classic_format, "csv, json, or human")
        ->check(CLI::IsMember({"csv", "json", "human"}))
        ->capture_default_str();
    classic->callback([&] {
        exit_code = run_classic(classic_reserve, classic_iterations,
                                include_initial, classic_format);
    });

    // kraken
    auto* kraken_cmd = app.add_subcommand(
        "kraken", "nested DIN multiplier per level");
    ParamOptions kraken_po;
    std::string kraken_format = "csv";
    add_param_options(*kraken_cmd, kraken_po, param_presets);
    kraken_cmd->add_option("--format", kraken_format, "csv, json, or human")
        ->check(CLI::IsMember({"csv", "json", "human"}))
        ->capture_default_str();
    kraken_cmd->callback(
        [&] { exit_code = run_kraken(resolve_params(kraken_po), kraken_format); });

    // tables
    auto* tables = app.add_subcommand(
        "tables", "reproduce all four reference multiplier tables");
    std::string tables_format = "csv";
    tables->add_option("--format", tables_format, "csv, json, or human")
        ->check(CLI::IsMember({"csv", "json", "human"}))
        ->capture_default_str();
    tables->callback([&] { exit_code = run_tables(tables_format); });

    // curve
    auto* curve = app.add_subcommand(
        "curve", "multiplier against nesting level, optionally per axis value");
    ParamOptions curve_po;
    std::string curve_axis;
    std::vector<double> curve_values;
    bool curve_log_space = false;
    std::string curve_format = "csv";
    add_param_options(*curve, curve_po, curve_presets);
    curve->add_option("--axis", curve_axis,
                      "parameter to vary: R, I, O, T, n, or k");
    curve->add_option("--values", curve_values, "axis values, comma separated")
        ->delimiter(',');
    curve->add_flag("--log-space", curve_log_space,
                    "emit log10 m only; safe at any depth");
    curve->add_option("--format", curve_format, "csv, json, or human")
        ->check(CLI::IsMember({"csv", "json", "human"}))
        ->capture_default_str();
    curve->callback([&] {
        exit_code = run_curve(curve_po, curve_axis, curve_values, curve_log_space,
                              curve_format);
    });

    // sweep
    auto* sweep_cmd = app.add_subcommand(
        "sweep", "full multiplier curve per value of one parameter");
    ParamOptions sweep_po;
    std::string sweep_axis;
    std::vector<double> sweep_values;
    std::string sweep_format = "csv";
    add_param_options(*sweep_cmd, sweep_po, param_presets);
    sweep_cmd->add_option("--axis", sweep_axis,
                          "parameter to vary: R, I, O, T, n, or k")
        ->required();
    sweep_cmd->add_option("--values", sweep_values, "axis values, comma separated")
        ->delimiter(',')
        ->required();
    sweep_cmd->add_option("--format", sweep_format, "csv, json, or human")
        ->check(CLI::IsMember({"csv", "json", "human"}))
        ->capture_default_str();
    sweep_cmd->callback([&] {
        exit_code = run_sweep(sweep_po, sweep_axis, sweep_values, sweep_format);
    });

    // simulate
    auto* simulate = app.add_subcommand(
        "simulate", "deterministic transaction-ledger simulation");
    ParamOptions sim_po;
    double seed_capital = 1.0;
    double leak = 0.0;
    std::optional<int> skip_every;
    double min_loan = 0.0;
    std::optional<double> synthetic_cap;
    std::int64_t max_events = 1'000'000;
    std::string events_path;
    std::string sim_format = "csv";
    add_param_options(*simulate, sim_po, param_presets);
    simulate->add_option("--seed-capital", seed_capital, "initial deposit")
        ->capture_default_str();
    simulate->add_option("--leak", leak,
                         "fraction of every redeposit held as cash, [0,1)")
        ->capture_default_str();
    simulate->add_option("--skip-every", skip_every,
                         "leave every j-th loan of a level uninsured");
    simulate->add_option("--min-loan", min_loan,
                         "stop a cascade below this loan size")
        ->capture_default_str();
    simulate->add_option("--synthetic-cap", synthetic_cap,
                         "cap on total synthetic capital, multiple of seed");
    simulate->add_option("--max-events", max_events, "event budget")
        ->capture_default_str();
    simulate->add_option("--events", events_path,
                         "write the event log here (.json for JSON, else CSV)");
    simulate->add_option("--format", sim_format, "csv, json, or human")
        ->check(CLI::IsMember({"csv", "json", "human"}))
        ->capture_default_str();
    simulate->callback([&] {
        exit_code = run_simulate(sim_po, seed_capital, leak, skip_every, min_loan,
                                 synthetic_cap, max_events, events_path,
                                 sim_format);
    });

    // verify
    auto* verify = app.add_subcommand(
        "verify", "check analytics against embedded reference values");
    int corrupt_fixture = -1;
    std::string verify_format = "csv";
    verify->add_option("--corrupt-fixture", corrupt_fixture,
                       "perturb reference entry 0..39 first (self-test)")
        ->check(CLI::Range(0, 39));
    verify->add_option("--format", verify_format, "csv, json, or human")
        ->check(CLI::IsMember({"csv", "json", "human"}))
        ->capture_default_str();
    verify->callback(
        [&] { exit_code = run_verify(corrupt_fixture, verify_format); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const kraken::IntegrityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const kraken::BudgetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::overflow_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return exit_code;
}
