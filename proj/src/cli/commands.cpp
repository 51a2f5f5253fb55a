#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "shiftscan/cli.hpp"
#include "shiftscan/cusum.hpp"
#include "shiftscan/homogenize.hpp"
#include "shiftscan/search.hpp"
#include "shiftscan/segmentation.hpp"
#include "shiftscan/simulate.hpp"

namespace shiftscan::cli {

namespace {

using json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

SeriesKind parse_kind(const std::string& s) {
    return s == "count" ? SeriesKind::Count : SeriesKind::Continuous;
}

// --- detect -----------------------------------------------------------------

struct DetectOptions {
    std::string input;
    std::string kind = "continuous";
    std::string method;
    std::string model = "gauss-iid";
    std::string penalty = "bic";
    double level = 0.95;
    double threshold = 1.358;
    std::size_t intervals = 500;
    std::uint64_t seed = 1;
    std::size_t min_len = kDefaultMinLength;
    std::string format = "json";
    std::string fitted_out;
    std::size_t max_n = 0;
    GaSettings ga;
    double mutation = -1.0;

    CLI::Option* penalty_opt = nullptr;
    CLI::Option* level_opt = nullptr;
    CLI::Option* threshold_opt = nullptr;
    CLI::Option* intervals_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* max_n_opt = nullptr;
    std::vector<CLI::Option*> ga_opts;
};

void check_detect_flags(const DetectOptions& o) {
    const bool penalized = o.method == "exhaustive" || o.method == "ga";
    auto given = [](const CLI::Option* opt) { return opt != nullptr && opt->count() > 0; };
    if (given(o.penalty_opt) && !penalized) {
        throw UsageError("--penalty applies only to --method exhaustive or ga");
    }
    if (given(o.level_opt) && o.method != "amoc" && o.method != "binseg") {
        throw UsageError("--level applies only to --method amoc or binseg");
    }
    if ((given(o.threshold_opt) || given(o.intervals_opt)) && o.method != "wbs") {
        throw UsageError("--threshold and --intervals apply only to --method wbs");
    }
    if (given(o.seed_opt) && o.method != "wbs" && o.method != "ga") {
        throw UsageError("--seed applies only to --method wbs or ga");
    }
    if (given(o.max_n_opt) && o.method != "exhaustive") {
        throw UsageError("--max-n applies only to --method exhaustive");
    }
    for (const auto* opt : o.ga_opts) {
        if (given(opt) && o.method != "ga") {
            throw UsageError(opt->get_name() + " applies only to --method ga");
        }
    }
    if (o.model == "poisson" && o.kind != "count") {
        throw UsageError("--model poisson requires --kind count");
    }
    if (o.method == "wbs" && !(o.threshold > 0.0)) {
        throw UsageError("--threshold must be positive");
    }
    if (o.method == "amoc" || o.method == "binseg") {
        try {
            cusum_critical_value(o.level);
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
    }
}

void fill_fit(DetectReport& report, const Series& series, ModelKind model) {
    report.fit = fit_model(series, report.config, model);
    report.fitted.resize(series.size());
    const auto regimes = partition(report.config, series.size());
    for (std::size_t r = 0; r < regimes.size(); ++r) {
        for (std::size_t t = regimes[r].start; t <= regimes[r].end; ++t) {
            report.fitted[t - 1] = report.fit.mean_at(r, t);
        }
    }
    if (report.fit.degenerate && !report.warning) {
        report.warning = "exact fit: residual variance clamped to the numerical floor";
    }
}

int run_detect(const DetectOptions& o, std::ostream& out) {
    check_detect_flags(o);
    const auto started = std::chrono::steady_clock::now();
    const Series series = ingest_csv(o.input, parse_kind(o.kind));
    const ModelKind model = parse_model_kind(o.model);

    DetectReport report;
    report.method = o.method;
    report.model = o.model;
    report.n = series.size();
    report.times.assign(series.times().begin(), series.times().end());

    if (o.method == "amoc") {
        report.level = o.level;
        const double critical = cusum_critical_value(o.level);
        report.critical_value = critical;
        try {
            const auto d = amoc_test(series.values(), o.level, critical);
            report.statistic = d.max_abs;
            report.reject = d.reject;
            report.tau_hat = d.tau_hat;
            if (d.reject) {
                report.config = ChangepointConfiguration({d.tau_hat});
            }
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DegenerateSeries) throw;
            report.reject = false;
            report.warning = "degenerate series (zero sample variance): no changepoint";
        }
    } else if (o.method == "binseg") {
        report.level = o.level;
        report.config = binary_segmentation(series, o.level, o.min_len).config;
    } else if (o.method == "wbs") {
        report.threshold = o.threshold;
        report.seed = o.seed;
        WbsSettings s;
        s.num_intervals = o.intervals;
        s.threshold = o.threshold;
        s.min_len = o.min_len;
        s.seed = o.seed;
        report.config = wild_binary_segmentation(series, s).config;
    } else {
        const PenaltyKind penalty_kind = parse_penalty_kind(o.penalty);
        report.penalty = o.penalty;
        const Objective objective(series, model, penalty_kind);
        SearchResult result;
        if (o.method == "exhaustive") {
            result = exhaustive_search(objective, o.max_n > 0 ? std::optional(o.max_n) : std::nullopt);
        } else {
            report.seed = o.seed;
            GaSettings settings = o.ga;
            settings.seed = o.seed;
            if (o.mutation >= 0.0) settings.mutation_rate = o.mutation;
            result = genetic_search(objective, settings);
        }
        report.config = result.best_config;
        report.evaluations = result.evaluations;
        report.penalty_value = result.best_score.penalty;
        report.total = result.best_score.total;
    }

    if ((o.method == "binseg" || o.method == "wbs") && report.config.empty()) {
        const auto prefix = prefix_sums(series.values());
        if (window_cusum(series.values(), prefix, 1, series.size()).degenerate) {
            report.warning = "degenerate series (zero sample variance): no changepoint";
        }
    }
    fill_fit(report, series, model);
    report.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    out << (o.format == "csv" ? report_to_csv(report) : report_to_json(report));

    if (!o.fitted_out.empty()) {
        std::ofstream f(o.fitted_out);
        if (!f) {
            throw Error(ErrorCode::Parse, "cannot write " + o.fitted_out);
        }
        f << "time,observed,fitted\n";
        char a[64], b[64];
        for (std::size_t i = 0; i < series.size(); ++i) {
            const auto pa = std::to_chars(a, a + sizeof a, series.values()[i]).ptr;
            const auto pb = std::to_chars(b, b + sizeof b, report.fitted[i]).ptr;
            f << series.times()[i] << ',' << std::string_view(a, pa - a) << ','
              << std::string_view(b, pb - b) << '\n';
        }
    }
    return kExitOk;
}

// --- critvals ---------------------------------------------------------------

struct CritvalsOptions {
    std::size_t n = 2000;
    std::size_t reps = 100000;
    std::vector<double> levels{0.90, 0.95, 0.975, 0.99};
    std::uint64_t seed = 1;
    std::string format = "text";
};

std::optional<double> tabulated(double level) {
    for (const auto& cv : kCusumCriticalValues) {
        if (std::fabs(cv.level - level) < 1e-9) return cv.value;
    }
    return std::nullopt;
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

int run_critvals(const CritvalsOptions& o, std::ostream& out) {
    const auto table = simulate_critical_values(o.n, o.reps, o.levels, o.seed);
    if (o.format == "json") {
        json j;
        j["schema_version"] = kSchemaVersion;
        j["n"] = o.n;
        j["reps"] = o.reps;
        j["seed"] = o.seed;
        json rows = json::array();
        for (const auto& row : table) {
            const auto ref = tabulated(row.level);
            rows.push_back({{"level", row.level},
                            {"simulated", row.value},
                            {"asymptotic", ref ? json(*ref) : json(nullptr)},
                            {"difference", ref ? json(row.value - *ref) : json(nullptr)}});
        }
        j["rows"] = rows;
        out << j.dump(2) << '\n';
        return kExitOk;
    }
    out << "# n=" << o.n << " reps=" << o.reps << " seed=" << o.seed << '\n';
    out << "level,simulated,asymptotic,difference\n";
    for (const auto& row : table) {
        const auto ref = tabulated(row.level);
        out << fixed(row.level, 3) << ',' << fixed(row.value, 4) << ','
            << (ref ? fixed(*ref, 3) : "") << ',' << (ref ? fixed(row.value - *ref, 4) : "")
            << '\n';
    }
    return kExitOk;
}

// --- simulate ---------------------------------------------------------------

struct SimulateOptions {
    std::size_t n = 0;
    std::vector<std::size_t> taus;
    std::vector<double> deltas;
    std::vector<double> rates;
    double beta = 0.0;
    double phi = 0.0;
    double sigma = 1.0;
    std::string model = "gauss-iid";
    std::uint64_t seed = 1;
    std::string out;
    std::int64_t start_time = 1;

    CLI::Option* deltas_opt = nullptr;
    CLI::Option* rates_opt = nullptr;
    CLI::Option* beta_opt = nullptr;
    CLI::Option* phi_opt = nullptr;
    CLI::Option* sigma_opt = nullptr;
};

int run_simulate(const SimulateOptions& o, std::ostream& out, std::ostream& err) {
    const ModelKind model = parse_model_kind(o.model);
    if (std::fabs(o.phi) > 0.999) {
        throw UsageError("--phi must satisfy |phi| <= 0.999");
    }
    json truth;
    truth["model"] = o.model;
    truth["n"] = o.n;
    truth["taus"] = o.taus;
    json labels = json::array();
    for (std::size_t tau : o.taus) labels.push_back(o.start_time + static_cast<std::int64_t>(tau) - 1);
    truth["times"] = labels;

    std::optional<Series> series;
    if (model == ModelKind::Poisson) {
        if (o.deltas_opt->count() || o.beta_opt->count() || o.phi_opt->count() || o.sigma_opt->count()) {
            throw UsageError("--deltas/--beta/--phi/--sigma do not apply to --model poisson");
        }
        if (!o.rates_opt->count()) {
            throw UsageError("--model poisson needs --rates");
        }
        PoissonSpec spec{o.n, o.taus, o.rates, o.start_time};
        series = simulate_poisson(spec, o.seed);
        truth["rates"] = o.rates;
    } else {
        if (o.rates_opt->count()) {
            throw UsageError("--rates applies only to --model poisson");
        }
        if (model == ModelKind::GaussIid && (o.beta != 0.0 || o.phi != 0.0)) {
            throw UsageError("--beta and --phi need --model gauss-trend-ar1");
        }
        GaussianSpec spec;
        spec.n = o.n;
        spec.taus = o.taus;
        spec.deltas = o.deltas.empty() ? std::vector<double>(o.taus.size() + 1, 0.0) : o.deltas;
        spec.beta = o.beta;
        spec.phi = o.phi;
        spec.sigma = o.sigma;
        spec.first_time = o.start_time;
        series = simulate_gaussian(spec, o.seed);
        truth["deltas"] = spec.deltas;
        truth["beta"] = o.beta;
        truth["phi"] = o.phi;
        truth["sigma"] = o.sigma;
    }
    truth["seed"] = o.seed;

    if (o.out.empty()) {
        write_series_csv(out, *series);
    } else {
        std::ofstream f(o.out);
        if (!f) throw Error(ErrorCode::Parse, "cannot write " + o.out);
        write_series_csv(f, *series);
    }
    err << truth.dump() << '\n';
    return kExitOk;
}

// --- diff / adjust ----------------------------------------------------------

struct DiffOptions {
    std::string target;
    std::string reference;
    std::string out;
};

struct AdjustOptions {
    std::string input;
    std::string kind = "continuous";
    std::vector<std::size_t> taus;
    std::string model = "gauss-iid";
    std::string anchor = "last-regime";
    std::string out;
};

void emit_series(const Series& s, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        write_series_csv(out, s);
        return;
    }
    std::ofstream f(path);
    if (!f) throw Error(ErrorCode::Parse, "cannot write " + path);
    write_series_csv(f, s);
}

int run_diff(const DiffOptions& o, std::ostream& out) {
    const auto target = ingest_csv(o.target, SeriesKind::Continuous);
    const auto reference = ingest_csv(o.reference, SeriesKind::Continuous);
    emit_series(difference(target, reference, o.target, o.reference).series, o.out, out);
    return kExitOk;
}

int run_adjust(const AdjustOptions& o, std::ostream& out) {
    if (o.model == "poisson" && o.kind != "count") {
        throw UsageError("--model poisson requires --kind count");
    }
    const auto series = ingest_csv(o.input, parse_kind(o.kind));
    const ChangepointConfiguration config(o.taus);
    const auto fit = fit_model(series, config, parse_model_kind(o.model));
    emit_series(adjust(series, fit, config, parse_anchor(o.anchor)), o.out, out);
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"shiftscan: mean-shift changepoint detection for time series"};
    app.require_subcommand(1);

    const std::vector<std::string> methods{"amoc", "binseg", "wbs", "exhaustive", "ga"};
    const std::vector<std::string> models{"gauss-iid", "gauss-trend-ar1", "poisson"};
    const std::vector<std::string> kinds{"continuous", "count"};

    DetectOptions d;
    auto* detect = app.add_subcommand("detect", "Estimate changepoints in a time,value CSV");
    detect->add_option("--input", d.input, "CSV with time,value rows")->required();
    detect->add_option("--kind", d.kind, "Value type")->check(CLI::IsMember(kinds));
    detect->add_option("--method", d.method, "Detection method")->required()->check(CLI::IsMember(methods));
    detect->add_option("--model", d.model, "Segment model")->check(CLI::IsMember(models));
    d.penalty_opt = detect->add_option("--penalty", d.penalty, "Penalty (exhaustive, ga)")
                        ->check(CLI::IsMember({"bic", "aic"}));
    d.level_opt = detect->add_option("--level", d.level, "Confidence level (amoc, binseg)");
    d.threshold_opt = detect->add_option("--threshold", d.threshold, "CUSUM threshold (wbs)");
    d.intervals_opt = detect->add_option("--intervals", d.intervals, "Random intervals (wbs)");
    d.seed_opt = detect->add_option("--seed", d.seed, "RNG seed (wbs, ga)");
    detect->add_option("--min-len", d.min_len, "Shortest segment examined (binseg, wbs)")
        ->check(CLI::PositiveNumber);
    detect->add_option("--format", d.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    detect->add_option("--fitted-out", d.fitted_out, "Write time,observed,fitted rows here");
    d.max_n_opt = detect->add_option("--max-n", d.max_n, "Largest N for exhaustive search");
    d.ga_opts = {
        detect->add_option("--population", d.ga.population_size, "GA population size"),
        detect->add_option("--generations", d.ga.max_generations, "GA generation cap"),
        detect->add_option("--stagnation", d.ga.stagnation_limit, "GA generations without improvement"),
        detect->add_option("--crossover", d.ga.crossover_rate, "GA crossover rate"),
        detect->add_option("--mutation", d.mutation, "GA per-bit mutation rate (default 1/(N-1))"),
        detect->add_option("--elitism", d.ga.elitism_count, "GA elite count"),
    };

    CritvalsOptions c;
    auto* critvals = app.add_subcommand("critvals", "Simulate CUSUM critical values");
    critvals->add_option("--n", c.n, "Series length");
    critvals->add_option("--reps", c.reps, "Replicates");
    critvals->add_option("--levels", c.levels, "Confidence levels")->delimiter(',');
    critvals->add_option("--seed", c.seed, "RNG seed");
    critvals->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"text", "json"}));

    SimulateOptions s;
    auto* simulate = app.add_subcommand("simulate", "Draw a series from a changepoint model");
    simulate->add_option("--n", s.n, "Series length")->required();
    simulate->add_option("--taus", s.taus, "Changepoints (last index of each regime)")->delimiter(',');
    s.deltas_opt = simulate->add_option("--deltas", s.deltas, "Regime levels")->delimiter(',');
    s.rates_opt = simulate->add_option("--rates", s.rates, "Regime rates (poisson)")->delimiter(',');
    s.beta_opt = simulate->add_option("--beta", s.beta, "Trend per step");
    s.phi_opt = simulate->add_option("--phi", s.phi, "AR(1) coefficient");
    s.sigma_opt = simulate->add_option("--sigma", s.sigma, "Innovation standard deviation");
    simulate->add_option("--model", s.model, "Model")->check(CLI::IsMember(models));
    simulate->add_option("--seed", s.seed, "RNG seed");
    simulate->add_option("--out", s.out, "Output CSV (default stdout)");
    simulate->add_option("--start-time", s.start_time, "Time label of the first observation");

    DiffOptions df;
    auto* diff = app.add_subcommand("diff", "Target minus reference on shared times");
    diff->add_option("--target", df.target, "Target CSV")->required();
    diff->add_option("--reference", df.reference, "Reference CSV")->required();
    diff->add_option("--out", df.out, "Output CSV (default stdout)");

    AdjustOptions a;
    auto* adj = app.add_subcommand("adjust", "Remove estimated mean shifts");
    adj->add_option("--input,--target", a.input, "Series CSV")->required();
    adj->add_option("--kind", a.kind, "Value type")->check(CLI::IsMember(kinds));
    adj->add_option("--taus", a.taus, "Changepoints to adjust for")->delimiter(',');
    adj->add_option("--model", a.model, "Model used to estimate levels")->check(CLI::IsMember(models));
    adj->add_option("--anchor", a.anchor, "Regime kept unchanged")
        ->check(CLI::IsMember({"last-regime", "first-regime"}));
    adj->add_option("--out", a.out, "Output CSV (default stdout)");

    std::vector<const char*> argv{"shiftscan"};
    for (const auto& arg : args) argv.push_back(arg.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (detect->parsed()) return run_detect(d, out);
        if (critvals->parsed()) return run_critvals(c, out);
        if (simulate->parsed()) return run_simulate(s, out, err);
        if (diff->parsed()) return run_diff(df, out);
        if (adj->parsed()) return run_adjust(a, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
        return kExitDataError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitDataError;
    }
    return kExitUsage;
}

}  // namespace shiftscan::cli
