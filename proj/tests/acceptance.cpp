// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "shiftscan/cusum.hpp"
#include "shiftscan/search.hpp"
#include "shiftscan/segmentation.hpp"
#include "shiftscan/simulate.hpp"

using namespace shiftscan;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(const char* id, bool pass, const std::string& what) {
    std::printf("%s criterion %s: %s\n", pass ? "PASS" : "FAIL", id, what.c_str());
    std::fflush(stdout);
    failures += pass ? 0 : 1;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Shell {
    int code;
    std::string out;
};

Shell shell(const std::string& command) {
    Shell r{-1, {}};
    FILE* pipe = ::popen(command.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    std::size_t got;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    const int raw = ::pclose(pipe);
    r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return r;
}

const std::string kExe = SHIFTSCAN_EXE;

// Exact minimum of the Poisson BIC objective by optimal partitioning: the
// objective is a sum of per-regime costs plus ln N per changepoint, so the
// best prefix partition ending at t extends a best partition ending earlier.
double poisson_global_minimum(const std::vector<double>& x, std::vector<std::size_t>& taus) {
    const std::size_t n = x.size();
    double log_fact = 0.0;
    for (double v : x) log_fact += std::lgamma(v + 1.0);
    auto cost = [&](std::size_t a, std::size_t b) {  // regime a+1..b
        double s = 0.0;
        for (std::size_t t = a; t < b; ++t) s += x[t];
        const double len = static_cast<double>(b - a);
        return s > 0.0 ? -2.0 * (s * std::log(s / len) - s) : 0.0;
    };
    const double beta = std::log(static_cast<double>(n));
    std::vector<double> best(n + 1, INFINITY);
    std::vector<std::size_t> last(n + 1, 0);
    best[0] = -beta;
    for (std::size_t b = 1; b <= n; ++b) {
        for (std::size_t a = 0; a < b; ++a) {
            const double v = best[a] + beta + cost(a, b);
            if (v < best[b]) {
                best[b] = v;
                last[b] = a;
            }
        }
    }
    taus.clear();
    for (std::size_t b = last[n]; b > 0; b = last[b]) taus.push_back(b);
    std::reverse(taus.begin(), taus.end());
    return best[n] + 2.0 * log_fact;
}

bool close_total(double a, double b) {
    return std::fabs(a - b) <= 1e-9 * std::max(1.0, std::fabs(b));
}

// ---------------------------------------------------------------------------

void criterion1() {
    const auto start = Clock::now();
    const auto r = shell(kExe + " critvals --n 2000 --reps 100000 --format json");
    const double elapsed = seconds_since(start);
    if (r.code != 0) {
        report("1", false, "critvals exited with " + std::to_string(r.code));
        return;
    }
    const auto j = nlohmann::json::parse(r.out);
    const std::array<double, 4> tolerance{0.02, 0.02, 0.025, 0.03};
    bool pass = elapsed <= 60.0;
    std::string detail;
    for (std::size_t i = 0; i < 4; ++i) {
        const auto& row = j["rows"][i];
        const double diff = row["difference"].get<double>();
        pass = pass && std::fabs(diff) <= tolerance[i];
        detail += fmt("%.3f: %.4f vs %.3f (|d|=%.4f <= %.3f); ", row["level"].get<double>(),
                      row["simulated"].get<double>(), row["asymptotic"].get<double>(), std::fabs(diff),
                      tolerance[i]);
    }
    report("1", pass, "critical values n=2000 reps=100000: " + detail + fmt("runtime %.1f s <= 60 s", elapsed));
}

void criterion2() {
    const std::vector<double> x{1, 1, 1, 5, 5, 5};
    const auto p = cusum_profile(x);
    const double want = 6.0 / std::sqrt(28.8);
    bool pass = p.tau_hat == 3 && std::fabs(p.max_abs - want) <= 1e-9;
    double worst = 0.0;
    for (auto [a, b] : {std::pair{2.0, 3.0}, std::pair{1e3, -7.0}, std::pair{0.125, 1e4}}) {
        std::vector<double> y(x.size());
        for (std::size_t t = 0; t < x.size(); ++t) y[t] = a * x[t] + b;
        const auto q = cusum_profile(y);
        pass = pass && q.tau_hat == p.tau_hat;
        for (std::size_t k = 0; k < x.size(); ++k) worst = std::max(worst, std::fabs(q.stats[k] - p.stats[k]));
    }
    pass = pass && worst <= 1e-9;
    report("2", pass,
           fmt("hand oracle tau=%zu max|CUSUM|=%.12f (want %.12f, tol 1e-9); affine copies max profile diff %.2e",
               p.tau_hat, p.max_abs, want, worst));
}

void criterion3() {
    int matches = 0, below = 0, total = 0;
    double slowest = 0.0;
    for (ModelKind model : {ModelKind::Poisson, ModelKind::GaussIid}) {
        for (std::uint64_t i = 0; i < 50; ++i) {
            const std::size_t n = 10 + i % 7;
            const std::uint64_t seed = 1000 + i;
            std::mt19937_64 rng(seed);
            std::uniform_int_distribution<std::size_t> count(0, 2);
            std::uniform_int_distribution<std::size_t> where(2, n - 2);
            std::vector<std::size_t> taus;
            for (std::size_t k = count(rng); k > 0; --k) taus.push_back(where(rng));
            std::sort(taus.begin(), taus.end());
            taus.erase(std::unique(taus.begin(), taus.end()), taus.end());
            Series s = [&] {
                if (model == ModelKind::Poisson) {
                    std::uniform_real_distribution<double> rate(1.0, 12.0);
                    PoissonSpec spec{n, taus, {}, 1};
                    for (std::size_t r = 0; r <= taus.size(); ++r) spec.rates.push_back(rate(rng));
                    return simulate_poisson(spec, seed);
                }
                std::uniform_real_distribution<double> level(-3.0, 3.0);
                GaussianSpec spec;
                spec.n = n;
                spec.taus = taus;
                spec.deltas.clear();
                for (std::size_t r = 0; r <= taus.size(); ++r) spec.deltas.push_back(level(rng));
                return simulate_gaussian(spec, seed);
            }();
            const Objective objective(s, model, PenaltyKind::Bic);
            const auto start = Clock::now();
            const auto ex = exhaustive_search(objective);
            if (n == 16) slowest = std::max(slowest, seconds_since(start));
            GaSettings settings;
            settings.seed = seed;
            const auto ga = genetic_search(objective, settings);
            ++total;
            matches += close_total(ga.best_score.total, ex.best_score.total) ? 1 : 0;
            below += ga.best_score.total < ex.best_score.total ? 1 : 0;
        }
    }
    const double rate = static_cast<double>(matches) / total;
    report("3", rate >= 0.95 && below == 0 && slowest < 5.0,
           fmt("GA matches exhaustive in %d/%d instances (%.0f%% >= 95%%), below exhaustive %d times (must be 0); "
               "slowest N=16 exhaustive %.3f s < 5 s",
               matches, total, 100.0 * rate, below, slowest));
}

void criterion4() {
    // 9 / 6 / 9 epidemic of height c on an alternating +-1 perturbation.
    const std::size_t n = 24;
    auto build = [&](double c) {
        std::vector<double> x(n);
        for (std::size_t t = 1; t <= n; ++t) {
            x[t - 1] = (t >= 10 && t <= 15 ? c : 0.0) + (t % 2 == 1 ? 1.0 : -1.0);
        }
        return x;
    };
    std::string grid_log;
    for (int step = 1; step <= 16; ++step) {
        const double c = 0.5 * step;
        const Series s(build(c));
        const auto profile = cusum_profile(s);
        const auto binseg = binary_segmentation(s, 0.95);
        const auto ex = exhaustive_search(s, ModelKind::GaussIid, PenaltyKind::Bic);
        const auto& taus = ex.best_config.taus();
        const bool found = taus.size() == 2 && std::abs(static_cast<long>(taus[0]) - 9) <= 2 &&
                           std::abs(static_cast<long>(taus[1]) - 15) <= 2;
        grid_log += fmt("c=%.1f:|CUSUM|=%.3f,ex=%s; ", c, profile.max_abs, ex.best_config.to_string().c_str());
        if (profile.max_abs < 1.358 && binseg.config.empty() && found) {
            report("4", true,
                   fmt("opposing shifts at 9|15 (N=24), c=%.1f: full-series max|CUSUM|=%.4f < 1.358, binseg -> [], "
                       "exhaustive BIC gauss-iid -> %s (grid: %s)",
                       c, profile.max_abs, ex.best_config.to_string().c_str(), grid_log.c_str()));
            return;
        }
    }
    report("4", false, "no shift magnitude on the grid satisfies both conditions: " + grid_log);
}

void criterion5() {
    // Exhaustive search over 2^52 configurations is out of reach; the exact
    // optimum of the same objective comes from the optimal-partitioning oracle.
    auto one_near_26 = [](std::span<const std::size_t> taus) {
        return taus.size() == 1 && std::abs(static_cast<long>(taus[0]) - 26) <= 1;
    };
    int hits = 0, ga_hits = 0, ga_agrees = 0, truth_optimal = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        PoissonSpec spec{53, {26}, {5.0, 10.0}, 1};
        const Series s = simulate_poisson(spec, seed);
        const std::vector<double> x(s.values().begin(), s.values().end());
        std::vector<std::size_t> optimum;
        const double best = poisson_global_minimum(x, optimum);
        const Objective objective(s, ModelKind::Poisson, PenaltyKind::Bic);
        GaSettings settings;
        settings.seed = seed;
        const auto ga = genetic_search(objective, settings);
        ga_agrees += close_total(ga.best_score.total, best) ? 1 : 0;
        hits += one_near_26(optimum) ? 1 : 0;
        ga_hits += one_near_26(ga.best_config.taus()) ? 1 : 0;
        truth_optimal += close_total(objective.score(ChangepointConfiguration({26})).total, best) ? 1 : 0;
    }
    report("5", hits >= 90,
           fmt("Poisson N=53, rates 5->10 after 26: the global BIC minimum has exactly one changepoint within +-1 "
               "in %d/100 seeds (>= 90); true configuration is the global minimum in %d/100; GA: %d/100, GA "
               "total equals the global minimum in %d/100",
               hits, truth_optimal, ga_hits, ga_agrees));
}

void criterion6() {
    int wrong_sign = 0, recovered = 0, exactly_two = 0, positive = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        GaussianSpec spec;
        spec.n = 100;
        spec.taus = {39, 57};
        spec.deltas = {1.0, -1.5, 0.5};
        spec.beta = 0.02;
        spec.phi = 0.3;
        spec.sigma = 0.4;
        const Series s = simulate_gaussian(spec, seed);

        // plain least-squares line, no changepoints
        double tbar = 0.0, ybar = 0.0;
        for (std::size_t t = 1; t <= 100; ++t) {
            tbar += static_cast<double>(t);
            ybar += s.value(t);
        }
        tbar /= 100.0;
        ybar /= 100.0;
        double sty = 0.0;
        for (std::size_t t = 1; t <= 100; ++t) sty += (static_cast<double>(t) - tbar) * (s.value(t) - ybar);
        wrong_sign += sty < 0.0 ? 1 : 0;

        const Objective objective(s, ModelKind::GaussTrendAr1, PenaltyKind::Bic);
        GaSettings settings;
        settings.seed = seed;
        const auto ga = genetic_search(objective, settings);
        const auto fit = objective.fit(ga.best_config);
        const auto& taus = ga.best_config.taus();
        auto matched = [&](long truth) {
            return std::any_of(taus.begin(), taus.end(),
                               [&](std::size_t t) { return std::abs(static_cast<long>(t) - truth) <= 3; });
        };
        const bool located = matched(39) && matched(57);
        recovered += (*fit.beta > 0.0 && located) ? 1 : 0;
        exactly_two += (*fit.beta > 0.0 && located && taus.size() == 2) ? 1 : 0;
        positive += *fit.beta > 0.0 ? 1 : 0;
    }
    report("6a", wrong_sign > 50,
           fmt("m=0 least-squares slope negative in %d/100 seeds (needs a majority); with these shifts the "
               "noise-free slope is +0.0137/step",
               wrong_sign));
    report("6b", recovered >= 90,
           fmt("gauss-trend-ar1 BIC (GA): beta>0 with an estimated changepoint within +-3 of each of 39 and 57 in "
               "%d/100 seeds (>= 90); beta>0 in %d/100; also with no extra changepoints in %d/100",
               recovered, positive, exactly_two));
}

void criterion7() {
    int rejections = 0;
    const int reps = 10000;
    std::mt19937_64 rng(20240601);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> x(200);
    for (int r = 0; r < reps; ++r) {
        for (auto& v : x) v = normal(rng);
        rejections += amoc_test(x, 0.95, cusum_critical_value(0.95)).reject ? 1 : 0;
    }
    const double rate = static_cast<double>(rejections) / reps;
    // context only: the finite-N rate to high precision
    const auto maxima = simulate_cusum_maxima(200, 1000000, 7);
    const auto above = maxima.end() - std::upper_bound(maxima.begin(), maxima.end(), cusum_critical_value(0.95));
    report("7", std::fabs(rate - 0.05) <= 0.015,
           fmt("null rejection rate %.4f over %d series of length 200 (0.05 +- 0.015); reference rate over "
               "1,000,000 series %.4f",
               rate, reps, static_cast<double>(above) / 1e6));
}

void criterion8() {
    const fs::path dir = fs::temp_directory_path() / ("shiftscan_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const std::string data = (dir / "series.csv").string();
    const std::string counts = (dir / "counts.csv").string();
    shell(kExe + " simulate --n 120 --taus 40,85 --deltas 0,1.2,-0.4 --seed 3 --out " + data + " 2>/dev/null");
    shell(kExe + " simulate --model poisson --n 60 --taus 30 --rates 4,9 --seed 3 --out " + counts + " 2>/dev/null");

    const std::vector<std::pair<std::string, std::string>> commands{
        {"ga", "detect --input " + data + " --method ga --seed 11"},
        {"ga-poisson", "detect --input " + counts + " --kind count --model poisson --method ga --seed 11"},
        {"wbs", "detect --input " + data + " --method wbs --seed 11"},
        {"critvals", "critvals --n 500 --reps 20000 --seed 11"},
        {"simulate", "simulate --model gauss-trend-ar1 --n 200 --taus 70,140 --deltas 0,1,0.5 --beta 0.01 "
                     "--phi 0.4 --seed 11 2>&1"},
    };
    auto strip = [](const std::string& out) {
        if (out.empty() || out.front() != '{') return out;
        auto j = nlohmann::ordered_json::parse(out);
        j.erase("runtime_seconds");
        return j.dump(2);
    };
    bool pass = true;
    std::string detail;
    for (const auto& [name, args] : commands) {
        const auto reference = shell(kExe + " " + args);
        bool same = reference.code == 0 && !reference.out.empty();
        for (const char* threads : {"", "SHIFTSCAN_THREADS=1 ", "SHIFTSCAN_THREADS=2 ", "SHIFTSCAN_THREADS=7 "}) {
            const auto again = shell(std::string(threads) + kExe + " " + args);
            same = same && again.code == 0 && strip(again.out) == strip(reference.out);
        }
        pass = pass && same;
        detail += name + (same ? " identical; " : " DIFFERS; ");
    }
    fs::remove_all(dir);
    report("8", pass, "byte-identical output (runtime field excluded) across reruns and SHIFTSCAN_THREADS=1/2/7: " +
                          detail);
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    std::printf("%s: %d failing criteria\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
    return failures == 0 ? 0 : 1;
}
