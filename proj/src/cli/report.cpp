#include <charconv>
#include <sstream>

#include <json.hpp>

#include "shiftscan/cli.hpp"

namespace shiftscan::cli {

using json = nlohmann::ordered_json;

namespace {

template <typename T>
json maybe(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

json regimes_json(const DetectReport& r) {
    json regimes = json::array();
    const auto parts = partition(r.config, r.n);
    for (std::size_t i = 0; i < parts.size(); ++i) {
        json entry;
        entry["start"] = parts[i].start;
        entry["end"] = parts[i].end;
        entry["start_time"] = r.times[parts[i].start - 1];
        entry["end_time"] = r.times[parts[i].end - 1];
        entry[r.fit.model == ModelKind::Poisson ? "rate" : "level"] = r.fit.deltas.at(i);
        regimes.push_back(std::move(entry));
    }
    return regimes;
}

}  // namespace

std::string report_to_json(const DetectReport& r) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["method"] = r.method;
    j["model"] = r.model;
    j["penalty"] = maybe(r.penalty);
    j["level"] = maybe(r.level);
    j["threshold"] = maybe(r.threshold);
    j["seed"] = maybe(r.seed);
    j["n"] = r.n;

    json taus = json::array();
    json labels = json::array();
    for (std::size_t tau : r.config.taus()) {
        taus.push_back(tau);
        labels.push_back(r.times[tau - 1]);
    }
    j["configuration"] = {{"m", r.config.count()}, {"taus", taus}, {"times", labels}};
    j["regimes"] = regimes_json(r);
    j["beta"] = maybe(r.fit.beta);
    j["phi"] = maybe(r.fit.phi);
    j["sigma2"] = maybe(r.fit.sigma2);
    j["neg2loglik"] = r.fit.neg2loglik;
    j["penalty_value"] = maybe(r.penalty_value);
    j["total"] = maybe(r.total);
    if (r.method == "amoc") {
        j["amoc"] = {{"statistic", maybe(r.statistic)},
                     {"critical_value", maybe(r.critical_value)},
                     {"reject", maybe(r.reject)},
                     {"tau_hat", maybe(r.tau_hat)}};
    }
    j["fitted"] = r.fitted;
    j["evaluations"] = r.evaluations;
    j["warning"] = maybe(r.warning);
    j["runtime_seconds"] = r.runtime_seconds;
    return j.dump(2) + "\n";
}

namespace {

std::string num(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

template <typename T>
std::string opt(const std::optional<T>& v) {
    if (!v) return "";
    if constexpr (std::is_same_v<T, double>) return num(*v);
    else if constexpr (std::is_same_v<T, bool>) return *v ? "true" : "false";
    else if constexpr (std::is_same_v<T, std::string>) return *v;
    else return std::to_string(*v);
}

template <typename Seq, typename F>
std::string joined(const Seq& seq, F&& f) {
    std::string s;
    for (const auto& x : seq) {
        if (!s.empty()) s += ';';
        s += f(x);
    }
    return s;
}

}  // namespace

std::string report_to_csv(const DetectReport& r) {
    std::ostringstream out;
    out << "field,value\n";
    out << "schema_version," << kSchemaVersion << '\n';
    out << "method," << r.method << '\n';
    out << "model," << r.model << '\n';
    out << "penalty," << opt(r.penalty) << '\n';
    out << "level," << opt(r.level) << '\n';
    out << "threshold," << opt(r.threshold) << '\n';
    out << "seed," << opt(r.seed) << '\n';
    out << "n," << r.n << '\n';
    out << "m," << r.config.count() << '\n';
    out << "taus," << joined(r.config.taus(), [](std::size_t t) { return std::to_string(t); }) << '\n';
    out << "times,"
        << joined(r.config.taus(), [&](std::size_t t) { return std::to_string(r.times[t - 1]); })
        << '\n';
    out << (r.fit.model == ModelKind::Poisson ? "rates," : "levels,")
        << joined(r.fit.deltas, num) << '\n';
    out << "beta," << opt(r.fit.beta) << '\n';
    out << "phi," << opt(r.fit.phi) << '\n';
    out << "sigma2," << opt(r.fit.sigma2) << '\n';
    out << "neg2loglik," << num(r.fit.neg2loglik) << '\n';
    out << "penalty_value," << opt(r.penalty_value) << '\n';
    out << "total," << opt(r.total) << '\n';
    if (r.method == "amoc") {
        out << "statistic," << opt(r.statistic) << '\n';
        out << "critical_value," << opt(r.critical_value) << '\n';
        out << "reject," << opt(r.reject) << '\n';
        out << "tau_hat," << opt(r.tau_hat) << '\n';
    }
    out << "evaluations," << r.evaluations << '\n';
    out << "warning," << opt(r.warning) << '\n';
    out << "runtime_seconds," << num(r.runtime_seconds) << '\n';
    return out.str();
}

}  // namespace shiftscan::cli
