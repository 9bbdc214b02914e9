#pragma once

// Declarative Monte-Carlo experiment runner. Parses ini-style sweep
// configs, wires signal -> front end -> recovery end to end over
// (method, OF, lambda, sigma) grids, and emits NMSE tables as CSV with
// a mean/median summary alongside. Also hosts the ECG quantization
// study.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pmadc/common.hpp"
#include "pmadc/demod.hpp"
#include "pmadc/frontend.hpp"
#include "pmadc/metrics.hpp"
#include "pmadc/signals.hpp"
#include "pmadc/unfold.hpp"

namespace pmadc {

enum class Method { asin, hilbert, hod, direct, attenuate };

inline const char* method_name(Method m) {
    switch (m) {
        case Method::asin: return "asin";
        case Method::hilbert: return "hilbert";
        case Method::hod: return "hod";
        case Method::direct: return "direct";
        case Method::attenuate: return "attenuate";
    }
    return "?";
}

inline Method method_from_name(const std::string& name) {
    for (Method m : {Method::asin, Method::hilbert, Method::hod, Method::direct,
                     Method::attenuate})
        if (name == method_name(m)) return m;
    throw std::invalid_argument("unknown method: " + name);
}

// ------------------------------------------------------------- experiment spec

struct ExperimentSpec {
    // [sweep]
    std::vector<Method> methods;
    std::vector<double> of_list;
    std::vector<double> lambda_list;
    std::vector<double> sigma_ratios{0.0};  // sigma / lambda
    int trials = 50;
    std::uint64_t master_seed = 1;
    std::string out_path;

    // [signal]
    int nc = 4;
    double t_nyq = 5e-4;
    double coeff_mean = 0.5;
    double coeff_variance = 4.0;
    int half_width = 4;
    bool per_trial_signal = true;  // fresh seed per trial vs one fixed signal

    // [pm]
    bool mu_auto = true;  // mu = pi / (2 c)
    double mu = 0.0;
    double omega_c_over_omega_m = 0.0;
    double omega_c_over_omega_s = 0.0;

    // [hilbert]
    bool denoise = false;

    // [hod]
    int hod_order = 0;  // 0 = choose_order

    // [noise]
    NoiseSpec::Family noise_family = NoiseSpec::Family::uniform_bounded;

    // [quantizer]
    int bits = 0;  // 0 = disabled

    void validate() const {
        if (methods.empty()) throw std::invalid_argument("sweep.methods: at least one method");
        if (of_list.empty()) throw std::invalid_argument("sweep.of: at least one entry");
        for (double of : of_list)
            if (!(of >= 1.0)) throw std::invalid_argument("sweep.of: entries must be >= 1");
        if (lambda_list.empty()) throw std::invalid_argument("sweep.lambda: at least one entry");
        for (double l : lambda_list)
            if (!(l > 0.0)) throw std::invalid_argument("sweep.lambda: entries must be > 0");
        for (double r : sigma_ratios)
            if (!(r >= 0.0))
                throw std::invalid_argument("sweep.sigma_over_lambda: entries must be >= 0");
        if (trials < 1) throw std::invalid_argument("sweep.trials: must be >= 1");
        if (nc < 1) throw std::invalid_argument("signal.nc: must be >= 1");
        if (!(t_nyq > 0)) throw std::invalid_argument("signal.t_nyq: must be > 0");
        if (!(coeff_variance >= 0))
            throw std::invalid_argument("signal.coeff_variance: must be >= 0");
        if (half_width < 1) throw std::invalid_argument("signal.half_width: must be >= 1");
        if (!mu_auto && !(mu > 0)) throw std::invalid_argument("pm.mu: must be > 0 or auto");
        if (omega_c_over_omega_m != 0.0 && omega_c_over_omega_s != 0.0)
            throw std::invalid_argument(
                "pm: give omega_c_over_omega_m or omega_c_over_omega_s, not both");
        if (omega_c_over_omega_m < 0 || omega_c_over_omega_s < 0)
            throw std::invalid_argument("pm: carrier ratios must be >= 0");
        if (hod_order < 0) throw std::invalid_argument("hod.order: must be auto or >= 1");
        if (bits < 0) throw std::invalid_argument("quantizer.bits: must be >= 1 when present");
    }
};

// ------------------------------------------------------------- config parsing

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// ini-style text: [section] headers, key = value lines, # comments
inline std::map<std::string, std::map<std::string, std::string>> parse_config_text(
    std::istream& in) {
    std::map<std::string, std::map<std::string, std::string>> sections;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3)
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": malformed [section] header");
            section = trim(line.substr(1, line.size() - 2));
            sections[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
        if (section.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": key outside any [section]");
        if (!sections[section].emplace(key, value).second)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": duplicate key " + section + "." + key);
    }
    return sections;
}

inline double parse_double_field(const std::string& field, const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw std::invalid_argument(field + ": not a number: " + text);
    }
}

inline long long parse_int_field(const std::string& field, const std::string& text) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(text, &used);
        if (used != text.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw std::invalid_argument(field + ": not an integer: " + text);
    }
}

inline bool parse_bool_field(const std::string& field, const std::string& text) {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw std::invalid_argument(field + ": expected true or false: " + text);
}

// commas count as separators so "a b" and "a, b" both work in list values
inline std::vector<std::string> split_ws(const std::string& text) {
    std::string s = text;
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

// pulls typed values out of one section, then rejects unknown keys
class SectionReader {
public:
    SectionReader(const std::map<std::string, std::map<std::string, std::string>>& sections,
                  std::string name)
        : name_(std::move(name)) {
        const auto it = sections.find(name_);
        if (it != sections.end()) entries_ = &it->second;
    }

    const std::string* raw(const std::string& key) {
        if (!entries_) return nullptr;
        const auto it = entries_->find(key);
        if (it == entries_->end()) return nullptr;
        seen_.push_back(key);
        return &it->second;
    }

    void get(const std::string& key, double& out) {
        if (const auto* v = raw(key)) out = parse_double_field(name_ + "." + key, *v);
    }
    void get(const std::string& key, int& out) {
        if (const auto* v = raw(key)) {
            const long long n = parse_int_field(name_ + "." + key, *v);
            out = static_cast<int>(n);
        }
    }
    void get(const std::string& key, std::uint64_t& out) {
        if (const auto* v = raw(key))
            out = static_cast<std::uint64_t>(parse_int_field(name_ + "." + key, *v));
    }
    void get(const std::string& key, bool& out) {
        if (const auto* v = raw(key)) out = parse_bool_field(name_ + "." + key, *v);
    }
    void get(const std::string& key, std::string& out) {
        if (const auto* v = raw(key)) out = *v;
    }
    void get_list(const std::string& key, std::vector<double>& out) {
        if (const auto* v = raw(key)) {
            out.clear();
            for (const auto& tok : split_ws(*v))
                out.push_back(parse_double_field(name_ + "." + key, tok));
        }
    }

    void finish() const {
        if (!entries_) return;
        for (const auto& [key, value] : *entries_)
            if (std::find(seen_.begin(), seen_.end(), key) == seen_.end())
                throw std::invalid_argument("unknown key " + name_ + "." + key);
    }

private:
    std::string name_;
    const std::map<std::string, std::string>* entries_ = nullptr;
    std::vector<std::string> seen_;
};

}  // namespace detail

inline ExperimentSpec spec_from_config(
    const std::map<std::string, std::map<std::string, std::string>>& sections) {
    for (const auto& [name, keys] : sections)
        if (name != "sweep" && name != "signal" && name != "pm" && name != "hilbert" &&
            name != "hod" && name != "noise" && name != "quantizer")
            throw std::invalid_argument("unknown section [" + name + "]");

    ExperimentSpec spec;

    detail::SectionReader sweep(sections, "sweep");
    if (const auto* v = sweep.raw("methods")) {
        for (const auto& tok : detail::split_ws(*v)) spec.methods.push_back(method_from_name(tok));
    }
    sweep.get_list("of", spec.of_list);
    sweep.get_list("lambda", spec.lambda_list);
    sweep.get_list("sigma_over_lambda", spec.sigma_ratios);
    sweep.get("trials", spec.trials);
    sweep.get("seed", spec.master_seed);
    sweep.get("out", spec.out_path);
    sweep.finish();

    detail::SectionReader signal(sections, "signal");
    if (const auto* v = signal.raw("kind"))
        if (*v != "sinc_series")
            throw std::invalid_argument("signal.kind: only sinc_series is supported in sweeps");
    signal.get("nc", spec.nc);
    signal.get("t_nyq", spec.t_nyq);
    signal.get("coeff_mean", spec.coeff_mean);
    signal.get("coeff_variance", spec.coeff_variance);
    signal.get("half_width", spec.half_width);
    if (const auto* v = signal.raw("seed_policy")) {
        if (*v == "per_trial")
            spec.per_trial_signal = true;
        else if (*v == "fixed")
            spec.per_trial_signal = false;
        else
            throw std::invalid_argument("signal.seed_policy: expected per_trial or fixed");
    }
    signal.finish();

    detail::SectionReader pm(sections, "pm");
    if (const auto* v = pm.raw("mu")) {
        if (*v == "auto") {
            spec.mu_auto = true;
        } else {
            spec.mu_auto = false;
            spec.mu = detail::parse_double_field("pm.mu", *v);
        }
    }
    pm.get("omega_c_over_omega_m", spec.omega_c_over_omega_m);
    pm.get("omega_c_over_omega_s", spec.omega_c_over_omega_s);
    pm.finish();

    detail::SectionReader hilbert(sections, "hilbert");
    hilbert.get("denoise", spec.denoise);
    hilbert.finish();

    detail::SectionReader hod(sections, "hod");
    if (const auto* v = hod.raw("order")) {
        if (*v == "auto")
            spec.hod_order = 0;
        else
            spec.hod_order = static_cast<int>(detail::parse_int_field("hod.order", *v));
    }
    hod.finish();

    detail::SectionReader noise(sections, "noise");
    if (const auto* v = noise.raw("family")) {
        if (*v == "uniform")
            spec.noise_family = NoiseSpec::Family::uniform_bounded;
        else if (*v == "gaussian")
            spec.noise_family = NoiseSpec::Family::gaussian;
        else
            throw std::invalid_argument("noise.family: expected uniform or gaussian");
    }
    noise.finish();

    detail::SectionReader quant(sections, "quantizer");
    quant.get("bits", spec.bits);
    quant.finish();

    spec.validate();
    return spec;
}

inline ExperimentSpec parse_experiment_config(std::istream& in) {
    return spec_from_config(detail::parse_config_text(in));
}

inline ExperimentSpec load_experiment_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    return parse_experiment_config(in);
}

// ------------------------------------------------------------- result records

struct ResultRecord {
    std::string method;
    double of = 0.0;
    double lambda = 0.0;
    double sigma_over_lambda = 0.0;
    int trial = 0;
    double nmse_db = std::numeric_limits<double>::quiet_NaN();
    std::size_t clamp_count = 0;
    std::string skip_reason;  // non-empty marks a skipped trial

    bool skipped() const { return !skip_reason.empty(); }
};

namespace detail {

inline std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// reasons land in the last CSV column; keep them comma-free
inline std::string sanitize_reason(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

}  // namespace detail

inline const char* results_csv_header() {
    return "method,of,lambda,sigma_over_lambda,trial,nmse_db,clamp_count,skip_reason";
}

inline std::string format_results_csv(const std::vector<ResultRecord>& records) {
    std::string out = results_csv_header();
    out += '\n';
    for (const auto& r : records) {
        out += r.method;
        out += ',' + detail::csv_num(r.of) + ',' + detail::csv_num(r.lambda) + ',' +
               detail::csv_num(r.sigma_over_lambda) + ',' + std::to_string(r.trial) + ',';
        if (!r.skipped()) out += detail::csv_num(r.nmse_db);
        out += ',' + std::to_string(r.clamp_count) + ',' + detail::sanitize_reason(r.skip_reason);
        out += '\n';
    }
    return out;
}

inline void emit_csv(const std::vector<ResultRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
    if (!out) throw std::runtime_error("cannot write CSV: " + path);
    out << format_results_csv(records);
    if (!out.good()) throw std::runtime_error("write failed: " + path);
}

inline std::vector<ResultRecord> parse_results_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open CSV: " + path);
    std::string line;
    if (!std::getline(in, line) || detail::trim(line) != results_csv_header())
        throw std::runtime_error("unexpected CSV header in " + path);
    std::vector<ResultRecord> out;
    while (std::getline(in, line)) {
        line = detail::trim(line);
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= line.size(); ++i)
            if (i == line.size() || line[i] == ',') {
                fields.push_back(line.substr(start, i - start));
                start = i + 1;
            }
        if (fields.size() != 8)
            throw std::runtime_error("malformed CSV row in " + path + ": " + line);
        ResultRecord r;
        r.method = fields[0];
        r.of = detail::parse_double_field("of", fields[1]);
        r.lambda = detail::parse_double_field("lambda", fields[2]);
        r.sigma_over_lambda = detail::parse_double_field("sigma_over_lambda", fields[3]);
        r.trial = static_cast<int>(detail::parse_int_field("trial", fields[4]));
        r.nmse_db = fields[5].empty() ? std::numeric_limits<double>::quiet_NaN()
                                      : detail::parse_double_field("nmse_db", fields[5]);
        r.clamp_count = static_cast<std::size_t>(detail::parse_int_field("clamp_count", fields[6]));
        r.skip_reason = fields[7];
        out.push_back(std::move(r));
    }
    return out;
}

// ----------------------------------------------------------------- summaries

struct SummaryRecord {
    std::string method;
    double of = 0.0;
    double lambda = 0.0;
    double sigma_over_lambda = 0.0;
    int ran = 0;
    int skipped = 0;
    double mean_nmse_db = std::numeric_limits<double>::quiet_NaN();
    double median_nmse_db = std::numeric_limits<double>::quiet_NaN();
};

inline std::vector<SummaryRecord> summarize(const std::vector<ResultRecord>& records) {
    std::vector<SummaryRecord> out;
    std::vector<std::vector<double>> values;
    std::map<std::string, std::size_t> index;
    for (const auto& r : records) {
        const std::string key = r.method + '|' + detail::csv_num(r.of) + '|' +
                                detail::csv_num(r.lambda) + '|' +
                                detail::csv_num(r.sigma_over_lambda);
        auto [it, fresh] = index.emplace(key, out.size());
        if (fresh) {
            out.push_back({r.method, r.of, r.lambda, r.sigma_over_lambda, 0, 0,
                           std::numeric_limits<double>::quiet_NaN(),
                           std::numeric_limits<double>::quiet_NaN()});
            values.emplace_back();
        }
        auto& cell = out[it->second];
        if (r.skipped()) {
            ++cell.skipped;
        } else {
            ++cell.ran;
            values[it->second].push_back(r.nmse_db);
        }
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        auto& v = values[i];
        if (v.empty()) continue;
        double total = 0.0;
        for (double x : v) total += x;
        out[i].mean_nmse_db = total / static_cast<double>(v.size());
        std::sort(v.begin(), v.end());
        const std::size_t mid = v.size() / 2;
        out[i].median_nmse_db = v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
    }
    return out;
}

inline const char* summary_csv_header() {
    return "method,of,lambda,sigma_over_lambda,ran,skipped,mean_nmse_db,median_nmse_db";
}

inline std::string format_summary_csv(const std::vector<SummaryRecord>& cells) {
    std::string out = summary_csv_header();
    out += '\n';
    for (const auto& c : cells) {
        out += c.method;
        out += ',' + detail::csv_num(c.of) + ',' + detail::csv_num(c.lambda) + ',' +
               detail::csv_num(c.sigma_over_lambda) + ',' + std::to_string(c.ran) + ',' +
               std::to_string(c.skipped) + ',';
        if (c.ran > 0)
            out += detail::csv_num(c.mean_nmse_db) + ',' + detail::csv_num(c.median_nmse_db);
        else
            out += ",";
        out += '\n';
    }
    return out;
}

/// results.csv -> results.summary.csv (appends when there is no .csv suffix)
inline std::string summary_path_for(const std::string& out_path) {
    const std::string suffix = ".csv";
    if (out_path.size() > suffix.size() &&
        out_path.compare(out_path.size() - suffix.size(), suffix.size(), suffix) == 0)
        return out_path.substr(0, out_path.size() - suffix.size()) + ".summary.csv";
    return out_path + ".summary.csv";
}

// -------------------------------------------------------------------- sweeps

namespace detail {

inline double sweep_carrier(const ExperimentSpec& spec, const SamplingGrid& grid,
                            double omega_m) {
    if (spec.omega_c_over_omega_s != 0.0) return spec.omega_c_over_omega_s * grid.omega_s();
    return spec.omega_c_over_omega_m * omega_m;
}

inline double max_abs_nth_diff(std::vector<double> v, int order) {
    for (int pass = 0; pass < order; ++pass) {
        for (std::size_t i = 0; i + 1 < v.size(); ++i) v[i] = v[i + 1] - v[i];
        v.pop_back();
    }
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline void run_sweep_trial(const ExperimentSpec& spec, Method method, const SamplingGrid& grid,
                            double lambda, double ratio, int trial, ResultRecord& rec) {
    // counter-hash seed derivation: stream 1 = signal, stream 2 = noise.
    // Shared across cells so method/OF/sigma comparisons are paired.
    const std::uint64_t sig_seed =
        Rng::derive(spec.master_seed, 1, spec.per_trial_signal ? static_cast<std::uint64_t>(trial) : 0);
    const std::uint64_t noise_seed = Rng::derive(spec.master_seed, 2, static_cast<std::uint64_t>(trial));

    const SignalModel model(
        gen_sinc_series(sig_seed, spec.nc, spec.t_nyq, spec.coeff_mean, spec.coeff_variance));
    const double c = amplitude_bound(model);
    const double omega_m = pi / spec.t_nyq;
    const auto truth = eval(model, grid.instants());
    const double sigma = ratio * lambda;
    const double noise_bound =
        sigma > 0
            ? (spec.noise_family == NoiseSpec::Family::uniform_bounded ? sigma : 3.0 * sigma)
            : 0.0;

    const auto maybe_noise = [&](SampleStream s) {
        if (sigma > 0) s = add_noise(s, {spec.noise_family, sigma, noise_seed});
        return s;
    };
    const auto maybe_quant = [&](SampleStream s, double lo, double hi) {
        if (spec.bits > 0) s = quantize(s, {spec.bits, lo, hi});
        return s;
    };

    switch (method) {
        case Method::asin: {
            const PmConfig pm{sweep_carrier(spec, grid, omega_m),
                              spec.mu_auto ? pi / (2.0 * c) : spec.mu, lambda};
            const auto stream =
                maybe_quant(maybe_noise(pm_modulate(model, pm, grid)), -lambda, lambda);
            const auto rep = dpd_asin(stream, pm, noise_bound, c);
            rec.clamp_count = rep.clamp_count;
            rec.nmse_db = nmse_db(truth, rep.recovered).db;
            break;
        }
        case Method::hilbert: {
            const PmConfig pm{sweep_carrier(spec, grid, omega_m),
                              spec.mu_auto ? pi / (2.0 * c) : spec.mu, lambda};
            const auto stream =
                maybe_quant(maybe_noise(pm_modulate(model, pm, grid)), -lambda, lambda);
            const auto rep =
                dpd_hilbert(stream, pm, omega_m, spec.denoise, derivative_bound(model));
            rec.clamp_count = rep.clamp_count;
            rec.nmse_db = nmse_db(truth, rep.recovered).db;
            break;
        }
        case Method::hod: {
            int order = spec.hod_order;
            if (order == 0) {
                std::string warn;
                order = choose_order(grid.oversampling, c, lambda, sigma, &warn);
            }
            // feasibility against the known truth; violations become
            // skipped-with-reason rows rather than garbage NMSE
            const double dmax = max_abs_nth_diff(truth, order);
            if (dmax >= lambda)
                throw std::runtime_error(
                    "lattice violation: |Delta^" + std::to_string(order) +
                    " f|_inf = " + csv_num(dmax) + " >= lambda at this rate");
            for (int k = 0; k < order; ++k)
                if (std::abs(truth[static_cast<std::size_t>(k)]) > lambda)
                    throw std::runtime_error("unfolded-prefix violation: |f(t_" +
                                             std::to_string(k) + ")| > lambda");
            const auto folded =
                maybe_quant(maybe_noise(modulo_fold(model, lambda, grid)), -lambda, lambda);
            const auto rec_vals =
                hod_unfold(folded, {order, lambda, std::max(c, lambda), true});
            rec.nmse_db = nmse_db(truth, rec_vals).db;
            break;
        }
        case Method::direct: {
            const auto stream = maybe_quant(
                maybe_noise(kernel_sample(model, Kernel::identity(), grid)), -c, c);
            rec.nmse_db = nmse_db(truth, stream.values).db;
            break;
        }
        case Method::attenuate: {
            const double gain = std::min(1.0, lambda / c);
            auto stream = maybe_quant(
                maybe_noise(kernel_sample(attenuate(model, gain), Kernel::identity(), grid)),
                -lambda, lambda);
            for (auto& v : stream.values) v /= gain;
            rec.nmse_db = nmse_db(truth, stream.values).db;
            break;
        }
    }
}

}  // namespace detail

/// Deterministic given the master seed. Every (method, OF, lambda,
/// sigma, trial) combination yields exactly one row; method
/// precondition failures become skipped rows carrying the reason.
inline std::vector<ResultRecord> run_sweep(const ExperimentSpec& spec) {
    spec.validate();
    std::vector<ResultRecord> out;
    const double omega_m = pi / spec.t_nyq;
    const auto ratios = spec.sigma_ratios.empty() ? std::vector<double>{0.0} : spec.sigma_ratios;
    for (Method method : spec.methods)
        for (double of : spec.of_list) {
            const auto grid = nyquist_grid(omega_m, of, spec.half_width);
            for (double lambda : spec.lambda_list)
                for (double ratio : ratios)
                    for (int trial = 0; trial < spec.trials; ++trial) {
                        ResultRecord rec;
                        rec.method = method_name(method);
                        rec.of = of;
                        rec.lambda = lambda;
                        rec.sigma_over_lambda = ratio;
                        rec.trial = trial;
                        try {
                            detail::run_sweep_trial(spec, method, grid, lambda, ratio, trial,
                                                    rec);
                        } catch (const std::exception& e) {
                            rec.nmse_db = std::numeric_limits<double>::quiet_NaN();
                            rec.skip_reason = e.what();
                        }
                        out.push_back(std::move(rec));
                    }
        }
    return out;
}

/// run_sweep + raw CSV + mean/median summary CSV alongside.
inline std::vector<ResultRecord> run_sweep_to_files(const ExperimentSpec& spec,
                                                    const std::string& out_path) {
    auto records = run_sweep(spec);
    emit_csv(records, out_path);
    std::ofstream summary(summary_path_for(out_path), std::ios::binary);
    if (!summary) throw std::runtime_error("cannot write CSV: " + summary_path_for(out_path));
    summary << format_summary_csv(summarize(records));
    if (!summary.good()) throw std::runtime_error("write failed: " + summary_path_for(out_path));
    return records;
}

// ----------------------------------------------------------------- ECG study

struct EcgStudyConfig {
    std::string record_path;  // empty -> built-in synthetic record
    double a_bl = 0.5;        // baseline wander amplitude
    double f_bl_hz = 0.07;    // baseline wander frequency
    int bits = 8;
    bool pm_path = true;  // false -> direct wide-range quantization
    double expected_rate_hz = 500.0;
};

struct EcgSummary {
    std::string path;  // "pm" | "direct"
    double nmse_db = 0.0;
    std::size_t clamp_count = 0;
    std::size_t clip_count = 0;
    std::size_t samples = 0;
    double rate_hz = 0.0;
};

/// Baseline-wander + quantization study. The PM path folds the
/// widened-range record through sin and recovers with asin from bits
/// over [-1, 1]; the direct path widens the quantizer range to
/// [-(1+A_bl), 1+A_bl] instead. NMSE is against the true baselined
/// samples in both cases.
inline EcgSummary run_ecg(const EcgStudyConfig& cfg) {
    if (cfg.bits < 1) throw std::invalid_argument("ecg: bits must be >= 1");
    if (!(cfg.a_bl >= 0)) throw std::invalid_argument("ecg: baseline amplitude must be >= 0");
    if (!(cfg.f_bl_hz >= 0)) throw std::invalid_argument("ecg: baseline frequency must be >= 0");

    BaselinedRecord record;
    if (cfg.record_path.empty()) {
        record.base = synth_ecg_record(10.0, cfg.expected_rate_hz);
        record.rate_hz = cfg.expected_rate_hz;
    } else {
        record = load_record_csv(cfg.record_path, cfg.expected_rate_hz);
    }
    record.baseline_amplitude = cfg.a_bl;
    record.baseline_freq_hz = cfg.f_bl_hz;

    const SignalModel model(record);
    const auto grid = uniform_grid(0.0, 1.0 / record.rate_hz, record.base.size());
    const auto truth = eval(model, grid.instants());
    const double c = 1.0 + cfg.a_bl;

    EcgSummary summary;
    summary.samples = record.base.size();
    summary.rate_hz = record.rate_hz;
    if (cfg.pm_path) {
        summary.path = "pm";
        const PmConfig pm{0.0, pi / (2.0 * c), 1.0};
        const auto stream =
            quantize(pm_modulate(model, pm, grid), {cfg.bits, -pm.lambda, pm.lambda});
        const auto rep = dpd_asin(stream, pm, 0.0, c);
        summary.clamp_count = rep.clamp_count;
        summary.clip_count = stream.clip_count;
        summary.nmse_db = nmse_db(truth, rep.recovered).db;
    } else {
        summary.path = "direct";
        const auto stream =
            quantize(kernel_sample(model, Kernel::identity(), grid), {cfg.bits, -c, c});
        summary.clip_count = stream.clip_count;
        summary.nmse_db = nmse_db(truth, stream.values).db;
    }
    return summary;
}

}  // namespace pmadc
