// pm-adc-lab: desk-scale phase-modulation HDR acquisition lab.
// Subcommands cover signal generation, the PM / modulo front ends,
// phase demodulation, HoD unfolding, Monte-Carlo sweeps, and the ECG
// quantization study. Exit codes: 0 ok, 2 bad flags/config, 3 I/O.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pmadc/harness.hpp"

namespace {

using namespace pmadc;

// ------------------------------------------------- model description files
// flat key=value text, enough to rebuild the exact SincSeries

void write_model_text(std::ostream& out, const SincSeries& s) {
    out.precision(17);
    out << "kind = sinc_series\n";
    out << "t_nyq = " << s.t_nyq << "\n";
    out << "scale = " << s.scale << "\n";
    out << "coeffs =";
    for (double c : s.coeffs) out << " " << c;
    out << "\n";
}

void save_model_text(const std::string& path, const SincSeries& s) {
    if (path == "-") {
        write_model_text(std::cout, s);
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model file: " + path);
    write_model_text(out, s);
    if (!out) throw std::runtime_error("write failed: " + path);
}

SincSeries load_model_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    SincSeries s;
    s.scale = 1.0;
    bool have_kind = false, have_coeffs = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = detail::trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("model file line " + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key == "kind") {
            if (value != "sinc_series")
                throw std::invalid_argument("model file: unsupported kind " + value);
            have_kind = true;
        } else if (key == "t_nyq") {
            s.t_nyq = detail::parse_double_field("model t_nyq", value);
        } else if (key == "scale") {
            s.scale = detail::parse_double_field("model scale", value);
        } else if (key == "coeffs") {
            s.coeffs.clear();
            for (const auto& tok : detail::split_ws(value))
                s.coeffs.push_back(detail::parse_double_field("model coeffs", tok));
            have_coeffs = true;
        } else {
            throw std::invalid_argument("model file: unknown key " + key);
        }
    }
    if (!have_kind || !have_coeffs || s.coeffs.empty() || !(s.t_nyq > 0))
        throw std::invalid_argument("model file: need kind, t_nyq and coeffs");
    return s;
}

void write_record_stdout(const std::vector<double>& samples, double rate_hz) {
    std::cout.precision(17);
    std::cout << "# rate_hz=" << rate_hz << "\n";
    for (double v : samples) std::cout << v << "\n";
}

SampleStream post_chain(SampleStream stream, double noise_sigma, const std::string& family,
                        std::uint64_t noise_seed, int bits, double lo, double hi) {
    if (noise_sigma > 0) {
        const auto fam = family == "gaussian" ? NoiseSpec::Family::gaussian
                                              : NoiseSpec::Family::uniform_bounded;
        stream = add_noise(stream, {fam, noise_sigma, noise_seed});
    }
    if (bits > 0) stream = quantize(stream, {bits, lo, hi});
    return stream;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pm-adc-lab: phase-modulation HDR acquisition laboratory"};
    app.set_version_flag("--version", std::string(PMADC_VERSION));
    app.require_subcommand(0, 1);

    // ------------------------------------------------------------------ gen
    struct {
        std::string kind = "sinc_series";
        std::uint64_t seed = 1;
        int nc = 4;
        double t_nyq = 5e-4;
        double mean = 0.5;
        double variance = 4.0;
        double duration = 10.0;
        double rate = 500.0;
        std::string out = "-";
    } g;
    auto* gen = app.add_subcommand("gen", "generate a signal model or a sample record");
    gen->add_option("--kind", g.kind, "sinc_series (model text) or ecg (record CSV)")
        ->check(CLI::IsMember({"sinc_series", "ecg"}));
    gen->add_option("--seed", g.seed, "sinc_series coefficient seed");
    gen->add_option("--nc", g.nc, "sinc_series coefficient half-count");
    gen->add_option("--t-nyq", g.t_nyq, "sinc_series Nyquist period, seconds");
    gen->add_option("--mean", g.mean, "coefficient mean");
    gen->add_option("--variance", g.variance, "coefficient variance");
    gen->add_option("--duration", g.duration, "ecg record length, seconds");
    gen->add_option("--rate", g.rate, "ecg record rate, Hz");
    gen->add_option("--out", g.out, "output path, - for stdout");
    gen->callback([&g] {
        if (g.kind == "ecg") {
            const auto record = synth_ecg_record(g.duration, g.rate);
            if (g.out == "-")
                write_record_stdout(record, g.rate);
            else
                write_record_csv(g.out, record, g.rate);
        } else {
            save_model_text(g.out, gen_sinc_series(g.seed, g.nc, g.t_nyq, g.mean, g.variance));
        }
    });

    // ------------------------------------------------------- modulate / fold
    struct {
        std::string model;
        double of = 1.0;
        int half_width = 4;
        double mu = 1.0;
        double lambda = 1.0;
        double carrier_hz = 0.0;
        double noise_sigma = 0.0;
        std::string noise_family = "uniform";
        std::uint64_t noise_seed = 0;
        int bits = 0;
        std::string out;
    } fe;
    const auto add_frontend_flags = [&fe](CLI::App* cmd, bool with_pm) {
        cmd->add_option("--model", fe.model, "model description file")->required();
        cmd->add_option("--of", fe.of, "oversampling factor");
        cmd->add_option("--half-width", fe.half_width, "window half-width in Nyquist periods");
        if (with_pm) {
            cmd->add_option("--mu", fe.mu, "modulation index, rad per amplitude unit")
                ->required();
            cmd->add_option("--carrier-hz", fe.carrier_hz, "carrier frequency, Hz");
        }
        cmd->add_option("--lambda", fe.lambda, "ADC half-range")->required();
        cmd->add_option("--noise-sigma", fe.noise_sigma, "noise bound / stddev, 0 = off");
        cmd->add_option("--noise-family", fe.noise_family)
            ->check(CLI::IsMember({"uniform", "gaussian"}));
        cmd->add_option("--noise-seed", fe.noise_seed);
        cmd->add_option("--bits", fe.bits, "quantizer bits over [-lambda, lambda], 0 = off");
        cmd->add_option("--out", fe.out, "output stream CSV")->required();
    };

    auto* modulate = app.add_subcommand("modulate", "sample the PM waveform of a model");
    add_frontend_flags(modulate, true);
    modulate->callback([&fe] {
        const SincSeries s = load_model_text(fe.model);
        const auto grid = nyquist_grid(pi / s.t_nyq, fe.of, fe.half_width);
        const PmConfig pm{2.0 * pi * fe.carrier_hz, fe.mu, fe.lambda};
        auto stream = pm_modulate(SignalModel(s), pm, grid);
        stream = post_chain(std::move(stream), fe.noise_sigma, fe.noise_family, fe.noise_seed,
                            fe.bits, -fe.lambda, fe.lambda);
        write_stream_csv(fe.out, stream);
    });

    auto* fold = app.add_subcommand("fold", "sample the modulo-folded model");
    add_frontend_flags(fold, false);
    fold->callback([&fe] {
        const SincSeries s = load_model_text(fe.model);
        const auto grid = nyquist_grid(pi / s.t_nyq, fe.of, fe.half_width);
        auto stream = modulo_fold(SignalModel(s), fe.lambda, grid);
        stream = post_chain(std::move(stream), fe.noise_sigma, fe.noise_family, fe.noise_seed,
                            fe.bits, -fe.lambda, fe.lambda);
        write_stream_csv(fe.out, stream);
    });

    // ---------------------------------------------------------------- demod
    struct {
        std::string in;
        std::string method;
        double mu = 1.0;
        double lambda = 0.0;  // 0 = take from the stream header
        double carrier_hz = 0.0;
        double noise_bound = 0.0;
        bool denoise = false;
        bool unwrap = false;
        double bandwidth_hz = 0.0;
        double derivative_bound = 0.0;
        std::string out;
    } dm;
    auto* demod = app.add_subcommand("demod", "recover true samples from a PM stream");
    demod->add_option("--in", dm.in, "input stream CSV")->required();
    demod->add_option("--method", dm.method, "asin or hilbert")
        ->required()
        ->check(CLI::IsMember({"asin", "hilbert"}));
    demod->add_option("--mu", dm.mu, "modulation index")->required();
    demod->add_option("--lambda", dm.lambda, "override the stream header half-range");
    demod->add_option("--carrier-hz", dm.carrier_hz, "carrier frequency, Hz");
    demod->add_option("--noise-bound", dm.noise_bound,
                      "asin denominator widening (3*sigma for Gaussian noise)");
    demod->add_flag("--denoise", dm.denoise, "hilbert: carrier-band filter first");
    demod->add_flag("--unwrap", dm.unwrap, "hilbert: unwrap phase past the principal range");
    demod->add_option("--bandwidth-hz", dm.bandwidth_hz,
                      "hilbert: signal bandwidth omega_m / 2 pi, Hz");
    demod->add_option("--derivative-bound", dm.derivative_bound,
                      "hilbert: max |f'| for the Carson band");
    demod->add_option("--out", dm.out, "recovered stream CSV")->required();
    demod->callback([&dm] {
        auto stream = load_stream_csv(dm.in);
        const double lambda = dm.lambda > 0 ? dm.lambda : stream.lambda;
        if (!(lambda > 0))
            throw std::invalid_argument("no half-range: pass --lambda or a stream with one");
        const PmConfig pm{2.0 * pi * dm.carrier_hz, dm.mu, lambda};
        DemodReport rep;
        if (dm.method == "asin") {
            rep = dpd_asin(stream, pm, dm.noise_bound);
        } else {
            if (!(dm.bandwidth_hz > 0))
                throw std::invalid_argument("--method hilbert needs --bandwidth-hz");
            rep = dpd_hilbert(stream, pm, 2.0 * pi * dm.bandwidth_hz, dm.denoise,
                              dm.derivative_bound, dm.unwrap);
        }
        SampleStream recovered;
        recovered.grid = stream.grid;
        recovered.values = rep.recovered;
        recovered.stage = Stage::clean;
        write_stream_csv(dm.out, recovered);
        std::cout << "method=" << rep.method << " clamp_count=" << rep.clamp_count
                  << " carrier_ok=" << (rep.carrier_ok ? 1 : 0);
        if (rep.effective_bandwidth > 0)
            std::cout << " effective_bandwidth=" << rep.effective_bandwidth;
        std::cout << "\n";
        if (!rep.warning.empty()) std::cerr << "warning: " << rep.warning << "\n";
    });

    // --------------------------------------------------------------- unfold
    struct {
        std::string in;
        std::string order = "auto";
        double beta = 1.0;
        double lambda = 0.0;
        double of = 0.0;
        std::string out;
    } uf;
    auto* unfold = app.add_subcommand("unfold", "HoD-unfold a modulo stream");
    unfold->add_option("--in", uf.in, "input folded stream CSV")->required();
    unfold->add_option("--order", uf.order, "difference order, auto or an integer >= 1");
    unfold->add_option("--beta", uf.beta, "known amplitude bound")->required();
    unfold->add_option("--lambda", uf.lambda, "override the stream header half-range");
    unfold->add_option("--of", uf.of, "oversampling factor, needed for --order auto");
    unfold->add_option("--out", uf.out, "recovered stream CSV")->required();
    unfold->callback([&uf] {
        auto stream = load_stream_csv(uf.in);
        const double lambda = uf.lambda > 0 ? uf.lambda : stream.lambda;
        if (!(lambda > 0))
            throw std::invalid_argument("no half-range: pass --lambda or a stream with one");
        int order = 0;
        if (uf.order == "auto") {
            if (!(uf.of >= 1))
                throw std::invalid_argument("--order auto needs --of >= 1");
            std::string warn;
            order = choose_order(uf.of, uf.beta, lambda, 0.0, &warn);
            if (!warn.empty()) std::cerr << "warning: " << warn << "\n";
        } else {
            order = static_cast<int>(detail::parse_int_field("--order", uf.order));
        }
        SampleStream recovered;
        recovered.grid = stream.grid;
        recovered.values = hod_unfold(stream, {order, lambda, uf.beta, true});
        recovered.stage = Stage::clean;
        write_stream_csv(uf.out, recovered);
        std::cout << "order=" << order << "\n";
    });

    // ---------------------------------------------------------------- sweep
    struct {
        std::string config;
        std::string out;
        int trials = 0;
        std::uint64_t seed = 0;
    } sw;
    auto* sweep = app.add_subcommand("sweep", "run a Monte-Carlo NMSE sweep from a config");
    sweep->add_option("--config", sw.config, "ini-style experiment config")->required();
    sweep->add_option("--out", sw.out, "results CSV (overrides sweep.out)");
    sweep->add_option("--trials", sw.trials, "override the trial count");
    auto* seed_opt = sweep->add_option("--seed", sw.seed, "override the master seed");
    sweep->callback([&sw, seed_opt] {
        ExperimentSpec spec = load_experiment_spec(sw.config);
        if (sw.trials > 0) spec.trials = sw.trials;
        if (seed_opt->count() > 0) spec.master_seed = sw.seed;
        const std::string out = !sw.out.empty() ? sw.out : spec.out_path;
        if (out.empty())
            throw std::invalid_argument("no output path: pass --out or set sweep.out");
        const auto records = run_sweep_to_files(spec, out);
        std::cout << format_summary_csv(summarize(records));
        std::cerr << "wrote " << records.size() << " rows to " << out << " and "
                  << summary_path_for(out) << "\n";
    });

    // ------------------------------------------------------------------ ecg
    struct {
        std::string record;
        std::string path = "pm";
        int bits = 8;
        double a_bl = 0.5;
        double f_bl = 0.07;
        double rate = 500.0;
    } ecg;
    auto* ecg_cmd = app.add_subcommand("ecg", "baseline-wander + quantization study");
    ecg_cmd->add_option("--record", ecg.record,
                        "record CSV (omit to use the built-in synthetic record)");
    ecg_cmd->add_option("--path", ecg.path, "pm or direct")
        ->check(CLI::IsMember({"pm", "direct"}));
    ecg_cmd->add_option("--bits", ecg.bits, "quantizer bits");
    ecg_cmd->add_option("--a-bl", ecg.a_bl, "baseline wander amplitude");
    ecg_cmd->add_option("--f-bl", ecg.f_bl, "baseline wander frequency, Hz");
    ecg_cmd->add_option("--rate", ecg.rate, "expected record rate, Hz");
    ecg_cmd->callback([&ecg] {
        EcgStudyConfig cfg;
        cfg.record_path = ecg.record;
        cfg.a_bl = ecg.a_bl;
        cfg.f_bl_hz = ecg.f_bl;
        cfg.bits = ecg.bits;
        cfg.pm_path = ecg.path == "pm";
        cfg.expected_rate_hz = ecg.rate;
        const auto s = run_ecg(cfg);
        std::cout.precision(10);
        std::cout << "path=" << s.path << " nmse_db=" << s.nmse_db
                  << " clamp_count=" << s.clamp_count << " clip_count=" << s.clip_count
                  << " samples=" << s.samples << " rate_hz=" << s.rate_hz << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints help/version or the error
        return code == 0 ? 0 : 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    if (app.get_subcommands().empty()) std::cout << app.help();
    return 0;
}
