#include "psig/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <CLI11.hpp>

#include "psig/errors.hpp"
#include "psig/estimation.hpp"
#include "psig/io.hpp"
#include "psig/validation.hpp"

namespace psig::cli {

namespace {

using Pointer = Json::json_pointer;

Json base_document(const std::string& config_path) {
    if (config_path.empty()) return Json::object();
    Json j = read_json_file(config_path);
    // Artifacts carry their run config under "config"; accept those directly.
    if (j.is_object() && j.contains("config")) j = j.at("config");
    if (!j.is_object()) throw IoError("config '" + config_path + "' must be a JSON object");
    return j;
}

template <class T>
void patch(Json& doc, const CLI::Option* opt, const char* pointer, const T& value) {
    if (opt->count() > 0) doc[Pointer(pointer)] = value;
}

Json section(const Json& doc, const char* key) {
    return doc.contains(key) ? doc.at(key) : Json::object();
}

void emit_text(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-")
        out << text;
    else
        write_text_file(path, text);
}

void emit_json(const std::string& path, const Json& j, std::ostream& out) { emit_text(path, j.dump(2) + "\n", out); }

// ---------------------------------------------------------------------------
// simulate

struct SimulateFlags {
    std::string config;
    std::string out;
    std::string meta;
    std::string templ = "paper_phi";
    double theta = 1.0;
    int periods = 1;
    std::string template_csv;
    std::string reparam = "markov";
    double v_min = 0.5;
    double v_max = 1.5;
    double eta = 0.2;
    std::string gamma0 = "uniform";
    double sigma = 0.1;
    double tau = 0.1;
    double duration = 30.0;
    double rate = 50.0;
    std::uint64_t seed = 0;
    std::vector<CLI::Option*> opts;
};

void add_simulate(CLI::App& app, SimulateFlags& f) {
    app.add_option("--config", f.config, "JSON run config (flags override it)");
    app.add_option("--out", f.out, "signal CSV (stdout if omitted)");
    app.add_option("--meta", f.meta, "metadata JSON with the config echo");
    f.opts = {
        app.add_option("--template", f.templ, "paper_phi | sine")->check(CLI::IsMember({"paper_phi", "sine"})),
        app.add_option("--theta", f.theta, "paper_phi shape parameter"),
        app.add_option("--periods", f.periods, "sine: periods per unit of gamma"),
        app.add_option("--template-csv", f.template_csv, "custom template: one period as a t,value CSV"),
        app.add_option("--reparam", f.reparam, "markov | iid")->check(CLI::IsMember({"markov", "iid"})),
        app.add_option("--v-min", f.v_min, "velocity lower bound"),
        app.add_option("--v-max", f.v_max, "velocity upper bound"),
        app.add_option("--eta", f.eta, "markov kernel scale"),
        app.add_option("--gamma0", f.gamma0, "'uniform' or a fixed starting phase"),
        app.add_option("--sigma", f.sigma, "noise standard deviation"),
        app.add_option("--tau", f.tau, "noise correlation length (seconds)"),
        app.add_option("--duration", f.duration, "seconds"),
        app.add_option("--rate", f.rate, "samples per second"),
        app.add_option("--seed", f.seed, "RNG seed"),
    };
}

int cmd_simulate(const SimulateFlags& f, std::ostream& out) {
    Json doc = base_document(f.config);
    Json sim = section(doc, "simulation");
    const auto& o = f.opts;
    if (o[0]->count() > 0) {
        sim["template"] = Json{{"kind", f.templ}};
        if (f.templ == "paper_phi") sim["template"]["theta"] = f.theta;
        if (f.templ == "sine") sim["template"]["frequency_periods"] = f.periods;
    }
    patch(sim, o[1], "/template/theta", f.theta);
    patch(sim, o[2], "/template/frequency_periods", f.periods);
    if (o[3]->count() > 0) {
        const auto one_period = read_series_csv(std::filesystem::path(f.template_csv));
        const auto v = one_period.values();
        sim["template"] = Json{{"kind", "custom"}, {"samples", std::vector<double>(v.begin(), v.end())}};
    }
    patch(sim, o[4], "/reparam/kind", f.reparam);
    patch(sim, o[5], "/reparam/v_min", f.v_min);
    patch(sim, o[6], "/reparam/v_max", f.v_max);
    patch(sim, o[7], "/reparam/eta", f.eta);
    if (o[8]->count() > 0) {
        if (f.gamma0 == "uniform") {
            sim["reparam"]["gamma0"] = "uniform";
        } else {
            double x0 = 0.0;
            std::istringstream in(f.gamma0);
            if (!(in >> x0) || !in.eof()) throw InputError("--gamma0 must be 'uniform' or a number");
            sim["reparam"]["gamma0"] = Json{{"fixed", x0}};
        }
    }
    patch(sim, o[9], "/noise/sigma", f.sigma);
    patch(sim, o[10], "/noise/tau", f.tau);
    patch(sim, o[11], "/duration", f.duration);
    patch(sim, o[12], "/rate", f.rate);
    patch(sim, o[13], "/seed", f.seed);

    auto cfg = simulation_from_json(sim);
    if (cfg.rate > 0.0) cfg.reparam.h = 1.0 / cfg.rate;
    const auto series = simulate_signal(cfg);

    std::ostringstream csv;
    write_series_csv(csv, series);
    emit_text(f.out, csv.str(), out);
    if (!f.meta.empty()) {
        const Json meta{{"config", {{"command", "simulate"}, {"simulation", to_json(cfg)}}},
                        {"num_samples", series.size()},
                        {"dt", series.dt()}};
        write_json_file(f.meta, meta);
    }
    return exit_ok;
}

// ---------------------------------------------------------------------------
// diagram

struct DiagramFlags {
    std::string in;
    std::string out;
};

int cmd_diagram(const DiagramFlags& f, std::ostream& out) {
    const auto series = read_series_csv(std::filesystem::path(f.in));
    Json j = to_json(sublevel_diagram(series));
    j["config"] = Json{{"command", "diagram"}};
    emit_json(f.out, j, out);
    return exit_ok;
}

// ---------------------------------------------------------------------------
// signature / bootstrap

struct SignatureFlags {
    std::string config;
    std::string in;
    std::string out;
    std::string csv;
    std::size_t window = 150;
    std::size_t stride = 1;
    double epsilon = 0.2;
    double p = 1.0;
    std::string kernel = "silhouette";
    double proj_lower = -9.0;
    double proj_upper = 9.0;
    double img_sigma = 1.0;
    double img_r = 1.1;
    std::size_t grid_count = 0;
    std::vector<CLI::Option*> opts;
};

void add_signature(CLI::App& app, SignatureFlags& f) {
    app.add_option("--config", f.config, "JSON run config (flags override it)");
    app.add_option("--in", f.in, "signal CSV")->required();
    app.add_option("--out", f.out, "output JSON (stdout if omitted)");
    app.add_option("--csv", f.csv, "also write a CSV table");
    f.opts = {
        app.add_option("--window", f.window, "window length M in samples"),
        app.add_option("--stride", f.stride, "window stride in samples"),
        app.add_option("--epsilon", f.epsilon, "truncation level"),
        app.add_option("--p", f.p, "persistence exponent"),
        app.add_option("--kernel", f.kernel, "silhouette | image")->check(CLI::IsMember({"silhouette", "image"})),
        app.add_option("--proj-lower", f.proj_lower, "projection window lower end L"),
        app.add_option("--proj-upper", f.proj_upper, "projection window upper end U"),
        app.add_option("--img-sigma", f.img_sigma, "image kernel bandwidth"),
        app.add_option("--img-r", f.img_r, "image kernel exponent"),
        app.add_option("--grid-count", f.grid_count, "grid nodes per axis"),
    };
}

Json signature_document(const SignatureFlags& f) {
    Json doc = base_document(f.config);
    const auto& o = f.opts;
    patch(doc, o[0], "/window/window_len", f.window);
    patch(doc, o[1], "/window/stride", f.stride);
    patch(doc, o[2], "/truncation/epsilon", f.epsilon);
    patch(doc, o[3], "/truncation/p", f.p);
    patch(doc, o[4], "/kernel/kind", f.kernel);
    patch(doc, o[5], "/kernel/proj_lower", f.proj_lower);
    patch(doc, o[6], "/kernel/proj_upper", f.proj_upper);
    patch(doc, o[7], "/kernel/sigma", f.img_sigma);
    patch(doc, o[8], "/kernel/r", f.img_r);
    // Grid flags and kernel flags both change the default grid; an explicit grid
    // in the config only survives when neither is given.
    const bool regrid = std::any_of(o.begin() + 4, o.end(), [](const CLI::Option* x) { return x->count() > 0; });
    if (regrid) doc.erase("grid");
    patch(doc, o[9], "/grid_count", f.grid_count);
    return doc;
}

struct ResolvedSignature {
    WindowConfig window;
    SignatureSpec spec;
};

ResolvedSignature resolve_signature(const Json& doc) {
    ResolvedSignature r;
    r.window = window_from_json(section(doc, "window"));
    r.spec.truncation = truncation_from_json(section(doc, "truncation"));
    r.spec.kernel = kernel_from_json(section(doc, "kernel"));
    if (doc.contains("grid"))
        r.spec.grid = grid_from_json(doc.at("grid"));
    else if (doc.contains("grid_count"))
        r.spec.grid = EvaluationGrid::for_kernel(r.spec.kernel, doc.at("grid_count").get<std::size_t>());
    else
        r.spec.grid = EvaluationGrid::for_kernel(r.spec.kernel);
    if (r.spec.grid.dim() != r.spec.kernel.dim()) throw InputError("grid dimension does not match the kernel");
    return r;
}

Json signature_echo(const char* command, const ResolvedSignature& r) {
    return Json{{"command", command},
                {"window", to_json(r.window)},
                {"truncation", to_json(r.spec.truncation)},
                {"kernel", to_json(r.spec.kernel)},
                {"grid", to_json(r.spec.grid)}};
}

int cmd_signature(const SignatureFlags& f, std::ostream& out) {
    const auto r = resolve_signature(signature_document(f));
    const auto series = read_series_csv(std::filesystem::path(f.in));
    const auto curve = empirical_signature(series, r.window, r.spec);
    Json j = to_json(curve);
    j["config"] = signature_echo("signature", r);
    j["num_windows"] = num_windows(series.size(), r.window);
    emit_json(f.out, j, out);
    if (!f.csv.empty()) {
        std::ostringstream s;
        write_curve_csv(s, curve);
        write_text_file(f.csv, s.str());
    }
    return exit_ok;
}

struct BootstrapFlags {
    SignatureFlags sig;
    std::size_t replicates = 200;
    std::size_t block_len = 100;
    double alpha = 0.01;
    std::string band = "pointwise";
    std::uint64_t seed = 0;
    std::vector<CLI::Option*> opts;
};

void add_bootstrap(CLI::App& app, BootstrapFlags& f) {
    add_signature(app, f.sig);
    f.opts = {
        app.add_option("--replicates", f.replicates, "bootstrap replicates B"),
        app.add_option("--block-len", f.block_len, "block length L in windows (default floor(n^0.4))"),
        app.add_option("--alpha", f.alpha, "band level: two-sided miscoverage"),
        app.add_option("--band", f.band, "pointwise | uniform")->check(CLI::IsMember({"pointwise", "uniform"})),
        app.add_option("--seed", f.seed, "RNG seed"),
    };
}

int cmd_bootstrap(const BootstrapFlags& f, std::ostream& out) {
    Json doc = signature_document(f.sig);
    const auto& o = f.opts;
    patch(doc, o[0], "/bootstrap/replicates", f.replicates);
    patch(doc, o[1], "/bootstrap/block_len", f.block_len);
    patch(doc, o[2], "/bootstrap/alpha", f.alpha);
    patch(doc, o[3], "/bootstrap/band_kind", f.band);
    patch(doc, o[4], "/bootstrap/seed", f.seed);

    const auto r = resolve_signature(doc);
    const auto series = read_series_csv(std::filesystem::path(f.sig.in));
    const Json bdoc = section(doc, "bootstrap");
    auto bcfg = bootstrap_from_json(bdoc);
    const std::size_t nw = num_windows(series.size(), r.window);
    if (!bdoc.contains("block_len")) bcfg.block_len = default_block_len(nw);

    const auto estimate = bootstrap_bands(series, r.window, r.spec, bcfg);
    Json j = to_json(estimate);
    Json echo = signature_echo("bootstrap", r);
    echo["bootstrap"] = to_json(bcfg);
    j["config"] = echo;
    j["num_windows"] = nw;
    emit_json(f.sig.out, j, out);
    if (!f.sig.csv.empty()) {
        std::ostringstream s;
        write_estimate_csv(s, estimate);
        write_text_file(f.sig.csv, s.str());
    }
    return exit_ok;
}

// ---------------------------------------------------------------------------
// validate / plot

struct ValidateFlags {
    std::vector<std::string> suites{"all"};
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_validate(const ValidateFlags& f, std::ostream& out) {
    const auto reports = run_validation(f.suites, RngSeed{f.seed});
    Json arr = Json::array();
    bool ok = true;
    for (const auto& r : reports) {
        arr.push_back(to_json(r));
        ok = ok && r.passed();
        out << (r.passed() ? "PASS " : "FAIL ") << r.check_id << ": " << r.trials << " trials, " << r.violations
            << " violations, " << r.skipped << " skipped\n";
    }
    if (!f.out.empty()) write_json_file(f.out, arr);
    return ok ? exit_ok : exit_check_failed;
}

struct PlotFlags {
    std::string in;
    std::string out;
};

int cmd_plot(const PlotFlags& f, std::ostream& out) {
    emit_text(f.out, render_svg(read_json_file(f.in)), out);
    return exit_ok;
}

// ---------------------------------------------------------------------------
// SVG

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

std::string label(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

constexpr double width = 720.0;
constexpr double height = 400.0;
constexpr double left = 64.0;
constexpr double right = 24.0;
constexpr double top = 36.0;
constexpr double bottom = 44.0;

struct Frame {
    double x0, x1, y0, y1;
    [[nodiscard]] double px(double x) const { return left + (x - x0) / (x1 - x0) * (width - left - right); }
    [[nodiscard]] double py(double y) const { return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom); }
};

void axes(std::ostringstream& s, const Frame& f, const std::string& xlabel, const std::string& ylabel) {
    s << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(width - left - right)
      << "\" height=\"" << num(height - top - bottom) << "\" fill=\"none\" stroke=\"#333\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = f.x0 + (f.x1 - f.x0) * i / 4.0;
        const double yv = f.y0 + (f.y1 - f.y0) * i / 4.0;
        s << "<text x=\"" << num(f.px(xv)) << "\" y=\"" << num(height - bottom + 16)
          << "\" text-anchor=\"middle\">" << label(xv) << "</text>\n";
        s << "<text x=\"" << num(left - 6) << "\" y=\"" << num(f.py(yv) + 4) << "\" text-anchor=\"end\">" << label(yv)
          << "</text>\n";
    }
    s << "<text x=\"" << num((left + width - right) / 2) << "\" y=\"" << num(height - 8)
      << "\" text-anchor=\"middle\">" << xlabel << "</text>\n";
    s << "<text x=\"14\" y=\"" << num((top + height - bottom) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
      << num((top + height - bottom) / 2) << ")\">" << ylabel << "</text>\n";
}

std::string polyline(const Frame& f, const FunctionalCurve& c) {
    std::string pts;
    for (std::size_t i = 0; i < c.values.size(); ++i) {
        if (i > 0) pts += ' ';
        pts += num(f.px(c.grid.node(i)[0])) + "," + num(f.py(c.values[i]));
    }
    return pts;
}

std::string line_plot(const std::string& title, const FunctionalCurve& main, const FunctionalCurve* lower,
                      const FunctionalCurve* upper) {
    const auto& axis = main.grid.axes()[0];
    double lo = *std::min_element(main.values.begin(), main.values.end());
    double hi = *std::max_element(main.values.begin(), main.values.end());
    if (lower) lo = std::min(lo, *std::min_element(lower->values.begin(), lower->values.end()));
    if (upper) hi = std::max(hi, *std::max_element(upper->values.begin(), upper->values.end()));
    const double pad = hi > lo ? 0.05 * (hi - lo) : 1.0;
    const Frame f{axis.start, axis.stop, lo - pad, hi + pad};

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<text x=\"" << num(width / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">" << title
      << "</text>\n";
    if (lower && upper) {
        std::string pts;
        for (std::size_t i = 0; i < upper->values.size(); ++i)
            pts += num(f.px(upper->grid.node(i)[0])) + "," + num(f.py(upper->values[i])) + " ";
        for (std::size_t i = lower->values.size(); i-- > 0;)
            pts += num(f.px(lower->grid.node(i)[0])) + "," + num(f.py(lower->values[i])) + (i > 0 ? " " : "");
        s << "<polygon points=\"" << pts << "\" fill=\"#9ecae1\" fill-opacity=\"0.5\" stroke=\"none\"/>\n";
        s << "<polyline points=\"" << polyline(f, *lower) << "\" fill=\"none\" stroke=\"#3182bd\" stroke-width=\"0.8\"/>\n";
        s << "<polyline points=\"" << polyline(f, *upper) << "\" fill=\"none\" stroke=\"#3182bd\" stroke-width=\"0.8\"/>\n";
    }
    s << "<polyline points=\"" << polyline(f, main) << "\" fill=\"none\" stroke=\"#08306b\" stroke-width=\"1.6\"/>\n";
    axes(s, f, "t", "signature");
    s << "</svg>\n";
    return s.str();
}

std::string heatmap(const std::string& title, const FunctionalCurve& c) {
    const auto ax = c.grid.axes();
    const Frame f{ax[0].start, ax[0].stop, ax[1].start, ax[1].stop};
    const double lo = *std::min_element(c.values.begin(), c.values.end());
    const double hi = *std::max_element(c.values.begin(), c.values.end());
    const double cw = (width - left - right) / static_cast<double>(ax[0].count);
    const double ch = (height - top - bottom) / static_cast<double>(ax[1].count);

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<text x=\"" << num(width / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">" << title
      << "</text>\n";
    for (std::size_t i = 0; i < ax[0].count; ++i) {
        for (std::size_t k = 0; k < ax[1].count; ++k) {
            const double v = c.values[i * ax[1].count + k];
            const double u = hi > lo ? (v - lo) / (hi - lo) : 0.0;
            const auto mix = [u](int a, int b) { return static_cast<int>(std::lround(a + (b - a) * u)); };
            s << "<rect x=\"" << num(left + cw * static_cast<double>(i)) << "\" y=\""
              << num(height - bottom - ch * static_cast<double>(k + 1)) << "\" width=\"" << num(cw) << "\" height=\""
              << num(ch) << "\" fill=\"rgb(" << mix(255, 8) << "," << mix(255, 48) << "," << mix(255, 107)
              << ")\"/>\n";
        }
    }
    axes(s, f, "birth", "death");
    s << "</svg>\n";
    return s.str();
}

}  // namespace

std::string render_svg(const Json& artifact) {
    if (!artifact.is_object() || !artifact.contains("grid"))
        throw IoError("plot input must be a curve or estimate document");
    if (artifact.contains("mean")) {
        const auto e = estimate_from_json(artifact);
        if (e.mean.grid.dim() == 2) return heatmap("signature estimate (mean)", e.mean);
        return line_plot("signature estimate, " + to_string(e.band_kind) + " band, alpha " + label(e.alpha), e.mean,
                         &e.lower, &e.upper);
    }
    if (!artifact.contains("values")) throw IoError("plot input must be a curve or estimate document");
    const auto c = curve_from_json(artifact);
    if (c.grid.dim() == 2) return heatmap("signature", c);
    return line_plot("signature", c, nullptr, nullptr);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Topological signatures of periodic-like signals", "psig"};
    app.require_subcommand(1);

    SimulateFlags sim;
    add_simulate(*app.add_subcommand("simulate", "simulate a signal"), sim);
    DiagramFlags dia;
    auto* dcmd = app.add_subcommand("diagram", "sublevel persistence diagram of a signal");
    dcmd->add_option("--in", dia.in, "signal CSV")->required();
    dcmd->add_option("--out", dia.out, "diagram JSON (stdout if omitted)");
    SignatureFlags sig;
    add_signature(*app.add_subcommand("signature", "empirical signature over sliding windows"), sig);
    BootstrapFlags boot;
    add_bootstrap(*app.add_subcommand("bootstrap", "signature with moving-block bootstrap bands"), boot);
    ValidateFlags val;
    auto* vcmd = app.add_subcommand("validate", "run randomized checks");
    vcmd->add_option("--suite", val.suites, "check names or 'all'");
    vcmd->add_option("--seed", val.seed, "RNG seed");
    vcmd->add_option("--out", val.out, "report JSON");
    PlotFlags plot;
    auto* pcmd = app.add_subcommand("plot", "render a curve or estimate as SVG");
    pcmd->add_option("--in", plot.in, "curve or estimate JSON")->required();
    pcmd->add_option("--out", plot.out, "SVG path (stdout if omitted)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "psig: " << e.what() << "\n";
        return exit_usage;
    }

    try {
        const auto* cmd = app.get_subcommands().front();
        const std::string name = cmd->get_name();
        if (name == "simulate") return cmd_simulate(sim, out);
        if (name == "diagram") return cmd_diagram(dia, out);
        if (name == "signature") return cmd_signature(sig, out);
        if (name == "bootstrap") return cmd_bootstrap(boot, out);
        if (name == "validate") return cmd_validate(val, out);
        return cmd_plot(plot, out);
    } catch (const InputError& e) {
        err << "psig: " << e.what() << "\n";
        return exit_usage;
    } catch (const IoError& e) {
        err << "psig: " << e.what() << "\n";
        return exit_io;
    } catch (const Json::exception& e) {
        err << "psig: malformed document: " << e.what() << "\n";
        return exit_io;
    } catch (const NumericError& e) {
        err << "psig: numeric failure: " << e.what() << "\n";
        return exit_numeric;
    } catch (const std::exception& e) {
        err << "psig: " << e.what() << "\n";
        return exit_numeric;
    }
}

}  // namespace psig::cli
