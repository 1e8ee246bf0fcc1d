#include "psig/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "psig/errors.hpp"

namespace psig {

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool parse_double(std::string_view s, double& out) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

}  // namespace

void write_series_csv(std::ostream& out, const TimeSeries& series) {
    out << "t,value\n";
    for (std::size_t i = 0; i < series.size(); ++i)
        out << format_double(static_cast<double>(i) * series.dt()) << ',' << format_double(series[i]) << '\n';
}

TimeSeries read_series_csv(std::istream& in) {
    std::vector<double> times;
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view row = trim(line);
        if (row.empty()) continue;
        const auto comma = row.find(',');
        if (!header_seen && times.empty()) {
            header_seen = true;
            if (comma != std::string_view::npos && trim(row.substr(0, comma)) == "t" &&
                trim(row.substr(comma + 1)) == "value")
                continue;
            throw IoError("line " + std::to_string(line_no) + ": expected header 't,value'");
        }
        double t = 0.0;
        double v = 0.0;
        if (comma == std::string_view::npos || !parse_double(row.substr(0, comma), t) ||
            !parse_double(row.substr(comma + 1), v))
            throw IoError("line " + std::to_string(line_no) + ": expected two numeric fields 't,value'");
        if (!std::isfinite(t) || !std::isfinite(v))
            throw IoError("line " + std::to_string(line_no) + ": non-finite value");
        times.push_back(t);
        values.push_back(v);
    }
    if (values.empty()) throw IoError("signal CSV contains no samples");
    double dt = 1.0;
    if (times.size() >= 2) {
        dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
        if (!(dt > 0.0)) throw IoError("signal CSV time column must be increasing");
    }
    return TimeSeries(std::move(values), dt);
}

TimeSeries read_series_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    return read_series_csv(in);
}

// ---------------------------------------------------------------------------
// Diagrams, grids, curves, estimates

namespace {

template <class T>
T get_field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw IoError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const Json::exception& e) {
        throw IoError(std::string("field '") + key + "' has the wrong type: " + e.what());
    }
}

template <class T>
T get_or(const Json& j, const char* key, T fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    return get_field<T>(j, key);
}

}  // namespace

Json to_json(const PersistenceDiagram& d) {
    Json pts = Json::array();
    for (const auto& p : d.points()) pts.push_back(Json::array({p.birth, p.death}));
    return Json{{"points", pts}};
}

PersistenceDiagram diagram_from_json(const Json& j) {
    const auto raw = get_field<std::vector<std::vector<double>>>(j, "points");
    std::vector<DiagramPoint> pts;
    pts.reserve(raw.size());
    for (const auto& p : raw) {
        if (p.size() != 2) throw IoError("diagram point must be a [birth, death] pair");
        pts.push_back({p[0], p[1]});
    }
    try {
        return PersistenceDiagram(std::move(pts));
    } catch (const InputError& e) {
        throw IoError(std::string("invalid diagram: ") + e.what());
    }
}

Json to_json(const EvaluationGrid& g) {
    Json axes = Json::array();
    for (const auto& a : g.axes()) axes.push_back(Json{{"start", a.start}, {"stop", a.stop}, {"count", a.count}});
    return Json{{"dim", g.dim()}, {"axes", axes}};
}

EvaluationGrid grid_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("axes") || !j.at("axes").is_array()) throw IoError("grid needs an 'axes' array");
    std::vector<GridAxis> axes;
    for (const auto& a : j.at("axes"))
        axes.push_back({get_field<double>(a, "start"), get_field<double>(a, "stop"), get_field<std::size_t>(a, "count")});
    if (j.contains("dim") && get_field<int>(j, "dim") != static_cast<int>(axes.size()))
        throw IoError("grid 'dim' does not match the number of axes");
    try {
        return EvaluationGrid(std::move(axes));
    } catch (const InputError& e) {
        throw IoError(std::string("invalid grid: ") + e.what());
    }
}

Json to_json(const FunctionalCurve& c) { return Json{{"grid", to_json(c.grid)}, {"values", c.values}}; }

FunctionalCurve curve_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("grid")) throw IoError("curve needs a 'grid'");
    try {
        return FunctionalCurve(grid_from_json(j.at("grid")), get_field<std::vector<double>>(j, "values"));
    } catch (const InputError& e) {
        throw IoError(std::string("invalid curve: ") + e.what());
    }
}

void write_curve_csv(std::ostream& out, const FunctionalCurve& c) {
    out << (c.grid.dim() == 1 ? "t,value\n" : "x,y,value\n");
    for (std::size_t i = 0; i < c.values.size(); ++i) {
        const auto t = c.grid.node(i);
        out << format_double(t[0]) << ',';
        if (c.grid.dim() == 2) out << format_double(t[1]) << ',';
        out << format_double(c.values[i]) << '\n';
    }
}

Json to_json(const SignatureEstimate& e) {
    return Json{{"grid", to_json(e.mean.grid)},   {"mean", e.mean.values},
                {"lower", e.lower.values},        {"upper", e.upper.values},
                {"level", e.alpha},               {"band_kind", to_string(e.band_kind)},
                {"replicates", e.replicates}};
}

SignatureEstimate estimate_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("grid") || !j.contains("mean")) throw IoError("estimate needs 'grid' and 'mean'");
    try {
        const auto grid = grid_from_json(j.at("grid"));
        return SignatureEstimate{FunctionalCurve(grid, get_field<std::vector<double>>(j, "mean")),
                                 FunctionalCurve(grid, get_field<std::vector<double>>(j, "lower")),
                                 FunctionalCurve(grid, get_field<std::vector<double>>(j, "upper")),
                                 get_field<double>(j, "level"), get_field<std::size_t>(j, "replicates"),
                                 band_kind_from_string(get_field<std::string>(j, "band_kind"))};
    } catch (const InputError& e) {
        throw IoError(std::string("invalid estimate: ") + e.what());
    }
}

void write_estimate_csv(std::ostream& out, const SignatureEstimate& e) {
    out << (e.mean.grid.dim() == 1 ? "t,mean,lower,upper\n" : "x,y,mean,lower,upper\n");
    for (std::size_t i = 0; i < e.mean.values.size(); ++i) {
        const auto t = e.mean.grid.node(i);
        out << format_double(t[0]) << ',';
        if (e.mean.grid.dim() == 2) out << format_double(t[1]) << ',';
        out << format_double(e.mean.values[i]) << ',' << format_double(e.lower.values[i]) << ','
            << format_double(e.upper.values[i]) << '\n';
    }
}

// ---------------------------------------------------------------------------
// Configuration documents

Json to_json(const TruncationSpec& s) { return Json{{"epsilon", s.epsilon}, {"p", s.p}}; }

TruncationSpec truncation_from_json(const Json& j) {
    TruncationSpec s{get_or(j, "epsilon", 0.2), get_or(j, "p", 1.0)};
    s.validate();
    return s;
}

Json to_json(const KernelSpec& k) {
    const auto& w = k.window();
    if (const auto* img = std::get_if<ImageKernel>(&k.variant()))
        return Json{{"kind", "image"}, {"proj_lower", w.lower}, {"proj_upper", w.upper},
                    {"sigma", img->sigma}, {"r", img->r}};
    return Json{{"kind", "silhouette"}, {"proj_lower", w.lower}, {"proj_upper", w.upper}};
}

KernelSpec kernel_from_json(const Json& j) {
    const auto kind = get_or<std::string>(j, "kind", "silhouette");
    const ProjectionWindow w{get_or(j, "proj_lower", -9.0), get_or(j, "proj_upper", 9.0)};
    if (kind == "silhouette") return SilhouetteKernel{w};
    if (kind == "image") return ImageKernel{w, get_or(j, "sigma", 1.0), get_or(j, "r", 1.1)};
    throw InputError("unknown kernel kind '" + kind + "'");
}

Json to_json(const WindowConfig& w) { return Json{{"window_len", w.window_len}, {"stride", w.stride}}; }

WindowConfig window_from_json(const Json& j) {
    return WindowConfig{get_or<std::size_t>(j, "window_len", 150), get_or<std::size_t>(j, "stride", 1)};
}

Json to_json(const BootstrapConfig& b) {
    return Json{{"replicates", b.replicates}, {"block_len", b.block_len}, {"alpha", b.alpha},
                {"seed", b.seed.value},       {"band_kind", to_string(b.band)}};
}

BootstrapConfig bootstrap_from_json(const Json& j) {
    BootstrapConfig b;
    b.replicates = get_or<std::size_t>(j, "replicates", 200);
    b.block_len = get_or<std::size_t>(j, "block_len", 100);
    b.alpha = get_or(j, "alpha", 0.01);
    b.seed = RngSeed{get_or<std::uint64_t>(j, "seed", 0)};
    b.band = band_kind_from_string(get_or<std::string>(j, "band_kind", "pointwise"));
    return b;
}

Json to_json(const PeriodicTemplate& t) {
    return std::visit(
        [](const auto& v) -> Json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, PaperPhi>)
                return Json{{"kind", "paper_phi"}, {"theta", v.theta}};
            else if constexpr (std::is_same_v<T, Sine>)
                return Json{{"kind", "sine"}, {"frequency_periods", v.frequency_periods}};
            else
                return Json{{"kind", "custom"}, {"samples", v.samples}};
        },
        t.variant());
}

PeriodicTemplate template_from_json(const Json& j) {
    const auto kind = get_or<std::string>(j, "kind", "paper_phi");
    if (kind == "paper_phi") return PaperPhi{get_or(j, "theta", 1.0)};
    if (kind == "sine") return Sine{get_or(j, "frequency_periods", 1)};
    if (kind == "custom") return CustomTemplate{get_field<std::vector<double>>(j, "samples")};
    throw InputError("unknown template kind '" + kind + "'");
}

Json to_json(const ReparamModel& r) {
    Json j;
    if (const auto* m = std::get_if<MarkovTruncGauss>(&r.velocity))
        j = Json{{"kind", "markov"}, {"v_min", m->v_min}, {"v_max", m->v_max}, {"eta", m->eta}};
    else
        j = Json{{"kind", "iid"}, {"v_min", r.v_min()}, {"v_max", r.v_max()}};
    j["h"] = r.h;
    if (const auto* f = std::get_if<FixedStart>(&r.gamma0))
        j["gamma0"] = Json{{"fixed", f->x0}};
    else
        j["gamma0"] = "uniform";
    return j;
}

ReparamModel reparam_from_json(const Json& j) {
    ReparamModel r;
    const auto kind = get_or<std::string>(j, "kind", "markov");
    const double lo = get_or(j, "v_min", 0.5);
    const double hi = get_or(j, "v_max", 1.5);
    if (kind == "markov")
        r.velocity = MarkovTruncGauss{lo, hi, get_or(j, "eta", 0.2)};
    else if (kind == "iid")
        r.velocity = IidUniform{lo, hi};
    else
        throw InputError("unknown reparam kind '" + kind + "'");
    r.h = get_or(j, "h", 0.02);
    if (j.contains("gamma0")) {
        const auto& g = j.at("gamma0");
        if (g.is_string() && g.get<std::string>() == "uniform")
            r.gamma0 = UniformFrac{};
        else if (g.is_object() && g.contains("fixed"))
            r.gamma0 = FixedStart{get_field<double>(g, "fixed")};
        else
            throw InputError("gamma0 must be \"uniform\" or {\"fixed\": x0}");
    }
    r.validate();
    return r;
}

Json to_json(const NoiseModel& n) { return Json{{"sigma", n.sigma}, {"tau", n.tau}}; }

NoiseModel noise_from_json(const Json& j) {
    NoiseModel n{get_or(j, "sigma", 0.1), get_or(j, "tau", 0.1)};
    n.validate();
    return n;
}

Json to_json(const SimulationConfig& c) {
    return Json{{"template", to_json(c.templ)}, {"reparam", to_json(c.reparam)}, {"noise", to_json(c.noise)},
                {"duration", c.duration},       {"rate", c.rate},                 {"seed", c.seed.value}};
}

SimulationConfig simulation_from_json(const Json& j) {
    SimulationConfig c;
    if (j.contains("template")) c.templ = template_from_json(j.at("template"));
    if (j.contains("reparam")) c.reparam = reparam_from_json(j.at("reparam"));
    if (j.contains("noise")) c.noise = noise_from_json(j.at("noise"));
    c.duration = get_or(j, "duration", 30.0);
    c.rate = get_or(j, "rate", 50.0);
    c.seed = RngSeed{get_or<std::uint64_t>(j, "seed", 0)};
    return c;
}

// ---------------------------------------------------------------------------
// Files

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw IoError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void write_json_file(const std::filesystem::path& path, const Json& j) { write_text_file(path, j.dump(2) + "\n"); }

}  // namespace psig
