#include "bohm/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace bohm {

std::string format_double(double value) {
    if (value == 0.0) return "0";  // fold negative zero
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

using SectionMap = std::map<std::string, std::map<std::string, std::string>>;

SectionMap tokenize(const std::string& text) {
    SectionMap sections;
    std::istringstream in(text);
    std::string line, current;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError("line " + std::to_string(lineno), "malformed section header");
            current = trim(t.substr(1, t.size() - 2));
            sections[current];
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno), "expected key = value");
        if (current.empty())
            throw ConfigError("line " + std::to_string(lineno), "key outside any [section]");
        const std::string key = trim(t.substr(0, eq));
        sections[current][key] = trim(t.substr(eq + 1));
    }
    return sections;
}

class Reader {
public:
    explicit Reader(const SectionMap& sections) : sections_(sections) {}

    bool has(const std::string& sec, const std::string& key) const {
        const auto s = sections_.find(sec);
        return s != sections_.end() && s->second.count(key) > 0;
    }

    std::string raw(const std::string& sec, const std::string& key) const {
        mark_used(sec, key);
        return sections_.at(sec).at(key);
    }

    double number(const std::string& sec, const std::string& key, double fallback) const {
        if (!has(sec, key)) return fallback;
        return parse_number(sec, key, raw(sec, key));
    }

    int integer(const std::string& sec, const std::string& key, int fallback) const {
        if (!has(sec, key)) return fallback;
        const double v = parse_number(sec, key, raw(sec, key));
        if (v != std::floor(v))
            throw ConfigError(sec + "." + key, "expected an integer");
        return static_cast<int>(v);
    }

    bool boolean(const std::string& sec, const std::string& key, bool fallback) const {
        if (!has(sec, key)) return fallback;
        const std::string v = raw(sec, key);
        if (v == "true") return true;
        if (v == "false") return false;
        throw ConfigError(sec + "." + key, "expected true or false");
    }

    double parse_number(const std::string& sec, const std::string& key,
                        const std::string& v) const {
        try {
            std::size_t pos = 0;
            const double x = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            if (!std::isfinite(x)) throw ConfigError(sec + "." + key, "value must be finite");
            return x;
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError(sec + "." + key, "not a number: '" + v + "'");
        }
    }

    void reject_unknown() const {
        for (const auto& [sec, kv] : sections_) {
            if (!known_sections_.count(sec)) throw ConfigError(sec, "unknown section");
            for (const auto& [key, value] : kv)
                if (!used_.count(sec + "." + key))
                    throw ConfigError(sec + "." + key, "unknown key");
        }
    }

    void allow_section(const std::string& sec) { known_sections_.insert(sec); }

private:
    void mark_used(const std::string& sec, const std::string& key) const {
        used_.insert(sec + "." + key);
    }

    const SectionMap& sections_;
    mutable std::set<std::string> used_;
    std::set<std::string> known_sections_;
};

std::vector<PlanePoint> parse_point_list(const std::string& value, const std::string& where) {
    std::vector<PlanePoint> points;
    std::istringstream pairs(value);
    std::string pair;
    while (std::getline(pairs, pair, ';')) {
        const std::string p = trim(pair);
        if (p.empty()) continue;
        std::istringstream coords(p);
        double x, y;
        if (!(coords >> x >> y))
            throw ConfigError(where, "expected 'x y' pairs separated by ';'");
        std::string rest;
        if (coords >> rest) throw ConfigError(where, "trailing junk in point: '" + p + "'");
        points.push_back({x, y});
    }
    return points;
}

std::vector<double> parse_number_list(const Reader& r, const std::string& sec,
                                      const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::istringstream in(value);
    std::string tok;
    while (in >> tok) out.push_back(r.parse_number(sec, key, tok));
    return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    const SectionMap sections = tokenize(text);
    Reader r(sections);
    for (const char* sec : {"experiment", "state", "path", "seeds", "integrate", "section",
                            "fixed_point", "manifolds", "lyapunov", "scan"})
        r.allow_section(sec);

    ExperimentConfig c;

    if (r.has("experiment", "model")) {
        const std::string m = r.raw("experiment", "model");
        if (m == "oscillator")
            c.model = ModelKind::Oscillator;
        else if (m == "point_vortex")
            c.model = ModelKind::PointVortex;
        else
            throw ConfigError("experiment.model", "expected oscillator or point_vortex");
    }

    c.a_over_b = r.number("state", "a_over_b", c.a_over_b);
    c.gamma1 = r.number("state", "gamma1", c.gamma1);
    c.gamma2 = r.number("state", "gamma2", c.gamma2);
    c.b_equals_c = r.boolean("state", "b_equals_c", c.b_equals_c);
    if (r.has("state", "a")) c.amp_a = r.number("state", "a", 0.0);
    if (r.has("state", "b")) c.amp_b = r.number("state", "b", 0.0);
    if (r.has("state", "c")) c.amp_c = r.number("state", "c", 0.0);
    if (!c.b_equals_c && (!c.amp_a || !c.amp_b || !c.amp_c))
        throw ConfigError("state.b_equals_c",
                          "explicit a, b, c amplitudes required when b_equals_c = false");

    if (r.has("path", "kind")) {
        const std::string k = r.raw("path", "kind");
        if (k == "stationary")
            c.path_kind = PathKind::Stationary;
        else if (k == "ellipse")
            c.path_kind = PathKind::Ellipse;
        else
            throw ConfigError("path.kind", "expected stationary or ellipse");
    }
    c.path_amplitude_x = r.number("path", "amplitude_x", c.path_amplitude_x);
    c.path_amplitude_y = r.number("path", "amplitude_y", c.path_amplitude_y);
    c.path_gamma1 = r.number("path", "gamma1", c.path_gamma1);
    c.path_gamma2 = r.number("path", "gamma2", c.path_gamma2);
    c.path_center_x = r.number("path", "center_x", c.path_center_x);
    c.path_center_y = r.number("path", "center_y", c.path_center_y);
    c.path_period = r.number("path", "period", c.path_period);
    if (c.path_period <= 0.0) throw ConfigError("path.period", "must be positive");

    if (r.has("seeds", "kind")) {
        const std::string k = r.raw("seeds", "kind");
        if (k == "lattice")
            c.seed_kind = SeedKind::Lattice;
        else if (k == "list")
            c.seed_kind = SeedKind::List;
        else
            throw ConfigError("seeds.kind", "expected lattice or list");
    }
    c.seed_x_min = r.number("seeds", "x_min", c.seed_x_min);
    c.seed_x_max = r.number("seeds", "x_max", c.seed_x_max);
    c.seed_y_min = r.number("seeds", "y_min", c.seed_y_min);
    c.seed_y_max = r.number("seeds", "y_max", c.seed_y_max);
    c.seed_nx = r.integer("seeds", "nx", c.seed_nx);
    c.seed_ny = r.integer("seeds", "ny", c.seed_ny);
    c.exclude_vortex_radius = r.number("seeds", "exclude_vortex_radius",
                                       c.exclude_vortex_radius);
    if (r.has("seeds", "points"))
        c.seed_list = parse_point_list(r.raw("seeds", "points"), "seeds.points");
    if (c.seed_kind == SeedKind::List && c.seed_list.empty() && !r.has("seeds", "points"))
        throw ConfigError("seeds.points", "seed list requested but no points given");
    if (c.seed_nx <= 0 || c.seed_ny <= 0)
        throw ConfigError("seeds.nx", "lattice counts must be positive");

    c.integrate.rel_tol = r.number("integrate", "rel_tol", c.integrate.rel_tol);
    c.integrate.abs_tol = r.number("integrate", "abs_tol", c.integrate.abs_tol);
    c.integrate.max_step = r.number("integrate", "max_step", c.integrate.max_step);
    c.integrate.min_step = r.number("integrate", "min_step", c.integrate.min_step);
    c.integrate.vortex_cutoff = r.number("integrate", "vortex_cutoff",
                                         c.integrate.vortex_cutoff);
    c.integrate.max_steps = static_cast<std::int64_t>(
        r.number("integrate", "max_steps", static_cast<double>(c.integrate.max_steps)));
    const std::pair<const char*, double> positives[] = {
        {"rel_tol", c.integrate.rel_tol},   {"abs_tol", c.integrate.abs_tol},
        {"max_step", c.integrate.max_step}, {"min_step", c.integrate.min_step},
        {"vortex_cutoff", c.integrate.vortex_cutoff}};
    for (const auto& [key, value] : positives)
        if (value <= 0.0) throw ConfigError(std::string("integrate.") + key, "must be positive");
    if (c.integrate.min_step >= c.integrate.max_step)
        throw ConfigError("integrate.min_step", "must be below max_step");

    c.section_periods = r.integer("section", "periods", c.section_periods);
    if (c.section_periods < 0) throw ConfigError("section.periods", "must be >= 0");

    c.newton_tol = r.number("fixed_point", "newton_tol", c.newton_tol);
    c.newton_max_iter = r.integer("fixed_point", "max_iter", c.newton_max_iter);
    if (r.has("fixed_point", "guess_x") != r.has("fixed_point", "guess_y"))
        throw ConfigError("fixed_point.guess_x", "guess needs both guess_x and guess_y");
    if (r.has("fixed_point", "guess_x"))
        c.fixed_point_guess = PlanePoint{r.number("fixed_point", "guess_x", 0.0),
                                         r.number("fixed_point", "guess_y", 0.0)};

    c.manifold_seed_delta = r.number("manifolds", "seed_delta", c.manifold_seed_delta);
    c.manifold_max_arclength = r.number("manifolds", "max_arclength",
                                        c.manifold_max_arclength);
    c.manifold_max_spacing = r.number("manifolds", "max_spacing", c.manifold_max_spacing);
    c.transversality_tol = r.number("manifolds", "transversality_tol", c.transversality_tol);

    c.lyapunov_periods = r.integer("lyapunov", "periods", c.lyapunov_periods);
    c.chaos_threshold_per_period = r.number("lyapunov", "threshold_per_period",
                                            c.chaos_threshold_per_period);

    if (r.has("scan", "ratios"))
        c.scan_ratios = parse_number_list(r, "scan", "ratios", r.raw("scan", "ratios"));
    c.scan_periods = r.integer("scan", "periods", c.scan_periods);

    r.reject_unknown();
    return c;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string emit_config(const ExperimentConfig& c) {
    std::ostringstream out;
    out << "[experiment]\n";
    out << "model = " << (c.model == ModelKind::Oscillator ? "oscillator" : "point_vortex")
        << "\n\n";

    out << "[state]\n";
    out << "a_over_b = " << format_double(c.a_over_b) << "\n";
    out << "gamma1 = " << format_double(c.gamma1) << "\n";
    out << "gamma2 = " << format_double(c.gamma2) << "\n";
    out << "b_equals_c = " << (c.b_equals_c ? "true" : "false") << "\n";
    if (c.amp_a) out << "a = " << format_double(*c.amp_a) << "\n";
    if (c.amp_b) out << "b = " << format_double(*c.amp_b) << "\n";
    if (c.amp_c) out << "c = " << format_double(*c.amp_c) << "\n";
    out << "\n";

    out << "[path]\n";
    out << "kind = " << (c.path_kind == PathKind::Stationary ? "stationary" : "ellipse")
        << "\n";
    out << "amplitude_x = " << format_double(c.path_amplitude_x) << "\n";
    out << "amplitude_y = " << format_double(c.path_amplitude_y) << "\n";
    out << "gamma1 = " << format_double(c.path_gamma1) << "\n";
    out << "gamma2 = " << format_double(c.path_gamma2) << "\n";
    out << "center_x = " << format_double(c.path_center_x) << "\n";
    out << "center_y = " << format_double(c.path_center_y) << "\n";
    out << "period = " << format_double(c.path_period) << "\n\n";

    out << "[seeds]\n";
    out << "kind = " << (c.seed_kind == SeedKind::Lattice ? "lattice" : "list") << "\n";
    out << "x_min = " << format_double(c.seed_x_min) << "\n";
    out << "x_max = " << format_double(c.seed_x_max) << "\n";
    out << "y_min = " << format_double(c.seed_y_min) << "\n";
    out << "y_max = " << format_double(c.seed_y_max) << "\n";
    out << "nx = " << c.seed_nx << "\n";
    out << "ny = " << c.seed_ny << "\n";
    out << "exclude_vortex_radius = " << format_double(c.exclude_vortex_radius) << "\n";
    if (!c.seed_list.empty()) {
        out << "points = ";
        for (std::size_t i = 0; i < c.seed_list.size(); ++i) {
            if (i) out << "; ";
            out << format_double(c.seed_list[i].x) << " " << format_double(c.seed_list[i].y);
        }
        out << "\n";
    }
    out << "\n";

    out << "[integrate]\n";
    out << "rel_tol = " << format_double(c.integrate.rel_tol) << "\n";
    out << "abs_tol = " << format_double(c.integrate.abs_tol) << "\n";
    out << "max_step = " << format_double(c.integrate.max_step) << "\n";
    out << "min_step = " << format_double(c.integrate.min_step) << "\n";
    out << "vortex_cutoff = " << format_double(c.integrate.vortex_cutoff) << "\n";
    out << "max_steps = " << c.integrate.max_steps << "\n\n";

    out << "[section]\n";
    out << "periods = " << c.section_periods << "\n\n";

    out << "[fixed_point]\n";
    out << "newton_tol = " << format_double(c.newton_tol) << "\n";
    out << "max_iter = " << c.newton_max_iter << "\n";
    if (c.fixed_point_guess) {
        out << "guess_x = " << format_double(c.fixed_point_guess->x) << "\n";
        out << "guess_y = " << format_double(c.fixed_point_guess->y) << "\n";
    }
    out << "\n";

    out << "[manifolds]\n";
    out << "seed_delta = " << format_double(c.manifold_seed_delta) << "\n";
    out << "max_arclength = " << format_double(c.manifold_max_arclength) << "\n";
    out << "max_spacing = " << format_double(c.manifold_max_spacing) << "\n";
    out << "transversality_tol = " << format_double(c.transversality_tol) << "\n\n";

    out << "[lyapunov]\n";
    out << "periods = " << c.lyapunov_periods << "\n";
    out << "threshold_per_period = " << format_double(c.chaos_threshold_per_period) << "\n\n";

    out << "[scan]\n";
    if (!c.scan_ratios.empty()) {
        out << "ratios =";
        for (double ratio : c.scan_ratios) out << " " << format_double(ratio);
        out << "\n";
    }
    out << "periods = " << c.scan_periods << "\n";
    return out.str();
}

}  // namespace bohm
