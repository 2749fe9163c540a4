#include "hbo/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace hbo {

namespace {

const double kPi = std::acos(-1.0);

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ConfigError("line " + std::to_string(line) + ": " + msg);
}

double parse_number(const std::string& raw, const std::string& key, int line) {
    const std::string v = trim(raw);
    if (v.empty()) fail(line, "expected a number for '" + key + "', got empty value");
    char* end = nullptr;
    double x = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size() || !std::isfinite(x))
        fail(line, "expected a number for '" + key + "', got '" + v + "'");
    return x;
}

long long parse_integer(const std::string& raw, const std::string& key, int line) {
    double x = parse_number(raw, key, line);
    double r = std::nearbyint(x);
    if (std::fabs(x - r) > 0.0)
        fail(line, "expected an integer for '" + key + "', got '" + trim(raw) + "'");
    if (std::fabs(r) > 9007199254740992.0)  // 2^53, exact in double
        fail(line, "integer out of range for '" + key + "'");
    return static_cast<long long>(r);
}

std::vector<double> parse_list(const std::string& raw, const std::string& key, int line) {
    std::vector<double> out;
    const std::string v = trim(raw);
    if (v.empty()) return out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number(item, key, line));
    if (!v.empty() && v.back() == ',') fail(line, "trailing comma in '" + key + "'");
    return out;
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt_list(const std::vector<double>& xs) {
    std::string out;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        out += fmt(xs[i]);
    }
    return out;
}

struct Entry {
    int line;
    std::string section, key, value;
};

}  // namespace

const std::vector<std::pair<std::string, std::string>>& scenario_catalog() {
    static const std::vector<std::pair<std::string, std::string>> catalog = {
        {"soliton_1d", "1D soliton transport: shape and speed fidelity over T = 5"},
        {"conservation_2d", "2D Gaussian run tracking mass, momentum, and energy drift"},
        {"moment_law", "first-moment growth at rate M/2 and frozen transverse moment"},
        {"t_star_demo", "sign change of the integrated x1-moment at the predicted time"},
        {"decay_dichotomy", "frequency-cone decay exponents for Gaussian vs x1-derivative data"},
        {"commutator_sweep", "weighted commutator bound ratios over a randomized pair family"},
        {"identity_suite", "Riesz and derivative identity residuals on analytic data"},
    };
    return catalog;
}

ExperimentConfig scenario_defaults(const std::string& scenario) {
    ExperimentConfig c;
    c.scenario = scenario;
    c.seed = 1;
    c.output_dir = "hbo_out/" + scenario;
    if (scenario == "soliton_1d") {
        c.d = 1;
        c.n = 2048;
        c.L = 64.0 * kPi;
        c.solver.dt = 1e-3;
        c.solver.T = 5.0;
        c.initial_data.type = "soliton";
        c.initial_data.c = 1.0;
        c.initial_data.x0 = 0.0;
    } else if (scenario == "conservation_2d") {
        c.d = 2;
        c.n = 256;
        c.L = 16.0 * kPi;
        c.solver.dt = 5e-4;
        c.solver.T = 1.0;
        c.initial_data.type = "gaussian";
        c.initial_data.width = 1.0;
        c.initial_data.amplitude = 1.0;
        c.decay_exponents = {1.0};
    } else if (scenario == "moment_law") {
        c.d = 2;
        c.n = 512;
        c.L = 16.0 * kPi;
        c.solver.dt = 2e-3;
        c.solver.T = 0.5;
        c.initial_data.type = "dx1_gaussian";
        c.initial_data.center = {0.0, 0.1, 0.0};
        c.initial_data.width = 1.0;
        c.initial_data.amplitude = 4.0;
    } else if (scenario == "t_star_demo") {
        c.d = 1;
        c.n = 262144;
        c.L = 7424.0 * kPi;
        c.solver.dt = 2e-3;
        // 2.5 crossing times for the datum below.
        c.solver.T = 0.35355339059327379;
        c.initial_data.type = "gaussian";
        c.initial_data.center = {-0.2, 0.0, 0.0};
        c.initial_data.width = 2.0;
        c.initial_data.amplitude = 8.0;
    } else if (scenario == "decay_dichotomy") {
        c.d = 2;
        c.n = 256;
        c.L = 32.0 * kPi;
        c.solver.dt = 1e-3;
        c.solver.T = 1.0;
        c.initial_data.type = "gaussian";
        c.initial_data.width = 1.0;
        c.initial_data.amplitude = 1.0;
    } else if (scenario == "commutator_sweep") {
        c.d = 2;
        c.n = 128;
        c.L = 8.0 * kPi;
        c.solver.dt = 1e-3;
        c.solver.T = 1.0;
        c.seed = 777;
    } else if (scenario == "identity_suite") {
        c.d = 2;
        c.n = 128;
        c.L = 8.0 * kPi;
        c.solver.dt = 1e-3;
        c.solver.T = 1.0;
    } else {
        throw ConfigError("unknown scenario '" + scenario + "'");
    }
    return c;
}

ExperimentConfig parse_config(const std::string& text) {
    // Pass 1: tokenize with strict structure checks.
    std::vector<Entry> entries;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = trim(raw);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        if (s.front() == '[') {
            if (s.back() != ']') fail(line, "malformed section header '" + s + "'");
            section = trim(s.substr(1, s.size() - 2));
            if (section != "experiment" && section != "grid" && section != "solver" &&
                section != "initial_data")
                fail(line, "unknown section '[" + section + "]'");
            continue;
        }
        size_t eq = s.find('=');
        if (eq == std::string::npos) fail(line, "expected 'key = value', got '" + s + "'");
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        if (key.empty()) fail(line, "empty key");
        if (section.empty()) fail(line, "key '" + key + "' appears before any section");
        entries.push_back({line, section, key, value});
    }

    // Pass 2: the scenario selects the defaults everything else overrides.
    const Entry* scen = nullptr;
    for (const auto& e : entries)
        if (e.section == "experiment" && e.key == "scenario") {
            if (scen) fail(e.line, "duplicate key 'scenario' in [experiment]");
            scen = &e;
        }
    if (!scen) throw ConfigError("missing required key 'scenario' in [experiment]");
    ExperimentConfig cfg;
    try {
        cfg = scenario_defaults(scen->value);
    } catch (const ConfigError& e) {
        fail(scen->line, e.what());
    }

    std::map<std::pair<std::string, std::string>, int> seen;
    bool snapshot_set = false;
    for (const auto& e : entries) {
        auto [it, fresh] = seen.emplace(std::make_pair(e.section, e.key), e.line);
        if (!fresh) fail(e.line, "duplicate key '" + e.key + "' in [" + e.section + "]");
        if (e.section == "experiment") {
            if (e.key == "scenario") continue;
            if (e.key == "seed") {
                long long v = parse_integer(e.value, e.key, e.line);
                if (v < 0) fail(e.line, "seed must be nonnegative");
                cfg.seed = static_cast<std::uint64_t>(v);
            } else if (e.key == "output_dir") {
                cfg.output_dir = e.value;
            } else if (e.key == "decay_exponents") {
                cfg.decay_exponents = parse_list(e.value, e.key, e.line);
            } else if (e.key == "weight_N_list") {
                cfg.weight_N_list = parse_list(e.value, e.key, e.line);
            } else {
                fail(e.line, "unknown key '" + e.key + "' in [experiment]");
            }
        } else if (e.section == "grid") {
            if (e.key == "d")
                cfg.d = static_cast<int>(parse_integer(e.value, e.key, e.line));
            else if (e.key == "n")
                cfg.n = static_cast<int>(parse_integer(e.value, e.key, e.line));
            else if (e.key == "L")
                cfg.L = parse_number(e.value, e.key, e.line);
            else
                fail(e.line, "unknown key '" + e.key + "' in [grid]");
        } else if (e.section == "solver") {
            if (e.key == "dt")
                cfg.solver.dt = parse_number(e.value, e.key, e.line);
            else if (e.key == "T")
                cfg.solver.T = parse_number(e.value, e.key, e.line);
            else if (e.key == "dealias")
                cfg.solver.dealias_fraction = parse_number(e.value, e.key, e.line);
            else if (e.key == "snapshot_every") {
                long long v = parse_integer(e.value, e.key, e.line);
                if (v < 0) fail(e.line, "snapshot_every must be nonnegative");
                cfg.solver.snapshot_every = static_cast<long>(v);
                snapshot_set = v > 0;
            } else {
                fail(e.line, "unknown key '" + e.key + "' in [solver]");
            }
        } else {  // initial_data
            if (e.key == "type") {
                if (e.value != "gaussian" && e.value != "dx1_gaussian" && e.value != "soliton" &&
                    e.value != "custom_file")
                    fail(e.line, "unknown initial_data type '" + e.value + "'");
                cfg.initial_data.type = e.value;
            } else if (e.key == "center") {
                auto xs = parse_list(e.value, e.key, e.line);
                if (xs.empty() || xs.size() > 3)
                    fail(e.line, "center takes 1 to 3 coordinates");
                cfg.initial_data.center = {0.0, 0.0, 0.0};
                for (size_t i = 0; i < xs.size(); ++i) cfg.initial_data.center[i] = xs[i];
            } else if (e.key == "width")
                cfg.initial_data.width = parse_number(e.value, e.key, e.line);
            else if (e.key == "amplitude")
                cfg.initial_data.amplitude = parse_number(e.value, e.key, e.line);
            else if (e.key == "c")
                cfg.initial_data.c = parse_number(e.value, e.key, e.line);
            else if (e.key == "x0")
                cfg.initial_data.x0 = parse_number(e.value, e.key, e.line);
            else if (e.key == "path")
                cfg.initial_data.path = e.value;
            else
                fail(e.line, "unknown key '" + e.key + "' in [initial_data]");
        }
    }

    // Semantic validation names the offending field.
    if (cfg.d < 1 || cfg.d > 3) throw ConfigError("grid d must be 1, 2, or 3");
    if (cfg.n < 8 || (cfg.n & (cfg.n - 1)) != 0)
        throw ConfigError("grid n must be a power of two and at least 8");
    if (!(cfg.L > 0.0)) throw ConfigError("grid L must be positive");
    if (!(cfg.solver.dt > 0.0)) throw ConfigError("solver dt must be positive");
    if (!(cfg.solver.T > 0.0)) throw ConfigError("solver T must be positive");
    if (cfg.solver.dt > cfg.solver.T) throw ConfigError("solver dt must not exceed T");
    if (!(cfg.solver.dealias_fraction > 0.0) || cfg.solver.dealias_fraction > 1.0)
        throw ConfigError("solver dealias must lie in (0, 1]");
    if (!(cfg.initial_data.width > 0.0)) throw ConfigError("initial_data width must be positive");
    if (cfg.initial_data.type == "soliton") {
        if (!(cfg.initial_data.c > 0.0)) throw ConfigError("initial_data c must be positive");
        if (cfg.d != 1) throw ConfigError("soliton initial data requires d = 1");
    }
    if (cfg.initial_data.type == "custom_file" && cfg.initial_data.path.empty())
        throw ConfigError("initial_data path is required for type custom_file");
    for (double r : cfg.decay_exponents)
        if (r < 0.0) throw ConfigError("decay_exponents must be nonnegative");
    for (double N : cfg.weight_N_list)
        if (!(N > 0.0)) throw ConfigError("weight_N_list entries must be positive");

    if (!snapshot_set && cfg.solver.snapshot_every == 0) {
        long steps = static_cast<long>(std::ceil(cfg.solver.T / cfg.solver.dt - 1e-9));
        cfg.solver.snapshot_every = std::max<long>(1, (steps + 199) / 200);
    }
    if (!cfg.decay_exponents.empty()) cfg.solver.weight_exponents = cfg.decay_exponents;
    return cfg;
}

std::string serialize_config(const ExperimentConfig& cfg) {
    std::string out;
    out += "[experiment]\n";
    out += "scenario = " + cfg.scenario + "\n";
    out += "seed = " + std::to_string(cfg.seed) + "\n";
    out += "output_dir = " + cfg.output_dir + "\n";
    if (!cfg.decay_exponents.empty())
        out += "decay_exponents = " + fmt_list(cfg.decay_exponents) + "\n";
    if (!cfg.weight_N_list.empty())
        out += "weight_N_list = " + fmt_list(cfg.weight_N_list) + "\n";
    out += "\n[grid]\n";
    out += "d = " + std::to_string(cfg.d) + "\n";
    out += "n = " + std::to_string(cfg.n) + "\n";
    out += "L = " + fmt(cfg.L) + "\n";
    out += "\n[solver]\n";
    out += "dt = " + fmt(cfg.solver.dt) + "\n";
    out += "T = " + fmt(cfg.solver.T) + "\n";
    out += "dealias = " + fmt(cfg.solver.dealias_fraction) + "\n";
    out += "snapshot_every = " + std::to_string(cfg.solver.snapshot_every) + "\n";
    out += "\n[initial_data]\n";
    out += "type = " + cfg.initial_data.type + "\n";
    const auto& id = cfg.initial_data;
    if (id.type == "gaussian" || id.type == "dx1_gaussian") {
        out += "center = " + fmt(id.center[0]) + ", " + fmt(id.center[1]) + ", " +
               fmt(id.center[2]) + "\n";
        out += "width = " + fmt(id.width) + "\n";
        out += "amplitude = " + fmt(id.amplitude) + "\n";
    } else if (id.type == "soliton") {
        out += "c = " + fmt(id.c) + "\n";
        out += "x0 = " + fmt(id.x0) + "\n";
    } else {
        out += "path = " + id.path + "\n";
    }
    return out;
}

bool config_equal(const ExperimentConfig& a, const ExperimentConfig& b) {
    return a.scenario == b.scenario && a.d == b.d && a.n == b.n && a.L == b.L &&
           a.solver.dt == b.solver.dt && a.solver.T == b.solver.T &&
           a.solver.dealias_fraction == b.solver.dealias_fraction &&
           a.solver.snapshot_every == b.solver.snapshot_every &&
           a.initial_data.type == b.initial_data.type &&
           a.initial_data.center == b.initial_data.center &&
           a.initial_data.width == b.initial_data.width &&
           a.initial_data.amplitude == b.initial_data.amplitude &&
           a.initial_data.c == b.initial_data.c && a.initial_data.x0 == b.initial_data.x0 &&
           a.initial_data.path == b.initial_data.path &&
           a.decay_exponents == b.decay_exponents && a.weight_N_list == b.weight_N_list &&
           a.seed == b.seed && a.output_dir == b.output_dir;
}

RealField build_initial_data(const ExperimentConfig& cfg, const Grid& g) {
    const auto& id = cfg.initial_data;
    if (id.type == "gaussian") return gaussian(g, id.center, id.width, id.amplitude);
    if (id.type == "dx1_gaussian") return dx1_gaussian(g, id.center, id.width, id.amplitude);
    if (id.type == "soliton") return bo1d_soliton(id.c, id.x0, g);
    // custom_file: "d n L" header then n^d values in row-major order.
    std::ifstream in(id.path);
    if (!in) throw ConfigError("cannot open initial_data path '" + id.path + "'");
    int d = 0, n = 0;
    double L = 0.0;
    if (!(in >> d >> n >> L)) throw ConfigError("malformed header in '" + id.path + "'");
    if (d != g.d || n != g.n || std::fabs(L - g.L) > 1e-12 * std::max(1.0, g.L))
        throw ConfigError("grid mismatch in '" + id.path + "': file has d=" + std::to_string(d) +
                          " n=" + std::to_string(n) + " L=" + fmt(L));
    RealField u = make_real_field(g);
    for (size_t i = 0; i < u.v.size(); ++i)
        if (!(in >> u.v[i])) throw ConfigError("too few values in '" + id.path + "'");
    double extra;
    if (in >> extra) throw ConfigError("too many values in '" + id.path + "'");
    return u;
}

}  // namespace hbo
