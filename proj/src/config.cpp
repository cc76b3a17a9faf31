#include "oal/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace oal {

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a])))
        ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1])))
        --b;
    return s.substr(a, b - a);
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ConfigError("line " + std::to_string(line) + ": " + msg);
}

double parse_double(int line, const std::string& key, const std::string& v) {
    try {
        size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size())
            fail(line, key + ": trailing characters in '" + v + "'");
        if (!std::isfinite(x))
            fail(line, key + ": non-finite value");
        return x;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        fail(line, key + ": cannot parse number '" + v + "'");
    }
}

long parse_long(int line, const std::string& key, const std::string& v) {
    try {
        size_t used = 0;
        const long x = std::stol(v, &used);
        if (used != v.size())
            fail(line, key + ": trailing characters in '" + v + "'");
        return x;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        fail(line, key + ": cannot parse integer '" + v + "'");
    }
}

bool parse_bool(int line, const std::string& key, const std::string& v) {
    if (v == "true" || v == "on" || v == "1")
        return true;
    if (v == "false" || v == "off" || v == "0")
        return false;
    fail(line, key + ": expected true/false, got '" + v + "'");
}

Measure parse_measure(int line, const std::string& tok) {
    if (tok == "T")
        return Measure::T;
    if (tok == "P")
        return Measure::P;
    if (tok == "TA")
        return Measure::TA;
    if (tok == "n")
        return Measure::n;
    if (tok == "q")
        return Measure::q;
    if (tok == "wigner")
        return Measure::wigner;
    fail(line, "unknown measure '" + tok + "' (know T, P, TA, n, q, wigner)");
}

std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

std::string to_string(OrderingMode m) {
    switch (m) {
    case OrderingMode::with_ordering:
        return "with";
    case OrderingMode::without_ordering:
        return "without";
    default:
        return "both";
    }
}

std::string to_string(BranchMode m) {
    switch (m) {
    case BranchMode::plus:
        return "plus";
    case BranchMode::minus:
        return "minus";
    default:
        return "both";
    }
}

std::string to_string(Measure m) {
    switch (m) {
    case Measure::T:
        return "T";
    case Measure::P:
        return "P";
    case Measure::TA:
        return "TA";
    case Measure::n:
        return "n";
    case Measure::q:
        return "q";
    default:
        return "wigner";
    }
}

ScenarioConfig parse_config_text(const std::string& text) {
    ScenarioConfig c;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    bool mode_set = false;

    while (std::getline(in, raw)) {
        ++line;
        const size_t hash = raw.find('#');
        if (hash != std::string::npos)
            raw.erase(hash);
        const std::string s = trim(raw);
        if (s.empty())
            continue;
        const size_t eq = s.find('=');
        if (eq == std::string::npos)
            fail(line, "expected 'key = value', got '" + s + "'");
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        if (key.empty())
            fail(line, "empty key");
        if (val.empty())
            fail(line, key + ": empty value");

        if (key == "mode") {
            if (val == "dimensionless")
                c.dimensionless = true;
            else if (val == "physical")
                c.dimensionless = false;
            else
                fail(line, "mode must be 'dimensionless' or 'physical', got '" + val + "'");
            mode_set = true;
        } else if (key == "r") {
            c.r = parse_double(line, key, val);
        } else if (key == "ratio") {
            c.ratio = parse_double(line, key, val);
        } else if (key == "g") {
            c.g = parse_double(line, key, val);
        } else if (key == "omega12") {
            c.omega12 = parse_double(line, key, val);
        } else if (key == "omega23") {
            c.omega23 = parse_double(line, key, val);
        } else if (key == "t_start") {
            c.t_start = parse_double(line, key, val);
        } else if (key == "t_end") {
            c.t_end = parse_double(line, key, val);
        } else if (key == "n_points") {
            c.n_points = static_cast<int>(parse_long(line, key, val));
        } else if (key == "ordering") {
            if (val == "with")
                c.ordering = OrderingMode::with_ordering;
            else if (val == "without")
                c.ordering = OrderingMode::without_ordering;
            else if (val == "both")
                c.ordering = OrderingMode::both;
            else
                fail(line, "ordering must be with/without/both, got '" + val + "'");
        } else if (key == "branch") {
            if (val == "plus")
                c.branch = BranchMode::plus;
            else if (val == "minus")
                c.branch = BranchMode::minus;
            else if (val == "both")
                c.branch = BranchMode::both;
            else
                fail(line, "branch must be plus/minus/both, got '" + val + "'");
        } else if (key == "measures") {
            c.measures.clear();
            std::string tok;
            std::istringstream toks(val);
            while (std::getline(toks, tok, ',')) {
                tok = trim(tok);
                if (tok.empty())
                    fail(line, "measures: empty entry");
                c.measures.insert(parse_measure(line, tok));
            }
            if (c.measures.empty())
                fail(line, "measures: empty list");
        } else if (key == "oracle") {
            c.oracle = parse_bool(line, key, val);
        } else if (key == "dim") {
            c.dim = static_cast<int>(parse_long(line, key, val));
        } else if (key == "steps") {
            c.steps = parse_long(line, key, val);
        } else if (key == "out") {
            c.out = val;
        } else if (key == "quiet") {
            c.quiet = parse_bool(line, key, val);
        } else {
            fail(line, "unknown key '" + key + "'");
        }
    }

    // Cross-field validation (line numbers no longer apply).
    if (!c.dimensionless) {
        if (!(c.g > 0.0) || !(c.omega12 > 0.0) || !(c.omega23 >= 0.0))
            throw ConfigError("physical mode requires g > 0, omega12 > 0, omega23 >= 0");
    } else {
        if (!(c.ratio > 0.0))
            throw ConfigError("dimensionless mode requires ratio > 0");
        if (!(c.r >= 0.0))
            throw ConfigError("dimensionless mode requires r >= 0");
        if (!mode_set && (c.g != 0.0 || c.omega12 != 0.0 || c.omega23 != 0.0))
            throw ConfigError("physical rates given without 'mode = physical'");
    }
    if (!(c.t_start >= 0.0))
        throw ConfigError("t_start must be >= 0");
    if (c.n_points < 1)
        throw ConfigError("n_points must be >= 1");
    if (c.n_points == 1) {
        if (c.t_end != c.t_start)
            throw ConfigError("n_points = 1 requires t_end = t_start");
    } else if (!(c.t_end > c.t_start)) {
        throw ConfigError("t_end must be > t_start");
    }
    if (c.dim < 0)
        throw ConfigError("dim must be >= 0 (0 = automatic)");
    if (c.steps < 0)
        throw ConfigError("steps must be >= 0 (0 = default)");
    return c;
}

ScenarioConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string serialize_config(const ScenarioConfig& c) {
    std::ostringstream out;
    out << "mode = " << (c.dimensionless ? "dimensionless" : "physical") << "\n";
    out << "r = " << fmt_double(c.r) << "\n";
    out << "ratio = " << fmt_double(c.ratio) << "\n";
    out << "g = " << fmt_double(c.g) << "\n";
    out << "omega12 = " << fmt_double(c.omega12) << "\n";
    out << "omega23 = " << fmt_double(c.omega23) << "\n";
    out << "t_start = " << fmt_double(c.t_start) << "\n";
    out << "t_end = " << fmt_double(c.t_end) << "\n";
    out << "n_points = " << c.n_points << "\n";
    out << "ordering = " << to_string(c.ordering) << "\n";
    out << "branch = " << to_string(c.branch) << "\n";
    out << "measures = ";
    bool first = true;
    for (Measure m : c.measures) {
        if (!first)
            out << ",";
        out << to_string(m);
        first = false;
    }
    out << "\n";
    out << "oracle = " << (c.oracle ? "true" : "false") << "\n";
    out << "dim = " << c.dim << "\n";
    out << "steps = " << c.steps << "\n";
    out << "out = " << c.out << "\n";
    out << "quiet = " << (c.quiet ? "true" : "false") << "\n";
    return out.str();
}

SystemParams to_params(const ScenarioConfig& c) {
    if (c.dimensionless)
        return SystemParams::dimensionless(c.r, c.ratio);
    return SystemParams(c.g, c.omega12, c.omega23);
}

} // namespace oal
