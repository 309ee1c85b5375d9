#include "frns/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <openssl/evp.h>

namespace frns {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& raw, const std::string& key, int line)
{
    const std::string s = trim(raw);
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (!s.empty() && *first == '+')
        ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (s.empty() || ec != std::errc() || ptr != last || !std::isfinite(v))
        throw ConfigParseError("line " + std::to_string(line) + ": " + key + ": expected a number, got '" + s + "'",
                               line);
    return v;
}

long long parse_int(const std::string& raw, const std::string& key, int line)
{
    const std::string s = trim(raw);
    long long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw ConfigParseError("line " + std::to_string(line) + ": " + key + ": expected an integer, got '" + s + "'",
                               line);
    return v;
}

bool parse_bool(const std::string& raw, const std::string& key, int line)
{
    const std::string s = trim(raw);
    if (s == "true" || s == "1" || s == "yes")
        return true;
    if (s == "false" || s == "0" || s == "no")
        return false;
    throw ConfigParseError("line " + std::to_string(line) + ": " + key + ": expected true or false", line);
}

std::vector<double> parse_numbers(const std::string& raw, const std::string& key, int line, char sep)
{
    std::vector<double> out;
    std::string item;
    std::istringstream in(raw);
    if (sep == ' ') {
        while (in >> item)
            out.push_back(parse_double(item, key, line));
        return out;
    }
    while (std::getline(in, item, sep))
        if (!trim(item).empty())
            out.push_back(parse_double(item, key, line));
    return out;
}

Point parse_point(const std::string& raw, const std::string& key, int line)
{
    const auto v = parse_numbers(raw, key, line, ' ');
    if (v.empty() || v.size() > 2)
        throw ConfigParseError("line " + std::to_string(line) + ": " + key + ": expected a point 'x' or 'x y'", line);
    return {v[0], v.size() == 2 ? v[1] : 0.0};
}

std::vector<Point> parse_points(const std::string& raw, const std::string& key, int line)
{
    std::vector<Point> out;
    std::string item;
    std::istringstream in(raw);
    while (std::getline(in, item, ';'))
        if (!trim(item).empty())
            out.push_back(parse_point(item, key, line));
    return out;
}

std::string fmt_point(const Point& p)
{
    return fmt(p[0]) + " " + fmt(p[1]);
}

std::string fmt_points(const std::vector<Point>& pts)
{
    std::string out;
    for (std::size_t i = 0; i < pts.size(); ++i)
        out += (i ? "; " : "") + fmt_point(pts[i]);
    return out;
}

struct KeySpec {
    std::string name;
    std::string doc;
    std::function<void(RunConfig&, const std::string&, int)> set;
    std::function<std::string(const RunConfig&)> get;
};

#define FRNS_DOUBLE(key, doc, field)                                                                 \
    KeySpec{key, doc, [](RunConfig& c, const std::string& v, int l) { c.field = parse_double(v, key, l); }, \
            [](const RunConfig& c) { return fmt(c.field); }}

const std::vector<KeySpec>& registry()
{
    static const std::vector<KeySpec> keys = {
        FRNS_DOUBLE("frac.s", "fractional order s in (0,1)", model.frac.s),
        FRNS_DOUBLE("frac.m", "mass m > 0", model.frac.m),
        KeySpec{"frac.N", "spatial dimension N (1 or 2)",
                [](RunConfig& c, const std::string& v, int l) {
                    c.model.frac.n_dim = static_cast<int>(parse_int(v, "frac.N", l));
                },
                [](const RunConfig& c) { return std::to_string(c.model.frac.n_dim); }},
        KeySpec{"grid.points_per_dim", "grid points per axis, a power of two >= 32",
                [](RunConfig& c, const std::string& v, int l) {
                    const auto n = parse_int(v, "grid.points_per_dim", l);
                    if (n <= 0)
                        throw ConfigParseError("line " + std::to_string(l) + ": grid.points_per_dim must be positive", l);
                    c.points_per_dim = static_cast<std::size_t>(n);
                },
                [](const RunConfig& c) { return std::to_string(c.points_per_dim); }},
        FRNS_DOUBLE("grid.half_length", "box half-width L in stretched units; 0 means 20/m", half_length),
        FRNS_DOUBLE("model.eps", "semiclassical parameter epsilon > 0", model.eps),
        KeySpec{"potential.shape", "gaussian_wells or constant",
                [](RunConfig& c, const std::string& v, int) { c.model.potential.shape = trim(v); },
                [](const RunConfig& c) { return c.model.potential.shape; }},
        FRNS_DOUBLE("potential.V0", "depth of the designated minima, V = -V0 there", model.potential.V0),
        FRNS_DOUBLE("potential.V1", "-V1 is the global infimum of V", model.potential.V1),
        FRNS_DOUBLE("potential.top", "background level of V away from the wells", model.potential.top),
        FRNS_DOUBLE("potential.width", "Gaussian width of every well", model.potential.width),
        KeySpec{"potential.minima", "designated minima M, 'x y; x y'",
                [](RunConfig& c, const std::string& v, int l) {
                    c.model.potential.minima = parse_points(v, "potential.minima", l);
                },
                [](const RunConfig& c) { return fmt_points(c.model.potential.minima); }},
        KeySpec{"potential.decoys", "optional wells of depth V1 outside Lambda, 'x y; x y'",
                [](RunConfig& c, const std::string& v, int l) {
                    c.model.potential.decoys = parse_points(v, "potential.decoys", l);
                },
                [](const RunConfig& c) { return fmt_points(c.model.potential.decoys); }},
        KeySpec{"lambda.shape", "ball or box",
                [](RunConfig& c, const std::string& v, int l) {
                    const auto t = trim(v);
                    if (t == "ball")
                        c.model.potential.lambda.kind = Region::Kind::Ball;
                    else if (t == "box")
                        c.model.potential.lambda.kind = Region::Kind::Box;
                    else
                        throw ConfigParseError("line " + std::to_string(l) + ": lambda.shape must be ball or box", l);
                },
                [](const RunConfig& c) {
                    return std::string(c.model.potential.lambda.kind == Region::Kind::Ball ? "ball" : "box");
                }},
        KeySpec{"lambda.center", "ball centre",
                [](RunConfig& c, const std::string& v, int l) {
                    c.model.potential.lambda.center = parse_point(v, "lambda.center", l);
                },
                [](const RunConfig& c) { return fmt_point(c.model.potential.lambda.center); }},
        FRNS_DOUBLE("lambda.radius", "ball radius", model.potential.lambda.radius),
        KeySpec{"lambda.lo", "box lower corner",
                [](RunConfig& c, const std::string& v, int l) {
                    c.model.potential.lambda.lo = parse_point(v, "lambda.lo", l);
                },
                [](const RunConfig& c) { return fmt_point(c.model.potential.lambda.lo); }},
        KeySpec{"lambda.hi", "box upper corner",
                [](RunConfig& c, const std::string& v, int l) {
                    c.model.potential.lambda.hi = parse_point(v, "lambda.hi", l);
                },
                [](const RunConfig& c) { return fmt_point(c.model.potential.lambda.hi); }},
        FRNS_DOUBLE("nonlin.lambda", "coefficient of f(t) = lambda (t+)^{p-1}", model.nonlin.lambda),
        FRNS_DOUBLE("nonlin.p", "subcritical power p in (2, 2*_s)", model.nonlin.p),
        FRNS_DOUBLE("nonlin.theta", "Ambrosetti-Rabinowitz exponent theta in (2, q), theta <= p", model.nonlin.ar_theta),
        FRNS_DOUBLE("nonlin.q", "growth cap q in (p, 2*_s)", model.nonlin.q),
        FRNS_DOUBLE("pen.kappa", "penalization constant kappa", model.pen.kappa),
        FRNS_DOUBLE("pen.a", "penalization threshold a; 0 means solve for it", model.pen.a),
        FRNS_DOUBLE("solver.grad_tol", "relative projected-gradient tolerance", tol.grad),
        FRNS_DOUBLE("solver.nehari_tol", "tolerance on |<J'(u),u>|", tol.nehari),
        KeySpec{"solver.max_iter", "iteration cap per solve",
                [](RunConfig& c, const std::string& v, int l) {
                    c.tol.max_iter = static_cast<int>(parse_int(v, "solver.max_iter", l));
                },
                [](const RunConfig& c) { return std::to_string(c.tol.max_iter); }},
        KeySpec{"solver.restarts", "randomized restarts after the default start",
                [](RunConfig& c, const std::string& v, int l) {
                    c.restarts = static_cast<int>(parse_int(v, "solver.restarts", l));
                },
                [](const RunConfig& c) { return std::to_string(c.restarts); }},
        KeySpec{"solver.seed", "seed for the restart generator",
                [](RunConfig& c, const std::string& v, int l) {
                    c.seed = static_cast<std::uint64_t>(parse_int(v, "solver.seed", l));
                },
                [](const RunConfig& c) { return std::to_string(c.seed); }},
        KeySpec{"sweep.eps", "comma-separated decreasing epsilon list",
                [](RunConfig& c, const std::string& v, int l) { c.sweep_eps = parse_numbers(v, "sweep.eps", l, ','); },
                [](const RunConfig& c) {
                    std::string out;
                    for (std::size_t i = 0; i < c.sweep_eps.size(); ++i)
                        out += (i ? ", " : "") + fmt(c.sweep_eps[i]);
                    return out;
                }},
        KeySpec{"sweep.jobs", "worker threads for the sweep; 0 means all cores",
                [](RunConfig& c, const std::string& v, int l) { c.jobs = static_cast<int>(parse_int(v, "sweep.jobs", l)); },
                [](const RunConfig& c) { return std::to_string(c.jobs); }},
        KeySpec{"output.svg", "emit SVG plots next to the CSV files",
                [](RunConfig& c, const std::string& v, int l) { c.svg = parse_bool(v, "output.svg", l); },
                [](const RunConfig& c) { return std::string(c.svg ? "true" : "false"); }},
    };
    return keys;
}

#undef FRNS_DOUBLE

} // namespace

Grid RunConfig::grid() const
{
    return Grid(model.frac.n_dim, points_per_dim, effective_half_length());
}

double RunConfig::effective_half_length() const
{
    return half_length > 0.0 ? half_length : 20.0 / model.frac.m;
}

RunConfig parse_config(const std::string& text)
{
    RunConfig cfg;
    std::map<std::string, const KeySpec*> index;
    for (const auto& k : registry())
        index[k.name] = &k;

    std::set<std::string> seen;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (body.empty())
            continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ConfigParseError("line " + std::to_string(line) + ": expected 'key = value'", line);
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        const auto it = index.find(key);
        if (it == index.end())
            throw ConfigParseError("line " + std::to_string(line) + ": unknown key '" + key + "'", line);
        if (!seen.insert(key).second)
            throw ConfigParseError("line " + std::to_string(line) + ": duplicate key '" + key + "'", line);
        it->second->set(cfg, value, line);
    }
    return cfg;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigParseError("cannot read config file '" + path + "'", 0);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string canonical_config(const RunConfig& cfg)
{
    std::vector<std::string> lines;
    for (const auto& k : registry())
        lines.push_back(k.name + "=" + k.get(cfg));
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& l : lines)
        out += l + "\n";
    return out;
}

std::string sha256_hex(const std::string& data)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> config_keys()
{
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& k : registry())
        out.emplace_back(k.name, k.doc);
    return out;
}

} // namespace frns
