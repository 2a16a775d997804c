#include "rhflow/scenario.hpp"

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rhflow {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void bad_value(const std::string& key) {
    throw std::invalid_argument("scenario: invalid value for '" + key + "'");
}

double parse_real(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) bad_value(key);
        return x;
    } catch (const std::invalid_argument&) {
        bad_value(key);
    } catch (const std::out_of_range&) {
        bad_value(key);
    }
}

long parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const long x = std::stol(v, &used);
        if (used != v.size()) bad_value(key);
        return x;
    } catch (const std::invalid_argument&) {
        bad_value(key);
    } catch (const std::out_of_range&) {
        bad_value(key);
    }
}

std::vector<std::string> split_ws(const std::string& v) {
    std::vector<std::string> out;
    std::istringstream in(v);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

// One shared value for every axis, or one value per axis.
template <typename T, typename Parse>
void parse_axes(const std::string& key, const std::string& v, int dim,
                std::array<T, 3>& out, Parse parse) {
    const std::vector<std::string> toks = split_ws(v);
    if (toks.size() == 1) {
        const T x = parse(key, toks[0]);
        for (int i = 0; i < dim; ++i) out[i] = x;
    } else if (static_cast<int>(toks.size()) == dim) {
        for (int i = 0; i < dim; ++i) out[i] = parse(key, toks[i]);
    } else {
        bad_value(key);
    }
}

// The profile sub-keys shared by metric factors and the initial u.
bool apply_profile_key(Profile& p, const std::string& sub, const std::string& key,
                       const std::string& value) {
    if (sub == "c0")
        p.c0 = parse_real(key, value);
    else if (sub == "cos_amp")
        p.cos_amp = parse_real(key, value);
    else if (sub == "cos_k")
        p.cos_k = parse_real(key, value);
    else if (sub == "sin_amp")
        p.sin_amp = parse_real(key, value);
    else if (sub == "sin_k")
        p.sin_k = parse_real(key, value);
    else
        return false;
    return true;
}

std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void emit_profile(std::ostream& out, const std::string& prefix, const Profile& p) {
    out << prefix << ".c0 = " << format_real(p.c0) << "\n";
    out << prefix << ".cos_amp = " << format_real(p.cos_amp) << "\n";
    out << prefix << ".cos_k = " << format_real(p.cos_k) << "\n";
    out << prefix << ".sin_amp = " << format_real(p.sin_amp) << "\n";
    out << prefix << ".sin_k = " << format_real(p.sin_k) << "\n";
}

const char* kind_name(MetricKind k) {
    switch (k) {
        case MetricKind::flat: return "flat";
        case MetricKind::warped: return "warped";
        case MetricKind::conformal: return "conformal";
    }
    return "flat";
}

}  // namespace

void validate_scenario(const Scenario& s) {
    auto fail = [](const char* what) { throw std::invalid_argument(std::string("scenario: ") + what); };
    if (s.dim != 2 && s.dim != 3) fail("grid.dim must be 2 or 3");
    for (int i = 0; i < s.dim; ++i) {
        if (s.resolution[i] < 4) fail("grid.resolution >= 4");
        if (!(s.extent[i] > 0.0)) fail("grid.extent > 0");
    }
    if (!(s.flat_scale > 0.0)) fail("metric.scale > 0");
    if (s.metric == MetricKind::conformal && s.dim != 2)
        fail("metric.kind conformal requires grid.dim = 2");
    if (!(s.t_max > 0.0)) fail("flow.t_max > 0");
    if (!(s.dt > 0.0)) fail("flow.dt > 0");
    if (!(s.cfl_sigma > 0.0)) fail("flow.cfl_sigma > 0");
    if (s.snapshot_stride < 1) fail("flow.snapshot_stride >= 1");
    if (!(s.rho > 0.0)) fail("localization.rho > 0");
    for (int i = 0; i < s.dim; ++i)
        if (s.center[i] < 0 || s.center[i] >= s.resolution[i])
            fail("localization.center within the lattice");
    if (s.p_list.empty()) fail("monitor.p_list must not be empty");
    for (double p : s.p_list)
        if (!(p >= 3.0)) fail("monitor.p_list >= 3");
    if (!s.c_in_fitted && !(s.c_in > 0.0)) fail("monitor.c_in must be 'fitted' or > 0");
    if (!s.c_m_fitted && !(s.c_m >= 2.0)) fail("extension.c_m must be 'fitted' or >= 2");
    if (s.a_list.empty()) fail("extension.a_list must not be empty");
    for (double a : s.a_list)
        if (!(a >= 1.0)) fail("extension.a_list >= 1");
}

Scenario parse_scenario_text(const std::string& text) {
    Scenario s;
    // Track dim-dependent keys so a later grid.dim line still applies.
    std::string res_v, ext_v, center_v;

    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("scenario: expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty()) bad_value(key);

        if (key == "name") {
            s.name = value;
        } else if (key == "grid.dim") {
            s.dim = static_cast<int>(parse_int(key, value));
        } else if (key == "grid.resolution") {
            res_v = value;
        } else if (key == "grid.extent") {
            ext_v = value;
        } else if (key == "metric.kind") {
            if (value == "flat")
                s.metric = MetricKind::flat;
            else if (value == "warped")
                s.metric = MetricKind::warped;
            else if (value == "conformal")
                s.metric = MetricKind::conformal;
            else
                bad_value(key);
        } else if (key == "metric.scale") {
            s.flat_scale = parse_real(key, value);
        } else if (key.rfind("metric.a.", 0) == 0) {
            if (!apply_profile_key(s.a, key.substr(9), key, value))
                throw std::invalid_argument("scenario: unknown key '" + key + "'");
        } else if (key.rfind("metric.b.", 0) == 0) {
            if (!apply_profile_key(s.b, key.substr(9), key, value))
                throw std::invalid_argument("scenario: unknown key '" + key + "'");
        } else if (key.rfind("metric.c.", 0) == 0) {
            if (!apply_profile_key(s.c, key.substr(9), key, value))
                throw std::invalid_argument("scenario: unknown key '" + key + "'");
        } else if (key.rfind("metric.v.", 0) == 0) {
            if (!apply_profile_key(s.v, key.substr(9), key, value))
                throw std::invalid_argument("scenario: unknown key '" + key + "'");
        } else if (key.rfind("u0.", 0) == 0) {
            if (!apply_profile_key(s.u0, key.substr(3), key, value))
                throw std::invalid_argument("scenario: unknown key '" + key + "'");
        } else if (key == "flow.t_max") {
            s.t_max = parse_real(key, value);
        } else if (key == "flow.dt") {
            s.dt = parse_real(key, value);
        } else if (key == "flow.cfl_sigma") {
            s.cfl_sigma = parse_real(key, value);
        } else if (key == "flow.snapshot_stride") {
            s.snapshot_stride = static_cast<int>(parse_int(key, value));
        } else if (key == "localization.center") {
            center_v = value;
        } else if (key == "localization.rho") {
            s.rho = parse_real(key, value);
        } else if (key == "monitor.p_list") {
            s.p_list.clear();
            for (const std::string& tok : split_ws(value)) s.p_list.push_back(parse_real(key, tok));
        } else if (key == "monitor.c_in") {
            if (value == "fitted") {
                s.c_in_fitted = true;
                s.c_in = 0.0;
            } else {
                s.c_in_fitted = false;
                s.c_in = parse_real(key, value);
            }
        } else if (key == "extension.c_m") {
            if (value == "fitted") {
                s.c_m_fitted = true;
                s.c_m = 2.0;
            } else {
                s.c_m_fitted = false;
                s.c_m = parse_real(key, value);
            }
        } else if (key == "extension.a_list") {
            s.a_list.clear();
            for (const std::string& tok : split_ws(value)) s.a_list.push_back(parse_real(key, tok));
        } else if (key == "seed") {
            s.seed = static_cast<unsigned long>(parse_int(key, value));
        } else {
            throw std::invalid_argument("scenario: unknown key '" + key + "'");
        }
    }

    if (s.dim != 2 && s.dim != 3)
        throw std::invalid_argument("scenario: grid.dim must be 2 or 3");
    if (!res_v.empty())
        parse_axes<int>("grid.resolution", res_v, s.dim, s.resolution,
                        [](const std::string& k, const std::string& t) {
                            return static_cast<int>(parse_int(k, t));
                        });
    if (!ext_v.empty())
        parse_axes<double>("grid.extent", ext_v, s.dim, s.extent, parse_real);
    if (!center_v.empty())
        parse_axes<int>("localization.center", center_v, s.dim, s.center,
                        [](const std::string& k, const std::string& t) {
                            return static_cast<int>(parse_int(k, t));
                        });
    if (s.dim == 2) {
        s.resolution[2] = 1;
        s.center[2] = 0;
    }

    validate_scenario(s);
    return s;
}

Scenario parse_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("scenario: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str());
}

std::string serialize_scenario(const Scenario& s) {
    std::ostringstream out;
    out << "name = " << s.name << "\n";
    out << "grid.dim = " << s.dim << "\n";
    out << "grid.resolution =";
    for (int i = 0; i < s.dim; ++i) out << ' ' << s.resolution[i];
    out << "\n";
    out << "grid.extent =";
    for (int i = 0; i < s.dim; ++i) out << ' ' << format_real(s.extent[i]);
    out << "\n";
    out << "metric.kind = " << kind_name(s.metric) << "\n";
    out << "metric.scale = " << format_real(s.flat_scale) << "\n";
    emit_profile(out, "metric.a", s.a);
    emit_profile(out, "metric.b", s.b);
    emit_profile(out, "metric.c", s.c);
    emit_profile(out, "metric.v", s.v);
    emit_profile(out, "u0", s.u0);
    out << "flow.t_max = " << format_real(s.t_max) << "\n";
    out << "flow.dt = " << format_real(s.dt) << "\n";
    out << "flow.cfl_sigma = " << format_real(s.cfl_sigma) << "\n";
    out << "flow.snapshot_stride = " << s.snapshot_stride << "\n";
    out << "localization.center =";
    for (int i = 0; i < s.dim; ++i) out << ' ' << s.center[i];
    out << "\n";
    out << "localization.rho = " << format_real(s.rho) << "\n";
    out << "monitor.p_list =";
    for (double p : s.p_list) out << ' ' << format_real(p);
    out << "\n";
    out << "monitor.c_in = ";
    if (s.c_in_fitted)
        out << "fitted\n";
    else
        out << format_real(s.c_in) << "\n";
    out << "extension.c_m = ";
    if (s.c_m_fitted)
        out << "fitted\n";
    else
        out << format_real(s.c_m) << "\n";
    out << "extension.a_list =";
    for (double a : s.a_list) out << ' ' << format_real(a);
    out << "\n";
    out << "seed = " << s.seed << "\n";
    return out.str();
}

std::string scenario_hash(const Scenario& s) {
    const std::string text = serialize_scenario(s);
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<std::string> preset_names() {
    return {"flat_static", "flat_coupled", "warped_ricci", "warped_coupled",
            "warped3d_ricci"};
}

Scenario preset_scenario(const std::string& name) {
    Scenario s;
    s.name = name;
    s.p_list = {3.0, 4.0, 6.0};
    if (name == "flat_static") {
        s.t_max = 1.0;
        s.dt = 1e-3;
        s.snapshot_stride = 40;
    } else if (name == "flat_coupled") {
        s.u0 = Profile{0.0, 0.3, 1.0, 0.0, 1.0};
        s.t_max = 1.0;
        s.dt = 1e-3;
        s.snapshot_stride = 40;
    } else if (name == "warped_ricci") {
        s.metric = MetricKind::warped;
        s.b = Profile{2.0, 1.0, 1.0, 0.0, 1.0};
        s.t_max = 0.5;
        s.dt = 8e-4;
        s.snapshot_stride = 25;
    } else if (name == "warped_coupled") {
        s.metric = MetricKind::warped;
        s.b = Profile{2.0, 1.0, 1.0, 0.0, 1.0};
        s.u0 = Profile{0.0, 0.3, 1.0, 0.0, 1.0};
        s.resolution = {128, 128, 1};
        s.t_max = 0.5;
        s.dt = 1.6e-4;
        s.snapshot_stride = 125;
    } else if (name == "warped3d_ricci") {
        s.dim = 3;
        s.resolution = {16, 16, 16};
        s.metric = MetricKind::warped;
        s.b = Profile{2.0, 1.0, 1.0, 0.0, 1.0};
        s.c = Profile{1.5, 0.0, 1.0, 0.3, 1.0};
        s.t_max = 0.1;
        s.dt = 5e-3;
        s.snapshot_stride = 1;
    } else {
        std::string msg = "scenario: unknown preset '" + name + "'; bundled:";
        for (const std::string& p : preset_names()) msg += " " + p;
        throw std::invalid_argument(msg);
    }
    validate_scenario(s);
    return s;
}

}  // namespace rhflow
