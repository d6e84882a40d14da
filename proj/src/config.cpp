#include "molcoh/config.hpp"

#include <fstream>
#include <sstream>

#include "molcoh/textio.hpp"

namespace molcoh {

namespace {

std::string trim(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = text.find_last_not_of(" \t\r");
    return text.substr(first, last - first + 1);
}

std::vector<std::string> split_ws(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

[[noreturn]] void fail(int line, const std::string& message) {
    throw ConfigError("config line " + std::to_string(line) + ": " + message);
}

double number(int line, const std::string& value) {
    try {
        return parse_double(value);
    } catch (const std::exception&) {
        fail(line, "malformed number '" + value + "'");
    }
}

int positive_int(int line, const std::string& value) {
    const double v = number(line, value);
    if (v < 1.0 || v != static_cast<double>(static_cast<int>(v)))
        fail(line, "expected a positive integer, got '" + value + "'");
    return static_cast<int>(v);
}

}  // namespace

SystemDefinition RunConfig::build(std::string* warning) const {
    if (!particles.empty()) return make_system(particles, groups);
    if (preset == "h2z") return build_system_h2z(z, warning);
    return build_system(preset, warning);
}

std::string RunConfig::canonical_text() const {
    std::string out;
    if (!particles.empty()) {
        for (const auto& p : particles)
            out += "particle=" + format_exact(p.mass) + ' ' + format_exact(p.charge) + ' ' +
                   p.label + '\n';
        for (const auto& g : groups) {
            out += "group=";
            for (std::size_t i = 0; i < g.size(); ++i)
                out += (i ? " " : "") + std::to_string(g[i]);
            out += '\n';
        }
    } else {
        out += "preset=" + preset + '\n';
        if (preset == "h2z") out += "z=" + format_exact(z) + '\n';
    }
    out += "seed=" + std::to_string(seed) + '\n';
    out += "basis_target=" + std::to_string(effective_basis_target()) + '\n';
    out += "trials=" + std::to_string(trials) + '\n';
    out += "refine_cycles=" + std::to_string(refine_cycles) + '\n';
    out += "theta_step=" + format_exact(theta_step_deg) + '\n';
    if (radius) out += "radius=" + format_exact(*radius) + '\n';
    out += "scale_min=" + format_exact(effective_scale_min()) + '\n';
    out += "scale_max=" + format_exact(effective_scale_max()) + '\n';
    return out;
}

std::string RunConfig::digest() const { return hex16(fnv1a64(canonical_text())); }

RunConfig parse_config(const std::string& text) {
    RunConfig config;
    bool saw_system = false;

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto comment = raw.find('#');
        if (comment != std::string::npos) raw.erase(comment);
        const std::string line = trim(raw);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(line_no, "empty key");
        if (value.empty()) fail(line_no, "empty value for '" + key + "'");

        if (key == "preset") {
            config.preset = value;
            saw_system = true;
        } else if (key == "z") {
            config.z = number(line_no, value);
            if (!(config.z > 0.0)) fail(line_no, "z must be positive");
        } else if (key == "seed") {
            try {
                config.seed = parse_u64(value);
            } catch (const std::exception&) {
                fail(line_no, "malformed seed '" + value + "'");
            }
        } else if (key == "basis_target") {
            config.basis_target = positive_int(line_no, value);
        } else if (key == "trials") {
            config.trials = positive_int(line_no, value);
        } else if (key == "refine_cycles") {
            const double v = number(line_no, value);
            if (v < 0.0 || v != static_cast<double>(static_cast<int>(v)))
                fail(line_no, "refine_cycles must be a non-negative integer");
            config.refine_cycles = static_cast<int>(v);
        } else if (key == "theta_step") {
            config.theta_step_deg = number(line_no, value);
            if (!(config.theta_step_deg > 0.0)) fail(line_no, "theta_step must be positive");
        } else if (key == "radius") {
            const double r = number(line_no, value);
            if (!(r > 0.0)) fail(line_no, "radius must be positive");
            config.radius = r;
        } else if (key == "out") {
            config.out_dir = value;
        } else if (key == "scale_min") {
            config.scale_min = number(line_no, value);
            if (!(config.scale_min > 0.0)) fail(line_no, "scale_min must be positive");
        } else if (key == "scale_max") {
            config.scale_max = number(line_no, value);
            if (!(config.scale_max > 0.0)) fail(line_no, "scale_max must be positive");
        } else if (key == "particle") {
            const auto fields = split_ws(value);
            if (fields.size() != 3) fail(line_no, "particle needs 'mass charge label'");
            Particle p;
            p.mass = number(line_no, fields[0]);
            p.charge = number(line_no, fields[1]);
            p.label = fields[2];
            config.particles.push_back(std::move(p));
            saw_system = true;
        } else if (key == "group") {
            const auto fields = split_ws(value);
            if (fields.size() < 2) fail(line_no, "group needs at least two indices");
            std::vector<int> g;
            for (const auto& f : fields) {
                const double v = number(line_no, f);
                if (v < 0.0 || v != static_cast<double>(static_cast<int>(v)))
                    fail(line_no, "group indices must be non-negative integers");
                g.push_back(static_cast<int>(v));
            }
            config.groups.push_back(std::move(g));
        } else {
            fail(line_no, "unknown key '" + key + "'");
        }
    }

    if (!saw_system) throw ConfigError("config: missing system (no preset or particle lines)");
    if (!config.preset.empty() && !config.particles.empty())
        throw ConfigError("config: give either a preset or explicit particles, not both");
    if (!config.preset.empty() && config.preset != "h2z") {
        std::string warning;
        build_system(config.preset, &warning);  // validates the name early
    }
    return config;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

}  // namespace molcoh
