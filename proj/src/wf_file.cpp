#include "molcoh/wf_file.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "molcoh/textio.hpp"

namespace molcoh {

namespace {

constexpr const char* kMagic = "ECGWF 1";

[[noreturn]] void corrupt(const std::string& section, const std::string& detail) {
    throw std::runtime_error("wavefunction file invalid after section '" + section +
                             "': " + detail);
}

struct LineReader {
    std::istringstream in;
    std::string section = "header";
    explicit LineReader(const std::string& text) : in(text) {}

    std::string next() {
        std::string line;
        if (!std::getline(in, line)) corrupt(section, "unexpected end of file");
        return line;
    }
    std::vector<std::string> next_fields(const std::string& expected_tag, int count) {
        std::istringstream ls(next());
        std::string tag;
        ls >> tag;
        if (tag != expected_tag) corrupt(section, "expected '" + expected_tag + "' line");
        std::vector<std::string> fields;
        std::string tok;
        while (ls >> tok) fields.push_back(tok);
        if (count >= 0 && static_cast<int>(fields.size()) != count)
            corrupt(section, "wrong field count on '" + expected_tag + "' line");
        return fields;
    }
};

}  // namespace

std::string wavefunction_to_text(const Wavefunction& wf) {
    if (wf.basis_size() == 0 || wf.coefficients.size() != wf.basis_size())
        throw std::invalid_argument("cannot save an unsolved wavefunction");

    std::string out;
    out += kMagic;
    out += '\n';

    out += "system " + std::to_string(wf.system.size()) + '\n';
    for (const auto& p : wf.system.particles)
        out += "particle " + format_exact(p.mass) + ' ' + format_exact(p.charge) + ' ' +
               (p.label.empty() ? "-" : p.label) + '\n';
    out += "groups " + std::to_string(wf.system.identical_groups.size()) + '\n';
    for (const auto& g : wf.system.identical_groups) {
        out += "group";
        for (int i : g) out += ' ' + std::to_string(i);
        out += '\n';
    }

    out += "frame " + std::to_string(wf.frame.reference_particle) + '\n';
    for (int r = 0; r < wf.frame.n_coords(); ++r) {
        out += "urow";
        for (int c = 0; c < wf.frame.n_particles; ++c)
            out += ' ' + format_exact(wf.frame.ti_block(r, c));
        out += '\n';
    }

    out += "basis " + std::to_string(wf.basis_size()) + '\n';
    const int n = wf.frame.n_coords();
    for (int k = 0; k < wf.basis_size(); ++k) {
        out += "func sym\n";
        out += "a";
        const auto& a = wf.generators[static_cast<std::size_t>(k)];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) out += ' ' + format_exact(a(i, j));
        out += '\n';
        out += "c " + format_exact(wf.coefficients[k]) + '\n';
    }

    out += "energy " + format_exact(wf.energy) + '\n';
    out += "seed " + std::to_string(wf.seed) + '\n';
    out += "digest " + (wf.config_digest.empty() ? std::string("-") : wf.config_digest) + '\n';
    out += "checksum " + hex16(fnv1a64(out)) + '\n';
    return out;
}

Wavefunction wavefunction_from_text(const std::string& text, std::string* warning) {
    if (warning) warning->clear();
    LineReader reader(text);

    if (reader.next() != kMagic)
        throw std::runtime_error("wavefunction file: unsupported version or bad magic header");

    reader.section = "system";
    const int n_particles = static_cast<int>(parse_u64(reader.next_fields("system", 1)[0]));
    if (n_particles < 2) corrupt("system", "bad particle count");
    std::vector<Particle> particles;
    for (int i = 0; i < n_particles; ++i) {
        auto f = reader.next_fields("particle", 3);
        particles.push_back({parse_double(f[0]), parse_double(f[1]), f[2] == "-" ? "" : f[2]});
    }
    const int n_groups = static_cast<int>(parse_u64(reader.next_fields("groups", 1)[0]));
    std::vector<std::vector<int>> groups;
    for (int g = 0; g < n_groups; ++g) {
        auto f = reader.next_fields("group", -1);
        std::vector<int> idx;
        for (const auto& tok : f) idx.push_back(static_cast<int>(parse_u64(tok)));
        groups.push_back(std::move(idx));
    }

    Wavefunction wf;
    wf.system = make_system(std::move(particles), std::move(groups));

    reader.section = "frame";
    const int ref = static_cast<int>(parse_u64(reader.next_fields("frame", 1)[0]));
    wf.frame = build_frame(wf.system, ref);
    for (int r = 0; r < wf.frame.n_coords(); ++r) {
        auto f = reader.next_fields("urow", n_particles);
        for (int c = 0; c < n_particles; ++c) {
            const double u = parse_double(f[static_cast<std::size_t>(c)]);
            if (std::abs(u - wf.frame.ti_block(r, c)) > 1e-12 * (1.0 + std::abs(u)))
                corrupt("frame", "stored transform disagrees with the rebuilt frame");
        }
    }

    reader.section = "basis";
    const int m = static_cast<int>(parse_u64(reader.next_fields("basis", 1)[0]));
    if (m < 1) corrupt("basis", "empty basis");
    const int n = wf.frame.n_coords();
    wf.coefficients.resize(m);
    for (int k = 0; k < m; ++k) {
        auto tag = reader.next_fields("func", 1);
        if (tag[0] != "sym") corrupt("basis", "unknown symmetrization tag '" + tag[0] + "'");
        auto entries = reader.next_fields("a", n * (n + 1) / 2);
        Eigen::MatrixXd a(n, n);
        int idx = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j, ++idx)
                a(i, j) = a(j, i) = parse_double(entries[static_cast<std::size_t>(idx)]);
        wf.generators.push_back(a);
        wf.basis.push_back(symmetrize({a, ref}, wf.system, wf.frame));
        wf.coefficients[k] = parse_double(reader.next_fields("c", 1)[0]);
    }

    reader.section = "trailer";
    wf.energy = parse_double(reader.next_fields("energy", 1)[0]);
    wf.seed = parse_u64(reader.next_fields("seed", 1)[0]);
    const std::string digest = reader.next_fields("digest", 1)[0];
    wf.config_digest = digest == "-" ? "" : digest;

    const auto checksum_pos = text.rfind("checksum ");
    if (checksum_pos == std::string::npos) corrupt("trailer", "missing checksum");
    const std::string stored = reader.next_fields("checksum", 1)[0];
    const std::string computed = hex16(fnv1a64(text.substr(0, checksum_pos)));
    if (stored != computed && warning)
        *warning = "checksum mismatch: stored " + stored + ", computed " + computed;

    // Invariant re-verification: the stored energy must be the Rayleigh
    // quotient of the stored coefficients.
    AssembledMatrices mats = assemble(wf.basis, wf.system, wf.frame);
    const double rayleigh = rayleigh_quotient(wf, mats);
    if (std::abs(rayleigh - wf.energy) > 1e-9 * std::abs(wf.energy))
        throw std::runtime_error("wavefunction file: stored energy fails the Rayleigh-quotient check");
    return wf;
}

void save_wavefunction(const Wavefunction& wf, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write wavefunction file '" + path + "'");
    out << wavefunction_to_text(wf);
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

Wavefunction load_wavefunction(const std::string& path, std::string* warning) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open wavefunction file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return wavefunction_from_text(buffer.str(), warning);
}

}  // namespace molcoh
