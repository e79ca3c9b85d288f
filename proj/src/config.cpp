#include "qadia/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "qadia/spectra.hpp"

namespace qadia {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_double(const std::string& value, const std::string& key, int line) {
    const std::string v = trim(value);
    if (v.empty()) throw ConfigError("empty value for key '" + key + "'", line);
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size())
        throw ConfigError("value '" + v + "' for key '" + key + "' is not a number", line);
    return d;
}

int parse_int(const std::string& value, const std::string& key, int line) {
    const double d = parse_double(value, key, line);
    const int i = static_cast<int>(d);
    if (static_cast<double>(i) != d)
        throw ConfigError("value for key '" + key + "' is not an integer", line);
    return i;
}

std::vector<double> parse_reals(const std::string& text) {
    std::string cleaned = text;
    for (auto& ch : cleaned)
        if (ch == ',') ch = ' ';
    std::istringstream in(cleaned);
    std::vector<double> out;
    std::string tok;
    while (in >> tok) {
        char* end = nullptr;
        const double d = std::strtod(tok.c_str(), &end);
        if (end != tok.c_str() + tok.size()) return {};
        out.push_back(d);
    }
    return out;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    std::set<std::string> seen;

    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value', got '" + line + "'", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("missing key before '='", line_no);
        if (!seen.insert(key).second)
            throw ConfigError("duplicate key '" + key + "'", line_no);

        if (key == "coupling") {
            if (value == "ising_z")
                cfg.model.coupling = CouplingKind::IsingZ;
            else if (value == "flip_flop")
                cfg.model.coupling = CouplingKind::FlipFlop;
            else if (value == "none")
                cfg.model.coupling = CouplingKind::None;
            else
                throw ConfigError("coupling must be ising_z, flip_flop or none; got '" +
                                      value + "'",
                                  line_no);
        } else if (key == "g") {
            cfg.model.g = parse_double(value, key, line_no);
        } else if (key == "theta") {
            cfg.model.theta = parse_double(value, key, line_no);
        } else if (key == "omega") {
            cfg.model.omega = parse_double(value, key, line_no);
        } else if (key == "phi0") {
            cfg.model.phi0 = parse_double(value, key, line_no);
        } else if (key == "n_steps") {
            cfg.n_steps = parse_int(value, key, line_no);
        } else if (key == "seed_state") {
            cfg.seed_state = value;
        } else if (key == "adiabatic_eps") {
            cfg.thresholds.adiabatic_eps = parse_double(value, key, line_no);
        } else if (key == "nontrans_eps") {
            cfg.thresholds.nontrans_eps = parse_double(value, key, line_no);
        } else if (key == "p_drift_eps") {
            cfg.thresholds.p_drift_eps = parse_double(value, key, line_no);
        } else if (key == "output_path") {
            cfg.output_path = value;
        } else if (key == "theta_min") {
            cfg.theta_min = parse_double(value, key, line_no);
        } else if (key == "theta_max") {
            cfg.theta_max = parse_double(value, key, line_no);
        } else if (key == "theta_count") {
            cfg.theta_count = parse_int(value, key, line_no);
        } else if (key == "g_min") {
            cfg.g_min = parse_double(value, key, line_no);
        } else if (key == "g_max") {
            cfg.g_max = parse_double(value, key, line_no);
        } else if (key == "g_count") {
            cfg.g_count = parse_int(value, key, line_no);
        } else {
            throw ConfigError("unknown key '" + key + "'", line_no);
        }
    }

    try {
        cfg.model.validate();
        if (cfg.n_steps < 16)
            throw InvalidParameter("n_steps must be at least 16");
    } catch (const InvalidParameter& e) {
        throw ConfigError(e.what(), 0);
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'", 0);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

SeedState resolve_seed(const RunConfig& cfg) {
    SeedState seed;
    const std::string& s = cfg.seed_state;

    if (s.size() == 4 && s.compare(0, 3, "phi") == 0 && s[3] >= '1' && s[3] <= '4') {
        seed.label = s[3] - '0';
        const GaugeFixedFrame frame = numeric_eigensystem(cfg.model, 0.0);
        seed.psi = frame.vectors.col(seed.label - 1);
        return seed;
    }

    if (s.compare(0, 6, "mixed:") == 0) {
        const std::vector<double> v = parse_reals(s.substr(6));
        if (v.size() != 16)
            throw ConfigError(
                "seed_state 'mixed:' needs 16 reals: 4 diagonal entries then re/im of "
                "the upper triangle (01, 02, 03, 12, 13, 23)");
        Mat4 rho = Mat4::Zero();
        for (int i = 0; i < 4; ++i) rho(i, i) = v[i];
        int idx = 4;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
                rho(i, j) = Complex(v[idx], v[idx + 1]);
                rho(j, i) = std::conj(rho(i, j));
                idx += 2;
            }
        if (std::abs(rho.trace().real() - 1.0) > 1e-9)
            throw NonPhysical("seed_state density matrix must have unit trace");
        Eigen::SelfAdjointEigenSolver<Mat4> es(rho);
        if (es.eigenvalues().minCoeff() < -1e-10)
            throw NonPhysical("seed_state density matrix must be positive semidefinite");
        seed.mixed = true;
        seed.rho = rho;
        return seed;
    }

    const std::vector<double> v = parse_reals(s);
    if (v.size() != 8)
        throw ConfigError(
            "seed_state must be phi1..phi4, eight reals (re/im per amplitude), or "
            "'mixed:' plus 16 reals; got '" + s + "'");
    Vec4 psi;
    for (int i = 0; i < 4; ++i) psi(i) = Complex(v[2 * i], v[2 * i + 1]);
    const double norm = psi.norm();
    if (norm < 1e-12) throw ConfigError("seed_state vector is zero");
    seed.psi = psi / norm;
    return seed;
}

}  // namespace qadia
