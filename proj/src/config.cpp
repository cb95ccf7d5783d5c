#include "qreact/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qreact {

std::string to_string(SolverMode m) {
    switch (m) {
        case SolverMode::classical: return "classical";
        case SolverMode::ideal: return "ideal";
        case SolverMode::hhl: return "hhl";
    }
    return "?";
}

SolverMode solver_mode_from_string(const std::string& s) {
    if (s == "classical") return SolverMode::classical;
    if (s == "ideal") return SolverMode::ideal;
    if (s == "hhl") return SolverMode::hhl;
    throw std::invalid_argument("unknown solver mode: " + s);
}

void RunConfig::finalize() {
    if (horizon_request > 0.0) {
        dt = horizon_request / n_time_steps();
        horizon_request = 0.0;
    }
}

void RunConfig::validate() const {
    psr.validate();
    if (n_t_qubits < 0 || n_phi_qubits < 1 || n_phi_qubits > 12)
        throw std::invalid_argument("RunConfig: qubit counts out of range");
    if (n_t_qubits + n_phi_qubits > 14)
        throw std::invalid_argument("RunConfig: n_t_qubits + n_phi_qubits exceeds 14");
    if (!(dt > 0.0)) throw std::invalid_argument("RunConfig: dt must be positive");
    if (!(beta_a > 0.0 && beta_b > 0.0))
        throw std::invalid_argument("RunConfig: beta shape parameters must be positive");
    for (int m : orders)
        if (m < 0 || m >= (1 << n_phi_qubits))
            throw std::invalid_argument("RunConfig: measurement order out of range");
    if (shots < 0) throw std::invalid_argument("RunConfig: shots must be nonnegative");
    if (solver == SolverMode::hhl) hhl.validate();
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

}  // namespace

void RunConfig::apply_key(const std::string& key, const std::string& value) {
    auto as_double = [&] { return std::stod(value); };
    auto as_int = [&] { return std::stoi(value); };
    if (key == "rate_prefactor") psr.rate_prefactor = as_double();
    else if (key == "phi_a") psr.phi_a = as_double();
    else if (key == "phi_i") psr.phi_i = as_double();
    else if (key == "mixing_rate") psr.mixing_rate = as_double();
    else if (key == "n_t_qubits") n_t_qubits = as_int();
    else if (key == "n_phi_qubits") n_phi_qubits = as_int();
    else if (key == "dt") { dt = as_double(); horizon_request = 0.0; }
    else if (key == "horizon") horizon_request = as_double();
    else if (key == "beta_a") beta_a = as_double();
    else if (key == "beta_b") beta_b = as_double();
    else if (key == "solver") solver = solver_mode_from_string(value);
    else if (key == "clock_qubits") hhl.clock_qubits = as_int();
    else if (key == "hhl_t0") hhl.t0 = as_double();
    else if (key == "hhl_c") hhl.c = as_double();
    else if (key == "orders") {
        orders.clear();
        std::stringstream ss(value);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            tok = trim(tok);
            if (!tok.empty()) orders.push_back(std::stoi(tok));
        }
    } else if (key == "fit_domain") {
        if (value == "index") fit_domain_phi = false;
        else if (value == "phi") fit_domain_phi = true;
        else throw std::invalid_argument("fit_domain must be 'index' or 'phi'");
    } else if (key == "shots") shots = std::stol(value);
    else if (key == "output_dir") output_dir = value;
    else if (key == "seed") seed = std::stoull(value);
    else throw std::invalid_argument("unknown configuration key: " + key);
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open configuration file: " + path);
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected 'key = value'");
        try {
            cfg.apply_key(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const std::exception& e) {
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    cfg.finalize();
    return cfg;
}

std::string RunConfig::describe() const {
    std::ostringstream os;
    os << "solver = " << to_string(solver) << "\n"
       << "n_t_qubits = " << n_t_qubits << "\n"
       << "n_phi_qubits = " << n_phi_qubits << "\n"
       << "dt = " << dt << "  (horizon " << horizon() << ", " << n_time_steps() << " steps)\n"
       << "beta shape = (" << beta_a << ", " << beta_b << ")\n"
       << "psr = {prefactor " << psr.rate_prefactor << ", phi_a " << psr.phi_a << ", phi_i "
       << psr.phi_i << ", mixing " << psr.mixing_rate << "}\n"
       << "orders =";
    for (int m : orders) os << ' ' << m;
    os << "\nshots = " << shots << ", seed = " << seed << "\n";
    if (solver == SolverMode::hhl)
        os << "hhl = {clock " << hhl.clock_qubits << ", t0 " << hhl.t0 << ", c " << hhl.c << "}\n";
    return os.str();
}

}  // namespace qreact
