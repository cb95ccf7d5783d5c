#include "qreact/chemistry.hpp"

#include <cmath>
#include <stdexcept>

namespace qreact {

void PsrParams::validate() const {
    if (!(phi_i > 0.0)) throw std::invalid_argument("PsrParams: phi_i must be positive");
    if (!(rate_prefactor >= 0.0)) throw std::invalid_argument("PsrParams: rate_prefactor must be nonnegative");
    if (!(mixing_rate >= 0.0)) throw std::invalid_argument("PsrParams: mixing_rate must be nonnegative");
}

static void check_phi(double phi) {
    if (!(phi >= 0.0 && phi <= 1.0)) throw std::domain_error("composition value outside [0,1]");
}

double reaction_rate(double phi, const PsrParams& p) {
    check_phi(phi);
    return p.rate_prefactor * (1.0 - phi) * std::exp(-p.phi_a / (phi + p.phi_i));
}

double mixing_rate(double phi, const PsrParams& p) {
    check_phi(phi);
    return -phi * p.mixing_rate;
}

double drift(double phi, const PsrParams& p) {
    return reaction_rate(phi, p) + mixing_rate(phi, p);
}

std::vector<Equilibrium> find_equilibria(const PsrParams& params, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("find_equilibria: tol must be positive");
    params.validate();

    const int n_scan = 10000;
    std::vector<Equilibrium> out;

    // boundary equilibria: the drift vanishes at the endpoint without a
    // sign change (e.g. phi = 1 when mixing is off)
    const double value_eps = 1e-14 * params.rate_prefactor;
    if (std::fabs(drift(0.0, params)) <= value_eps) {
        double inside = drift(0.5 / n_scan, params);
        out.push_back({0.0, inside < 0.0 ? Stability::stable : Stability::unstable});
    }

    for (int i = 0; i < n_scan; ++i) {
        double a = static_cast<double>(i) / n_scan;
        double b = static_cast<double>(i + 1) / n_scan;
        double fa = drift(a, params);
        double fb = drift(b, params);
        if (fa == 0.0 && i > 0) {
            out.push_back({a, drift(a - 0.5 / n_scan, params) > 0.0 ? Stability::stable
                                                                    : Stability::unstable});
            continue;
        }
        if (fa * fb >= 0.0) continue;
        bool entering_negative = fa > 0.0;  // + -> - crossing attracts from both sides
        while (b - a > tol) {
            double m = 0.5 * (a + b);
            double fm = drift(m, params);
            if (fa * fm <= 0.0) { b = m; fb = fm; } else { a = m; fa = fm; }
        }
        out.push_back({0.5 * (a + b),
                       entering_negative ? Stability::stable : Stability::unstable});
    }

    if (std::fabs(drift(1.0, params)) <= value_eps) {
        double inside = drift(1.0 - 0.5 / n_scan, params);
        bool already = !out.empty() && std::fabs(out.back().location - 1.0) <= 2.0 / n_scan;
        if (!already)
            out.push_back({1.0, inside > 0.0 ? Stability::stable : Stability::unstable});
    }
    return out;
}

}  // namespace qreact
