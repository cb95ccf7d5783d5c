// Perfectly stirred reactor model: reaction and mixing source terms for a
// single reactive scalar on [0,1], and the equilibrium structure of their sum.
#pragma once

#include <vector>

namespace qreact {

struct PsrParams {
    double rate_prefactor = 15.0;  // reaction amplitude
    double phi_a = 1.8;            // activation parameter
    double phi_i = 0.15;           // offset parameter
    double mixing_rate = 0.25;     // inverse-time mixing coefficient

    void validate() const;  // throws std::invalid_argument
};

enum class Stability { stable, unstable };

struct Equilibrium {
    double location;
    Stability stability;
};

// S(phi) = rate_prefactor * (1 - phi) * exp(-phi_a / (phi + phi_i))
double reaction_rate(double phi, const PsrParams& params = {});

// M(phi) = -phi * mixing_rate
double mixing_rate(double phi, const PsrParams& params = {});

// Composition-space transport velocity M + S.
double drift(double phi, const PsrParams& params = {});

// All equilibria of the drift on [0,1]: sign changes on a 10^4-point scan
// refined by bisection to `tol`, plus boundary equilibria where the drift
// vanishes identically. Sorted by location.
std::vector<Equilibrium> find_equilibria(const PsrParams& params = {}, double tol = 1e-12);

}  // namespace qreact
