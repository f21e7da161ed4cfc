// Gibbs states, quantum affinity, entropy production, heat and the
// coherence split of the force-flow contraction. Boltzmann constant is 1.

#pragma once

#include "qtff/matcore.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace qtff::thermo {

class GibbsSpec {
public:
    // beta >= 0; beta == 0 is the infinite-temperature limit.
    GibbsSpec(HermOp hamiltonian, double beta);

    const HermOp& hamiltonian() const noexcept { return hamiltonian_; }
    double beta() const noexcept { return beta_; }
    double temperature() const noexcept { return 1.0 / beta_; }
    double partition() const noexcept { return partition_; }
    double log_partition() const noexcept { return log_partition_; }
    const Spectrum& energy_basis() const noexcept { return energy_basis_; }
    // Gibbs weights in the energy eigenbasis, ordered like energy_basis().
    const RVector& populations() const noexcept { return populations_; }

private:
    HermOp hamiltonian_;
    double beta_;
    Spectrum energy_basis_;
    RVector populations_;
    double partition_;
    double log_partition_;
};

QState gibbs_state(const GibbsSpec& g);

struct AffinityReport {
    HermOp a_total;  // -ln rho
    HermOp a_eq;     // -ln rho_beta
    HermOp a_irr;    // a_total - a_eq
    double abar;     // tr(a_irr); +inf when rho has an eigenvalue below eps
    bool clamped;
};

AffinityReport affinity(const QState& rho, const GibbsSpec& g, double eps = kDefaultClampEps);

// tr(-ln rho) with the constant Gibbs term dropped; +inf for singular rho.
double abar_dropped(const Spectrum& rho_spec, double eps = kDefaultClampEps);

// -ln p_l componentwise, +inf on zero entries.
std::vector<double> affinity_vector(const std::vector<double>& p);
double abar_scalar(const std::vector<double>& p);

// tr{rho_dot (ln rho_beta - ln rho)}; rho_dot must be traceless.
double entropy_production_rate(const QState& rho, const HermOp& rho_dot, const GibbsSpec& g,
                               double eps = kDefaultClampEps);
// -tr{rho_dot ln rho}
double entropy_rate(const QState& rho, const HermOp& rho_dot, double eps = kDefaultClampEps);

// tr{rho_dot H}
double heat_rate(const HermOp& rho_dot, const HermOp& h);

// -T A_eq = -(H + T ln Z 1)
HermOp heat_operator(const GibbsSpec& g);
// tr{rho(t+dt) Q} - tr{rho(t) Q}
double heat_increment(const QState& before, const QState& after, const GibbsSpec& g);

// Literal left-multiplied forms rho_beta^{-1}(ln rho_beta - ln rho) and
// rho_dot rho_beta. Not Hermitian in general; presentation only.
CMatrix thermodynamic_force(const QState& rho, const GibbsSpec& g, double eps = kDefaultClampEps);
CMatrix thermodynamic_flow(const HermOp& rho_dot, const GibbsSpec& g);

// Populations <n|rho|n> in the given basis.
RVector populations_in(const CMatrix& m, const Spectrum& basis);

// S(rho_d) - S(rho), with rho_d dephased in `basis`.
double coherence(const QState& rho, const Spectrum& basis);

// sum_n pdot_n ln(p_n^beta / p_n), populations in the Hamiltonian eigenbasis.
double classical_force_flow(const QState& rho, const HermOp& rho_dot, const GibbsSpec& g,
                            double eps = kDefaultClampEps);

// | -Cdot - tr{rho_dot ln(rho_beta/rho)} + sum_n pdot_n ln(p_n^beta/p_n) | at
// sample `index`, with Cdot from the centered difference of coherence over a
// uniform grid of spacing dt. nullopt at the first and last sample.
std::optional<double> coherence_split_residual(std::span<const QState> states,
                                               std::span<const HermOp> rho_dots,
                                               std::size_t index, double dt, const GibbsSpec& g,
                                               double eps = kDefaultClampEps);

}  // namespace qtff::thermo
