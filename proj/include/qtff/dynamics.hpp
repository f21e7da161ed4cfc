// Time-local master equation with time-dependent rates, fixed-step
// RK4 integration, and the per-channel decomposition of the affinity rate.

#pragma once

#include "qtff/matcore.hpp"
#include "qtff/thermo.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qtff::dynamics {

class PositivityError : public std::runtime_error {
public:
    PositivityError(double t, double eigenvalue);
    double time() const noexcept { return t_; }
    double eigenvalue() const noexcept { return eig_; }

private:
    double t_;
    double eig_;
};

class RateFn {
public:
    enum class Kind { constant, sine, neg_tanh, table };

    static RateFn constant(double c);
    // amplitude * sin t
    static RateFn sine(double amplitude = 1.0);
    // -amplitude * tanh t
    static RateFn neg_tanh(double amplitude = 1.0);
    // Piecewise-linear; times strictly increasing, at least two knots.
    static RateFn table(std::vector<double> times, std::vector<double> values);

    // Throws ValidationError outside a table's range.
    double operator()(double t) const;
    // Integral over [0, t].
    double integral(double t) const;

    Kind kind() const noexcept { return kind_; }
    double amplitude() const noexcept { return amplitude_; }
    const std::vector<double>& times() const noexcept { return times_; }
    const std::vector<double>& values() const noexcept { return values_; }
    bool covers(double t0, double t1) const noexcept;

private:
    RateFn(Kind k, double amplitude) : kind_(k), amplitude_(amplitude) {}

    Kind kind_;
    double amplitude_;
    std::vector<double> times_;
    std::vector<double> values_;
};

// One dissipative channel gamma(t) [L rho L^dag - 1/2 {L^dag L, rho}].
// L is a general complex matrix.
struct ChannelSpec {
    CMatrix lindblad;
    RateFn rate;
};

struct Scenario {
    std::string name;
    HermOp hamiltonian;
    double beta = 1.0;
    QState initial_state;
    std::vector<ChannelSpec> channels;
    double t_max = 0.0;
    double dt = 1e-3;
    // Literal-form scenarios (bare Pauli generators) only warn on
    // tr(L_j^dag L_k) != delta_jk; strict ones reject it.
    bool strict_normalization = false;

    // Throws ValidationError on invariant violations; returns warnings.
    std::vector<std::string> validate() const;
    thermo::GibbsSpec gibbs() const { return thermo::GibbsSpec(hamiltonian, beta); }
    std::size_t grid_size() const;
};

CMatrix channel_term(const CMatrix& rho, double t, const ChannelSpec& ch);
CMatrix generator(const CMatrix& rho, double t, const std::vector<ChannelSpec>& channels);
// Traceless Hermitian right-hand side of the master equation.
HermOp rhs(const QState& rho, double t, const std::vector<ChannelSpec>& channels);

struct Rate {
    double value;
    bool clamped;
};

// -tr{rho_dot rho^{-1}}
Rate abar_rate_total(const QState& rho, const HermOp& rho_dot, double eps = kDefaultClampEps);
Rate abar_rate_total(const Spectrum& rho_spec, const CMatrix& rho_dot, double eps = kDefaultClampEps);
// Contribution of a single channel to abar_rate_total.
Rate abar_rate_channel(const QState& rho, double t, const ChannelSpec& ch,
                       double eps = kDefaultClampEps);

struct SeriesSample {
    double t = 0.0;
    double abar = 0.0;         // tr(-ln rho), Gibbs term dropped
    double dabar_total = 0.0;
    std::vector<double> dabar; // one per channel
    double dis_dt = 0.0;
    double ds_dt = 0.0;
    double heat_rate = 0.0;
    double coherence = 0.0;
    double min_eig = 0.0;
    bool clamped = false;      // singular-state series are inf / NaN
};

struct Trajectory {
    double dt = 0.0;
    std::vector<double> times;
    std::vector<QState> states;
    std::vector<HermOp> rho_dots;
    std::vector<SeriesSample> series;
    // -ln(lambda_i) per sample, ascending eigenvalue order
    std::vector<RVector> eigen_affinities;
    double max_trace_drift = 0.0;  // before renormalization
    double min_eigenvalue = 0.0;

    std::size_t size() const noexcept { return times.size(); }
};

inline constexpr double kPositivityAbort = -1e-8;

Trajectory integrate(const Scenario& s, double eps = kDefaultClampEps);

// Closed-form solutions from rho(0) = 1/2 [[1,1],[1,1]].
// Dephasing with literal sigma_z channel: rho_01 = 1/2 exp(-2 Gamma(t)).
QState closed_form_dephasing(const RateFn& rate, double t);
// Rates (1/2, 1/2, -tanh t / 2) on (sigma_x, sigma_y, sigma_z): x(t) = (1 + e^{-2t})/2.
QState closed_form_pauli_eternal(double t);
// family in {"dephasing", "pauli_eternal"}; dephasing requires a rate.
QState closed_form(std::string_view family, double t, const std::optional<RateFn>& rate = std::nullopt);

namespace pauli {
CMatrix x();
CMatrix y();
CMatrix z();
}  // namespace pauli

}  // namespace qtff::dynamics
