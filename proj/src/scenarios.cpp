#include "qtff/scenarios.hpp"

#include <cmath>
#include <map>
#include <numbers>

namespace qtff::scenarios {

namespace {

using dynamics::ChannelSpec;
using dynamics::RateFn;
using dynamics::Scenario;
namespace pauli = dynamics::pauli;

QState plus_state() { return QState(CMatrix::Constant(2, 2, Complex(0.5, 0.0))); }

Scenario qubit_scenario(std::string name, std::vector<ChannelSpec> channels, double t_max) {
    Scenario s;
    s.name = std::move(name);
    s.hamiltonian = HermOp::zero(2);
    s.beta = 1.0;
    s.initial_state = plus_state();
    s.channels = std::move(channels);
    s.t_max = t_max;
    s.dt = 1e-3;
    return s;
}

NamedCase sin_dephasing() {
    const RateFn rate = RateFn::sine();
    NamedCase c;
    c.name = "fig1_sin_dephasing";
    c.description = "qubit dephasing, gamma(t) = sin t, t in [0, 4 pi]";
    c.payload = qubit_scenario(c.name, {{pauli::z(), rate}}, 4.0 * std::numbers::pi);
    c.closed_form = [rate](double t) { return dynamics::closed_form_dephasing(rate, t); };
    return c;
}

NamedCase const_dephasing() {
    const RateFn rate = RateFn::constant(0.5);
    NamedCase c;
    c.name = "fig2_const_dephasing";
    c.description = "qubit pure dephasing, gamma = 1/2, t in [0, 5]";
    c.payload = qubit_scenario(c.name, {{pauli::z(), rate}}, 5.0);
    c.closed_form = [rate](double t) { return dynamics::closed_form_dephasing(rate, t); };
    return c;
}

NamedCase eternal_pauli() {
    // 1/2 sum_k gamma_k [sigma_k rho sigma_k - rho]; the 1/2 lives in the rates
    NamedCase c;
    c.name = "fig3_eternal_pauli";
    c.description = "Pauli channels, gamma = (1, 1, -tanh t), t in [0, 5]";
    c.payload = qubit_scenario(c.name,
                               {{pauli::x(), RateFn::constant(0.5)},
                                {pauli::y(), RateFn::constant(0.5)},
                                {pauli::z(), RateFn::neg_tanh(0.5)}},
                               5.0);
    c.closed_form = [](double t) { return dynamics::closed_form_pauli_eternal(t); };
    return c;
}

NamedCase amplitude_damping() {
    // H = diag(0, 1), beta = 1, detailed balance gamma_up / gamma_down = e^{-beta}
    constexpr double beta = 1.0;
    constexpr double gamma_down = 0.6;
    const double gamma_up = gamma_down * std::exp(-beta);
    CMatrix lower = CMatrix::Zero(2, 2);
    lower(0, 1) = 1.0;
    CMatrix raise = lower.adjoint();

    Scenario s;
    s.name = "gksl_amplitude_damping";
    s.hamiltonian = HermOp::diagonal(RVector::LinSpaced(2, 0.0, 1.0));
    s.beta = beta;
    CMatrix rho0(2, 2);
    rho0 << Complex(0.3, 0.0), Complex(0.2, 0.1), Complex(0.2, -0.1), Complex(0.7, 0.0);
    s.initial_state = QState(rho0);
    s.channels = {{lower, RateFn::constant(gamma_down)},
                  {raise, RateFn::constant(gamma_up)},
                  {pauli::z() / std::sqrt(2.0), RateFn::constant(0.3)}};
    s.t_max = 5.0;
    s.dt = 1e-3;
    s.strict_normalization = true;

    NamedCase c;
    c.name = s.name;
    c.description = "thermalizing qubit with Gibbs fixed point, H = diag(0, 1), beta = 1";
    c.payload = std::move(s);
    return c;
}

NamedCase vidal_triple() {
    using interconvert::ExactProbVec;
    NamedCase c;
    c.name = "supp3_vidal_triple";
    c.description = "Schmidt vectors (90,12,10,10), (55,55,6,6), (40,40,40,2) over 122";
    c.payload = SchmidtTriple{{ExactProbVec::from_weights({90, 12, 10, 10}),
                               ExactProbVec::from_weights({55, 55, 6, 6}),
                               ExactProbVec::from_weights({40, 40, 40, 2})}};
    return c;
}

NamedCase thermal_demo() {
    using interconvert::ExactProbVec;
    using interconvert::Rational;
    NamedCase c;
    c.name = "thermal_demo_2level";
    c.description = "Gibbs weights (2, 1); p = (1, 0), q = (2/3, 1/3)";
    c.payload = ThermalDemo{interconvert::GibbsRational({2, 1}),
                            ExactProbVec({Rational(1), Rational(0)}),
                            ExactProbVec({Rational(2, 3), Rational(1, 3)})};
    return c;
}

const std::map<std::string, NamedCase>& registry() {
    static const std::map<std::string, NamedCase> cases = [] {
        std::map<std::string, NamedCase> m;
        for (NamedCase c : {sin_dephasing(), const_dephasing(), eternal_pauli(), amplitude_damping(),
                            vidal_triple(), thermal_demo()}) {
            if (c.is_dynamics()) c.scenario().validate();
            m.emplace(c.name, std::move(c));
        }
        return m;
    }();
    return cases;
}

}  // namespace

std::vector<std::string> list_cases() {
    std::vector<std::string> names;
    for (const auto& [name, c] : registry()) names.push_back(name);
    return names;
}

const NamedCase& get_case(const std::string& name) {
    const auto& reg = registry();
    if (const auto it = reg.find(name); it != reg.end()) return it->second;
    std::string known;
    for (const auto& [n, c] : reg) known += (known.empty() ? "" : ", ") + n;
    throw UnknownCaseError("unknown case '" + name + "'; available: " + known);
}

}  // namespace qtff::scenarios
