#include "qtff/thermo.hpp"

#include <cmath>
#include <limits>

namespace qtff::thermo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_traceless(const HermOp& rho_dot) {
    const double tr = rho_dot.mat().trace().real();
    if (std::abs(tr) > 1e-9) {
        throw ValidationError("rho_dot must be traceless, tr = " + std::to_string(tr));
    }
}

void check_probability(const std::vector<double>& p) {
    double sum = 0.0;
    for (double v : p) {
        if (!(v >= 0.0)) throw ValidationError("probability vector has a negative entry");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw ValidationError("probability vector sums to " + std::to_string(sum));
    }
}

CMatrix log_gibbs(const GibbsSpec& g) {
    // ln rho_beta = -beta H - ln Z
    const auto n = g.hamiltonian().dim();
    return -g.beta() * g.hamiltonian().mat() - g.log_partition() * CMatrix::Identity(n, n);
}

}  // namespace

GibbsSpec::GibbsSpec(HermOp hamiltonian, double beta)
    : hamiltonian_(std::move(hamiltonian)), beta_(beta) {
    if (!(beta_ >= 0.0) || !std::isfinite(beta_)) {
        throw ValidationError("GibbsSpec: beta must be finite and non-negative");
    }
    energy_basis_ = eigh(hamiltonian_);
    const RVector& e = energy_basis_.eigenvalues;
    const double e0 = e.minCoeff();
    RVector w = (-beta_ * (e.array() - e0)).exp();
    const double s = w.sum();
    populations_ = w / s;
    log_partition_ = -beta_ * e0 + std::log(s);
    partition_ = std::exp(log_partition_);
}

QState gibbs_state(const GibbsSpec& g) {
    const Spectrum& b = g.energy_basis();
    CMatrix m = b.eigenvectors * g.populations().cast<Complex>().asDiagonal() * b.eigenvectors.adjoint();
    return QState(0.5 * (m + m.adjoint()));
}

double abar_dropped(const Spectrum& rho_spec, double eps) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < rho_spec.eigenvalues.size(); ++i) {
        const double lam = rho_spec.eigenvalues(i);
        if (lam < eps) return kInf;
        s -= std::log(lam);
    }
    return s;
}

AffinityReport affinity(const QState& rho, const GibbsSpec& g, double eps) {
    const Spectrum spec = eigh(rho);
    const RegularizedOp log_rho = logm_reg(spec, eps);
    HermOp a_total = -log_rho.op;
    HermOp a_eq(CMatrix(-log_gibbs(g)));
    HermOp a_irr = a_total - a_eq;
    double abar = kInf;
    if (!log_rho.clamped) abar = a_irr.mat().trace().real();
    return {std::move(a_total), std::move(a_eq), std::move(a_irr), abar, log_rho.clamped};
}

std::vector<double> affinity_vector(const std::vector<double>& p) {
    check_probability(p);
    std::vector<double> a;
    a.reserve(p.size());
    for (double v : p) a.push_back(v > 0.0 ? -std::log(v) : kInf);
    return a;
}

double abar_scalar(const std::vector<double>& p) {
    double s = 0.0;
    for (double a : affinity_vector(p)) s += a;
    return s;
}

double entropy_production_rate(const QState& rho, const HermOp& rho_dot, const GibbsSpec& g,
                               double eps) {
    require_traceless(rho_dot);
    const CMatrix diff = log_gibbs(g) - logm_reg(rho, eps).op.mat();
    return trace_prod(rho_dot.mat(), diff);
}

double entropy_rate(const QState& rho, const HermOp& rho_dot, double eps) {
    return -trace_prod(rho_dot.mat(), logm_reg(rho, eps).op.mat());
}

double heat_rate(const HermOp& rho_dot, const HermOp& h) { return trace_prod(rho_dot, h); }

HermOp heat_operator(const GibbsSpec& g) {
    if (g.beta() == 0.0) throw ValidationError("heat_operator: undefined at beta = 0");
    return HermOp(CMatrix(g.temperature() * log_gibbs(g)));
}

double heat_increment(const QState& before, const QState& after, const GibbsSpec& g) {
    const HermOp q = heat_operator(g);
    return trace_prod(after.mat(), q.mat()) - trace_prod(before.mat(), q.mat());
}

CMatrix thermodynamic_force(const QState& rho, const GibbsSpec& g, double eps) {
    const Spectrum& b = g.energy_basis();
    const CMatrix gibbs_inv =
        b.eigenvectors * g.populations().cwiseInverse().cast<Complex>().asDiagonal() * b.eigenvectors.adjoint();
    return gibbs_inv * (log_gibbs(g) - logm_reg(rho, eps).op.mat());
}

CMatrix thermodynamic_flow(const HermOp& rho_dot, const GibbsSpec& g) {
    return rho_dot.mat() * gibbs_state(g).mat();
}

RVector populations_in(const CMatrix& m, const Spectrum& basis) {
    const CMatrix rotated = basis.eigenvectors.adjoint() * m * basis.eigenvectors;
    return rotated.diagonal().real();
}

double coherence(const QState& rho, const Spectrum& basis) {
    const RVector p = populations_in(rho.mat(), basis).cwiseMax(0.0);
    const double c = shannon_entropy(p) - vn_entropy(rho);
    return std::max(c, 0.0);
}

double classical_force_flow(const QState& rho, const HermOp& rho_dot, const GibbsSpec& g,
                            double eps) {
    const RVector p = populations_in(rho.mat(), g.energy_basis());
    const RVector pdot = populations_in(rho_dot.mat(), g.energy_basis());
    const RVector& pg = g.populations();
    double s = 0.0;
    for (Eigen::Index n = 0; n < p.size(); ++n) {
        s += pdot(n) * (std::log(pg(n)) - std::log(std::max(p(n), eps)));
    }
    return s;
}

std::optional<double> coherence_split_residual(std::span<const QState> states,
                                               std::span<const HermOp> rho_dots,
                                               std::size_t index, double dt, const GibbsSpec& g,
                                               double eps) {
    if (states.size() != rho_dots.size()) {
        throw ValidationError("coherence_split_residual: states and rho_dots differ in length");
    }
    if (index == 0 || index + 1 >= states.size()) return std::nullopt;
    const Spectrum& basis = g.energy_basis();
    const double cdot =
        (coherence(states[index + 1], basis) - coherence(states[index - 1], basis)) / (2.0 * dt);
    const double total = entropy_production_rate(states[index], rho_dots[index], g, eps);
    const double classical = classical_force_flow(states[index], rho_dots[index], g, eps);
    return std::abs(-cdot - total + classical);
}

}  // namespace qtff::thermo
