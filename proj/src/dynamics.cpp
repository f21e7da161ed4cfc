#include "qtff/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qtff::dynamics {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt_time(double t) {
    std::ostringstream os;
    os.precision(9);
    os << t;
    return os.str();
}

CMatrix plus_state() { return CMatrix::Constant(2, 2, Complex(0.5, 0.0)); }

}  // namespace

PositivityError::PositivityError(double t, double eigenvalue)
    : std::runtime_error("positivity violation at t = " + fmt_time(t) + " (eigenvalue " +
                         fmt_time(eigenvalue) + ")"),
      t_(t),
      eig_(eigenvalue) {}

// --------------------------------- RateFn ----------------------------------

RateFn RateFn::constant(double c) { return RateFn(Kind::constant, c); }
RateFn RateFn::sine(double amplitude) { return RateFn(Kind::sine, amplitude); }
RateFn RateFn::neg_tanh(double amplitude) { return RateFn(Kind::neg_tanh, amplitude); }

RateFn RateFn::table(std::vector<double> times, std::vector<double> values) {
    if (times.size() < 2 || times.size() != values.size()) {
        throw ValidationError("rate table needs at least two knots and matching lengths");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) {
            throw ValidationError("rate table times must be strictly increasing");
        }
    }
    RateFn r(Kind::table, 1.0);
    r.times_ = std::move(times);
    r.values_ = std::move(values);
    return r;
}

bool RateFn::covers(double t0, double t1) const noexcept {
    if (kind_ != Kind::table) return true;
    return t0 >= times_.front() && t1 <= times_.back() + 1e-12;
}

double RateFn::operator()(double t) const {
    switch (kind_) {
        case Kind::constant: return amplitude_;
        case Kind::sine: return amplitude_ * std::sin(t);
        case Kind::neg_tanh: return -amplitude_ * std::tanh(t);
        case Kind::table: break;
    }
    if (t < times_.front() || t > times_.back() + 1e-12) {
        throw ValidationError("rate table evaluated outside [" + fmt_time(times_.front()) + ", " +
                              fmt_time(times_.back()) + "] at t = " + fmt_time(t));
    }
    t = std::min(t, times_.back());
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t hi = std::min<std::size_t>(it - times_.begin(), times_.size() - 1);
    const std::size_t lo = hi - 1;
    const double w = (t - times_[lo]) / (times_[hi] - times_[lo]);
    return values_[lo] + w * (values_[hi] - values_[lo]);
}

double RateFn::integral(double t) const {
    switch (kind_) {
        case Kind::constant: return amplitude_ * t;
        case Kind::sine: return amplitude_ * (1.0 - std::cos(t));
        case Kind::neg_tanh: return -amplitude_ * std::log(std::cosh(t));
        case Kind::table: break;
    }
    if (times_.front() > 0.0 || t > times_.back() + 1e-12) {
        throw ValidationError("rate table does not cover [0, " + fmt_time(t) + "]");
    }
    // exact trapezoid on the piecewise-linear interpolant
    double acc = 0.0;
    double a = 0.0;
    double fa = (*this)(0.0);
    for (double knot : times_) {
        if (knot <= a) continue;
        const double b = std::min(knot, t);
        const double fb = (*this)(b);
        acc += 0.5 * (fa + fb) * (b - a);
        a = b;
        fa = fb;
        if (b >= t) break;
    }
    return acc;
}

// -------------------------------- Scenario ---------------------------------

std::size_t Scenario::grid_size() const {
    return static_cast<std::size_t>(std::floor(t_max / dt + 1e-9)) + 1;
}

std::vector<std::string> Scenario::validate() const {
    std::vector<std::string> warnings;
    const auto d = initial_state.dim();
    if (d == 0) throw ValidationError("scenario: missing initial state");
    if (hamiltonian.dim() != d) throw ValidationError("scenario: hamiltonian dimension mismatch");
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw ValidationError("scenario: beta must be >= 0");
    if (!(t_max > 0.0)) throw ValidationError("scenario: t_max must be positive");
    if (!(dt > 0.0)) throw ValidationError("scenario: dt must be positive");
    if (dt > t_max / 100.0 * (1.0 + 1e-12)) {
        throw ValidationError("scenario: dt too coarse, need dt <= t_max/100 = " +
                              fmt_time(t_max / 100.0));
    }
    for (std::size_t k = 0; k < channels.size(); ++k) {
        const CMatrix& l = channels[k].lindblad;
        if (l.rows() != d || l.cols() != d) {
            throw ValidationError("scenario: channel " + std::to_string(k + 1) + " dimension mismatch");
        }
        if (std::abs(l.trace()) > 1e-10) {
            throw ValidationError("scenario: channel " + std::to_string(k + 1) + " is not traceless");
        }
        if (!channels[k].rate.covers(0.0, t_max)) {
            throw ValidationError("scenario: channel " + std::to_string(k + 1) +
                                  " rate table does not cover [0, t_max]");
        }
    }
    for (std::size_t j = 0; j < channels.size(); ++j) {
        for (std::size_t k = j; k < channels.size(); ++k) {
            const Complex ip = (channels[j].lindblad.adjoint() * channels[k].lindblad).trace();
            const double want = j == k ? 1.0 : 0.0;
            if (std::abs(ip - want) > 1e-9) {
                std::string msg = "channels " + std::to_string(j + 1) + "," + std::to_string(k + 1) +
                                  " not orthonormal: tr(L_j^dag L_k) = " + fmt_time(ip.real());
                if (strict_normalization) throw ValidationError("scenario: " + msg);
                warnings.push_back(msg);
            }
        }
    }
    return warnings;
}

// ------------------------------ master equation -----------------------------

CMatrix channel_term(const CMatrix& rho, double t, const ChannelSpec& ch) {
    const double g = ch.rate(t);
    const CMatrix& l = ch.lindblad;
    const CMatrix ldl = l.adjoint() * l;
    return g * (l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl));
}

CMatrix generator(const CMatrix& rho, double t, const std::vector<ChannelSpec>& channels) {
    CMatrix out = CMatrix::Zero(rho.rows(), rho.cols());
    for (const auto& ch : channels) out += channel_term(rho, t, ch);
    return out;
}

HermOp rhs(const QState& rho, double t, const std::vector<ChannelSpec>& channels) {
    const CMatrix g = generator(rho.mat(), t, channels);
    return HermOp(CMatrix(0.5 * (g + g.adjoint())));
}

Rate abar_rate_total(const Spectrum& rho_spec, const CMatrix& rho_dot, double eps) {
    const RegularizedOp inv = invm_reg(rho_spec, eps);
    return {-trace_prod(rho_dot, inv.op.mat()), inv.clamped};
}

Rate abar_rate_total(const QState& rho, const HermOp& rho_dot, double eps) {
    return abar_rate_total(eigh(rho), rho_dot.mat(), eps);
}

Rate abar_rate_channel(const QState& rho, double t, const ChannelSpec& ch, double eps) {
    const CMatrix term = channel_term(rho.mat(), t, ch);
    return abar_rate_total(eigh(rho), CMatrix(0.5 * (term + term.adjoint())), eps);
}

// -------------------------------- integrator --------------------------------

namespace {

SeriesSample derive(double t, const QState& rho, const Spectrum& spec, const HermOp& rho_dot,
                    const Scenario& s, const thermo::GibbsSpec& g, double eps, RVector& eig_aff) {
    SeriesSample out;
    out.t = t;
    out.min_eig = spec.eigenvalues.minCoeff();
    out.clamped = out.min_eig < eps;
    out.heat_rate = thermo::heat_rate(rho_dot, s.hamiltonian);
    out.coherence = thermo::coherence(rho, g.energy_basis());

    eig_aff.resize(spec.dim());
    for (Eigen::Index i = 0; i < spec.dim(); ++i) {
        const double lam = spec.eigenvalues(i);
        eig_aff(i) = lam < eps ? kInf : -std::log(lam);
    }

    out.dabar.assign(s.channels.size(), kNaN);
    if (out.clamped) {
        out.abar = kInf;
        out.dabar_total = kNaN;
        out.dis_dt = kNaN;
        out.ds_dt = kNaN;
        return out;
    }
    out.abar = thermo::abar_dropped(spec, eps);
    const RegularizedOp inv = invm_reg(spec, eps);
    out.dabar_total = -trace_prod(rho_dot.mat(), inv.op.mat());
    for (std::size_t k = 0; k < s.channels.size(); ++k) {
        const CMatrix term = channel_term(rho.mat(), t, s.channels[k]);
        out.dabar[k] = -trace_prod(CMatrix(0.5 * (term + term.adjoint())), inv.op.mat());
    }
    const CMatrix log_rho = logm_reg(spec, eps).op.mat();
    out.ds_dt = -trace_prod(rho_dot.mat(), log_rho);
    out.dis_dt = thermo::entropy_production_rate(rho, rho_dot, g, eps);
    return out;
}

}  // namespace

Trajectory integrate(const Scenario& s, double eps) {
    s.validate();
    const thermo::GibbsSpec g = s.gibbs();
    const std::size_t n = s.grid_size();
    const double dt = s.dt;

    Trajectory traj;
    traj.dt = dt;
    traj.times.reserve(n);
    traj.states.reserve(n);
    traj.rho_dots.reserve(n);
    traj.series.reserve(n);
    traj.eigen_affinities.reserve(n);

    CMatrix rho = s.initial_state.mat();
    double min_eig = std::numeric_limits<double>::infinity();

    auto record = [&](std::size_t i, const CMatrix& m, const Spectrum& spec) {
        const double t = static_cast<double>(i) * dt;
        QState state(m);
        HermOp rho_dot = rhs(state, t, s.channels);
        RVector eig_aff;
        traj.series.push_back(derive(t, state, spec, rho_dot, s, g, eps, eig_aff));
        traj.times.push_back(t);
        traj.states.push_back(std::move(state));
        traj.rho_dots.push_back(std::move(rho_dot));
        traj.eigen_affinities.push_back(std::move(eig_aff));
    };

    {
        const Spectrum spec = eigh(rho);
        min_eig = spec.eigenvalues.minCoeff();
        record(0, rho, spec);
    }

    for (std::size_t i = 1; i < n; ++i) {
        const double t = static_cast<double>(i - 1) * dt;
        const CMatrix k1 = generator(rho, t, s.channels);
        const CMatrix k2 = generator(rho + 0.5 * dt * k1, t + 0.5 * dt, s.channels);
        const CMatrix k3 = generator(rho + 0.5 * dt * k2, t + 0.5 * dt, s.channels);
        const CMatrix k4 = generator(rho + dt * k3, t + dt, s.channels);
        CMatrix next = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        next = 0.5 * (next + next.adjoint());
        const Complex tr = next.trace();
        traj.max_trace_drift = std::max(traj.max_trace_drift, std::abs(tr - 1.0));
        next /= tr.real();

        const double t_next = static_cast<double>(i) * dt;
        Spectrum spec = eigh(next);
        const double lo = spec.eigenvalues.minCoeff();
        if (lo < kPositivityAbort) throw PositivityError(t_next, lo);
        min_eig = std::min(min_eig, lo);
        if (lo < 0.0) {
            // project sub-threshold negative eigenvalues onto the PSD cone
            spec.eigenvalues = spec.eigenvalues.cwiseMax(0.0);
            spec.eigenvalues /= spec.eigenvalues.sum();
            next = spec.reconstruct();
            next = 0.5 * (next + next.adjoint());
        }
        rho = next;
        record(i, rho, spec);
    }
    traj.min_eigenvalue = min_eig;
    return traj;
}

// ------------------------------- closed forms -------------------------------

QState closed_form_dephasing(const RateFn& rate, double t) {
    const double c = 0.5 * std::exp(-2.0 * rate.integral(t));
    CMatrix m = plus_state();
    m(0, 1) = c;
    m(1, 0) = c;
    return QState(m);
}

QState closed_form_pauli_eternal(double t) {
    const double x = 0.5 * (1.0 + std::exp(-2.0 * t));
    CMatrix m = CMatrix::Identity(2, 2) * 0.5;
    m(0, 1) = 0.5 * x;
    m(1, 0) = 0.5 * x;
    return QState(m);
}

QState closed_form(std::string_view family, double t, const std::optional<RateFn>& rate) {
    if (family == "dephasing") {
        if (!rate) throw ValidationError("closed_form: dephasing family needs a rate function");
        return closed_form_dephasing(*rate, t);
    }
    if (family == "pauli_eternal") return closed_form_pauli_eternal(t);
    throw ValidationError("closed_form: unknown family '" + std::string(family) +
                          "' (known: dephasing, pauli_eternal)");
}

namespace pauli {
CMatrix x() {
    CMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}
CMatrix y() {
    CMatrix m(2, 2);
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
}
CMatrix z() {
    CMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}
}  // namespace pauli

}  // namespace qtff::dynamics
