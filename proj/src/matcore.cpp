#include "qtff/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qtff {

namespace {

std::string describe(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

void require_square(const CMatrix& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw ValidationError(std::string(what) + ": matrix must be square and non-empty");
    }
}

void fix_phase(CMatrix& vecs) {
    for (Eigen::Index j = 0; j < vecs.cols(); ++j) {
        for (Eigen::Index i = 0; i < vecs.rows(); ++i) {
            const Complex z = vecs(i, j);
            if (std::abs(z) > 1e-12) {
                vecs.col(j) *= std::conj(z) / std::abs(z);
                break;
            }
        }
    }
}

RegularizedOp apply_clamped(const Spectrum& spec, double eps, double (*f)(double)) {
    if (!(eps > 0.0)) throw ValidationError("clamp epsilon must be positive");
    bool clamped = false;
    CMatrix out = spec.apply([&](double lam) {
        if (lam < eps) {
            clamped = true;
            lam = eps;
        }
        return f(lam);
    });
    return {HermOp(0.5 * (out + out.adjoint())), clamped};
}

double log_fn(double x) { return std::log(x); }
double inv_fn(double x) { return 1.0 / x; }

}  // namespace

double hermitian_deviation(const CMatrix& m) {
    if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
    if (m.size() == 0) return 0.0;
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

// --------------------------------- HermOp ----------------------------------

HermOp::HermOp(CMatrix m) : mat_(std::move(m)) {
    require_square(mat_, "HermOp");
    const double dev = hermitian_deviation(mat_);
    if (dev > kHermitianTol) {
        throw ValidationError("HermOp: matrix not Hermitian, max |M - M^dag| = " + describe(dev));
    }
}

HermOp HermOp::zero(Eigen::Index dim) { return HermOp(CMatrix::Zero(dim, dim)); }
HermOp HermOp::identity(Eigen::Index dim) { return HermOp(CMatrix::Identity(dim, dim)); }
HermOp HermOp::diagonal(const RVector& d) {
    return HermOp(CMatrix(d.cast<Complex>().asDiagonal()));
}

HermOp HermOp::operator+(const HermOp& o) const { return HermOp(mat_ + o.mat_); }
HermOp HermOp::operator-(const HermOp& o) const { return HermOp(mat_ - o.mat_); }
HermOp HermOp::operator-() const { return HermOp(CMatrix(-mat_)); }
HermOp HermOp::operator*(double s) const { return HermOp(CMatrix(mat_ * s)); }

// --------------------------------- QState ----------------------------------

QState::QState(CMatrix m) : mat_(std::move(m)) {
    require_square(mat_, "QState");
    const double dev = hermitian_deviation(mat_);
    if (dev > kHermitianTol) {
        throw ValidationError("QState: matrix not Hermitian, max |M - M^dag| = " + describe(dev));
    }
    const Complex tr = mat_.trace();
    if (std::abs(tr - Complex(1.0, 0.0)) > kTraceTol) {
        throw ValidationError("QState: trace deviates from 1 by " + describe(std::abs(tr - 1.0)));
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(mat_, Eigen::EigenvaluesOnly);
    const double lo = solver.eigenvalues().minCoeff();
    if (lo < -kPsdTol) {
        throw ValidationError("QState: negative eigenvalue " + describe(lo));
    }
}

QState QState::maximally_mixed(Eigen::Index dim) {
    return QState(CMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

QState QState::pure(const Eigen::VectorXcd& psi) {
    const Eigen::VectorXcd v = psi / psi.norm();
    return QState(v * v.adjoint());
}

// -------------------------------- Spectrum ---------------------------------

CMatrix Spectrum::reconstruct() const {
    return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

CMatrix Spectrum::apply(const std::function<double(double)>& f) const {
    RVector mapped(eigenvalues.size());
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) mapped(i) = f(eigenvalues(i));
    return eigenvectors * mapped.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

Spectrum eigh(const CMatrix& m) {
    require_square(m, "eigh");
    const double dev = hermitian_deviation(m);
    if (dev > kHermitianTol) {
        throw ValidationError("eigh: input not Hermitian, max |M - M^dag| = " + describe(dev));
    }
    const CMatrix sym = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigh: eigendecomposition failed");
    }
    Spectrum s{solver.eigenvalues(), solver.eigenvectors()};
    fix_phase(s.eigenvectors);
    return s;
}

// ---------------------------- matrix functions -----------------------------

RegularizedOp logm_reg(const Spectrum& spec, double eps) { return apply_clamped(spec, eps, log_fn); }
RegularizedOp invm_reg(const Spectrum& spec, double eps) { return apply_clamped(spec, eps, inv_fn); }
RegularizedOp logm_reg(const QState& rho, double eps) { return logm_reg(eigh(rho), eps); }
RegularizedOp invm_reg(const QState& rho, double eps) { return invm_reg(eigh(rho), eps); }

HermOp expm_herm(const HermOp& m) {
    const CMatrix e = eigh(m).apply([](double x) { return std::exp(x); });
    return HermOp(0.5 * (e + e.adjoint()));
}

double shannon_entropy(const RVector& p) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (p(i) > 0.0) s -= p(i) * std::log(p(i));
    }
    return s;
}

double vn_entropy(const Spectrum& spec) { return shannon_entropy(spec.eigenvalues); }
double vn_entropy(const QState& rho) { return vn_entropy(eigh(rho)); }

double trace_prod(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.cols() || a.cols() != b.rows()) {
        throw ValidationError("trace_prod: dimension mismatch");
    }
    // tr(ab) = sum_ij a_ij b_ji
    const Complex t = a.cwiseProduct(b.transpose()).sum();
    // absolute 1e-9 for unit-scale operands, relative beyond that
    const double scale = std::max(1.0, a.norm() * b.norm());
    if (std::abs(t.imag()) > 1e-9 * scale) {
        throw ValidationError("trace_prod: trace has imaginary part " + describe(t.imag()));
    }
    return t.real();
}

double trace_prod(const HermOp& a, const HermOp& b) { return trace_prod(a.mat(), b.mat()); }

}  // namespace qtff
