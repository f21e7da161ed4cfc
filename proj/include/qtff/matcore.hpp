// Dense Hermitian kernel: eigendecomposition, regularized matrix
// functions, entropy and density-matrix validity checks.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>

namespace qtff {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-9;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kDefaultClampEps = 1e-12;

class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// max |m - m†|
double hermitian_deviation(const CMatrix& m);

// Hermitian operator (Hamiltonian, affinity, heat operator).
class HermOp {
public:
    HermOp() = default;
    explicit HermOp(CMatrix m);

    static HermOp zero(Eigen::Index dim);
    static HermOp identity(Eigen::Index dim);
    static HermOp diagonal(const RVector& d);

    const CMatrix& mat() const noexcept { return mat_; }
    Eigen::Index dim() const noexcept { return mat_.rows(); }

    HermOp operator+(const HermOp& o) const;
    HermOp operator-(const HermOp& o) const;
    HermOp operator-() const;
    HermOp operator*(double s) const;

private:
    CMatrix mat_;
};

// Density operator. Construction enforces Hermiticity, unit trace and PSD.
class QState {
public:
    QState() = default;
    explicit QState(CMatrix m);

    static QState maximally_mixed(Eigen::Index dim);
    static QState pure(const Eigen::VectorXcd& psi);

    const CMatrix& mat() const noexcept { return mat_; }
    Eigen::Index dim() const noexcept { return mat_.rows(); }
    HermOp as_op() const { return HermOp(mat_); }

private:
    CMatrix mat_;
};

struct Spectrum {
    RVector eigenvalues;   // ascending
    CMatrix eigenvectors;  // columns, unitary

    Eigen::Index dim() const noexcept { return eigenvalues.size(); }
    CMatrix reconstruct() const;
    // V diag(f(λ)) V†
    CMatrix apply(const std::function<double(double)>& f) const;
};

// Validates Hermiticity, then diagonalizes. Every eigenvector is rotated so its
// first non-negligible component is real and positive.
Spectrum eigh(const CMatrix& m);
inline Spectrum eigh(const HermOp& m) { return eigh(m.mat()); }
inline Spectrum eigh(const QState& rho) { return eigh(rho.mat()); }

struct RegularizedOp {
    HermOp op;
    bool clamped = false;
};

// Eigenvalues are replaced by max(λ, eps) before the scalar function.
RegularizedOp logm_reg(const QState& rho, double eps = kDefaultClampEps);
RegularizedOp invm_reg(const QState& rho, double eps = kDefaultClampEps);
RegularizedOp logm_reg(const Spectrum& spec, double eps = kDefaultClampEps);
RegularizedOp invm_reg(const Spectrum& spec, double eps = kDefaultClampEps);

// Matrix exponential of a Hermitian operator via its spectrum.
HermOp expm_herm(const HermOp& m);

// Von Neumann entropy in nats, with 0 ln 0 = 0.
double vn_entropy(const QState& rho);
double vn_entropy(const Spectrum& spec);
double shannon_entropy(const RVector& p);

// Re tr(a b); throws on dimension mismatch or |Im| > 1e-9.
double trace_prod(const HermOp& a, const HermOp& b);
double trace_prod(const CMatrix& a, const CMatrix& b);

}  // namespace qtff
