// Majorization, Nielsen LOCC convertibility, Vidal optimal
// conversion probability, affinity-gap direction prediction, and thermal-operation
// convertibility through the rational Gibbs embedding.
//
// Every routine has a floating-point form (comparisons with 1e-12 slack) and an
// exact form over rationals for inputs given as integer ratios.

#pragma once

#include "qtff/matcore.hpp"

#include <boost/rational.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qtff::interconvert {

using Rational = boost::rational<std::int64_t>;

inline constexpr double kCompareTol = 1e-12;
inline constexpr double kNormTol = 1e-9;

// Nonnegative entries summing to 1 within 1e-9; rescaled to unit sum on entry.
class ProbVec {
public:
    ProbVec() = default;
    explicit ProbVec(std::vector<double> entries);

    const std::vector<double>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    double operator[](std::size_t i) const { return entries_[i]; }
    // stable descending sort
    std::vector<double> sorted_desc() const;

private:
    std::vector<double> entries_;
};

// Nonnegative rationals summing exactly to 1.
class ExactProbVec {
public:
    ExactProbVec() = default;
    explicit ExactProbVec(std::vector<Rational> entries);
    // (w_1, ..., w_n) / sum(w)
    static ExactProbVec from_weights(const std::vector<std::int64_t>& weights);

    const std::vector<Rational>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    ProbVec to_double() const;

private:
    std::vector<Rational> entries_;
};

// Parses "3", "90/122" or "0.6666667" exactly.
Rational parse_rational(std::string_view text);
double to_double(const Rational& r);

// Rational Gibbs weights D_i / D.
class GibbsRational {
public:
    explicit GibbsRational(std::vector<std::int64_t> weights);

    const std::vector<std::int64_t>& weights() const noexcept { return weights_; }
    std::int64_t total() const noexcept { return total_; }
    std::size_t size() const noexcept { return weights_.size(); }
    ExactProbVec populations() const { return ExactProbVec::from_weights(weights_); }

private:
    std::vector<std::int64_t> weights_;
    std::int64_t total_ = 0;
};

// x majorizes y (y ≺ x). Shorter vectors are zero-padded.
bool majorizes(const ProbVec& x, const ProbVec& y);
bool majorizes(const ExactProbVec& x, const ExactProbVec& y);

// |psi> -> |phi> deterministically by LOCC iff alpha ≺ beta.
bool nielsen_convertible(const ProbVec& alpha, const ProbVec& beta);
bool nielsen_convertible(const ExactProbVec& alpha, const ExactProbVec& beta);

struct VidalResult {
    double probability;
    std::size_t argmin;  // 0-based tail index attaining the minimum
};

struct ExactVidalResult {
    Rational probability;
    std::size_t argmin;
};

// min_l E_l(alpha)/E_l(beta) over descending tail sums, capped at 1.
VidalResult vidal(const ProbVec& alpha, const ProbVec& beta);
ExactVidalResult vidal(const ExactProbVec& alpha, const ExactProbVec& beta);
double vidal_probability(const ProbVec& alpha, const ProbVec& beta);
Rational vidal_probability(const ExactProbVec& alpha, const ExactProbVec& beta);

// ln(alpha_l / beta_l) on descending-sorted entries, i.e. A(beta-state) - A(alpha-state).
std::vector<double> affinity_gap(const ProbVec& alpha, const ProbVec& beta);

enum class Direction { forward, backward, tie };
std::string_view to_string(Direction d);

struct ConversionReport {
    bool deterministic_forward = false;
    bool deterministic_backward = false;
    double p_forward = 0.0;
    double p_backward = 0.0;
    std::vector<double> delta_a;
    Direction predicted_direction = Direction::tie;
    // Sign of delta_a at the Vidal-minimizing index of the less probable direction.
    std::size_t theorem2_index = 0;  // 0-based
    Direction theorem2_direction = Direction::tie;
    // Sign of the largest-magnitude delta_a component.
    Direction largest_gap_direction = Direction::tie;
};

ConversionReport preferred_direction(const ProbVec& alpha, const ProbVec& beta);
ConversionReport preferred_direction(const ExactProbVec& alpha, const ExactProbVec& beta);

// Block i holds D_i copies of p_i / D_i.
ProbVec embed(const ProbVec& p, const GibbsRational& g);
ExactProbVec embed(const ExactProbVec& p, const GibbsRational& g);

bool thermal_convertible(const ProbVec& p, const ProbVec& q, const GibbsRational& g);
bool thermal_convertible(const ExactProbVec& p, const ExactProbVec& q, const GibbsRational& g);

struct Theorem3Check {
    double abar_p_hat;  // may be +inf
    double abar_q_hat;
    bool inequality_holds;  // abar_p_hat > abar_q_hat
};

Theorem3Check theorem3_check(const ProbVec& p, const ProbVec& q, const GibbsRational& g);
Theorem3Check theorem3_check(const ExactProbVec& p, const ExactProbVec& q, const GibbsRational& g);

}  // namespace qtff::interconvert
