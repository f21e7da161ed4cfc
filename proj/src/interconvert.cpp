#include "qtff/interconvert.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace qtff::interconvert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class T>
struct Cmp;

template <>
struct Cmp<double> {
    static bool ge(double a, double b) { return a >= b - kCompareTol; }
    static bool eq(double a, double b) { return std::abs(a - b) <= kCompareTol; }
};

template <>
struct Cmp<Rational> {
    static bool ge(const Rational& a, const Rational& b) { return a >= b; }
    static bool eq(const Rational& a, const Rational& b) { return a == b; }
};

template <class T>
std::vector<T> sorted_padded(std::vector<T> v, std::size_t n) {
    v.resize(n, T(0));
    std::stable_sort(v.begin(), v.end(), [](const T& a, const T& b) { return a > b; });
    return v;
}

template <class T>
bool majorizes_impl(const std::vector<T>& xs, const std::vector<T>& ys) {
    const std::size_t n = std::max(xs.size(), ys.size());
    const auto x = sorted_padded(xs, n);
    const auto y = sorted_padded(ys, n);
    T sx(0), sy(0);
    for (std::size_t l = 0; l < n; ++l) {
        sx += x[l];
        sy += y[l];
        if (!Cmp<T>::ge(sx, sy)) return false;
    }
    return Cmp<T>::eq(sx, sy);
}

template <class T>
struct VidalImpl {
    T probability;
    std::size_t argmin;
};

template <class T>
VidalImpl<T> vidal_impl(const std::vector<T>& as, const std::vector<T>& bs) {
    const std::size_t n = std::max(as.size(), bs.size());
    const auto a = sorted_padded(as, n);
    const auto b = sorted_padded(bs, n);
    // tails E_l = sum_{i >= l}
    std::vector<T> ea(n + 1, T(0)), eb(n + 1, T(0));
    for (std::size_t i = n; i-- > 0;) {
        ea[i] = ea[i + 1] + a[i];
        eb[i] = eb[i + 1] + b[i];
    }
    T best(1);
    std::size_t arg = 0;
    bool have = false;
    for (std::size_t l = 0; l < n; ++l) {
        T ratio(1);
        if (eb[l] == T(0)) {
            if (ea[l] != T(0)) continue;  // +inf, never the minimum
        } else {
            ratio = ea[l] / eb[l];
        }
        if (!have || ratio < best) {
            best = ratio;
            arg = l;
            have = true;
        }
    }
    if (best > T(1)) best = T(1);
    return {best, arg};
}

std::vector<Rational> embed_impl(const std::vector<Rational>& p, const GibbsRational& g) {
    if (p.size() != g.size()) throw ValidationError("embed: length of p differs from Gibbs weights");
    std::vector<Rational> out;
    out.reserve(static_cast<std::size_t>(g.total()));
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Rational v = p[i] / Rational(g.weights()[i]);
        out.insert(out.end(), static_cast<std::size_t>(g.weights()[i]), v);
    }
    return out;
}

double abar_of(const std::vector<double>& p) {
    double s = 0.0;
    for (double v : p) {
        if (v <= 0.0) return kInf;
        s -= std::log(v);
    }
    return s;
}

Direction direction_of(double p_fwd, double p_bwd) {
    if (p_fwd > p_bwd + kCompareTol) return Direction::forward;
    if (p_bwd > p_fwd + kCompareTol) return Direction::backward;
    return Direction::tie;
}

Direction sign_direction(double gap) {
    if (gap > 0.0) return Direction::forward;
    if (gap < 0.0) return Direction::backward;
    return Direction::tie;
}

void fill_theorem2(ConversionReport& r, std::size_t argmin_fwd, std::size_t argmin_bwd) {
    r.theorem2_index = r.p_forward <= r.p_backward ? argmin_fwd : argmin_bwd;
    r.theorem2_direction = r.theorem2_index < r.delta_a.size()
                               ? sign_direction(r.delta_a[r.theorem2_index])
                               : Direction::tie;
    std::size_t big = 0;
    for (std::size_t i = 1; i < r.delta_a.size(); ++i) {
        if (std::abs(r.delta_a[i]) > std::abs(r.delta_a[big])) big = i;
    }
    r.largest_gap_direction = r.delta_a.empty() ? Direction::tie : sign_direction(r.delta_a[big]);
}

}  // namespace

// --------------------------------- vectors ----------------------------------

ProbVec::ProbVec(std::vector<double> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw ValidationError("probability vector is empty");
    double sum = 0.0;
    for (double v : entries_) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw ValidationError("probability vector has a negative or non-finite entry");
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > kNormTol) {
        throw ValidationError("probability vector sums to " + std::to_string(sum) + ", not 1");
    }
    for (double& v : entries_) v /= sum;
}

std::vector<double> ProbVec::sorted_desc() const { return sorted_padded(entries_, entries_.size()); }

ExactProbVec::ExactProbVec(std::vector<Rational> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw ValidationError("probability vector is empty");
    Rational sum(0);
    for (const auto& v : entries_) {
        if (v < Rational(0)) throw ValidationError("probability vector has a negative entry");
        sum += v;
    }
    if (sum != Rational(1)) {
        throw ValidationError("probability vector sums to " + std::to_string(sum.numerator()) + "/" +
                              std::to_string(sum.denominator()) + ", not 1");
    }
}

ExactProbVec ExactProbVec::from_weights(const std::vector<std::int64_t>& weights) {
    std::int64_t total = 0;
    for (auto w : weights) {
        if (w < 0) throw ValidationError("weights must be nonnegative");
        total += w;
    }
    if (total == 0) throw ValidationError("weights sum to zero");
    std::vector<Rational> e;
    e.reserve(weights.size());
    for (auto w : weights) e.emplace_back(w, total);
    return ExactProbVec(std::move(e));
}

ProbVec ExactProbVec::to_double() const {
    std::vector<double> d;
    d.reserve(entries_.size());
    for (const auto& r : entries_) d.push_back(interconvert::to_double(r));
    return ProbVec(std::move(d));
}

double to_double(const Rational& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

Rational parse_rational(std::string_view text) {
    auto bad = [&]() { return ValidationError("not a number: '" + std::string(text) + "'"); };
    auto parse_int = [&](std::string_view s) -> std::int64_t {
        if (s.empty() || s.size() > 18) throw bad();
        std::int64_t v = 0;
        for (char c : s) {
            if (c < '0' || c > '9') throw bad();
            v = v * 10 + (c - '0');
        }
        return v;
    };
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    bool neg = false;
    if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
        neg = text.front() == '-';
        text.remove_prefix(1);
    }
    Rational r;
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const std::int64_t den = parse_int(text.substr(slash + 1));
        if (den == 0) throw bad();
        r = Rational(parse_int(text.substr(0, slash)), den);
    } else if (const auto dot = text.find('.'); dot != std::string_view::npos) {
        const std::string_view whole = text.substr(0, dot);
        const std::string_view frac = text.substr(dot + 1);
        if (whole.empty() && frac.empty()) throw bad();
        std::int64_t scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        const std::int64_t w = whole.empty() ? 0 : parse_int(whole);
        const std::int64_t f = frac.empty() ? 0 : parse_int(frac);
        r = Rational(w) + Rational(f, scale);
    } else {
        r = Rational(parse_int(text));
    }
    return neg ? -r : r;
}

GibbsRational::GibbsRational(std::vector<std::int64_t> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw ValidationError("Gibbs weights are empty");
    for (auto w : weights_) {
        if (w < 1) throw ValidationError("Gibbs weights must be positive integers");
        total_ += w;
    }
}

// ------------------------------- majorization --------------------------------

bool majorizes(const ProbVec& x, const ProbVec& y) { return majorizes_impl(x.entries(), y.entries()); }
bool majorizes(const ExactProbVec& x, const ExactProbVec& y) {
    return majorizes_impl(x.entries(), y.entries());
}

bool nielsen_convertible(const ProbVec& alpha, const ProbVec& beta) { return majorizes(beta, alpha); }
bool nielsen_convertible(const ExactProbVec& alpha, const ExactProbVec& beta) {
    return majorizes(beta, alpha);
}

// ----------------------------------- Vidal ----------------------------------

VidalResult vidal(const ProbVec& alpha, const ProbVec& beta) {
    const auto r = vidal_impl(alpha.entries(), beta.entries());
    return {r.probability, r.argmin};
}

ExactVidalResult vidal(const ExactProbVec& alpha, const ExactProbVec& beta) {
    const auto r = vidal_impl(alpha.entries(), beta.entries());
    return {r.probability, r.argmin};
}

double vidal_probability(const ProbVec& alpha, const ProbVec& beta) { return vidal(alpha, beta).probability; }
Rational vidal_probability(const ExactProbVec& alpha, const ExactProbVec& beta) {
    return vidal(alpha, beta).probability;
}

std::vector<double> affinity_gap(const ProbVec& alpha, const ProbVec& beta) {
    const std::size_t n = std::max(alpha.size(), beta.size());
    const auto a = sorted_padded(alpha.entries(), n);
    const auto b = sorted_padded(beta.entries(), n);
    std::vector<double> gap(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] == 0.0 && b[i] == 0.0) {
            gap[i] = 0.0;
        } else if (a[i] == 0.0) {
            gap[i] = -kInf;
        } else if (b[i] == 0.0) {
            gap[i] = kInf;
        } else {
            gap[i] = std::log(a[i]) - std::log(b[i]);
        }
    }
    return gap;
}

std::string_view to_string(Direction d) {
    switch (d) {
        case Direction::forward: return "forward";
        case Direction::backward: return "backward";
        case Direction::tie: return "tie";
    }
    return "tie";
}

ConversionReport preferred_direction(const ProbVec& alpha, const ProbVec& beta) {
    ConversionReport r;
    r.deterministic_forward = nielsen_convertible(alpha, beta);
    r.deterministic_backward = nielsen_convertible(beta, alpha);
    const VidalResult fwd = vidal(alpha, beta);
    const VidalResult bwd = vidal(beta, alpha);
    r.p_forward = r.deterministic_forward ? 1.0 : fwd.probability;
    r.p_backward = r.deterministic_backward ? 1.0 : bwd.probability;
    r.delta_a = affinity_gap(alpha, beta);
    r.predicted_direction = direction_of(r.p_forward, r.p_backward);
    fill_theorem2(r, fwd.argmin, bwd.argmin);
    return r;
}

ConversionReport preferred_direction(const ExactProbVec& alpha, const ExactProbVec& beta) {
    ConversionReport r;
    r.deterministic_forward = nielsen_convertible(alpha, beta);
    r.deterministic_backward = nielsen_convertible(beta, alpha);
    const ExactVidalResult fwd = vidal(alpha, beta);
    const ExactVidalResult bwd = vidal(beta, alpha);
    r.p_forward = to_double(fwd.probability);
    r.p_backward = to_double(bwd.probability);
    r.delta_a = affinity_gap(alpha.to_double(), beta.to_double());
    if (fwd.probability > bwd.probability) {
        r.predicted_direction = Direction::forward;
    } else if (bwd.probability > fwd.probability) {
        r.predicted_direction = Direction::backward;
    } else {
        r.predicted_direction = Direction::tie;
    }
    fill_theorem2(r, fwd.argmin, bwd.argmin);
    return r;
}

// --------------------------------- thermal ----------------------------------

ExactProbVec embed(const ExactProbVec& p, const GibbsRational& g) {
    return ExactProbVec(embed_impl(p.entries(), g));
}

ProbVec embed(const ProbVec& p, const GibbsRational& g) {
    if (p.size() != g.size()) throw ValidationError("embed: length of p differs from Gibbs weights");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(g.total()));
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double v = p[i] / static_cast<double>(g.weights()[i]);
        out.insert(out.end(), static_cast<std::size_t>(g.weights()[i]), v);
    }
    return ProbVec(std::move(out));
}

bool thermal_convertible(const ProbVec& p, const ProbVec& q, const GibbsRational& g) {
    if (p.size() != q.size()) throw ValidationError("thermal: p and q differ in length");
    return majorizes(embed(p, g), embed(q, g));
}

bool thermal_convertible(const ExactProbVec& p, const ExactProbVec& q, const GibbsRational& g) {
    if (p.size() != q.size()) throw ValidationError("thermal: p and q differ in length");
    return majorizes(embed(p, g), embed(q, g));
}

Theorem3Check theorem3_check(const ProbVec& p, const ProbVec& q, const GibbsRational& g) {
    if (p.size() != q.size()) throw ValidationError("thermal: p and q differ in length");
    const double ap = abar_of(embed(p, g).entries());
    const double aq = abar_of(embed(q, g).entries());
    return {ap, aq, ap > aq};
}

Theorem3Check theorem3_check(const ExactProbVec& p, const ExactProbVec& q, const GibbsRational& g) {
    if (p.size() != q.size()) throw ValidationError("thermal: p and q differ in length");
    const double ap = abar_of(embed(p, g).to_double().entries());
    const double aq = abar_of(embed(q, g).to_double().entries());
    return {ap, aq, ap > aq};
}

}  // namespace qtff::interconvert
