#include "screening/posterior.hpp"

#include <cmath>
#include <limits>

#include "screening/error.hpp"

namespace screening {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

void BayesContext::validate() const {
    if (!(r > 0.0)) throw DomainError("expected targets r must be positive");
    if (!(s > 0.0 && s <= 1.0)) throw DomainError("sensitivity s must lie in (0, 1]");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
    if (!(q >= 0.0 && q <= 1.0)) throw DomainError("false-positive rate q must lie in [0, 1]");
    if (n == 0) throw DomainError("population n must be positive");
    if (r > static_cast<double>(n)) throw DomainError("r cannot exceed n");
}

PpvResult ppv(const BayesContext& ctx) {
    ctx.validate();
    const double pi = ctx.base_rate();
    const double true_flags = ctx.s * pi;
    const double false_flags = ctx.q * (1.0 - pi);
    const double denom = true_flags + false_flags;
    if (!(denom > 0.0)) throw DomainError("no flags possible: s pi + q (1 - pi) = 0");

    PpvResult out;
    out.ppv = true_flags / denom;
    out.fdr = false_flags / denom;
    const double rs = ctx.r * ctx.s;
    const double nq = static_cast<double>(ctx.n) * ctx.q;
    out.ppv_sparse = rs / (rs + nq);
    out.fdr_sparse = nq / (rs + nq);
    out.sparse_target = pi < kSparseBaseRateLimit;
    return out;
}

double posterior_odds(double lr, double prior_odds) {
    if (!(lr > 0.0) || !(prior_odds > 0.0)) {
        throw DomainError("likelihood ratio and prior odds must be positive");
    }
    return lr * prior_odds;
}

double likelihood_ratio(double s, double q) {
    if (!(s > 0.0 && s <= 1.0)) throw DomainError("sensitivity s must lie in (0, 1]");
    if (!(q >= 0.0 && q <= 1.0)) throw DomainError("false-positive rate q must lie in [0, 1]");
    return q == 0.0 ? kInf : s / q;
}

double prior_odds_from_base_rate(double pi) {
    if (!(pi > 0.0 && pi <= 1.0)) throw DomainError("base rate must lie in (0, 1]");
    return pi == 1.0 ? kInf : pi / (1.0 - pi);
}

double odds_to_probability(double odds) {
    if (!(odds >= 0.0)) throw DomainError("odds must be nonnegative");
    return std::isinf(odds) ? 1.0 : odds / (1.0 + odds);
}

double bayes_critical_population(double r, double s, double alpha, double q) {
    if (!(r > 0.0)) throw DomainError("expected targets r must be positive");
    if (!(s > 0.0 && s <= 1.0)) throw DomainError("sensitivity s must lie in (0, 1]");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie strictly inside (0, 1)");
    if (!(q > 0.0 && q <= 1.0)) throw DomainError("false-positive rate q must lie in (0, 1]");
    return (1.0 - alpha) * r * s / (alpha * q);
}

const char* to_string(Regime regime) {
    switch (regime) {
        case Regime::evidential: return "evidential";
        case Regime::transitional: return "transitional";
        case Regime::collapsed: return "collapsed";
    }
    return "unknown";
}

RegimeVerdict classify_regime(const BayesContext& ctx) {
    ctx.validate();
    RegimeVerdict v;
    v.nq = static_cast<double>(ctx.n) * ctx.q;
    v.rs = ctx.r * ctx.s;
    if (v.nq <= 0.1 * v.rs) {
        v.regime = Regime::evidential;
    } else if (v.nq >= 10.0 * v.rs) {
        v.regime = Regime::collapsed;
    } else {
        v.regime = Regime::transitional;
    }
    v.frequentist_reliable = v.nq < 1.0;
    return v;
}

}  // namespace screening
