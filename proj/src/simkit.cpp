#include "screening/simkit.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <vector>

#include "screening/error.hpp"
#include "screening/rng.hpp"
#include "screening/tailcore.hpp"

namespace screening {

namespace {

constexpr std::uint64_t kTagPerPerson = 0x7065727065727330ULL;
constexpr std::uint64_t kTagSystem = 0x73797374656d3030ULL;
constexpr std::uint64_t kTagCopula = 0x636f70756c613030ULL;
constexpr std::uint64_t kTagPilot = 0x70696c6f74303030ULL;

struct Tally {
    std::uint64_t hits = 0;
    std::uint64_t sum = 0;
    std::uint64_t sum_sq = 0;
};

// Runs trial(i) -> (hit, y) over all trials. Integer accumulation keeps the
// parallel result identical to the serial one.
template <class Trial>
Tally run_trials(std::uint64_t runs, ExecPolicy policy, const Trial& trial) {
    std::uint64_t hits = 0, sum = 0, sum_sq = 0;
    const auto count = static_cast<std::int64_t>(runs);
    if (policy == ExecPolicy::serial) {
        for (std::int64_t i = 0; i < count; ++i) {
            const auto [hit, y] = trial(static_cast<std::uint64_t>(i));
            hits += hit ? 1 : 0;
            sum += y;
            sum_sq += y * y;
        }
    } else {
#pragma omp parallel for schedule(static) reduction(+ : hits, sum, sum_sq)
        for (std::int64_t i = 0; i < count; ++i) {
            const auto [hit, y] = trial(static_cast<std::uint64_t>(i));
            hits += hit ? 1 : 0;
            sum += y;
            sum_sq += y * y;
        }
    }
    return {hits, sum, sum_sq};
}

// Successes among k Bernoulli(p) trials via geometric gaps, stopping once
// `cap` is reached.
std::uint64_t bernoulli_count(rng::Stream& s, std::uint64_t k, double p, std::uint64_t cap,
                              double log_q) {
    if (p <= 0.0 || k == 0) return 0;
    if (p >= 1.0) return std::min(k, cap);
    const double kd = static_cast<double>(k);
    double pos = 0.0;
    std::uint64_t count = 0;
    while (count < cap) {
        pos += std::floor(std::log(s.uniform_open0()) / log_q);
        if (pos >= kd) break;
        ++count;
        pos += 1.0;
    }
    return count;
}

// Poisson(lambda) count from unit-rate arrivals in [0, lambda], capped.
std::uint64_t poisson_count(rng::Stream& s, double lambda, std::uint64_t cap) {
    if (lambda <= 0.0) return 0;
    double t = 0.0;
    std::uint64_t count = 0;
    while (count < cap) {
        t -= std::log(s.uniform_open0());
        if (t > lambda) break;
        ++count;
    }
    return count;
}

SimReport make_report(std::uint64_t hits, std::uint64_t runs, double analytic) {
    SimReport r;
    r.hits = hits;
    r.runs = runs;
    r.estimate = static_cast<double>(hits) / static_cast<double>(runs);
    r.std_error = std::sqrt(r.estimate * (1.0 - r.estimate) / static_cast<double>(runs));
    r.analytic = analytic;
    r.abs_error = std::abs(r.estimate - analytic);
    const double diff = r.estimate - analytic;
    // An estimate of exactly 0 or 1 has zero sample error; the analytic
    // binomial error keeps z finite in that case.
    const double analytic_se = std::sqrt(analytic * (1.0 - analytic) / static_cast<double>(runs));
    const double se = std::max(r.std_error, analytic_se);
    if (se > 0.0) {
        r.z_score = diff / se;
    } else {
        r.z_score = diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff);
    }
    return r;
}

double normal_quantile(double p) {
    if (p <= 0.0) return -INFINITY;
    if (p >= 1.0) return INFINITY;
    return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

void validate_correlation(const CorrelationSpec& corr, std::uint64_t k) {
    if (!std::isfinite(corr.rho)) throw DomainError("correlation must be finite");
    if (corr.kind == CorrelationSpec::Kind::ar1) {
        if (!(corr.rho > -1.0 && corr.rho < 1.0)) {
            throw DomainError("ar1 coefficient must lie in (-1, 1)");
        }
        return;
    }
    const double floor = k > 1 ? -1.0 / static_cast<double>(k - 1) : -1.0;
    if (corr.rho > 1.0 || corr.rho < floor) {
        throw DomainError("exchangeable correlation matrix is not positive semidefinite");
    }
}

// Latent vector with the requested correlation, written into z.
void draw_latent(rng::Stream& s, const CorrelationSpec& corr, std::vector<double>& z) {
    const std::size_t k = z.size();
    for (auto& v : z) v = s.normal();
    if (corr.kind == CorrelationSpec::Kind::ar1) {
        const double phi = corr.rho;
        const double innov = std::sqrt(1.0 - phi * phi);
        for (std::size_t i = 1; i < k; ++i) z[i] = phi * z[i - 1] + innov * z[i];
        return;
    }
    if (corr.rho == 0.0) return;
    // (1-rho) on the complement of the all-ones direction, 1 + (k-1) rho along it.
    double mean = 0.0;
    for (double v : z) mean += v;
    mean /= static_cast<double>(k);
    const double a = std::sqrt(1.0 - corr.rho);
    const double b = std::sqrt(std::max(0.0, 1.0 + (static_cast<double>(k) - 1.0) * corr.rho));
    for (auto& v : z) v = a * (v - mean) + b * mean;
}

}  // namespace

const char* to_string(SimMode mode) noexcept {
    switch (mode) {
        case SimMode::binomial_exact: return "binomial-exact";
        case SimMode::poisson_approx: return "poisson-approx";
        case SimMode::copula_correlated: return "copula-correlated";
    }
    return "unknown";
}

SimMode sim_mode_from_string(const std::string& name) {
    if (name == "binomial-exact") return SimMode::binomial_exact;
    if (name == "poisson-approx") return SimMode::poisson_approx;
    if (name == "copula-correlated") return SimMode::copula_correlated;
    throw SchemaError("unknown simulation mode '" + name + "'");
}

void SimPlan::validate() const {
    // p = 0 and p = 1 are allowed here as degenerate checks.
    if (config.k == 0) throw DomainError("attribute count k must be positive");
    if (!(config.p >= 0.0 && config.p <= 1.0)) throw DomainError("p must lie in [0, 1]");
    if (config.m == 0) throw DomainError("threshold m must be positive");
    if (config.n == 0) throw DomainError("population n must be positive");
    if (runs < 1) throw DomainError("runs must be at least 1");
    if (mode == SimMode::copula_correlated) {
        if (!correlation) throw DomainError("copula mode requires a correlation specification");
        validate_correlation(*correlation, config.k);
    }
}

SimReport simulate_per_person(const SimPlan& plan, ExecPolicy policy) {
    plan.validate();
    const auto& cfg = plan.config;
    if (plan.mode == SimMode::copula_correlated) return simulate_correlated(plan, policy).tail;

    const double log_q = std::log1p(-cfg.p);
    const double lambda = cfg.lambda();
    const bool poisson = plan.mode == SimMode::poisson_approx;
    const Tally t = run_trials(plan.runs, policy, [&](std::uint64_t trial) {
        rng::Stream s(plan.seed, kTagPerPerson, trial);
        const std::uint64_t x = poisson ? poisson_count(s, lambda, cfg.m)
                                        : bernoulli_count(s, cfg.k, cfg.p, cfg.m, log_q);
        return std::pair<bool, std::uint64_t>{x >= cfg.m, 0};
    });
    const double analytic = poisson ? (lambda > 0.0 ? poisson_tail(lambda, cfg.m) : 0.0)
                                    : binomial_tail(cfg.k, cfg.p, cfg.m);
    return make_report(t.hits, plan.runs, analytic);
}

SimReport simulate_system(const SimPlan& plan, ExecPolicy policy) {
    plan.validate();
    const auto& cfg = plan.config;
    const bool poisson = plan.mode == SimMode::poisson_approx;
    if (plan.mode == SimMode::copula_correlated) {
        throw DomainError("system simulation supports binomial-exact and poisson-approx modes");
    }
    const double q = !poisson                ? binomial_tail(cfg.k, cfg.p, cfg.m)
                     : cfg.lambda() > 0.0 ? poisson_tail(cfg.lambda(), cfg.m)
                                          : 0.0;
    const double nd = static_cast<double>(cfg.n);
    const double analytic = -std::expm1(nd * std::log1p(-q));

    Tally t;
    if (plan.analytic_composite) {
        t = run_trials(plan.runs, policy, [&](std::uint64_t trial) {
            rng::Stream s(plan.seed, kTagSystem, trial);
            return std::pair<bool, std::uint64_t>{s.uniform() < analytic, 0};
        });
    } else {
        if (nd * static_cast<double>(plan.runs) > kSimulationBudget) {
            throw BudgetExceeded("n * runs exceeds the budget of 1e9 individual draws; reduce n or "
                                 "runs, or use analytic-composite mode");
        }
        const double log_q = std::log1p(-cfg.p);
        const double lambda = cfg.lambda();
        t = run_trials(plan.runs, policy, [&](std::uint64_t trial) {
            rng::Stream s(plan.seed, kTagSystem, trial);
            for (std::uint64_t i = 0; i < cfg.n; ++i) {
                const std::uint64_t x = poisson ? poisson_count(s, lambda, cfg.m)
                                                : bernoulli_count(s, cfg.k, cfg.p, cfg.m, log_q);
                if (x >= cfg.m) return std::pair<bool, std::uint64_t>{true, 0};
            }
            return std::pair<bool, std::uint64_t>{false, 0};
        });
    }
    SimReport r = make_report(t.hits, plan.runs, analytic);
    r.analytic_composite = plan.analytic_composite;
    return r;
}

CorrelatedReport simulate_correlated(const SimPlan& plan, ExecPolicy policy) {
    if (plan.mode != SimMode::copula_correlated) {
        throw DomainError("correlated simulation requires copula-correlated mode");
    }
    plan.validate();
    const auto& cfg = plan.config;
    const CorrelationSpec corr = *plan.correlation;
    const double cut = normal_quantile(cfg.p);
    const std::size_t k = cfg.k;

    const Tally t = run_trials(plan.runs, policy, [&](std::uint64_t trial) {
        thread_local std::vector<double> z;
        z.resize(k);
        rng::Stream s(plan.seed, kTagCopula, trial);
        draw_latent(s, corr, z);
        std::uint64_t y = 0;
        for (double v : z) y += v < cut ? 1 : 0;
        return std::pair<bool, std::uint64_t>{y >= cfg.m, y};
    });

    CorrelatedReport out;
    out.tail = make_report(t.hits, plan.runs, binomial_tail(cfg.k, cfg.p, cfg.m));
    const double runs = static_cast<double>(plan.runs);
    out.mean = static_cast<double>(t.sum) / runs;
    if (plan.runs > 1) {
        // Exact integer moments, then one rounding step.
        const long double s = t.sum, ss = t.sum_sq;
        out.variance = static_cast<double>((ss - s * s / runs) / (runs - 1.0));
    }
    const double kd = static_cast<double>(cfg.k);
    out.independent_variance = kd * cfg.p * (1.0 - cfg.p);
    return out;
}

double measure_binary_correlation(double p, double latent_rho, std::uint64_t draws,
                                  std::uint64_t seed) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("p must lie in (0, 1)");
    if (!(latent_rho >= -1.0 && latent_rho <= 1.0)) throw DomainError("correlation must lie in [-1, 1]");
    if (draws < 2) throw DomainError("need at least two draws");
    const double cut = normal_quantile(p);
    const double a = std::sqrt(1.0 - latent_rho * latent_rho);
    std::uint64_t n1 = 0, n2 = 0, n12 = 0;
    rng::Stream s(seed, kTagPilot, 0);
    for (std::uint64_t i = 0; i < draws; ++i) {
        const double z1 = s.normal();
        const double z2 = latent_rho * z1 + a * s.normal();
        const bool x1 = z1 < cut, x2 = z2 < cut;
        n1 += x1;
        n2 += x2;
        n12 += x1 && x2;
    }
    const double d = static_cast<double>(draws);
    const double m1 = n1 / d, m2 = n2 / d;
    const double cov = n12 / d - m1 * m2;
    const double denom = std::sqrt(m1 * (1.0 - m1) * m2 * (1.0 - m2));
    return denom > 0.0 ? cov / denom : 0.0;
}

double calibrate_latent_correlation(double p, double target_binary_rho, std::uint64_t draws,
                                    std::uint64_t seed) {
    if (!(target_binary_rho >= 0.0 && target_binary_rho < 1.0)) {
        throw DomainError("target binary correlation must lie in [0, 1)");
    }
    if (target_binary_rho == 0.0) return 0.0;
    double lo = 0.0, hi = 1.0;
    for (int iter = 0; iter < 40; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (measure_binary_correlation(p, mid, draws, seed) < target_binary_rho) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

bool within_sigma(const SimReport& report, double sigmas) noexcept {
    return std::abs(report.z_score) <= sigmas;
}

}  // namespace screening
