#pragma once

// Plot-ready datasets for the four reliability panels. Axis ranges are fixed
// defaults chosen to bracket each transition and are echoed in the manifest.

#include <cstdint>
#include <filesystem>
#include <span>

#include "screening/shell/scenario.hpp"
#include "screening/simkit.hpp"

namespace screening::shell {

struct PanelA {
    Table table;
    double mae_poisson = 0.0;   // Monte Carlo vs the Poisson analytic curve
    double mae_binomial = 0.0;  // Monte Carlo vs the exact binomial curve
};

// System probability against k at p = 0.001, m = 2, n = 200, k = 50..300,
// with binomial-exact Monte Carlo points.
PanelA panel_a(std::uint64_t runs, std::uint64_t seed, ExecPolicy policy = ExecPolicy::parallel);

// System probability against log10 n for lambda in {25, 50, 100}, c = 1.5.
Table panel_b();

// Probability against time under k(t) = 100 * 1.5^t, p = 0.01, m = 5, for
// n in {1, 100, 10^4}.
Table panel_c();

// Two groups (p = 0.005 and 0.02, 10^5 people each, m = 7) swept over k.
Table panel_d();

// First x where the piecewise-linear curve (xs, ys) reaches `level`; NaN if never.
double first_crossing(std::span<const double> xs, std::span<const double> ys, double level);

// Writes panel_a.csv .. panel_d.csv and figures.manifest.json into out_dir.
Json figure_panels(const std::filesystem::path& out_dir, std::uint64_t runs, std::uint64_t seed,
                   ExecPolicy policy = ExecPolicy::parallel);

}  // namespace screening::shell
