#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "statecoder/gaussian.hpp"
#include "test_util.hpp"

using namespace statecoder;

namespace {

// independent 1-d grid oracle for the power split
double grid_best_rate(const GaussianCompound& gc, double step, double* best_p1 = nullptr) {
    double best = -1.0, bp1 = 0.0;
    double hi = gc.P / gc.alpha;
    for (double p1 = 0.0; p1 <= hi + step / 2; p1 += step) {
        double p1c = std::min(p1, hi);
        double p2 = (gc.P - gc.alpha * p1c) / (1.0 - gc.alpha);
        if (p2 < 0.0) p2 = 0.0;
        double r1 = gc.alpha * 0.5 * std::log2(1.0 + gc.g1 * gc.g1 * p1c);
        double r2 = (1.0 - gc.alpha) * 0.5 * std::log2(1.0 + gc.g2 * gc.g2 * p2);
        double v = std::min(r1, r2);
        if (v > best) {
            best = v;
            bp1 = p1c;
        }
    }
    if (best_p1) *best_p1 = bp1;
    return best;
}

}  // namespace

TEST_CASE("branch rates: silent branch, symmetric case, constraint enforcement") {
    GaussianCompound gc;
    gc.alpha = 0.5;
    gc.P = 1.0;
    BranchRates silent = branch_rate(gc, 0.0, 2.0);
    CHECK(silent.min == 0.0);

    BranchRates sym = branch_rate(gc, 1.0, 1.0);
    CHECK(sym.r1 == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(sym.r2 == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(sym.min == doctest::Approx(0.25).epsilon(1e-12));

    CHECK_THROWS_AS(branch_rate(gc, 1.0, 1.5), std::invalid_argument);
    gc.alpha = 0.0;
    CHECK_THROWS_AS(branch_rate(gc, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("power split: symmetric case gives full power both branches") {
    GaussianCompound gc;
    gc.alpha = 0.5;
    gc.g1 = gc.g2 = 1.0;
    gc.P = 1.0;
    PowerSplit s = optimize_power_split(gc);
    CHECK(s.P1 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(s.P2 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(s.rate == doctest::Approx(0.5 * gaussian_c(1.0)).epsilon(1e-9));
}

TEST_CASE("power split: asymmetric gains against the grid oracle") {
    GaussianCompound gc;
    gc.alpha = 0.5;
    gc.g1 = 2.0;
    gc.g2 = 1.0;
    gc.P = 1.0;
    PowerSplit s = optimize_power_split(gc);
    double p1_star = 0.0;
    double oracle = grid_best_rate(gc, 1e-6, &p1_star);
    CHECK(std::fabs(s.rate - oracle) < 1e-5);
    CHECK(std::fabs(s.P1 - p1_star) < 1e-3);
    // the equalizer of C(4 P1) = C(P2) with P1 + P2 = 2 sits at P1 = 0.4
    CHECK(s.P1 == doctest::Approx(0.4).epsilon(1e-6));
    CHECK(s.rate == doctest::Approx(0.25 * std::log2(2.6)).epsilon(1e-9));
    // interior optimum ties the branches
    BranchRates r = branch_rate(gc, s.P1, s.P2);
    CHECK(std::fabs(r.r1 - r.r2) < 1e-6);
}

TEST_CASE("power split: random parameters match the grid oracle; monotone in P") {
    testutil::Rng rng(2718);
    double prev = -1.0;
    for (double P : {0.25, 0.5, 1.0, 2.0, 4.0}) {
        GaussianCompound gc;
        gc.alpha = 0.3;
        gc.g1 = 1.5;
        gc.g2 = 0.8;
        gc.P = P;
        PowerSplit s = optimize_power_split(gc);
        CHECK(s.rate >= prev - 1e-12);
        prev = s.rate;
    }
    for (int rep = 0; rep < 8; ++rep) {
        GaussianCompound gc;
        gc.alpha = 0.1 + 0.8 * rng.next_unit();
        gc.g1 = 0.2 + 2.0 * rng.next_unit();
        gc.g2 = 0.2 + 2.0 * rng.next_unit();
        gc.P = 0.2 + 3.0 * rng.next_unit();
        PowerSplit s = optimize_power_split(gc);
        CHECK(std::fabs(s.rate - grid_best_rate(gc, 1e-6)) < 1e-5);
    }
}

TEST_CASE("precoding coefficient identity") {
    DpcCheck c = dpc_auxiliary(1.0, 1.0, 1.0);
    CHECK(c.coefficient == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(c.identity_value == doctest::Approx(0.5).epsilon(1e-12));

    c = dpc_auxiliary(1.0, 3.0, 2.0);
    CHECK(c.coefficient == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(c.identity_value == doctest::Approx(1.0).epsilon(1e-9));

    // no state noise: the identity holds for any coefficient
    c = dpc_auxiliary(0.7, 2.0, 0.0);
    CHECK(c.identity_value == doctest::Approx(c.expected).epsilon(1e-12));

    testutil::Rng rng(31);
    for (int rep = 0; rep < 100; ++rep) {
        double g = 0.1 + 3.0 * rng.next_unit();
        double pk = 0.1 + 5.0 * rng.next_unit();
        double q = 5.0 * rng.next_unit();
        DpcCheck d = dpc_auxiliary(g, pk, q);
        CHECK(std::fabs(d.identity_value - d.expected) < 1e-9);
    }
}
