#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "statecoder/bounds.hpp"
#include "statecoder/channel.hpp"
#include "test_util.hpp"

using namespace statecoder;

namespace {

AuxScheme section3_scheme() {
    std::vector<double> uniform = {0.5, 0.5, 0.5, 0.5};
    return outputs_as_aux(example_channel(), uniform);
}

}  // namespace

TEST_CASE("gp rate: constant auxiliary gives zero") {
    StateChannel ch = example_channel();
    GpAux aux;
    aux.S = 2;
    aux.U = 1;
    aux.p_u_s = {1.0, 1.0};
    aux.x_map = {0, 0};
    RateReport r = gp_rate(ch, aux);
    CHECK(r.terms.size() == 2);
    CHECK(r.overall == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("gp rate: U = S with constant input") {
    // U = S, x = 0: then Y1 = S exactly and Y2 = 0, so the two terms are
    // I(S;Y1) - H(S) = 0 and I(S;Y2) - H(S) = -1.
    StateChannel ch = example_channel();
    GpAux aux;
    aux.S = 2;
    aux.U = 2;
    aux.p_u_s = {1.0, 0.0, 0.0, 1.0};
    aux.x_map = {0, 0, 0, 0};
    RateReport r = gp_rate(ch, aux);
    CHECK(r.terms[0].second == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r.terms[1].second == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(r.overall == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("superposition rate on the outputs-as-auxiliaries scheme is 1/2") {
    RateReport r = superposition_rate(example_channel(), section3_scheme());
    CHECK(std::fabs(r.overall - 0.5) < 1e-12);
    for (const auto& [name, v] : r.terms) CHECK(std::fabs(v - 0.5) < 1e-12);
}

TEST_CASE("superposition rate: all-trivial auxiliaries give zero") {
    StateChannel ch = example_channel();
    AuxScheme aux;
    aux.S = 2;
    aux.p_wuv_s = {1.0, 1.0};
    aux.x_map = {0, 0};
    CHECK(superposition_rate(ch, aux).overall == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("lifted single-auxiliary scheme reproduces gp_rate exactly") {
    testutil::Rng rng(41);
    for (int rep = 0; rep < 25; ++rep) {
        StateChannel ch = testutil::random_channel(rng);
        GpAux gp = testutil::random_gp_aux(rng, ch, 1 + rng.next_below(3));
        RateReport a = gp_rate(ch, gp);
        RateReport b = superposition_rate(ch, lift_gp(gp));
        // identical marginals, so the doubles match exactly
        CHECK(b.terms[0].second == a.terms[0].second);
        CHECK(b.terms[1].second == a.terms[1].second);
        CHECK(b.overall == a.overall);
    }
}

TEST_CASE("constraint region: all-zero rates are infeasible on the example scheme") {
    ConstraintReport rep = constraint_region(example_channel(), section3_scheme(), 0, 0, 0, 0);
    CHECK_FALSE(rep.feasible);
    // T1 lower bound I(U;S|W) = I(Y1;S) = H(1/4) - 1/2
    double expect = -(0.25 * std::log2(0.25) + 0.75 * std::log2(0.75)) - 0.5;
    CHECK(rep.rows[3].bound == doctest::Approx(expect).epsilon(1e-12));
    CHECK(rep.rows[3].slack == doctest::Approx(-expect).epsilon(1e-12));
    CHECK(rep.rows[2].vacuous);  // trivial W
}

TEST_CASE("constraint region: the worked feasible point") {
    ConstraintReport rep =
        constraint_region(example_channel(), section3_scheme(), 0.43, 0.0, 0.35, 0.35);
    CHECK(rep.feasible);
    double h14 = -(0.25 * std::log2(0.25) + 0.75 * std::log2(0.75));
    CHECK(rep.min_slack == doctest::Approx(h14 - 0.78).epsilon(1e-9));
    CHECK(std::fabs(rep.min_slack - 0.0313) < 5e-4);
    CHECK(rep.rows[0].slack == doctest::Approx(rep.min_slack).epsilon(1e-12));
}

TEST_CASE("rates above the eliminated maximum are infeasible for every split") {
    StateChannel ch = example_channel();
    AuxScheme aux = section3_scheme();
    double rmax = max_feasible_rate(ch, aux);
    for (double t0 : {0.0, 0.1, 0.3})
        for (double t1 : {0.0, 0.2, 0.4, 0.6})
            for (double t2 : {0.0, 0.2, 0.4, 0.6})
                CHECK_FALSE(constraint_region(ch, aux, rmax + 1e-6, t0, t1, t2).feasible);
}

TEST_CASE("elimination identity on random schemes") {
    testutil::Rng rng(55);
    int checked = 0;
    for (int rep = 0; rep < 61; ++rep) {
        StateChannel ch = rep == 0 ? example_channel() : testutil::random_channel(rng);
        AuxScheme aux = rep == 0 ? section3_scheme() : testutil::random_aux(rng, ch);
        double direct = max_feasible_rate(ch, aux);
        double eliminated = superposition_rate(ch, aux).overall;
        CHECK(std::fabs(direct - eliminated) < 1e-9);
        if (direct > 1e-6) {
            // a point just inside is feasible with the T's at their lower
            // bounds plus the equalizing split of the pairwise excess
            JointPmf j1 = induced_joint(ch, aux, 1);
            JointPmf j2 = induced_joint(ch, aux, 2);
            std::vector<std::string> W = {"W"}, U = {"U"}, V = {"V"}, S = {"S"}, WS = {"W", "S"},
                                     WU = {"W", "U"}, WV = {"W", "V"}, Y1 = {"Y1"}, Y2 = {"Y2"};
            double ta = mutual_information(j1, std::span(WU), std::span(Y1)) -
                        mutual_information(j1, std::span(WU), std::span(S));
            double tb = mutual_information(j2, std::span(WV), std::span(Y2)) -
                        mutual_information(j2, std::span(WV), std::span(S));
            double d = mutual_information(j1, std::span(U), std::span(V), std::span(WS));
            double split = std::clamp(0.5 * (d + ta - tb), 0.0, d);
            double t0 = mutual_information(j1, std::span(W), std::span(S)) + 1e-12;
            double t1 = mutual_information(j1, std::span(U), std::span(S), std::span(W)) + split + 1e-12;
            double t2 = mutual_information(j2, std::span(V), std::span(S), std::span(W)) +
                        (d - split) + 1e-12;
            CHECK(constraint_region(ch, aux, direct - 1e-6, t0, t1, t2).feasible);
            ++checked;
        }
    }
    CHECK(checked >= 3);
}

TEST_CASE("converse sanity: superposition rate never beats the cut-set value") {
    testutil::Rng rng(66);
    for (int rep = 0; rep < 50; ++rep) {
        StateChannel ch = testutil::random_channel(rng);
        AuxScheme aux = testutil::random_aux(rng, ch);
        double rate = superposition_rate(ch, aux).overall;
        double upper = cutset_upper(ch, induced_input(ch, aux));
        CHECK(rate <= upper + 1e-9);
    }
}

TEST_CASE("deterministic capacity machinery on the example channel") {
    StateChannel ch = example_channel();
    std::vector<double> uniform = {0.5, 0.5, 0.5, 0.5};
    CHECK(deterministic_value(ch, uniform) == doctest::Approx(0.5).epsilon(1e-12));
    std::vector<double> constant = {1.0, 0.0, 1.0, 0.0};
    CHECK(deterministic_value(ch, constant) == doctest::Approx(0.0).epsilon(1e-12));

    DeterministicCapacity cap = deterministic_capacity(ch);
    CHECK(std::fabs(cap.value - 0.5) < 1e-6);
    CHECK(std::fabs(cap.pxs[0] - 0.5) < 1e-6);

    // premise violation reported with the offending value
    StateChannel noisy = ch;
    noisy.p_y1 = {0.9, 0.1, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0};
    CHECK_THROWS_WITH_AS(deterministic_value(noisy, uniform),
                         doctest::Contains("not deterministic"), std::invalid_argument);
}

TEST_CASE("cut-set upper bound on the example channel") {
    StateChannel ch = example_channel();
    std::vector<double> uniform = {0.5, 0.5, 0.5, 0.5};
    CHECK(cutset_upper(ch, uniform) == doctest::Approx(0.5).epsilon(1e-12));
    std::vector<double> constant = {1.0, 0.0, 1.0, 0.0};
    CHECK(cutset_upper(ch, constant) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("rate report overall is exactly the minimum of its terms") {
    testutil::Rng rng(7);
    for (int rep = 0; rep < 20; ++rep) {
        StateChannel ch = testutil::random_channel(rng);
        AuxScheme aux = testutil::random_aux(rng, ch);
        RateReport r = superposition_rate(ch, aux);
        double m = r.terms[0].second;
        for (const auto& [k, v] : r.terms) m = std::min(m, v);
        CHECK(r.overall == m);
    }
}
