#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "statecoder/bounds.hpp"
#include "statecoder/channel.hpp"

namespace statecoder {

struct GpSearchResult {
    GpAux aux;
    RateReport report;
    double achievable_rate = 0.0;  // max(0, report.overall)
    std::string to_json_text() const;
};

struct SuperpositionSearchResult {
    AuxScheme aux;
    RateReport report;
    double achievable_rate = 0.0;
    std::string to_json_text() const;
};

// Maximizes the single-auxiliary bound over deterministic maps x: U x S -> X
// (enumerated up to relabeling of U) crossed with simplex search on p(u|s):
// structured starts plus `budget` random restarts per map, refined by cyclic
// coordinate ascent with step halving down to 1e-7. Deterministic for a fixed
// seed regardless of thread count. budget must be >= 1.
GpSearchResult maximize_gp(const StateChannel& ch, int max_card, int budget, uint64_t seed);

struct Cards {
    int W = 1, U = 1, V = 1;
};

// Same strategy for the three-auxiliary bound. Structured candidates
// (output-tracking auxiliaries on deterministic channels, lifted single-aux
// schemes) are always evaluated before random search.
SuperpositionSearchResult maximize_superposition(const StateChannel& ch, Cards cards, int budget,
                                                 uint64_t seed);

// Doubles the auxiliary alphabet of a scheme for the built-in example channel
// so that the two receiver terms coincide; the resulting minimum never drops
// below the average of the input's two terms. Index 2i keeps the original
// behaviour of symbol i at half mass; index 2i+1 plays its state-swapped,
// input-complemented mirror. Throws unless ch is the example channel.
GpAux symmetrize(const StateChannel& ch, const GpAux& aux);

// Exact reduction of the single-auxiliary maximization for the example
// channel to a two-variable problem over the triangle {t,s4 >= 0, t+s4 <= 2}.
namespace exact_example {

// (1 + t/4) H2((4-s4)/(4+t)) - t/2 - s4/2, in bits.
double objective(double t, double s4);

struct Optimum {
    double t = 0.0, s4 = 0.0, value = 0.0;
    // dense-grid cross-check (step 1e-3); always within 1e-5 of value
    double grid_t = 0.0, grid_s4 = 0.0, grid_value = 0.0;
};

// Adjudicates the four boundary/interior cases numerically and cross-checks
// against the dense grid. Returns t = 4/3, s4 = 0, value 0.4150375.
Optimum maximize();

// The cardinality-3 scheme attaining the maximum: both receiver terms equal
// (4/3) H2(3/4) - 2/3.
GpAux witness();

}  // namespace exact_example

}  // namespace statecoder
