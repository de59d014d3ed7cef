#pragma once

#include <string>
#include <vector>

#include "statecoder/channel.hpp"
#include "statecoder/pmf.hpp"

namespace statecoder {

// Named bound terms plus their minimum. overall is exactly the minimum of the
// stored terms (no rounding).
struct RateReport {
    std::vector<std::pair<std::string, double>> terms;
    double overall = 0.0;

    static RateReport from_terms(std::vector<std::pair<std::string, double>> t);
    std::string to_json_text() const;
};

// min{ I(U;Y1)-I(U;S), I(U;Y2)-I(U;S) } for a single-auxiliary scheme.
RateReport gp_rate(const StateChannel& ch, const GpAux& aux);

// The three-term layered bound:
//   T_a = I(W,U;Y1) - I(W,U;S)
//   T_b = I(W,V;Y2) - I(W,V;S)
//   T_c = (T_a + T_b - I(U;V|W,S)) / 2
RateReport superposition_rate(const StateChannel& ch, const AuxScheme& aux);

// The six-inequality rate region in (R,T0,T1,T2) before elimination:
//   R+T0+T1 < I(W,U;Y1)            R+T0+T2 < I(W,V;Y2)
//   T0 > I(W;S)    T1 > I(U;S|W)   T2 > I(V;S|W)
//   T1+T2 > I(U;S|W)+I(V;S|W)+I(U;V|W,S)
// Lower-bound constraints whose layer is degenerate (cardinality 1) are
// vacuous: no codeword search happens for that layer, so they do not bind.
struct ConstraintRow {
    std::string name;
    double bound = 0.0;  // the information quantity on the constraint's far side
    double slack = 0.0;  // positive means satisfied with room
    bool vacuous = false;
};
struct ConstraintReport {
    std::vector<ConstraintRow> rows;
    bool feasible = false;  // all non-vacuous slacks strictly positive
    double min_slack = 0.0;
    std::string to_json_text() const;
};
ConstraintReport constraint_region(const StateChannel& ch, const AuxScheme& aux, double R,
                                   double T0, double T1, double T2);

// Largest R with (R,T0,T1,T2) in the closure of the region for some choice of
// the T's. Equals min of the three superposition_rate terms; exposed so tests
// can cross-check the elimination.
double max_feasible_rate(const StateChannel& ch, const AuxScheme& aux);

// min{ H(Y1|S), H(Y2|S) } at the given input p(x|s) ([s][x]). Requires both
// outputs deterministic in (x,s) and I(Y1;Y2|S)=0 at this input; throws with
// the offending value otherwise.
double deterministic_value(const StateChannel& ch, std::span<const double> pxs);

// Grid search plus local refinement of deterministic_value over p(x|s).
struct DeterministicCapacity {
    double value = 0.0;
    std::vector<double> pxs;  // [s][x]
};
DeterministicCapacity deterministic_capacity(const StateChannel& ch, int grid_steps = 64);

// min{ I(X;Y1|S), I(X;Y2|S) } at the given p(x|s).
double cutset_upper(const StateChannel& ch, std::span<const double> pxs);

}  // namespace statecoder
