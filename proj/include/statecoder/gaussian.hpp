#pragma once

#include <string>

namespace statecoder {

// 0.5 * log2(1 + x), the Gaussian capacity function in bits.
double gaussian_c(double x);

// Time-shared Gaussian pair: with probability alpha the first branch is live
// (gain g1, state-noise variance Q0), otherwise the second (gain g2, Q1).
// Average input power budget P.
struct GaussianCompound {
    double alpha = 0.5;
    double g1 = 1.0, g2 = 1.0;
    double Q0 = 1.0, Q1 = 1.0;
    double P = 1.0;

    void validate() const;  // 0 < alpha < 1, gains nonzero, Q >= 0, P > 0
};

struct BranchRates {
    double r1 = 0.0;  // alpha * C(g1^2 P1)
    double r2 = 0.0;  // (1-alpha) * C(g2^2 P2)
    double min = 0.0;
};

// Per-branch precoded rates under the split alpha*P1 + (1-alpha)*P2 = P
// (enforced to 1e-9).
BranchRates branch_rate(const GaussianCompound& gc, double P1, double P2);

struct PowerSplit {
    double P1 = 0.0, P2 = 0.0;
    double rate = 0.0;
    std::string to_json_text() const;
};

// Maximizes min(r1, r2) along the power constraint line; at an interior
// optimum the two branch rates tie.
PowerSplit optimize_power_split(const GaussianCompound& gc);

// The precoding coefficient a = g^2 Pk / (1 + g^2 Pk) and the covariance
// check that I(U;Y|T) - I(U;Z_S|T) equals C(g^2 Pk) for U = X + a Z_S.
// The state-noise variance Q cancels from the difference; it is kept as an
// input so the identity is verified at arbitrary Q.
struct DpcCheck {
    double coefficient = 0.0;
    double identity_value = 0.0;  // I(U;Y) - I(U;Z_S) from covariance algebra
    double expected = 0.0;        // C(g^2 Pk)
};
DpcCheck dpc_auxiliary(double g, double Pk, double Q);

}  // namespace statecoder
