#include "statecoder/gaussian.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace statecoder {

double gaussian_c(double x) {
    if (x < 0.0) throw std::invalid_argument("gaussian_c: negative argument");
    return 0.5 * std::log2(1.0 + x);
}

void GaussianCompound::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("GaussianCompound: alpha must be in (0,1)");
    if (g1 == 0.0 || g2 == 0.0) throw std::invalid_argument("GaussianCompound: gains must be nonzero");
    if (Q0 < 0.0 || Q1 < 0.0) throw std::invalid_argument("GaussianCompound: variances must be >= 0");
    if (!(P > 0.0)) throw std::invalid_argument("GaussianCompound: P must be positive");
}

BranchRates branch_rate(const GaussianCompound& gc, double P1, double P2) {
    gc.validate();
    if (P1 < 0.0 || P2 < 0.0) throw std::invalid_argument("branch_rate: negative branch power");
    double used = gc.alpha * P1 + (1.0 - gc.alpha) * P2;
    if (std::fabs(used - gc.P) > 1e-9)
        throw std::invalid_argument("branch_rate: alpha*P1 + (1-alpha)*P2 != P");
    BranchRates r;
    r.r1 = gc.alpha * gaussian_c(gc.g1 * gc.g1 * P1);
    r.r2 = (1.0 - gc.alpha) * gaussian_c(gc.g2 * gc.g2 * P2);
    r.min = std::min(r.r1, r.r2);
    return r;
}

PowerSplit optimize_power_split(const GaussianCompound& gc) {
    gc.validate();
    // r1 grows and r2 falls along the constraint line, so the max-min sits
    // where they cross (or at the full-power endpoint); bisection on the gap
    auto p2_of = [&](double p1) {
        double p2 = (gc.P - gc.alpha * p1) / (1.0 - gc.alpha);
        return p2 < 0.0 ? 0.0 : p2;
    };
    auto gap = [&](double p1) {
        return gc.alpha * gaussian_c(gc.g1 * gc.g1 * p1) -
               (1.0 - gc.alpha) * gaussian_c(gc.g2 * gc.g2 * p2_of(p1));
    };
    double lo = 0.0, hi = gc.P / gc.alpha;
    double p1;
    if (gap(hi) <= 0.0) {
        p1 = hi;  // the first branch never catches up; give it everything
    } else {
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            (gap(mid) < 0.0 ? lo : hi) = mid;
        }
        p1 = 0.5 * (lo + hi);
    }
    PowerSplit out;
    out.P1 = p1;
    out.P2 = p2_of(p1);
    if (out.P2 < 0.0) out.P2 = 0.0;
    BranchRates r = branch_rate(gc, out.P1, out.P2);
    out.rate = r.min;
    return out;
}

DpcCheck dpc_auxiliary(double g, double Pk, double Q) {
    if (!(Pk > 0.0)) throw std::invalid_argument("dpc_auxiliary: Pk must be positive");
    if (Q < 0.0) throw std::invalid_argument("dpc_auxiliary: Q must be >= 0");
    DpcCheck c;
    double gp = g * g * Pk;
    c.coefficient = gp / (1.0 + gp);
    c.expected = gaussian_c(gp);
    if (Q == 0.0) {
        // no state noise: U = X and the auxiliary penalty vanishes
        c.identity_value = gaussian_c(gp);
        return c;
    }
    // U = gX + a Z_S, Y = gX + Z_S + Z with X ~ N(0,Pk), Z_S ~ N(0,Q),
    // Z ~ N(0,1): the coefficient weights the state noise against the input
    // as the receiver sees it
    double a = c.coefficient;
    double var_u = gp + a * a * Q;
    double var_y = gp + Q + 1.0;
    double cov_uy = gp + a * Q;
    double i_uy = 0.5 * std::log2(var_u * var_y / (var_u * var_y - cov_uy * cov_uy));
    double i_uz = 0.5 * std::log2(var_u * Q / (var_u * Q - a * a * Q * Q));
    c.identity_value = i_uy - i_uz;
    return c;
}

std::string PowerSplit::to_json_text() const {
    nlohmann::json j = {{"P1", P1}, {"P2", P2}, {"rate", rate}};
    return j.dump(2);
}

}  // namespace statecoder
