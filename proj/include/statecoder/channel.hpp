#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "statecoder/pmf.hpp"

namespace statecoder {

// Two-receiver DM channel with i.i.d. state: p(s) plus the per-receiver
// transition tables p(y_k|x,s). Only the marginal transitions are stored;
// the common-message quantities computed here depend on nothing else. When a
// sample of (Y1,Y2) is needed (simulation), the conditionally independent
// coupling p(y1|x,s)p(y2|x,s) is used.
struct StateChannel {
    int S = 0, X = 0, Y1 = 0, Y2 = 0;
    std::vector<double> p_s;   // [s]
    std::vector<double> p_y1;  // [x][s][y], row (x,s) sums to 1
    std::vector<double> p_y2;  // [x][s][y]

    double state(int s) const { return p_s[s]; }
    double y1(int x, int s, int y) const { return p_y1[(static_cast<int64_t>(x) * S + s) * Y1 + y]; }
    double y2(int x, int s, int y) const { return p_y2[(static_cast<int64_t>(x) * S + s) * Y2 + y]; }
    double yk(int receiver, int x, int s, int y) const {
        return receiver == 1 ? y1(x, s, y) : y2(x, s, y);
    }

    // Throws std::invalid_argument on inconsistent sizes, negative entries, or
    // a row sum off by more than tol. Rows are then normalized exactly.
    void validate_and_normalize(double tol = 1e-6);
};

// The auxiliary-scheme object the layered bound is evaluated on: conditional
// pmf p(w,u,v|s) and a deterministic symbol map x(w,u,v,s).
struct AuxScheme {
    int S = 1, W = 1, U = 1, V = 1;
    std::vector<double> p_wuv_s;   // [s][w][u][v], each s-slice sums to 1
    std::vector<uint8_t> x_map;    // [w][u][v][s] -> x

    double cond(int s, int w, int u, int v) const {
        return p_wuv_s[((static_cast<int64_t>(s) * W + w) * U + u) * V + v];
    }
    uint8_t x(int w, int u, int v, int s) const {
        return x_map[((static_cast<int64_t>(w) * U + u) * V + v) * S + s];
    }

    void validate(const StateChannel& ch, double tol = 1e-9) const;
};

// Single-auxiliary scheme: p(u|s) and deterministic x(u,s).
struct GpAux {
    int S = 1, U = 1;
    std::vector<double> p_u_s;   // [s][u]
    std::vector<uint8_t> x_map;  // [u][s] -> x

    double cond(int s, int u) const { return p_u_s[static_cast<int64_t>(s) * U + u]; }
    uint8_t x(int u, int s) const { return x_map[static_cast<int64_t>(u) * S + s]; }

    void validate(const StateChannel& ch, double tol = 1e-9) const;
};

// Embeds a single-auxiliary scheme as a layered scheme with the common layer
// carrying it and both satellite layers degenerate.
AuxScheme lift_gp(const GpAux& gp);

// Input distribution p(x|s) induced by a scheme, returned as [s][x].
std::vector<double> induced_input(const StateChannel& ch, const AuxScheme& aux);

// Joint pmf over (S,W,U,V,X,Yk) built as p(s) p(w,u,v|s) 1{x = x(w,u,v,s)}
// p(y_k|x,s). Axis names: "S","W","U","V","X","Y1"/"Y2".
JointPmf induced_joint(const StateChannel& ch, const AuxScheme& aux, int receiver);

// Joint pmf over (S,U,X,Yk) for a single-auxiliary scheme.
JointPmf induced_joint_gp(const StateChannel& ch, const GpAux& aux, int receiver);

// The built-in binary example channel: S ~ Bern(1/2); when S=0, Y1=X and
// Y2=0; when S=1, Y1=1 and Y2=X. Any relabeling of the output symbols leaves
// every quantity computed from it unchanged.
StateChannel example_channel();

bool is_example_channel(const StateChannel& ch, double tol = 1e-12);

// Deterministic output maps y_k = f_k(x,s), present iff every transition row
// is a point mass.
struct DeterministicMaps {
    std::vector<uint8_t> f1, f2;  // [x][s]
    uint8_t y1(int x, int s, int S) const { return f1[static_cast<int64_t>(x) * S + s]; }
    uint8_t y2(int x, int s, int S) const { return f2[static_cast<int64_t>(x) * S + s]; }
};
std::optional<DeterministicMaps> deterministic_maps(const StateChannel& ch, double tol = 1e-9);

// For a deterministic channel, the scheme with trivial common layer,
// U = Y1, V = Y2 and the given input distribution p(x|s) ([s][x]).
AuxScheme outputs_as_aux(const StateChannel& ch, std::span<const double> pxs);

// Maximal common labeling Z = f(Y1) = g(Y2): connected components of the
// bipartite support graph of a pmf over (Y1,Y2).
struct CommonPart {
    std::vector<int> f, g;  // value -> component label
    double entropy_bits = 0.0;
    int components = 0;
};
CommonPart gacs_korner_common(const JointPmf& p_y1y2);

// JSON channel schema:
//   {"S":k,"X":k,"Y1":k,"Y2":k,"p_s":[...],"p_y1":[[[...]]],"p_y2":[[[...]]]}
// with conditional tables indexed [x][s][y]. A joint table "p_y12" indexed
// [x][s][y1][y2] is also accepted and marginalized (the computed rates depend
// only on the marginals). Rows off by more than 1e-6 are rejected.
StateChannel channel_from_json_text(const std::string& text);
StateChannel channel_from_json_file(const std::string& path);
std::string channel_to_json_text(const StateChannel& ch);

// Aux JSON: {"W":k,"U":k,"V":k,"p_wuv_s":[s][w][u][v],"x_map":[w][u][v][s]}
// or {"U":k,"p_u_s":[s][u],"x_map":[u][s]} for a single-auxiliary scheme.
AuxScheme aux_from_json_text(const std::string& text, const StateChannel& ch);
AuxScheme aux_from_json_file(const std::string& path, const StateChannel& ch);
bool aux_json_is_single_layer(const std::string& text);
GpAux gp_aux_from_json_text(const std::string& text, const StateChannel& ch);
std::string aux_to_json_text(const AuxScheme& aux);
std::string gp_aux_to_json_text(const GpAux& aux);

}  // namespace statecoder
