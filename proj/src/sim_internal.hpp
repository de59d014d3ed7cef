#pragma once

// Shared machinery between the two simulation engines. Cell packings:
//   (w,s)        -> w*S + s
//   (w,s,u)      -> (w*S + s)*U + u
//   (w,s,v)      -> (w*S + s)*V + v
//   (w,s,u,v)    -> ((w*S + s)*U + u)*V + v
//   (w,u,y1)     -> (w*U + u)*Y1 + y1
//   (w,v,y2)     -> (w*V + v)*Y2 + y2

#include <cstdint>
#include <vector>

#include "statecoder/sim.hpp"

namespace statecoder::detail {

struct SchemePmfs {
    int S = 1, W = 1, U = 1, V = 1, X = 1, Y1 = 1, Y2 = 1;
    std::vector<double> p_ws;
    std::vector<double> p_wsu, p_wsv;
    std::vector<double> p_wsuv;
    std::vector<double> p_wuy1, p_wvy2;
    std::vector<double> p_wy1, p_wy2;  // decode prune marginals
    std::vector<uint8_t> x_map;        // ((w*U+u)*V+v)*S + s

    simrng::CdfU64 cdf_s, cdf_w;
    std::vector<simrng::CdfU64> cdf_u_w, cdf_v_w;      // indexed by w
    std::vector<simrng::CdfU64> cdf_y1_xs, cdf_y2_xs;  // indexed by x*S + s

    uint8_t x_of(int w, int u, int v, int s) const {
        return x_map[((static_cast<int64_t>(w) * U + u) * V + v) * S + s];
    }
};

SchemePmfs build_pmfs(const StateChannel& ch, const AuxScheme& aux);

// canonical symbol fillers; the materialized codebook and the streaming scans
// both go through these
void fill_iid(const simrng::CdfU64& cdf, uint64_t key, int n, uint8_t* out);
void fill_cond(const std::vector<simrng::CdfU64>& cdf_by_parent, const uint8_t* parent,
               uint64_t key, int n, uint8_t* out);

int64_t draw_message(uint64_t tkey, int64_t M);

void draw_outputs(const SchemePmfs& pm, uint64_t tkey, const uint8_t* x, const uint8_t* s, int n,
                  std::vector<uint8_t>& y1, std::vector<uint8_t>& y2);

// expands each admissible count window by one in both directions; used for
// necessary-condition pruning so that borderline float rounding can never
// drop a candidate the exact check would keep
CountWindows relax(const CountWindows& w, std::span<const double> probs, int64_t n);

SimResult run_reference(const StateChannel& ch, const AuxScheme& aux, const SimConfig& cfg);
SimResult run_fast(const StateChannel& ch, const AuxScheme& aux, const SimConfig& cfg);

}  // namespace statecoder::detail
