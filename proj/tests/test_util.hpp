#pragma once

// Small self-contained RNG for tests so that frozen expectations never depend
// on standard-library distribution internals.

#include <cmath>
#include <cstdint>
#include <vector>

#include "statecoder/channel.hpp"
#include "statecoder/pmf.hpp"

namespace testutil {

struct Rng {
    uint64_t s;
    explicit Rng(uint64_t seed) : s(seed) {}
    uint64_t next_u64() {
        s += 0x9e3779b97f4a7c15ULL;
        uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    int next_below(int n) { return static_cast<int>(next_u64() % static_cast<uint64_t>(n)); }
};

inline std::vector<double> random_simplex(Rng& rng, int n) {
    std::vector<double> v(n);
    double sum = 0.0;
    for (double& x : v) {
        x = -std::log(rng.next_unit() + 1e-300);
        sum += x;
    }
    for (double& x : v) x /= sum;
    return v;
}

inline statecoder::JointPmf random_pmf(Rng& rng, std::vector<statecoder::Axis> axes) {
    int64_t total = 1;
    for (const auto& a : axes) total *= a.size;
    return statecoder::JointPmf(std::move(axes), random_simplex(rng, static_cast<int>(total)));
}

inline statecoder::StateChannel random_channel(Rng& rng, int max_size = 3) {
    statecoder::StateChannel ch;
    ch.S = 2 + rng.next_below(max_size - 1);
    ch.X = 2 + rng.next_below(max_size - 1);
    ch.Y1 = 2 + rng.next_below(max_size - 1);
    ch.Y2 = 2 + rng.next_below(max_size - 1);
    ch.p_s = random_simplex(rng, ch.S);
    for (int x = 0; x < ch.X; ++x)
        for (int s = 0; s < ch.S; ++s) {
            auto r1 = random_simplex(rng, ch.Y1);
            auto r2 = random_simplex(rng, ch.Y2);
            ch.p_y1.insert(ch.p_y1.end(), r1.begin(), r1.end());
            ch.p_y2.insert(ch.p_y2.end(), r2.begin(), r2.end());
        }
    ch.validate_and_normalize();
    return ch;
}

inline statecoder::AuxScheme random_aux(Rng& rng, const statecoder::StateChannel& ch,
                                        int max_card = 3) {
    statecoder::AuxScheme aux;
    aux.S = ch.S;
    aux.W = 1 + rng.next_below(max_card);
    aux.U = 1 + rng.next_below(max_card);
    aux.V = 1 + rng.next_below(max_card);
    int64_t cells = static_cast<int64_t>(aux.W) * aux.U * aux.V;
    for (int s = 0; s < ch.S; ++s) {
        auto slice = random_simplex(rng, static_cast<int>(cells));
        aux.p_wuv_s.insert(aux.p_wuv_s.end(), slice.begin(), slice.end());
    }
    for (int64_t i = 0; i < cells * ch.S; ++i)
        aux.x_map.push_back(static_cast<uint8_t>(rng.next_below(ch.X)));
    return aux;
}

inline statecoder::GpAux random_gp_aux(Rng& rng, const statecoder::StateChannel& ch, int card) {
    statecoder::GpAux aux;
    aux.S = ch.S;
    aux.U = card;
    for (int s = 0; s < ch.S; ++s) {
        auto slice = random_simplex(rng, card);
        aux.p_u_s.insert(aux.p_u_s.end(), slice.begin(), slice.end());
    }
    for (int64_t i = 0; i < static_cast<int64_t>(card) * ch.S; ++i)
        aux.x_map.push_back(static_cast<uint8_t>(rng.next_below(ch.X)));
    return aux;
}

}  // namespace testutil
