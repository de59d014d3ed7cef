#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "statecoder/channel.hpp"
#include "statecoder/typicality.hpp"

namespace statecoder {

// ---------------------------------------------------------------------------
// Counter-based randomness. Every random object in a simulation (state
// sequence, message, each codeword symbol, channel noise) is a pure function
// of (seed, trial, role, indices, position), so trials can run on any number
// of threads and still reproduce bit for bit. Tests re-derive codewords
// through these same helpers.

namespace simrng {

inline uint64_t mix(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t combine(uint64_t h, uint64_t v) { return mix(h ^ (v * 0xd6e8feb86659fd93ULL)); }

inline uint64_t draw(uint64_t key, uint64_t i) { return mix(key + (i + 1) * 0x9e3779b97f4a7c15ULL); }

// scales a 64-bit draw into [0, bound)
inline uint64_t bounded(uint64_t r, uint64_t bound) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(r) * bound) >> 64);
}

enum Tag : uint64_t {
    TagState = 1,
    TagMsg = 2,
    TagW = 3,
    TagU = 4,
    TagV = 5,
    TagCh1 = 6,
    TagCh2 = 7,
    TagCoverW = 8,
};

inline uint64_t trial_key(uint64_t seed, int64_t trial) {
    return combine(seed, static_cast<uint64_t>(trial));
}

// stream keys for the codeword layers (indices are 0-based)
inline uint64_t w_key(uint64_t tkey, int64_t m, int64_t l0) {
    return combine(combine(combine(tkey, TagW), static_cast<uint64_t>(m)), static_cast<uint64_t>(l0));
}
inline uint64_t u_key(uint64_t tkey, int64_t m, int64_t l0, int64_t l1) {
    return combine(combine(combine(combine(tkey, TagU), static_cast<uint64_t>(m)),
                           static_cast<uint64_t>(l0)),
                   static_cast<uint64_t>(l1));
}
inline uint64_t v_key(uint64_t tkey, int64_t m, int64_t l0, int64_t l2) {
    return combine(combine(combine(combine(tkey, TagV), static_cast<uint64_t>(m)),
                           static_cast<uint64_t>(l0)),
                   static_cast<uint64_t>(l2));
}

// integer-threshold cdf: symbol j is chosen when the 64-bit draw falls below
// thresholds[j] first
struct CdfU64 {
    std::vector<uint64_t> thr;  // size k-1; the last symbol is the catch-all

    static CdfU64 from_probs(std::span<const double> p);
    int sample(uint64_t r) const {
        int k = static_cast<int>(thr.size());
        for (int j = 0; j < k; ++j)
            if (r < thr[j]) return j;
        return k;
    }
};

}  // namespace simrng

// ---------------------------------------------------------------------------

struct SimConfig {
    int n = 8;
    double R = 0.0, T0 = 0.0, T1 = 0.0, T2 = 0.0;
    double epsilon = 0.1;
    double epsilon_prime = 0.2;
    int trials = 100;
    uint64_t seed = 1;

    void validate() const;  // n>=1, rates >= 0, 0 < eps < eps', trials >= 1
};

// Typicality slack defaults: 0.1 up to n = 16, 0.05 beyond; the decoder slack
// defaults to twice the encoder slack.
double default_epsilon(int n);

// ceil(n * rate) with a 1e-9 guard against float noise, never negative.
int64_t size_exponent(int n, double rate);

struct CodebookSizes {
    int64_t M = 1, L0 = 1, L1 = 1, L2 = 1;
    int eM = 0, e0 = 0, e1 = 0, e2 = 0;
};

// Sizes 2^ceil(nR) etc. A degenerate common layer (|W| = 1) forces L0 = 1.
CodebookSizes codebook_sizes(const AuxScheme& aux, const SimConfig& cfg);

// Rejects configurations whose candidate count 2^{n(R+T0+max(T1,T2))}
// exceeds 2^26 (the largest per-decoder scan). Materializing additionally
// requires the stored symbol count to fit in 2^26.
void check_scan_guard(const AuxScheme& aux, const SimConfig& cfg);
void check_materialize_guard(const AuxScheme& aux, const SimConfig& cfg);

// Materialized codebook for one trial: w indexed (m,l0), u indexed (m,l0,l1),
// v indexed (m,l0,l2), all generated from the per-(codeword,symbol) streams
// above, so a streamed scan sees exactly these sequences.
struct Codebook {
    CodebookSizes sizes;
    int n = 0;
    AuxScheme aux;
    std::vector<uint8_t> w, u, v;

    std::span<const uint8_t> w_seq(int64_t m, int64_t l0) const {
        return {w.data() + ((m * sizes.L0) + l0) * n, static_cast<size_t>(n)};
    }
    std::span<const uint8_t> u_seq(int64_t m, int64_t l0, int64_t l1) const {
        return {u.data() + (((m * sizes.L0) + l0) * sizes.L1 + l1) * n, static_cast<size_t>(n)};
    }
    std::span<const uint8_t> v_seq(int64_t m, int64_t l0, int64_t l2) const {
        return {v.data() + (((m * sizes.L0) + l0) * sizes.L2 + l2) * n, static_cast<size_t>(n)};
    }
};

Codebook generate_codebook(const StateChannel& ch, const AuxScheme& aux, const SimConfig& cfg,
                           uint64_t trial_key);

// Draws the i.i.d. state sequence of a trial.
std::vector<uint8_t> draw_state_sequence(const StateChannel& ch, const SimConfig& cfg,
                                         uint64_t trial_key);

struct EncodeResult {
    int64_t l0 = 0, l1 = 0, l2 = 0;
    std::vector<uint8_t> x;
    bool failed = false;  // some search found no typical candidate; the
                          // fallback indices were still used for transmission
};

// The typicality encoder: smallest l0 with (w(m,l0), s) eps-typical, then the
// (l1,l2) pair with the quadruple eps-typical, smallest first in l1 then in
// l2; fallback index 0 on failure.
EncodeResult encode(const StateChannel& ch, const Codebook& cb, const SimConfig& cfg, int64_t m,
                    std::span<const uint8_t> s_seq);

enum class DecodeStatus { ok, none, ambiguous };
struct DecodeResult {
    DecodeStatus status = DecodeStatus::none;
    int64_t m = -1;
};

// Indirect decoding: receiver k declares the unique message with some
// (l0, l_k) whose triple (w, u_or_v, y_k) is eps'-typical; "none" or
// "ambiguous" otherwise.
DecodeResult decode(const StateChannel& ch, const Codebook& cb, const SimConfig& cfg, int receiver,
                    std::span<const uint8_t> y_seq);

enum class Engine { reference, fast };

struct SimResult {
    SimConfig cfg;
    int trials = 0;
    int encoder_failures = 0;
    int errors1 = 0, errors2 = 0, errors_overall = 0;
    double encoder_failure_rate = 0.0;
    double decoder1_error_rate = 0.0;
    double decoder2_error_rate = 0.0;
    double overall_error_rate = 0.0;

    static std::string csv_header();  // n,R,T0,T1,T2,epsilon,trials,...
    std::string csv_row() const;
    std::string to_json_text() const;
};

// Fresh codebook, state sequence and uniform message per trial; y1 and y2 are
// drawn conditionally independently given (x,s). The fast engine streams
// codewords from the counter rng instead of materializing them and prunes
// scans with running count windows; both engines produce identical results.
SimResult run_trials(const StateChannel& ch, const AuxScheme& aux, const SimConfig& cfg,
                     Engine engine = Engine::fast);

// ---------------------------------------------------------------------------
// Covering experiment: success frequency of the (l1,l2) search as a function
// of (T1,T2), conditioned on a typical (w,s) pair (rejection sampled, shared
// across cells). Candidate streams are keyed without the T's, so enlarging a
// rate can only add candidates: success is monotone cell-wise under a fixed
// seed.

struct CoveringCell {
    double T1 = 0.0, T2 = 0.0;
    int64_t L1 = 1, L2 = 1;
    int successes = 0;
    int trials = 0;
    int skipped = 0;  // trials where no typical (w,s) was found in 1000 tries
    double success_rate = 0.0;
};

// epsilon_given conditions the accepted (w,s) pair more tightly than the
// search slack, matching the nested-typicality hypothesis of the covering
// step; pass <= 0 to use epsilon / 2.
std::vector<CoveringCell> covering_experiment(const StateChannel& ch, const AuxScheme& aux,
                                              std::span<const double> T1_list,
                                              std::span<const double> T2_list, int n, int trials,
                                              double epsilon, uint64_t seed,
                                              double epsilon_given = -1.0);

// The three threshold quantities the experiment probes:
// I(U;S|W), I(V;S|W), and their sum plus I(U;V|W,S).
struct CoveringConditions {
    double t1 = 0.0, t2 = 0.0, sum = 0.0;
};
CoveringConditions covering_conditions(const StateChannel& ch, const AuxScheme& aux);

}  // namespace statecoder
