// Plain materialized-codebook implementation of the coding scheme. It is the
// readable definition of the trial semantics; the streaming engine in
// sim_fast.cpp must match it trial for trial and is tested against it.

#include <stdexcept>

#include "sim_internal.hpp"
#include "statecoder/pmf.hpp"

namespace statecoder {

namespace {

using detail::SchemePmfs;

JointPmf pmf_ws(const SchemePmfs& pm) {
    return JointPmf({{"W", pm.W}, {"S", pm.S}}, pm.p_ws);
}
JointPmf pmf_wsuv(const SchemePmfs& pm) {
    return JointPmf({{"W", pm.W}, {"S", pm.S}, {"U", pm.U}, {"V", pm.V}}, pm.p_wsuv);
}
JointPmf pmf_decode(const SchemePmfs& pm, int receiver) {
    if (receiver == 1) return JointPmf({{"W", pm.W}, {"U", pm.U}, {"Y1", pm.Y1}}, pm.p_wuy1);
    return JointPmf({{"W", pm.W}, {"V", pm.V}, {"Y2", pm.Y2}}, pm.p_wvy2);
}

std::vector<uint8_t> to_vec(std::span<const uint8_t> s) { return {s.begin(), s.end()}; }

}  // namespace

EncodeResult encode(const StateChannel& ch, const Codebook& cb, const SimConfig& cfg, int64_t m,
                    std::span<const uint8_t> s_seq) {
    if (m < 0 || m >= cb.sizes.M) throw std::invalid_argument("encode: message out of range");
    if (static_cast<int>(s_seq.size()) != cb.n)
        throw std::invalid_argument("encode: state sequence length mismatch");
    SchemePmfs pm = detail::build_pmfs(ch, cb.aux);
    JointPmf P_ws = pmf_ws(pm);
    JointPmf P_wsuv = pmf_wsuv(pm);

    EncodeResult res;
    bool found0 = false;
    for (int64_t l0 = 0; l0 < cb.sizes.L0 && !found0; ++l0) {
        SequenceTuple t;
        t.seqs = {to_vec(cb.w_seq(m, l0)), to_vec(s_seq)};
        if (is_typical(t, P_ws, cfg.epsilon)) {
            res.l0 = l0;
            found0 = true;
        }
    }
    if (!found0) res.l0 = 0;

    bool found12 = false;
    for (int64_t l1 = 0; l1 < cb.sizes.L1 && !found12; ++l1)
        for (int64_t l2 = 0; l2 < cb.sizes.L2 && !found12; ++l2) {
            SequenceTuple t;
            t.seqs = {to_vec(cb.w_seq(m, res.l0)), to_vec(s_seq),
                      to_vec(cb.u_seq(m, res.l0, l1)), to_vec(cb.v_seq(m, res.l0, l2))};
            if (is_typical(t, P_wsuv, cfg.epsilon)) {
                res.l1 = l1;
                res.l2 = l2;
                found12 = true;
            }
        }
    if (!found12) {
        res.l1 = 0;
        res.l2 = 0;
    }
    res.failed = !found0 || !found12;

    std::span<const uint8_t> w = cb.w_seq(m, res.l0);
    std::span<const uint8_t> u = cb.u_seq(m, res.l0, res.l1);
    std::span<const uint8_t> v = cb.v_seq(m, res.l0, res.l2);
    res.x.resize(cb.n);
    for (int i = 0; i < cb.n; ++i) res.x[i] = pm.x_of(w[i], u[i], v[i], s_seq[i]);
    return res;
}

DecodeResult decode(const StateChannel& ch, const Codebook& cb, const SimConfig& cfg, int receiver,
                    std::span<const uint8_t> y_seq) {
    if (receiver != 1 && receiver != 2) throw std::invalid_argument("decode: receiver must be 1 or 2");
    if (static_cast<int>(y_seq.size()) != cb.n)
        throw std::invalid_argument("decode: output sequence length mismatch");
    SchemePmfs pm = detail::build_pmfs(ch, cb.aux);
    JointPmf P = pmf_decode(pm, receiver);
    int64_t Lk = receiver == 1 ? cb.sizes.L1 : cb.sizes.L2;

    int64_t hit = -1;
    int hit_count = 0;
    for (int64_t m = 0; m < cb.sizes.M; ++m) {
        bool message_hit = false;
        for (int64_t l0 = 0; l0 < cb.sizes.L0 && !message_hit; ++l0)
            for (int64_t lk = 0; lk < Lk && !message_hit; ++lk) {
                SequenceTuple t;
                t.seqs = {to_vec(cb.w_seq(m, l0)),
                          to_vec(receiver == 1 ? cb.u_seq(m, l0, lk) : cb.v_seq(m, l0, lk)),
                          to_vec(y_seq)};
                message_hit = is_typical(t, P, cfg.epsilon_prime);
            }
        if (message_hit) {
            ++hit_count;
            hit = m;
        }
    }
    DecodeResult res;
    if (hit_count == 1) {
        res.status = DecodeStatus::ok;
        res.m = hit;
    } else {
        res.status = hit_count == 0 ? DecodeStatus::none : DecodeStatus::ambiguous;
        res.m = -1;
    }
    return res;
}

namespace detail {

SimResult run_reference(const StateChannel& ch, const AuxScheme& aux, const SimConfig& cfg) {
    check_materialize_guard(aux, cfg);
    SchemePmfs pm = build_pmfs(ch, aux);
    SimResult res;
    res.cfg = cfg;
    res.trials = cfg.trials;
    std::vector<uint8_t> y1, y2;
    for (int t = 0; t < cfg.trials; ++t) {
        uint64_t tkey = simrng::trial_key(cfg.seed, t);
        Codebook cb = generate_codebook(ch, aux, cfg, tkey);
        std::vector<uint8_t> s = draw_state_sequence(ch, cfg, tkey);
        int64_t m = draw_message(tkey, cb.sizes.M);
        EncodeResult enc = encode(ch, cb, cfg, m, s);
        draw_outputs(pm, tkey, enc.x.data(), s.data(), cfg.n, y1, y2);
        DecodeResult d1 = decode(ch, cb, cfg, 1, y1);
        DecodeResult d2 = decode(ch, cb, cfg, 2, y2);
        bool e1 = !(d1.status == DecodeStatus::ok && d1.m == m);
        bool e2 = !(d2.status == DecodeStatus::ok && d2.m == m);
        res.encoder_failures += enc.failed ? 1 : 0;
        res.errors1 += e1 ? 1 : 0;
        res.errors2 += e2 ? 1 : 0;
        res.errors_overall += (e1 || e2) ? 1 : 0;
    }
    res.encoder_failure_rate = static_cast<double>(res.encoder_failures) / cfg.trials;
    res.decoder1_error_rate = static_cast<double>(res.errors1) / cfg.trials;
    res.decoder2_error_rate = static_cast<double>(res.errors2) / cfg.trials;
    res.overall_error_rate = static_cast<double>(res.errors_overall) / cfg.trials;
    return res;
}

}  // namespace detail

}  // namespace statecoder
