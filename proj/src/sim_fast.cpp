// Streaming engine: codewords are re-derived from the counter rng on demand
// instead of being stored, candidate scans abort as soon as a running count
// leaves its admissible window, and satellite searches are pre-filtered by
// the marginal windows (relaxed by one count so pruning can never disagree
// with the exact check). Outcomes are identical to sim_reference.cpp.

#include <algorithm>
#include <stdexcept>

#include "sim_internal.hpp"
#include "statecoder/runtime.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace statecoder::detail {

namespace {

constexpr int64_t kSurvivorCache = 4096;

struct FastCtx {
    const StateChannel& ch;
    const AuxScheme& aux;
    const SimConfig& cfg;
    SchemePmfs pm;
    CodebookSizes sz;
    CountWindows win_ws, win_wsuv;            // encoder, exact at epsilon
    CountWindows win_wsu_rel, win_wsv_rel;    // satellite filters, relaxed
    CountWindows win_tri1, win_tri2;          // decoders, exact at epsilon'
    CountWindows win_wy1_rel, win_wy2_rel;    // decoder prune, relaxed

    FastCtx(const StateChannel& c, const AuxScheme& a, const SimConfig& f)
        : ch(c), aux(a), cfg(f), pm(build_pmfs(c, a)), sz(codebook_sizes(a, f)) {
        int64_t n = cfg.n;
        win_ws = CountWindows::from_pmf(pm.p_ws, n, cfg.epsilon);
        win_wsuv = CountWindows::from_pmf(pm.p_wsuv, n, cfg.epsilon);
        win_wsu_rel = relax(CountWindows::from_pmf(pm.p_wsu, n, cfg.epsilon), pm.p_wsu, n);
        win_wsv_rel = relax(CountWindows::from_pmf(pm.p_wsv, n, cfg.epsilon), pm.p_wsv, n);
        win_tri1 = CountWindows::from_pmf(pm.p_wuy1, n, cfg.epsilon_prime);
        win_tri2 = CountWindows::from_pmf(pm.p_wvy2, n, cfg.epsilon_prime);
        win_wy1_rel = relax(CountWindows::from_pmf(pm.p_wy1, n, cfg.epsilon_prime), pm.p_wy1, n);
        win_wy2_rel = relax(CountWindows::from_pmf(pm.p_wy2, n, cfg.epsilon_prime), pm.p_wy2, n);
    }
};

// derives one sequence while tracking cell counts; bails out the moment a
// count exceeds its upper bound. Returns true iff fully derived and inside
// every window. `out` is only complete when true is returned.
template <typename CellOf, typename SymbolAt>
bool derive_checked(int n, const CountWindows& win, std::vector<int64_t>& cnt, CellOf cell_of,
                    SymbolAt symbol_at, uint8_t* out) {
    std::fill(cnt.begin(), cnt.end(), 0);
    for (int i = 0; i < n; ++i) {
        uint8_t sym = symbol_at(i);
        out[i] = sym;
        int64_t cell = cell_of(i, sym);
        if (++cnt[cell] > win.hi[cell]) return false;
    }
    for (size_t c = 0; c < cnt.size(); ++c)
        if (cnt[c] < win.lo[c]) return false;
    return true;
}

// counts a fully cached pair of satellite sequences against the quadruple
// window
bool quad_pass(const FastCtx& fc, const uint8_t* w, const uint8_t* s, const uint8_t* u,
               const uint8_t* v, std::vector<int64_t>& cnt) {
    std::fill(cnt.begin(), cnt.end(), 0);
    const int U = fc.pm.U, V = fc.pm.V, S = fc.pm.S;
    for (int i = 0; i < fc.cfg.n; ++i) {
        int64_t cell = ((static_cast<int64_t>(w[i]) * S + s[i]) * U + u[i]) * V + v[i];
        if (++cnt[cell] > fc.win_wsuv.hi[cell]) return false;
    }
    for (size_t c = 0; c < cnt.size(); ++c)
        if (cnt[c] < fc.win_wsuv.lo[c]) return false;
    return true;
}

struct TrialOutcome {
    bool enc_failed = false;
    bool err1 = false, err2 = false;
};

struct SatelliteScan {
    std::vector<int64_t> idx;      // surviving candidate indices, ascending
    std::vector<uint8_t> bytes;    // cached sequences for the first kSurvivorCache
    int64_t cached = 0;
};

void scan_satellite(const FastCtx& fc, uint64_t tkey, int64_t m, int64_t l0, bool is_u, int64_t L,
                    const uint8_t* w, const uint8_t* s, SatelliteScan& out,
                    std::vector<int64_t>& cnt, std::vector<uint8_t>& buf) {
    out.idx.clear();
    out.bytes.clear();
    out.cached = 0;
    const int n = fc.cfg.n;
    const int A = is_u ? fc.pm.U : fc.pm.V;
    const auto& win = is_u ? fc.win_wsu_rel : fc.win_wsv_rel;
    const auto& cdfs = is_u ? fc.pm.cdf_u_w : fc.pm.cdf_v_w;
    const int S = fc.pm.S;
    for (int64_t l = 0; l < L; ++l) {
        uint64_t key = is_u ? simrng::u_key(tkey, m, l0, l) : simrng::v_key(tkey, m, l0, l);
        bool ok = derive_checked(
            n, win, cnt,
            [&](int i, uint8_t sym) {
                return (static_cast<int64_t>(w[i]) * S + s[i]) * A + sym;
            },
            [&](int i) {
                return static_cast<uint8_t>(
                    cdfs[w[i]].sample(simrng::draw(key, static_cast<uint64_t>(i))));
            },
            buf.data());
        if (!ok) continue;
        out.idx.push_back(l);
        if (out.cached < kSurvivorCache) {
            out.bytes.insert(out.bytes.end(), buf.begin(), buf.end());
            ++out.cached;
        }
    }
}

// fetches survivor bytes from the cache or re-derives them
const uint8_t* survivor_bytes(const FastCtx& fc, uint64_t tkey, int64_t m, int64_t l0, bool is_u,
                              const SatelliteScan& scan, int64_t pos, const uint8_t* w,
                              std::vector<uint8_t>& buf) {
    if (pos < scan.cached) return scan.bytes.data() + pos * fc.cfg.n;
    uint64_t key = is_u ? simrng::u_key(tkey, m, l0, scan.idx[pos])
                        : simrng::v_key(tkey, m, l0, scan.idx[pos]);
    const auto& cdfs = is_u ? fc.pm.cdf_u_w : fc.pm.cdf_v_w;
    fill_cond(cdfs, w, key, fc.cfg.n, buf.data());
    return buf.data();
}

DecodeStatus fast_decode(const FastCtx& fc, uint64_t tkey, int receiver, const uint8_t* y,
                         int64_t& m_hat) {
    const int n = fc.cfg.n;
    const int A = receiver == 1 ? fc.pm.U : fc.pm.V;
    const int Y = receiver == 1 ? fc.pm.Y1 : fc.pm.Y2;
    const int64_t Lk = receiver == 1 ? fc.sz.L1 : fc.sz.L2;
    const auto& tri = receiver == 1 ? fc.win_tri1 : fc.win_tri2;
    const auto& wy_rel = receiver == 1 ? fc.win_wy1_rel : fc.win_wy2_rel;
    const auto& cdfs = receiver == 1 ? fc.pm.cdf_u_w : fc.pm.cdf_v_w;

    std::vector<uint8_t> wc(n), ac(n);
    std::vector<int64_t> cnt_wy(static_cast<size_t>(fc.pm.W) * Y);
    std::vector<int64_t> cnt_tri(static_cast<size_t>(fc.pm.W) * A * Y);

    // with a trivial common layer the w-sequence is one constant sequence;
    // its marginal prune is decided once
    bool w_constant = fc.pm.W == 1;
    if (w_constant) {
        std::fill(wc.begin(), wc.end(), 0);
        bool ok = derive_checked(
            n, wy_rel, cnt_wy, [&](int i, uint8_t) { return static_cast<int64_t>(y[i]); },
            [&](int) { return uint8_t{0}; }, wc.data());
        if (!ok) {
            m_hat = -1;
            return DecodeStatus::none;
        }
    }

    int64_t hit = -1;
    for (int64_t m = 0; m < fc.sz.M; ++m) {
        bool message_hit = false;
        for (int64_t l0 = 0; l0 < fc.sz.L0 && !message_hit; ++l0) {
            if (!w_constant) {
                uint64_t wkey = simrng::w_key(tkey, m, l0);
                bool ok = derive_checked(
                    n, wy_rel, cnt_wy,
                    [&](int i, uint8_t sym) { return static_cast<int64_t>(sym) * Y + y[i]; },
                    [&](int i) {
                        return static_cast<uint8_t>(
                            fc.pm.cdf_w.sample(simrng::draw(wkey, static_cast<uint64_t>(i))));
                    },
                    wc.data());
                if (!ok) continue;
            }
            for (int64_t lk = 0; lk < Lk && !message_hit; ++lk) {
                uint64_t key = receiver == 1 ? simrng::u_key(tkey, m, l0, lk)
                                             : simrng::v_key(tkey, m, l0, lk);
                message_hit = derive_checked(
                    n, tri, cnt_tri,
                    [&](int i, uint8_t sym) {
                        return (static_cast<int64_t>(wc[i]) * A + sym) * Y + y[i];
                    },
                    [&](int i) {
                        return static_cast<uint8_t>(
                            cdfs[wc[i]].sample(simrng::draw(key, static_cast<uint64_t>(i))));
                    },
                    ac.data());
            }
        }
        if (message_hit) {
            if (hit >= 0) {
                m_hat = -1;
                return DecodeStatus::ambiguous;
            }
            hit = m;
        }
    }
    m_hat = hit;
    return hit < 0 ? DecodeStatus::none : DecodeStatus::ok;
}

TrialOutcome run_one_trial(const FastCtx& fc, int trial) {
    const SimConfig& cfg = fc.cfg;
    const int n = cfg.n;
    uint64_t tkey = simrng::trial_key(cfg.seed, trial);

    std::vector<uint8_t> s(n);
    fill_iid(fc.pm.cdf_s, simrng::combine(tkey, simrng::TagState), n, s.data());
    int64_t m = draw_message(tkey, fc.sz.M);

    // l0 search
    std::vector<uint8_t> w(n);
    std::vector<int64_t> cnt_ws(fc.pm.p_ws.size());
    int64_t l0 = -1;
    for (int64_t cand = 0; cand < fc.sz.L0 && l0 < 0; ++cand) {
        uint64_t key = simrng::w_key(tkey, m, cand);
        bool ok = derive_checked(
            n, fc.win_ws, cnt_ws,
            [&](int i, uint8_t sym) { return static_cast<int64_t>(sym) * fc.pm.S + s[i]; },
            [&](int i) {
                return static_cast<uint8_t>(
                    fc.pm.cdf_w.sample(simrng::draw(key, static_cast<uint64_t>(i))));
            },
            w.data());
        if (ok) l0 = cand;
    }
    bool found0 = l0 >= 0;
    if (!found0) {
        l0 = 0;
        fill_iid(fc.pm.cdf_w, simrng::w_key(tkey, m, 0), n, w.data());
    }

    // satellite filters and the pair search
    SatelliteScan su, sv;
    std::vector<int64_t> cnt_a(std::max(fc.pm.p_wsu.size(), fc.pm.p_wsv.size()));
    std::vector<uint8_t> buf_u(n), buf_v(n);
    scan_satellite(fc, tkey, m, l0, true, fc.sz.L1, w.data(), s.data(), su, cnt_a, buf_u);
    scan_satellite(fc, tkey, m, l0, false, fc.sz.L2, w.data(), s.data(), sv, cnt_a, buf_v);

    std::vector<int64_t> cnt_quad(fc.pm.p_wsuv.size());
    int64_t l1 = -1, l2 = -1;
    std::vector<uint8_t> ub(n), vb(n);
    for (size_t a = 0; a < su.idx.size() && l1 < 0; ++a) {
        const uint8_t* ua = survivor_bytes(fc, tkey, m, l0, true, su, a, w.data(), ub);
        for (size_t b = 0; b < sv.idx.size(); ++b) {
            const uint8_t* vb_p = survivor_bytes(fc, tkey, m, l0, false, sv, b, w.data(), vb);
            if (quad_pass(fc, w.data(), s.data(), ua, vb_p, cnt_quad)) {
                l1 = su.idx[a];
                l2 = sv.idx[b];
                break;
            }
        }
    }
    bool found12 = l1 >= 0;
    if (!found12) {
        l1 = 0;
        l2 = 0;
    }

    // emission and channel
    fill_cond(fc.pm.cdf_u_w, w.data(), simrng::u_key(tkey, m, l0, l1), n, buf_u.data());
    fill_cond(fc.pm.cdf_v_w, w.data(), simrng::v_key(tkey, m, l0, l2), n, buf_v.data());
    std::vector<uint8_t> x(n);
    for (int i = 0; i < n; ++i) x[i] = fc.pm.x_of(w[i], buf_u[i], buf_v[i], s[i]);
    std::vector<uint8_t> y1, y2;
    draw_outputs(fc.pm, tkey, x.data(), s.data(), n, y1, y2);

    TrialOutcome out;
    out.enc_failed = !found0 || !found12;
    int64_t m1 = -1, m2 = -1;
    DecodeStatus d1 = fast_decode(fc, tkey, 1, y1.data(), m1);
    DecodeStatus d2 = fast_decode(fc, tkey, 2, y2.data(), m2);
    out.err1 = !(d1 == DecodeStatus::ok && m1 == m);
    out.err2 = !(d2 == DecodeStatus::ok && m2 == m);
    return out;
}

}  // namespace

SimResult run_fast(const StateChannel& ch, const AuxScheme& aux, const SimConfig& cfg) {
    FastCtx fc(ch, aux, cfg);
    std::vector<uint8_t> enc(cfg.trials), e1(cfg.trials), e2(cfg.trials);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
#endif
    for (int t = 0; t < cfg.trials; ++t) {
        TrialOutcome o = run_one_trial(fc, t);
        enc[t] = o.enc_failed;
        e1[t] = o.err1;
        e2[t] = o.err2;
    }
    SimResult res;
    res.cfg = cfg;
    res.trials = cfg.trials;
    for (int t = 0; t < cfg.trials; ++t) {
        res.encoder_failures += enc[t];
        res.errors1 += e1[t];
        res.errors2 += e2[t];
        res.errors_overall += (e1[t] || e2[t]) ? 1 : 0;
    }
    res.encoder_failure_rate = static_cast<double>(res.encoder_failures) / cfg.trials;
    res.decoder1_error_rate = static_cast<double>(res.errors1) / cfg.trials;
    res.decoder2_error_rate = static_cast<double>(res.errors2) / cfg.trials;
    res.overall_error_rate = static_cast<double>(res.errors_overall) / cfg.trials;
    return res;
}

}  // namespace statecoder::detail

namespace statecoder {

std::vector<CoveringCell> covering_experiment(const StateChannel& ch, const AuxScheme& aux,
                                              std::span<const double> T1_list,
                                              std::span<const double> T2_list, int n, int trials,
                                              double epsilon, uint64_t seed, double epsilon_given) {
    if (n < 1 || trials < 1) throw std::invalid_argument("covering_experiment: n and trials >= 1");
    if (!(epsilon > 0.0)) throw std::invalid_argument("covering_experiment: epsilon must be > 0");
    if (T1_list.empty() || T2_list.empty())
        throw std::invalid_argument("covering_experiment: empty grid");
    if (epsilon_given <= 0.0) epsilon_given = 0.5 * epsilon;
    if (epsilon_given > epsilon)
        throw std::invalid_argument("covering_experiment: epsilon_given must not exceed epsilon");
    detail::SchemePmfs pm = detail::build_pmfs(ch, aux);
    CountWindows win_ws = CountWindows::from_pmf(pm.p_ws, n, epsilon_given);
    CountWindows win_wsu = detail::relax(CountWindows::from_pmf(pm.p_wsu, n, epsilon), pm.p_wsu, n);
    CountWindows win_wsv = detail::relax(CountWindows::from_pmf(pm.p_wsv, n, epsilon), pm.p_wsv, n);
    CountWindows win_quad = CountWindows::from_pmf(pm.p_wsuv, n, epsilon);

    struct Cell {
        double T1, T2;
        int64_t L1, L2;
    };
    std::vector<Cell> cells;
    for (double t1 : T1_list)
        for (double t2 : T2_list) {
            if (t1 < 0 || t2 < 0) throw std::invalid_argument("covering_experiment: negative rate");
            int64_t e1 = size_exponent(n, t1), e2 = size_exponent(n, t2);
            if (e1 > 13 || e2 > 13)
                throw std::invalid_argument(
                    "covering_experiment: more than 2^13 candidates on one side; reduce n or the grid");
            cells.push_back({t1, t2, int64_t{1} << e1, int64_t{1} << e2});
        }
    int64_t max_l1 = 0, max_l2 = 0;
    for (const Cell& c : cells) {
        max_l1 = std::max(max_l1, c.L1);
        max_l2 = std::max(max_l2, c.L2);
    }

    int ncells = static_cast<int>(cells.size());
    std::vector<uint8_t> success(static_cast<size_t>(trials) * ncells, 0);
    std::vector<uint8_t> skipped(trials, 0);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
#endif
    for (int t = 0; t < trials; ++t) {
        uint64_t tkey = simrng::trial_key(seed, t);
        std::vector<uint8_t> s(n), w(n), u(n), v(n);
        std::vector<int64_t> cnt_ws(pm.p_ws.size());
        // rejection-sample a typical (w,s) pair, shared by every cell
        bool accepted = false;
        for (int attempt = 0; attempt < 1000 && !accepted; ++attempt) {
            uint64_t skey = simrng::combine(simrng::combine(tkey, simrng::TagState),
                                            static_cast<uint64_t>(attempt));
            uint64_t wkey = simrng::combine(simrng::combine(tkey, simrng::TagCoverW),
                                            static_cast<uint64_t>(attempt));
            detail::fill_iid(pm.cdf_s, skey, n, s.data());
            accepted = detail::derive_checked(
                n, win_ws, cnt_ws,
                [&](int i, uint8_t sym) { return static_cast<int64_t>(sym) * pm.S + s[i]; },
                [&](int i) {
                    return static_cast<uint8_t>(
                        pm.cdf_w.sample(simrng::draw(wkey, static_cast<uint64_t>(i))));
                },
                w.data());
        }
        if (!accepted) {
            skipped[t] = 1;
            continue;
        }

        // survivors of the largest cell; smaller cells take prefixes
        std::vector<int64_t> su_all, sv_all;
        std::vector<uint8_t> su_bytes, sv_bytes;
        std::vector<int64_t> cnt(std::max(pm.p_wsu.size(), pm.p_wsv.size()));
        for (int64_t l = 0; l < max_l1; ++l) {
            uint64_t key = simrng::u_key(tkey, 0, 0, l);
            if (detail::derive_checked(
                    n, win_wsu, cnt,
                    [&](int i, uint8_t sym) {
                        return (static_cast<int64_t>(w[i]) * pm.S + s[i]) * pm.U + sym;
                    },
                    [&](int i) {
                        return static_cast<uint8_t>(
                            pm.cdf_u_w[w[i]].sample(simrng::draw(key, static_cast<uint64_t>(i))));
                    },
                    u.data())) {
                su_all.push_back(l);
                su_bytes.insert(su_bytes.end(), u.begin(), u.end());
            }
        }
        for (int64_t l = 0; l < max_l2; ++l) {
            uint64_t key = simrng::v_key(tkey, 0, 0, l);
            if (detail::derive_checked(
                    n, win_wsv, cnt,
                    [&](int i, uint8_t sym) {
                        return (static_cast<int64_t>(w[i]) * pm.S + s[i]) * pm.V + sym;
                    },
                    [&](int i) {
                        return static_cast<uint8_t>(
                            pm.cdf_v_w[w[i]].sample(simrng::draw(key, static_cast<uint64_t>(i))));
                    },
                    v.data())) {
                sv_all.push_back(l);
                sv_bytes.insert(sv_bytes.end(), v.begin(), v.end());
            }
        }

        std::vector<int64_t> cnt_quad(pm.p_wsuv.size());
        for (int c = 0; c < ncells; ++c) {
            bool found = false;
            for (size_t a = 0; a < su_all.size() && !found; ++a) {
                if (su_all[a] >= cells[c].L1) break;
                for (size_t b = 0; b < sv_all.size() && !found; ++b) {
                    if (sv_all[b] >= cells[c].L2) break;
                    std::fill(cnt_quad.begin(), cnt_quad.end(), 0);
                    const uint8_t* ua = su_bytes.data() + a * n;
                    const uint8_t* vb = sv_bytes.data() + b * n;
                    bool pass = true;
                    for (int i = 0; i < n && pass; ++i) {
                        int64_t cell = ((static_cast<int64_t>(w[i]) * pm.S + s[i]) * pm.U + ua[i]) *
                                           pm.V + vb[i];
                        if (++cnt_quad[cell] > win_quad.hi[cell]) pass = false;
                    }
                    if (pass)
                        for (size_t cc = 0; cc < cnt_quad.size(); ++cc)
                            if (cnt_quad[cc] < win_quad.lo[cc]) {
                                pass = false;
                                break;
                            }
                    found = pass;
                }
            }
            success[static_cast<size_t>(t) * ncells + c] = found ? 1 : 0;
        }
    }

    std::vector<CoveringCell> out;
    int c = 0;
    for (double t1 : T1_list)
        for (double t2 : T2_list) {
            CoveringCell cell;
            cell.T1 = t1;
            cell.T2 = t2;
            cell.L1 = cells[c].L1;
            cell.L2 = cells[c].L2;
            for (int t = 0; t < trials; ++t) {
                if (skipped[t]) {
                    ++cell.skipped;
                    continue;
                }
                ++cell.trials;
                cell.successes += success[static_cast<size_t>(t) * ncells + c];
            }
            cell.success_rate =
                cell.trials > 0 ? static_cast<double>(cell.successes) / cell.trials : 0.0;
            out.push_back(cell);
            ++c;
        }
    return out;
}

}  // namespace statecoder
