#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "sim_internal.hpp"
#include "statecoder/pmf.hpp"

namespace statecoder {

using nlohmann::json;

namespace simrng {

CdfU64 CdfU64::from_probs(std::span<const double> p) {
    if (p.empty()) throw std::invalid_argument("CdfU64: empty pmf");
    CdfU64 c;
    double cum = 0.0;
    const double two64 = 18446744073709551616.0;
    for (size_t j = 0; j + 1 < p.size(); ++j) {
        cum += p[j];
        double v = cum * two64;
        c.thr.push_back(v >= two64 ? UINT64_MAX : static_cast<uint64_t>(v));
    }
    return c;
}

}  // namespace simrng

void SimConfig::validate() const {
    if (n < 1) throw std::invalid_argument("SimConfig: n must be >= 1");
    if (R < 0 || T0 < 0 || T1 < 0 || T2 < 0)
        throw std::invalid_argument("SimConfig: rates must be nonnegative");
    if (!(epsilon > 0.0) || !(epsilon < epsilon_prime))
        throw std::invalid_argument("SimConfig: need 0 < epsilon < epsilon_prime");
    if (trials < 1) throw std::invalid_argument("SimConfig: trials must be >= 1");
}

double default_epsilon(int n) { return n <= 16 ? 0.1 : 0.05; }

int64_t size_exponent(int n, double rate) {
    double v = static_cast<double>(n) * rate;
    int64_t e = static_cast<int64_t>(std::ceil(v - 1e-9));
    return e < 0 ? 0 : e;
}

CodebookSizes codebook_sizes(const AuxScheme& aux, const SimConfig& cfg) {
    CodebookSizes s;
    s.eM = static_cast<int>(size_exponent(cfg.n, cfg.R));
    s.e0 = aux.W == 1 ? 0 : static_cast<int>(size_exponent(cfg.n, cfg.T0));
    s.e1 = static_cast<int>(size_exponent(cfg.n, cfg.T1));
    s.e2 = static_cast<int>(size_exponent(cfg.n, cfg.T2));
    if (s.eM + s.e0 + std::max(s.e1, s.e2) > 62)
        throw std::invalid_argument("codebook_sizes: rates overflow 64-bit index space");
    s.M = int64_t{1} << s.eM;
    s.L0 = int64_t{1} << s.e0;
    s.L1 = int64_t{1} << s.e1;
    s.L2 = int64_t{1} << s.e2;
    return s;
}

void check_scan_guard(const AuxScheme& aux, const SimConfig& cfg) {
    int64_t eM = size_exponent(cfg.n, cfg.R);
    int64_t e0 = aux.W == 1 ? 0 : size_exponent(cfg.n, cfg.T0);
    int64_t e1 = size_exponent(cfg.n, cfg.T1);
    int64_t e2 = size_exponent(cfg.n, cfg.T2);
    int64_t total = eM + e0 + std::max(e1, e2);
    if (total > 26) {
        std::ostringstream os;
        os << "simulation size guard: 2^(n(R+T0+max(T1,T2))) = 2^" << total
           << " exceeds 2^26 candidate sequences; reduce n or the rates";
        throw std::invalid_argument(os.str());
    }
}

void check_materialize_guard(const AuxScheme& aux, const SimConfig& cfg) {
    check_scan_guard(aux, cfg);
    CodebookSizes s = codebook_sizes(aux, cfg);
    double symbols = static_cast<double>(s.M) * s.L0 * (1.0 + s.L1 + s.L2) * cfg.n;
    if (symbols > static_cast<double>(int64_t{1} << 26)) {
        std::ostringstream os;
        os << "codebook guard: " << symbols << " stored symbols exceed 2^26;"
           << " reduce n or the rates, or use the streaming engine";
        throw std::invalid_argument(os.str());
    }
}

namespace detail {

SchemePmfs build_pmfs(const StateChannel& ch, const AuxScheme& aux) {
    aux.validate(ch);
    SchemePmfs pm;
    pm.S = ch.S;
    pm.W = aux.W;
    pm.U = aux.U;
    pm.V = aux.V;
    pm.X = ch.X;
    pm.Y1 = ch.Y1;
    pm.Y2 = ch.Y2;
    pm.x_map = aux.x_map;

    int64_t WS = static_cast<int64_t>(pm.W) * pm.S;
    pm.p_ws.assign(WS, 0.0);
    pm.p_wsu.assign(WS * pm.U, 0.0);
    pm.p_wsv.assign(WS * pm.V, 0.0);
    pm.p_wsuv.assign(WS * pm.U * pm.V, 0.0);
    pm.p_wuy1.assign(static_cast<int64_t>(pm.W) * pm.U * pm.Y1, 0.0);
    pm.p_wvy2.assign(static_cast<int64_t>(pm.W) * pm.V * pm.Y2, 0.0);
    pm.p_wy1.assign(static_cast<int64_t>(pm.W) * pm.Y1, 0.0);
    pm.p_wy2.assign(static_cast<int64_t>(pm.W) * pm.Y2, 0.0);

    std::vector<double> p_w(pm.W, 0.0);
    std::vector<double> p_wu(static_cast<int64_t>(pm.W) * pm.U, 0.0);
    std::vector<double> p_wv(static_cast<int64_t>(pm.W) * pm.V, 0.0);

    for (int s = 0; s < pm.S; ++s)
        for (int w = 0; w < pm.W; ++w)
            for (int u = 0; u < pm.U; ++u)
                for (int v = 0; v < pm.V; ++v) {
                    double p = ch.state(s) * aux.cond(s, w, u, v);
                    int64_t ws = static_cast<int64_t>(w) * pm.S + s;
                    pm.p_ws[ws] += p;
                    pm.p_wsu[ws * pm.U + u] += p;
                    pm.p_wsv[ws * pm.V + v] += p;
                    pm.p_wsuv[(ws * pm.U + u) * pm.V + v] += p;
                    p_w[w] += p;
                    p_wu[static_cast<int64_t>(w) * pm.U + u] += p;
                    p_wv[static_cast<int64_t>(w) * pm.V + v] += p;
                    int x = aux.x(w, u, v, s);
                    for (int y = 0; y < pm.Y1; ++y) {
                        double add = p * ch.y1(x, s, y);
                        pm.p_wuy1[(static_cast<int64_t>(w) * pm.U + u) * pm.Y1 + y] += add;
                        pm.p_wy1[static_cast<int64_t>(w) * pm.Y1 + y] += add;
                    }
                    for (int y = 0; y < pm.Y2; ++y) {
                        double add = p * ch.y2(x, s, y);
                        pm.p_wvy2[(static_cast<int64_t>(w) * pm.V + v) * pm.Y2 + y] += add;
                        pm.p_wy2[static_cast<int64_t>(w) * pm.Y2 + y] += add;
                    }
                }

    pm.cdf_s = simrng::CdfU64::from_probs(ch.p_s);
    pm.cdf_w = simrng::CdfU64::from_probs(p_w);
    pm.cdf_u_w.resize(pm.W);
    pm.cdf_v_w.resize(pm.W);
    std::vector<double> row;
    for (int w = 0; w < pm.W; ++w) {
        row.assign(pm.U, 1.0 / pm.U);
        if (p_w[w] > 0.0)
            for (int u = 0; u < pm.U; ++u) row[u] = p_wu[static_cast<int64_t>(w) * pm.U + u] / p_w[w];
        pm.cdf_u_w[w] = simrng::CdfU64::from_probs(row);
        row.assign(pm.V, 1.0 / pm.V);
        if (p_w[w] > 0.0)
            for (int v = 0; v < pm.V; ++v) row[v] = p_wv[static_cast<int64_t>(w) * pm.V + v] / p_w[w];
        pm.cdf_v_w[w] = simrng::CdfU64::from_probs(row);
    }
    pm.cdf_y1_xs.resize(static_cast<int64_t>(pm.X) * pm.S);
    pm.cdf_y2_xs.resize(static_cast<int64_t>(pm.X) * pm.S);
    for (int x = 0; x < pm.X; ++x)
        for (int s = 0; s < pm.S; ++s) {
            row.assign(pm.Y1, 0.0);
            for (int y = 0; y < pm.Y1; ++y) row[y] = ch.y1(x, s, y);
            pm.cdf_y1_xs[static_cast<int64_t>(x) * pm.S + s] = simrng::CdfU64::from_probs(row);
            row.assign(pm.Y2, 0.0);
            for (int y = 0; y < pm.Y2; ++y) row[y] = ch.y2(x, s, y);
            pm.cdf_y2_xs[static_cast<int64_t>(x) * pm.S + s] = simrng::CdfU64::from_probs(row);
        }
    return pm;
}

void fill_iid(const simrng::CdfU64& cdf, uint64_t key, int n, uint8_t* out) {
    for (int i = 0; i < n; ++i)
        out[i] = static_cast<uint8_t>(cdf.sample(simrng::draw(key, static_cast<uint64_t>(i))));
}

void fill_cond(const std::vector<simrng::CdfU64>& cdf_by_parent, const uint8_t* parent,
               uint64_t key, int n, uint8_t* out) {
    for (int i = 0; i < n; ++i)
        out[i] = static_cast<uint8_t>(
            cdf_by_parent[parent[i]].sample(simrng::draw(key, static_cast<uint64_t>(i))));
}

int64_t draw_message(uint64_t tkey, int64_t M) {
    uint64_t r = simrng::draw(simrng::combine(tkey, simrng::TagMsg), 0);
    return static_cast<int64_t>(simrng::bounded(r, static_cast<uint64_t>(M)));
}

void draw_outputs(const SchemePmfs& pm, uint64_t tkey, const uint8_t* x, const uint8_t* s, int n,
                  std::vector<uint8_t>& y1, std::vector<uint8_t>& y2) {
    y1.resize(n);
    y2.resize(n);
    uint64_t k1 = simrng::combine(tkey, simrng::TagCh1);
    uint64_t k2 = simrng::combine(tkey, simrng::TagCh2);
    for (int i = 0; i < n; ++i) {
        int64_t xs = static_cast<int64_t>(x[i]) * pm.S + s[i];
        y1[i] = static_cast<uint8_t>(
            pm.cdf_y1_xs[xs].sample(simrng::draw(k1, static_cast<uint64_t>(i))));
        y2[i] = static_cast<uint8_t>(
            pm.cdf_y2_xs[xs].sample(simrng::draw(k2, static_cast<uint64_t>(i))));
    }
}

CountWindows relax(const CountWindows& w, std::span<const double> probs, int64_t n) {
    CountWindows out = w;
    for (size_t i = 0; i < out.lo.size(); ++i) {
        if (out.hi[i] < out.lo[i]) {
            // empty window: pruning must still not outrun the exact check at
            // a float boundary, so admit the counts nearest the target mass
            int64_t mid = std::llround(probs[i] * static_cast<double>(n));
            out.lo[i] = std::max<int64_t>(0, mid - 1);
            out.hi[i] = std::min<int64_t>(n, mid + 1);
            continue;
        }
        out.lo[i] = std::max<int64_t>(0, out.lo[i] - 1);
        out.hi[i] = std::min<int64_t>(n, out.hi[i] + 1);
    }
    return out;
}

}  // namespace detail

std::vector<uint8_t> draw_state_sequence(const StateChannel& ch, const SimConfig& cfg,
                                         uint64_t trial_key) {
    std::vector<uint8_t> s(cfg.n);
    simrng::CdfU64 cdf = simrng::CdfU64::from_probs(ch.p_s);
    detail::fill_iid(cdf, simrng::combine(trial_key, simrng::TagState), cfg.n, s.data());
    return s;
}

Codebook generate_codebook(const StateChannel& ch, const AuxScheme& aux, const SimConfig& cfg,
                           uint64_t trial_key) {
    cfg.validate();
    check_materialize_guard(aux, cfg);
    detail::SchemePmfs pm = detail::build_pmfs(ch, aux);
    Codebook cb;
    cb.sizes = codebook_sizes(aux, cfg);
    cb.n = cfg.n;
    cb.aux = aux;
    cb.w.resize(cb.sizes.M * cb.sizes.L0 * cfg.n);
    cb.u.resize(cb.sizes.M * cb.sizes.L0 * cb.sizes.L1 * cfg.n);
    cb.v.resize(cb.sizes.M * cb.sizes.L0 * cb.sizes.L2 * cfg.n);
    for (int64_t m = 0; m < cb.sizes.M; ++m)
        for (int64_t l0 = 0; l0 < cb.sizes.L0; ++l0) {
            uint8_t* wp = cb.w.data() + (m * cb.sizes.L0 + l0) * cfg.n;
            detail::fill_iid(pm.cdf_w, simrng::w_key(trial_key, m, l0), cfg.n, wp);
            for (int64_t l1 = 0; l1 < cb.sizes.L1; ++l1)
                detail::fill_cond(pm.cdf_u_w, wp, simrng::u_key(trial_key, m, l0, l1), cfg.n,
                                  cb.u.data() + ((m * cb.sizes.L0 + l0) * cb.sizes.L1 + l1) * cfg.n);
            for (int64_t l2 = 0; l2 < cb.sizes.L2; ++l2)
                detail::fill_cond(pm.cdf_v_w, wp, simrng::v_key(trial_key, m, l0, l2), cfg.n,
                                  cb.v.data() + ((m * cb.sizes.L0 + l0) * cb.sizes.L2 + l2) * cfg.n);
        }
    return cb;
}

std::string SimResult::csv_header() {
    return "n,R,T0,T1,T2,epsilon,trials,enc_fail,err1,err2,err_overall";
}

std::string SimResult::csv_row() const {
    std::ostringstream os;
    os << cfg.n << ',' << cfg.R << ',' << cfg.T0 << ',' << cfg.T1 << ',' << cfg.T2 << ','
       << cfg.epsilon << ',' << trials << ',' << encoder_failure_rate << ',' << decoder1_error_rate
       << ',' << decoder2_error_rate << ',' << overall_error_rate;
    return os.str();
}

std::string SimResult::to_json_text() const {
    json j = {{"config",
               {{"n", cfg.n},
                {"R", cfg.R},
                {"T0", cfg.T0},
                {"T1", cfg.T1},
                {"T2", cfg.T2},
                {"epsilon", cfg.epsilon},
                {"epsilon_prime", cfg.epsilon_prime},
                {"trials", cfg.trials},
                {"seed", cfg.seed}}},
              {"encoder_failure_rate", encoder_failure_rate},
              {"decoder1_error_rate", decoder1_error_rate},
              {"decoder2_error_rate", decoder2_error_rate},
              {"overall_error_rate", overall_error_rate}};
    return j.dump(2);
}

SimResult run_trials(const StateChannel& ch, const AuxScheme& aux, const SimConfig& cfg,
                     Engine engine) {
    cfg.validate();
    check_scan_guard(aux, cfg);
    return engine == Engine::reference ? detail::run_reference(ch, aux, cfg)
                                       : detail::run_fast(ch, aux, cfg);
}

CoveringConditions covering_conditions(const StateChannel& ch, const AuxScheme& aux) {
    JointPmf j1 = induced_joint(ch, aux, 1);
    JointPmf j2 = induced_joint(ch, aux, 2);
    std::vector<std::string> U = {"U"}, V = {"V"}, S = {"S"}, W = {"W"}, WS = {"W", "S"};
    CoveringConditions c;
    c.t1 = mutual_information(j1, std::span(U), std::span(S), std::span(W));
    c.t2 = mutual_information(j2, std::span(V), std::span(S), std::span(W));
    c.sum = c.t1 + c.t2 + mutual_information(j1, std::span(U), std::span(V), std::span(WS));
    return c;
}

}  // namespace statecoder
