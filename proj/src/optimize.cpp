#include "statecoder/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "statecoder/runtime.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace statecoder {

using nlohmann::json;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double xlog2x(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

double table_entropy(const double* p, int n) {
    double h = 0.0;
    for (int i = 0; i < n; ++i) h -= xlog2x(p[i]);
    return h;
}

// splitmix64; the optimizer derives every random start from (seed, card, map,
// restart) with this, so results do not depend on scheduling.
uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct MiniRng {
    uint64_t s;
    uint64_t next() { return s = mix64(s); }
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    int below(int n) { return static_cast<int>(next() % static_cast<uint64_t>(n)); }
};

void random_simplex_row(MiniRng& rng, double* row, int n) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        row[i] = -std::log(rng.unit() + 1e-300);
        sum += row[i];
    }
    for (int i = 0; i < n; ++i) row[i] /= sum;
}

// ---------------------------------------------------------------------------
// objective evaluators on flat tables (no allocation in the inner loop)

constexpr int kMaxCells = 64;   // W*U*V cap for the fast path
constexpr int kMaxS = 6, kMaxY = 8;

struct GpObjective {
    const StateChannel* ch;
    int card;
    double h_s = 0.0;

    double terms(const double* pus, const uint8_t* xmap, double& t1, double& t2) const {
        const StateChannel& c = *ch;
        double psu[kMaxCells * kMaxS];
        for (int s = 0; s < c.S; ++s)
            for (int u = 0; u < card; ++u)
                psu[s * card + u] = c.p_s[s] * pus[s * card + u];
        double h_su = table_entropy(psu, c.S * card);
        double best = 0.0;
        for (int receiver = 1; receiver <= 2; ++receiver) {
            int Y = receiver == 1 ? c.Y1 : c.Y2;
            double puy[kMaxCells * kMaxY];
            double py[kMaxY];
            std::memset(puy, 0, sizeof(double) * card * Y);
            std::memset(py, 0, sizeof(double) * Y);
            for (int s = 0; s < c.S; ++s)
                for (int u = 0; u < card; ++u) {
                    double base = psu[s * card + u];
                    if (base == 0.0) continue;
                    int x = xmap[u * c.S + s];
                    for (int y = 0; y < Y; ++y) {
                        double add = base * c.yk(receiver, x, s, y);
                        puy[u * Y + y] += add;
                        py[y] += add;
                    }
                }
            double t = table_entropy(py, Y) - table_entropy(puy, card * Y) + h_su - h_s;
            (receiver == 1 ? t1 : t2) = t;
        }
        best = std::min(t1, t2);
        return best;
    }

    double value(const double* pus, const uint8_t* xmap) const {
        double t1, t2;
        return terms(pus, xmap, t1, t2);
    }
};

struct SupObjective {
    const StateChannel* ch;
    int W, U, V;
    double h_s = 0.0;

    int cells() const { return W * U * V; }

    double value(const double* pwuv, const uint8_t* xmap, double* terms3 = nullptr) const {
        const StateChannel& c = *ch;
        int n = cells();
        double base[kMaxCells * kMaxS];
        double m_ws[kMaxCells], m_wus[kMaxCells * kMaxS], m_wvs[kMaxCells * kMaxS];
        std::memset(m_ws, 0, sizeof(double) * W * c.S);
        std::memset(m_wus, 0, sizeof(double) * W * U * c.S);
        std::memset(m_wvs, 0, sizeof(double) * W * V * c.S);
        for (int s = 0; s < c.S; ++s)
            for (int w = 0; w < W; ++w)
                for (int u = 0; u < U; ++u)
                    for (int v = 0; v < V; ++v) {
                        double p = c.p_s[s] * pwuv[((s * W + w) * U + u) * V + v];
                        base[((s * W + w) * U + u) * V + v] = p;
                        m_ws[w * c.S + s] += p;
                        m_wus[(w * U + u) * c.S + s] += p;
                        m_wvs[(w * V + v) * c.S + s] += p;
                    }
        double h_swuv = table_entropy(base, c.S * n);
        double h_ws = table_entropy(m_ws, W * c.S);
        double h_wus = table_entropy(m_wus, W * U * c.S);
        double h_wvs = table_entropy(m_wvs, W * V * c.S);

        double ta = 0.0, tb = 0.0;
        for (int receiver = 1; receiver <= 2; ++receiver) {
            int Y = receiver == 1 ? c.Y1 : c.Y2;
            int A = receiver == 1 ? U : V;  // satellite layer seen by this receiver
            double pay[kMaxCells * kMaxY];
            double py[kMaxY];
            std::memset(pay, 0, sizeof(double) * W * A * Y);
            std::memset(py, 0, sizeof(double) * Y);
            for (int s = 0; s < c.S; ++s)
                for (int w = 0; w < W; ++w)
                    for (int u = 0; u < U; ++u)
                        for (int v = 0; v < V; ++v) {
                            double p = base[((s * W + w) * U + u) * V + v];
                            if (p == 0.0) continue;
                            int x = xmap[((w * U + u) * V + v) * c.S + s];
                            int a = receiver == 1 ? u : v;
                            for (int y = 0; y < Y; ++y) {
                                double add = p * c.yk(receiver, x, s, y);
                                pay[(w * A + a) * Y + y] += add;
                                py[y] += add;
                            }
                        }
            double h_way = table_entropy(pay, W * A * Y);
            double h_y = table_entropy(py, Y);
            double t = h_y - h_way - h_s + (receiver == 1 ? h_wus : h_wvs);
            (receiver == 1 ? ta : tb) = t;
        }
        double iuv = h_wus + h_wvs - h_swuv - h_ws;  // I(U;V|W,S)
        if (iuv < 0.0) iuv = 0.0;
        double tc = 0.5 * (ta + tb - iuv);
        if (terms3) {
            terms3[0] = ta;
            terms3[1] = tb;
            terms3[2] = tc;
        }
        return std::min({ta, tb, tc});
    }
};

// ---------------------------------------------------------------------------
// simplex ascent shared by both searches. The state is `rows` stacked
// simplices of width `width`; the move set is single transfers inside a row
// plus synchronized and opposed transfers across rows, which lets the search
// walk the ridge where the receiver terms tie.

template <typename Eval>
double coordinate_ascent(std::vector<double>& p, int rows, int width, const Eval& eval) {
    double best = eval(p.data());
    if (width < 2) return best;
    std::vector<double> snapshot(p.size());
    auto transfer = [&](int r, int from, int to, double amount) {
        double* row = p.data() + static_cast<int64_t>(r) * width;
        double m = std::min(amount, row[from]);
        if (m <= 0.0) return false;
        row[from] -= m;
        row[to] += m;
        return true;
    };
    auto try_moves = [&](double step) {
        bool any = false;
        for (int a = 0; a < width; ++a)
            for (int b = 0; b < width; ++b) {
                if (a == b) continue;
                // move patterns: all rows together, one row alone, and each
                // ordered row pair moving in opposite directions (ridge walk)
                for (int pattern = 0; pattern < 1 + rows + rows * rows; ++pattern) {
                    snapshot = p;
                    bool moved = false;
                    if (pattern == 0) {
                        for (int r = 0; r < rows; ++r) moved |= transfer(r, b, a, step);
                    } else if (pattern <= rows) {
                        moved = transfer(pattern - 1, b, a, step);
                    } else {
                        int q = pattern - 1 - rows;
                        int r1 = q / rows, r2 = q % rows;
                        if (r1 == r2) continue;
                        moved |= transfer(r1, b, a, step);
                        moved |= transfer(r2, a, b, step);
                    }
                    if (!moved) continue;
                    double v = eval(p.data());
                    if (v > best + 1e-15) {
                        best = v;
                        any = true;
                    } else {
                        p = snapshot;
                    }
                }
            }
        return any;
    };
    for (double step = 0.25; step > 1e-7; step *= 0.5) {
        int guard = 0;
        while (try_moves(step) && ++guard < 60) {}
    }
    return best;
}

// ---------------------------------------------------------------------------
// deterministic-map enumeration: a map is `count` rows, each row a value in
// [0, X^S); relabeling the auxiliary symbols permutes rows, so maps are
// enumerated as non-decreasing row sequences (multisets).

int64_t pow_i64(int64_t b, int e) {
    int64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

void decode_row(int64_t row, int S, int X, uint8_t* out) {
    for (int s = S - 1; s >= 0; --s) {
        out[s] = static_cast<uint8_t>(row % X);
        row /= X;
    }
    (void)X;
}

// Enumerates (or deterministically samples, above `cap`) non-decreasing row
// multisets of length `count` over [0, nrows).
std::vector<std::vector<int64_t>> enumerate_maps(int64_t nrows, int count, int64_t cap,
                                                 uint64_t seed) {
    std::vector<std::vector<int64_t>> out;
    // total = C(nrows + count - 1, count), computed with overflow care
    double total = 1.0;
    for (int i = 0; i < count; ++i)
        total *= static_cast<double>(nrows + count - 1 - i) / static_cast<double>(i + 1);
    if (total <= static_cast<double>(cap)) {
        std::vector<int64_t> cur(count, 0);
        while (true) {
            out.push_back(cur);
            int i = count - 1;
            while (i >= 0 && cur[i] == nrows - 1) --i;
            if (i < 0) break;
            int64_t v = cur[i] + 1;
            for (int j = i; j < count; ++j) cur[j] = v;
        }
        return out;
    }
    MiniRng rng{mix64(seed ^ 0x5eedbeefULL)};
    for (int64_t k = 0; k < cap; ++k) {
        std::vector<int64_t> cur(count);
        for (int i = 0; i < count; ++i)
            cur[i] = static_cast<int64_t>(rng.next() % static_cast<uint64_t>(nrows));
        std::sort(cur.begin(), cur.end());
        out.push_back(std::move(cur));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------

GpSearchResult maximize_gp(const StateChannel& ch, int max_card, int budget, uint64_t seed) {
    if (max_card < 1) throw std::invalid_argument("maximize_gp: max_card must be >= 1");
    if (budget < 1) throw std::invalid_argument("maximize_gp: budget must be >= 1");
    if (ch.S > kMaxS || ch.Y1 > kMaxY || ch.Y2 > kMaxY || max_card > kMaxCells)
        throw std::invalid_argument("maximize_gp: alphabet too large for the search");

    double best_score = kNegInf;
    GpAux best;

    for (int card = 1; card <= max_card; ++card) {
        int64_t nrows = pow_i64(ch.X, ch.S);
        auto maps = enumerate_maps(nrows, card, 20000, seed ^ static_cast<uint64_t>(card));
        GpObjective obj{&ch, card, table_entropy(ch.p_s.data(), ch.S)};

        int nmaps = static_cast<int>(maps.size());
        std::vector<double> map_score(nmaps, kNegInf);
        std::vector<std::vector<double>> map_best(nmaps);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
#endif
        for (int mi = 0; mi < nmaps; ++mi) {
            std::vector<uint8_t> xmap(static_cast<size_t>(card) * ch.S);
            for (int u = 0; u < card; ++u) decode_row(maps[mi][u], ch.S, ch.X, xmap.data() + u * ch.S);
            auto eval = [&](const double* p) { return obj.value(p, xmap.data()); };

            std::vector<double> p(static_cast<size_t>(ch.S) * card);
            double local_score = kNegInf;
            std::vector<double> local_best;
            auto run_start = [&](const std::vector<double>& start) {
                p = start;
                double v = coordinate_ascent(p, ch.S, card, eval);
                if (v > local_score) {
                    local_score = v;
                    local_best = p;
                }
            };

            // structured starts: uniform rows and spread point masses
            std::vector<double> start(static_cast<size_t>(ch.S) * card,
                                      1.0 / static_cast<double>(card));
            run_start(start);
            if (card > 1) {
                std::fill(start.begin(), start.end(), 0.0);
                for (int s = 0; s < ch.S; ++s) start[static_cast<size_t>(s) * card + s % card] = 1.0;
                run_start(start);
            }
            // random restarts
            for (int r = 0; r < budget; ++r) {
                MiniRng rng{mix64(mix64(mix64(seed ^ 0xabcdULL) ^ static_cast<uint64_t>(card)) ^
                                  (static_cast<uint64_t>(mi) << 20 | static_cast<uint64_t>(r)))};
                for (int s = 0; s < ch.S; ++s) random_simplex_row(rng, start.data() + s * card, card);
                run_start(start);
            }
            map_score[mi] = local_score;
            map_best[mi] = std::move(local_best);
        }

        for (int mi = 0; mi < nmaps; ++mi) {
            if (map_score[mi] > best_score) {
                best_score = map_score[mi];
                best.S = ch.S;
                best.U = card;
                best.p_u_s = map_best[mi];
                best.x_map.assign(static_cast<size_t>(card) * ch.S, 0);
                for (int u = 0; u < card; ++u)
                    decode_row(maps[mi][u], ch.S, ch.X, best.x_map.data() + u * ch.S);
            }
        }
    }

    GpSearchResult res;
    res.aux = best;
    res.report = gp_rate(ch, best);
    res.achievable_rate = std::max(0.0, res.report.overall);
    return res;
}

SuperpositionSearchResult maximize_superposition(const StateChannel& ch, Cards cards, int budget,
                                                 uint64_t seed) {
    if (cards.W < 1 || cards.U < 1 || cards.V < 1)
        throw std::invalid_argument("maximize_superposition: cardinalities must be >= 1");
    if (budget < 1) throw std::invalid_argument("maximize_superposition: budget must be >= 1");
    int cells = cards.W * cards.U * cards.V;
    if (ch.S > kMaxS || ch.Y1 > kMaxY || ch.Y2 > kMaxY || cells > kMaxCells)
        throw std::invalid_argument("maximize_superposition: alphabet too large for the search");

    SupObjective obj{&ch, cards.W, cards.U, cards.V, table_entropy(ch.p_s.data(), ch.S)};

    double best_score = kNegInf;
    AuxScheme best;
    best.S = ch.S;
    best.W = cards.W;
    best.U = cards.U;
    best.V = cards.V;

    // structured candidates first: output-tracking auxiliaries on
    // deterministic channels, plus the lifted single-auxiliary optimum
    std::vector<AuxScheme> seeds;
    if (auto maps = deterministic_maps(ch); maps && cards.W >= 1 && cards.U >= ch.Y1 &&
                                            cards.V >= ch.Y2) {
        std::vector<double> uniform(static_cast<size_t>(ch.S) * ch.X,
                                    1.0 / static_cast<double>(ch.X));
        seeds.push_back(outputs_as_aux(ch, uniform));
    }
    if (cards.W >= 2 && cells <= 16) {
        GpSearchResult gp = maximize_gp(ch, cards.W, std::min(budget, 16), seed ^ 0x9119ULL);
        seeds.push_back(lift_gp(gp.aux));
    }

    auto pad_and_eval_seed = [&](const AuxScheme& s) {
        if (s.W > cards.W || s.U > cards.U || s.V > cards.V) return;
        std::vector<double> p(static_cast<size_t>(ch.S) * cells, 0.0);
        std::vector<uint8_t> xmap(static_cast<size_t>(cells) * ch.S, 0);
        for (int st = 0; st < ch.S; ++st)
            for (int w = 0; w < s.W; ++w)
                for (int u = 0; u < s.U; ++u)
                    for (int v = 0; v < s.V; ++v)
                        p[((static_cast<size_t>(st) * cards.W + w) * cards.U + u) * cards.V + v] =
                            s.cond(st, w, u, v);
        for (int w = 0; w < cards.W; ++w)
            for (int u = 0; u < cards.U; ++u)
                for (int v = 0; v < cards.V; ++v)
                    for (int st = 0; st < ch.S; ++st)
                        xmap[((static_cast<size_t>(w) * cards.U + u) * cards.V + v) * ch.S + st] =
                            (w < s.W && u < s.U && v < s.V) ? s.x(w, u, v, st) : 0;
        auto eval = [&](const double* q) { return obj.value(q, xmap.data()); };
        double v = coordinate_ascent(p, ch.S, cells, eval);
        if (v > best_score) {
            best_score = v;
            best.p_wuv_s = p;
            best.x_map = xmap;
        }
    };
    for (const AuxScheme& s : seeds) pad_and_eval_seed(s);

    int64_t nrows = pow_i64(ch.X, ch.S);
    auto maps = enumerate_maps(nrows, cells, 4000, seed ^ 0x77ULL);
    int nmaps = static_cast<int>(maps.size());
    std::vector<double> map_score(nmaps, kNegInf);
    std::vector<std::vector<double>> map_best(nmaps);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
#endif
    for (int mi = 0; mi < nmaps; ++mi) {
        std::vector<uint8_t> xmap(static_cast<size_t>(cells) * ch.S);
        for (int r = 0; r < cells; ++r) decode_row(maps[mi][r], ch.S, ch.X, xmap.data() + r * ch.S);
        auto eval = [&](const double* p) { return obj.value(p, xmap.data()); };

        std::vector<double> p(static_cast<size_t>(ch.S) * cells);
        double local_score = kNegInf;
        std::vector<double> local_best;
        auto run_start = [&](std::vector<double>& start) {
            double v = coordinate_ascent(start, ch.S, cells, eval);
            if (v > local_score) {
                local_score = v;
                local_best = start;
            }
        };

        std::vector<double> start(static_cast<size_t>(ch.S) * cells,
                                  1.0 / static_cast<double>(cells));
        run_start(start);
        for (int r = 0; r < budget; ++r) {
            MiniRng rng{mix64(mix64(seed ^ 0xfeedULL) ^
                              (static_cast<uint64_t>(mi) << 20 | static_cast<uint64_t>(r)))};
            for (int s = 0; s < ch.S; ++s) random_simplex_row(rng, start.data() + s * cells, cells);
            run_start(start);
        }
        map_score[mi] = local_score;
        map_best[mi] = std::move(local_best);
    }

    for (int mi = 0; mi < nmaps; ++mi) {
        if (map_score[mi] > best_score) {
            best_score = map_score[mi];
            best.p_wuv_s = map_best[mi];
            best.x_map.assign(static_cast<size_t>(cells) * ch.S, 0);
            for (int r = 0; r < cells; ++r)
                decode_row(maps[mi][r], ch.S, ch.X, best.x_map.data() + r * ch.S);
        }
    }

    SuperpositionSearchResult res;
    res.aux = best;
    res.report = superposition_rate(ch, best);
    res.achievable_rate = std::max(0.0, res.report.overall);
    return res;
}

GpAux symmetrize(const StateChannel& ch, const GpAux& aux) {
    if (!is_example_channel(ch))
        throw std::invalid_argument("symmetrize: defined only for the built-in example channel");
    aux.validate(ch);
    GpAux out;
    out.S = 2;
    out.U = 2 * aux.U;
    out.p_u_s.assign(static_cast<size_t>(2) * out.U, 0.0);
    out.x_map.assign(static_cast<size_t>(out.U) * 2, 0);
    for (int i = 0; i < aux.U; ++i) {
        double p0 = aux.cond(0, i), p1 = aux.cond(1, i);
        out.p_u_s[0 * out.U + 2 * i] = 0.5 * p0;
        out.p_u_s[0 * out.U + 2 * i + 1] = 0.5 * p1;
        out.p_u_s[1 * out.U + 2 * i] = 0.5 * p1;
        out.p_u_s[1 * out.U + 2 * i + 1] = 0.5 * p0;
        uint8_t x0 = aux.x(i, 0), x1 = aux.x(i, 1);
        out.x_map[(2 * i) * 2 + 0] = x0;
        out.x_map[(2 * i) * 2 + 1] = x1;
        out.x_map[(2 * i + 1) * 2 + 0] = static_cast<uint8_t>(1 - x1);
        out.x_map[(2 * i + 1) * 2 + 1] = static_cast<uint8_t>(1 - x0);
    }
    return out;
}

namespace exact_example {

double objective(double t, double s4) {
    constexpr double tol = 1e-12;
    if (t < -tol || s4 < -tol || t + s4 > 2.0 + tol)
        throw std::invalid_argument("exact_example::objective: (t,s4) outside the triangle");
    t = std::max(t, 0.0);
    s4 = std::max(s4, 0.0);
    return (1.0 + t / 4.0) * binary_entropy((4.0 - s4) / (4.0 + t)) - t / 2.0 - s4 / 2.0;
}

namespace {

// golden-section max of f on [lo, hi]
template <typename F>
std::pair<double, double> golden_max(F f, double lo, double hi) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        }
    }
    double xm = 0.5 * (a + b);
    return {xm, f(xm)};
}

}  // namespace

Optimum maximize() {
    Optimum out;
    // the four cases: interior (no stationary point; covered by the grid
    // check), t = 0 edge, s4 = 0 edge, and the t + s4 = 2 edge
    auto [s4_2, v2] = golden_max([](double s4) { return objective(0.0, s4); }, 0.0, 2.0);
    auto [t_3, v3] = golden_max([](double t) { return objective(t, 0.0); }, 0.0, 2.0);
    auto [t_4, v4] = golden_max([](double t) { return objective(t, 2.0 - t); }, 0.0, 2.0);

    out.t = 0.0;
    out.s4 = s4_2;
    out.value = v2;
    if (v3 > out.value) {
        out.t = t_3;
        out.s4 = 0.0;
        out.value = v3;
    }
    if (v4 > out.value) {
        out.t = t_4;
        out.s4 = 2.0 - t_4;
        out.value = v4;
    }

    // dense-grid cross-check, step 1e-3 over the triangle
    const double step = 1e-3;
    out.grid_value = kNegInf;
    for (int i = 0; i <= 2000; ++i) {
        double t = i * step;
        int jmax = 2000 - i;
        for (int j = 0; j <= jmax; ++j) {
            double s4 = j * step;
            double v = objective(t, s4);
            if (v > out.grid_value) {
                out.grid_value = v;
                out.grid_t = t;
                out.grid_s4 = s4;
            }
        }
    }
    if (std::fabs(out.grid_value - out.value) > 1e-5)
        throw std::logic_error("exact_example::maximize: case analysis and grid disagree");
    return out;
}

GpAux witness() {
    GpAux aux;
    aux.S = 2;
    aux.U = 3;
    // joint masses: (u,s=0) = 1/6, 1/12, 1/4 and (u,s=1) = 1/6, 1/4, 1/12;
    // conditionals double them since P{S=0} = 1/2
    aux.p_u_s = {1.0 / 3.0, 1.0 / 6.0, 1.0 / 2.0,
                 1.0 / 3.0, 1.0 / 2.0, 1.0 / 6.0};
    // x(u,s): P{X=0|U=1,S=0} = 0 etc., written 0-indexed
    aux.x_map = {1, 0,
                 1, 1,
                 0, 0};
    return aux;
}

}  // namespace exact_example

std::string GpSearchResult::to_json_text() const {
    json j = {{"U", aux.U},
              {"aux", json::parse(gp_aux_to_json_text(aux))},
              {"report", json::parse(report.to_json_text())},
              {"achievable_rate", achievable_rate}};
    return j.dump(2);
}

std::string SuperpositionSearchResult::to_json_text() const {
    json j = {{"W", aux.W},
              {"U", aux.U},
              {"V", aux.V},
              {"aux", json::parse(aux_to_json_text(aux))},
              {"report", json::parse(report.to_json_text())},
              {"achievable_rate", achievable_rate}};
    return j.dump(2);
}

}  // namespace statecoder
