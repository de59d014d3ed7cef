#include "statecoder/channel.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace statecoder {

using nlohmann::json;

namespace {

void normalize_rows(std::vector<double>& table, int rows, int cols, double tol,
                    const std::string& what) {
    for (int r = 0; r < rows; ++r) {
        double sum = 0.0;
        for (int c = 0; c < cols; ++c) {
            double v = table[static_cast<int64_t>(r) * cols + c];
            if (!(v >= 0.0))
                throw std::invalid_argument(what + ": negative or NaN entry in row " +
                                            std::to_string(r));
            sum += v;
        }
        if (std::fabs(sum - 1.0) > tol) {
            std::ostringstream os;
            os << what << ": row " << r << " sums to " << sum << " (off by more than " << tol << ")";
            throw std::invalid_argument(os.str());
        }
        for (int c = 0; c < cols; ++c) table[static_cast<int64_t>(r) * cols + c] /= sum;
    }
}

}  // namespace

void StateChannel::validate_and_normalize(double tol) {
    if (S < 1 || X < 1 || Y1 < 1 || Y2 < 1)
        throw std::invalid_argument("StateChannel: alphabet sizes must be >= 1");
    if (static_cast<int64_t>(p_s.size()) != S)
        throw std::invalid_argument("StateChannel: p_s size mismatch");
    if (static_cast<int64_t>(p_y1.size()) != static_cast<int64_t>(X) * S * Y1)
        throw std::invalid_argument("StateChannel: p_y1 size mismatch");
    if (static_cast<int64_t>(p_y2.size()) != static_cast<int64_t>(X) * S * Y2)
        throw std::invalid_argument("StateChannel: p_y2 size mismatch");
    normalize_rows(p_s, 1, S, tol, "p_s");
    normalize_rows(p_y1, X * S, Y1, tol, "p_y1");
    normalize_rows(p_y2, X * S, Y2, tol, "p_y2");
}

void AuxScheme::validate(const StateChannel& ch, double tol) const {
    if (S != ch.S) throw std::invalid_argument("AuxScheme: state alphabet mismatch");
    if (W < 1 || U < 1 || V < 1) throw std::invalid_argument("AuxScheme: cardinalities must be >= 1");
    int64_t cells = static_cast<int64_t>(W) * U * V;
    if (static_cast<int64_t>(p_wuv_s.size()) != cells * S)
        throw std::invalid_argument("AuxScheme: p_wuv_s size mismatch");
    if (static_cast<int64_t>(x_map.size()) != cells * S)
        throw std::invalid_argument("AuxScheme: x_map size mismatch");
    for (uint8_t x : x_map)
        if (x >= ch.X) throw std::invalid_argument("AuxScheme: x_map value outside input alphabet");
    for (int s = 0; s < S; ++s) {
        double sum = 0.0;
        for (int64_t i = 0; i < cells; ++i) {
            double v = p_wuv_s[s * cells + i];
            if (!(v >= 0.0)) throw std::invalid_argument("AuxScheme: negative entry in p_wuv_s");
            sum += v;
        }
        if (std::fabs(sum - 1.0) > tol)
            throw std::invalid_argument("AuxScheme: slice s=" + std::to_string(s) +
                                        " not normalized");
    }
}

void GpAux::validate(const StateChannel& ch, double tol) const {
    if (S != ch.S) throw std::invalid_argument("GpAux: state alphabet mismatch");
    if (U < 1) throw std::invalid_argument("GpAux: |U| must be >= 1");
    if (static_cast<int64_t>(p_u_s.size()) != static_cast<int64_t>(S) * U)
        throw std::invalid_argument("GpAux: p_u_s size mismatch");
    if (static_cast<int64_t>(x_map.size()) != static_cast<int64_t>(U) * S)
        throw std::invalid_argument("GpAux: x_map size mismatch");
    for (uint8_t x : x_map)
        if (x >= ch.X) throw std::invalid_argument("GpAux: x_map value outside input alphabet");
    for (int s = 0; s < S; ++s) {
        double sum = 0.0;
        for (int u = 0; u < U; ++u) {
            double v = cond(s, u);
            if (!(v >= 0.0)) throw std::invalid_argument("GpAux: negative entry in p_u_s");
            sum += v;
        }
        if (std::fabs(sum - 1.0) > tol)
            throw std::invalid_argument("GpAux: slice s=" + std::to_string(s) + " not normalized");
    }
}

AuxScheme lift_gp(const GpAux& gp) {
    AuxScheme aux;
    aux.S = gp.S;
    aux.W = gp.U;
    aux.U = 1;
    aux.V = 1;
    aux.p_wuv_s = gp.p_u_s;  // [s][w] with u=v trivial
    aux.x_map.assign(static_cast<int64_t>(gp.U) * gp.S, 0);
    for (int w = 0; w < gp.U; ++w)
        for (int s = 0; s < gp.S; ++s)
            aux.x_map[static_cast<int64_t>(w) * gp.S + s] = gp.x(w, s);
    return aux;
}

std::vector<double> induced_input(const StateChannel& ch, const AuxScheme& aux) {
    aux.validate(ch);
    std::vector<double> pxs(static_cast<int64_t>(ch.S) * ch.X, 0.0);
    for (int s = 0; s < ch.S; ++s)
        for (int w = 0; w < aux.W; ++w)
            for (int u = 0; u < aux.U; ++u)
                for (int v = 0; v < aux.V; ++v)
                    pxs[static_cast<int64_t>(s) * ch.X + aux.x(w, u, v, s)] += aux.cond(s, w, u, v);
    return pxs;
}

JointPmf induced_joint(const StateChannel& ch, const AuxScheme& aux, int receiver) {
    if (receiver != 1 && receiver != 2) throw std::invalid_argument("induced_joint: receiver must be 1 or 2");
    aux.validate(ch);
    int Y = receiver == 1 ? ch.Y1 : ch.Y2;
    std::vector<Axis> axes = {{"S", ch.S}, {"W", aux.W}, {"U", aux.U},
                              {"V", aux.V}, {"X", ch.X}, {receiver == 1 ? "Y1" : "Y2", Y}};
    std::vector<double> p(static_cast<int64_t>(ch.S) * aux.W * aux.U * aux.V * ch.X * Y, 0.0);
    for (int s = 0; s < ch.S; ++s)
        for (int w = 0; w < aux.W; ++w)
            for (int u = 0; u < aux.U; ++u)
                for (int v = 0; v < aux.V; ++v) {
                    double base = ch.state(s) * aux.cond(s, w, u, v);
                    if (base == 0.0) continue;
                    int x = aux.x(w, u, v, s);
                    int64_t cell = ((((static_cast<int64_t>(s) * aux.W + w) * aux.U + u) * aux.V + v) *
                                    ch.X + x) * Y;
                    for (int y = 0; y < Y; ++y) p[cell + y] += base * ch.yk(receiver, x, s, y);
                }
    return JointPmf(std::move(axes), std::move(p));
}

JointPmf induced_joint_gp(const StateChannel& ch, const GpAux& aux, int receiver) {
    if (receiver != 1 && receiver != 2) throw std::invalid_argument("induced_joint_gp: receiver must be 1 or 2");
    aux.validate(ch);
    int Y = receiver == 1 ? ch.Y1 : ch.Y2;
    std::vector<Axis> axes = {{"S", ch.S}, {"U", aux.U}, {"X", ch.X},
                              {receiver == 1 ? "Y1" : "Y2", Y}};
    std::vector<double> p(static_cast<int64_t>(ch.S) * aux.U * ch.X * Y, 0.0);
    for (int s = 0; s < ch.S; ++s)
        for (int u = 0; u < aux.U; ++u) {
            double base = ch.state(s) * aux.cond(s, u);
            if (base == 0.0) continue;
            int x = aux.x(u, s);
            int64_t cell = ((static_cast<int64_t>(s) * aux.U + u) * ch.X + x) * Y;
            for (int y = 0; y < Y; ++y) p[cell + y] += base * ch.yk(receiver, x, s, y);
        }
    return JointPmf(std::move(axes), std::move(p));
}

StateChannel example_channel() {
    StateChannel ch;
    ch.S = ch.X = ch.Y1 = ch.Y2 = 2;
    ch.p_s = {0.5, 0.5};
    auto set = [](std::vector<double>& t, int x, int s, int y) {
        t[(static_cast<int64_t>(x) * 2 + s) * 2 + y] = 1.0;
    };
    ch.p_y1.assign(8, 0.0);
    ch.p_y2.assign(8, 0.0);
    for (int x = 0; x < 2; ++x) {
        set(ch.p_y1, x, 0, x);  // s=0: y1 = x
        set(ch.p_y1, x, 1, 1);  // s=1: y1 = 1
        set(ch.p_y2, x, 0, 0);  // s=0: y2 = 0
        set(ch.p_y2, x, 1, x);  // s=1: y2 = x
    }
    return ch;
}

bool is_example_channel(const StateChannel& ch, double tol) {
    StateChannel ex = example_channel();
    if (ch.S != ex.S || ch.X != ex.X || ch.Y1 != ex.Y1 || ch.Y2 != ex.Y2) return false;
    auto close = [tol](const std::vector<double>& a, const std::vector<double>& b) {
        for (size_t i = 0; i < a.size(); ++i)
            if (std::fabs(a[i] - b[i]) > tol) return false;
        return true;
    };
    return close(ch.p_s, ex.p_s) && close(ch.p_y1, ex.p_y1) && close(ch.p_y2, ex.p_y2);
}

std::optional<DeterministicMaps> deterministic_maps(const StateChannel& ch, double tol) {
    DeterministicMaps m;
    m.f1.assign(static_cast<int64_t>(ch.X) * ch.S, 0);
    m.f2.assign(static_cast<int64_t>(ch.X) * ch.S, 0);
    for (int x = 0; x < ch.X; ++x)
        for (int s = 0; s < ch.S; ++s) {
            int hit1 = -1, hit2 = -1;
            for (int y = 0; y < ch.Y1; ++y)
                if (ch.y1(x, s, y) > 1.0 - tol) hit1 = y;
            for (int y = 0; y < ch.Y2; ++y)
                if (ch.y2(x, s, y) > 1.0 - tol) hit2 = y;
            if (hit1 < 0 || hit2 < 0) return std::nullopt;
            m.f1[static_cast<int64_t>(x) * ch.S + s] = static_cast<uint8_t>(hit1);
            m.f2[static_cast<int64_t>(x) * ch.S + s] = static_cast<uint8_t>(hit2);
        }
    return m;
}

AuxScheme outputs_as_aux(const StateChannel& ch, std::span<const double> pxs) {
    auto maps = deterministic_maps(ch);
    if (!maps) throw std::invalid_argument("outputs_as_aux: channel is not deterministic");
    if (static_cast<int64_t>(pxs.size()) != static_cast<int64_t>(ch.S) * ch.X)
        throw std::invalid_argument("outputs_as_aux: p(x|s) size mismatch");
    AuxScheme aux;
    aux.S = ch.S;
    aux.W = 1;
    aux.U = ch.Y1;
    aux.V = ch.Y2;
    int64_t cells = static_cast<int64_t>(aux.U) * aux.V;
    aux.p_wuv_s.assign(cells * ch.S, 0.0);
    aux.x_map.assign(cells * ch.S, 0);
    std::vector<char> chosen(cells * ch.S, 0);
    for (int s = 0; s < ch.S; ++s)
        for (int x = 0; x < ch.X; ++x) {
            double p = pxs[static_cast<int64_t>(s) * ch.X + x];
            int u = maps->y1(x, s, ch.S);
            int v = maps->y2(x, s, ch.S);
            int64_t cell = static_cast<int64_t>(u) * aux.V + v;
            aux.p_wuv_s[static_cast<int64_t>(s) * cells + cell] += p;
            // smallest consistent x becomes the representative for (u,v,s)
            int64_t mi = cell * ch.S + s;
            if (!chosen[mi]) {
                aux.x_map[mi] = static_cast<uint8_t>(x);
                chosen[mi] = 1;
            }
        }
    return aux;
}

CommonPart gacs_korner_common(const JointPmf& p) {
    if (p.rank() != 2) throw std::invalid_argument("gacs_korner_common: pmf must have two axes");
    int n1 = p.axes()[0].size, n2 = p.axes()[1].size;
    // union-find over the n1 + n2 vertices of the support graph
    std::vector<int> parent(n1 + n2);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (int a = 0; a < n1; ++a)
        for (int b = 0; b < n2; ++b)
            if (p.probs()[static_cast<int64_t>(a) * n2 + b] > 0.0) {
                int ra = find(a), rb = find(n1 + b);
                if (ra != rb) parent[rb] = ra;
            }
    CommonPart out;
    out.f.assign(n1, -1);
    out.g.assign(n2, -1);
    std::vector<int> label(n1 + n2, -1);
    int next = 0;
    for (int a = 0; a < n1; ++a) {
        int r = find(a);
        if (label[r] < 0) label[r] = next++;
        out.f[a] = label[r];
    }
    for (int b = 0; b < n2; ++b) {
        int r = find(n1 + b);
        if (label[r] < 0) label[r] = next++;  // zero-mass value isolated on its own label
        out.g[b] = label[r];
    }
    out.components = next;
    std::vector<double> mass(next, 0.0);
    for (int a = 0; a < n1; ++a)
        for (int b = 0; b < n2; ++b) mass[out.f[a]] += p.probs()[static_cast<int64_t>(a) * n2 + b];
    double h = 0.0;
    for (double v : mass)
        if (v > 0.0) h -= v * std::log2(v);
    out.entropy_bits = h < 0.0 ? 0.0 : h;
    return out;
}

namespace {

std::vector<double> flatten3(const json& j, int d0, int d1, int d2, const std::string& what) {
    if (!j.is_array() || static_cast<int>(j.size()) != d0)
        throw std::invalid_argument(what + ": expected outer array of size " + std::to_string(d0));
    std::vector<double> out;
    out.reserve(static_cast<size_t>(d0) * d1 * d2);
    for (int a = 0; a < d0; ++a) {
        const json& ja = j[a];
        if (!ja.is_array() || static_cast<int>(ja.size()) != d1)
            throw std::invalid_argument(what + ": bad shape at index " + std::to_string(a));
        for (int b = 0; b < d1; ++b) {
            const json& jb = ja[b];
            if (!jb.is_array() || static_cast<int>(jb.size()) != d2)
                throw std::invalid_argument(what + ": bad shape at index [" + std::to_string(a) +
                                            "][" + std::to_string(b) + "]");
            for (int c = 0; c < d2; ++c) out.push_back(jb[c].get<double>());
        }
    }
    return out;
}

}  // namespace

StateChannel channel_from_json_text(const std::string& text) {
    json j = json::parse(text);
    StateChannel ch;
    ch.S = j.at("S").get<int>();
    ch.X = j.at("X").get<int>();
    ch.Y1 = j.at("Y1").get<int>();
    ch.Y2 = j.at("Y2").get<int>();
    if (ch.S < 1 || ch.X < 1 || ch.Y1 < 1 || ch.Y2 < 1)
        throw std::invalid_argument("channel json: alphabet sizes must be >= 1");
    ch.p_s = j.at("p_s").get<std::vector<double>>();
    if (j.contains("p_y12")) {
        const json& jy = j.at("p_y12");
        ch.p_y1.assign(static_cast<int64_t>(ch.X) * ch.S * ch.Y1, 0.0);
        ch.p_y2.assign(static_cast<int64_t>(ch.X) * ch.S * ch.Y2, 0.0);
        if (!jy.is_array() || static_cast<int>(jy.size()) != ch.X)
            throw std::invalid_argument("p_y12: expected outer array over x");
        for (int x = 0; x < ch.X; ++x)
            for (int s = 0; s < ch.S; ++s) {
                const json& row = jy.at(x).at(s);
                double sum = 0.0;
                for (int y1 = 0; y1 < ch.Y1; ++y1)
                    for (int y2 = 0; y2 < ch.Y2; ++y2) {
                        double v = row.at(y1).at(y2).get<double>();
                        if (!(v >= 0.0)) throw std::invalid_argument("p_y12: negative entry");
                        sum += v;
                        ch.p_y1[(static_cast<int64_t>(x) * ch.S + s) * ch.Y1 + y1] += v;
                        ch.p_y2[(static_cast<int64_t>(x) * ch.S + s) * ch.Y2 + y2] += v;
                    }
                if (std::fabs(sum - 1.0) > 1e-6) {
                    std::ostringstream os;
                    os << "p_y12: row (x=" << x << ",s=" << s << ") sums to " << sum;
                    throw std::invalid_argument(os.str());
                }
            }
    } else {
        ch.p_y1 = flatten3(j.at("p_y1"), ch.X, ch.S, ch.Y1, "p_y1");
        ch.p_y2 = flatten3(j.at("p_y2"), ch.X, ch.S, ch.Y2, "p_y2");
    }
    ch.validate_and_normalize(1e-6);
    return ch;
}

StateChannel channel_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open channel file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return channel_from_json_text(ss.str());
}

std::string channel_to_json_text(const StateChannel& ch) {
    json jy1 = json::array(), jy2 = json::array();
    for (int x = 0; x < ch.X; ++x) {
        json sx1 = json::array(), sx2 = json::array();
        for (int s = 0; s < ch.S; ++s) {
            json r1 = json::array(), r2 = json::array();
            for (int y = 0; y < ch.Y1; ++y) r1.push_back(ch.y1(x, s, y));
            for (int y = 0; y < ch.Y2; ++y) r2.push_back(ch.y2(x, s, y));
            sx1.push_back(r1);
            sx2.push_back(r2);
        }
        jy1.push_back(sx1);
        jy2.push_back(sx2);
    }
    json j = {{"S", ch.S}, {"X", ch.X}, {"Y1", ch.Y1}, {"Y2", ch.Y2},
              {"p_s", ch.p_s}, {"p_y1", jy1}, {"p_y2", jy2}};
    return j.dump(2);
}

bool aux_json_is_single_layer(const std::string& text) {
    return json::parse(text).contains("p_u_s");
}

GpAux gp_aux_from_json_text(const std::string& text, const StateChannel& ch) {
    json j = json::parse(text);
    GpAux gp;
    gp.S = ch.S;
    gp.U = j.at("U").get<int>();
    const json& jp = j.at("p_u_s");
    for (int s = 0; s < ch.S; ++s)
        for (int u = 0; u < gp.U; ++u) gp.p_u_s.push_back(jp.at(s).at(u).get<double>());
    const json& jx = j.at("x_map");
    for (int u = 0; u < gp.U; ++u)
        for (int s = 0; s < ch.S; ++s) gp.x_map.push_back(jx.at(u).at(s).get<uint8_t>());
    gp.validate(ch);
    return gp;
}

AuxScheme aux_from_json_text(const std::string& text, const StateChannel& ch) {
    json j = json::parse(text);
    AuxScheme aux;
    aux.S = ch.S;
    if (j.contains("p_u_s")) return lift_gp(gp_aux_from_json_text(text, ch));
    aux.W = j.at("W").get<int>();
    aux.U = j.at("U").get<int>();
    aux.V = j.at("V").get<int>();
    const json& jp = j.at("p_wuv_s");
    for (int s = 0; s < ch.S; ++s)
        for (int w = 0; w < aux.W; ++w)
            for (int u = 0; u < aux.U; ++u)
                for (int v = 0; v < aux.V; ++v)
                    aux.p_wuv_s.push_back(jp.at(s).at(w).at(u).at(v).get<double>());
    const json& jx = j.at("x_map");
    for (int w = 0; w < aux.W; ++w)
        for (int u = 0; u < aux.U; ++u)
            for (int v = 0; v < aux.V; ++v)
                for (int s = 0; s < ch.S; ++s)
                    aux.x_map.push_back(jx.at(w).at(u).at(v).at(s).get<uint8_t>());
    aux.validate(ch);
    return aux;
}

AuxScheme aux_from_json_file(const std::string& path, const StateChannel& ch) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open aux file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return aux_from_json_text(ss.str(), ch);
}

std::string aux_to_json_text(const AuxScheme& aux) {
    json jp = json::array();
    for (int s = 0; s < aux.S; ++s) {
        json jw = json::array();
        for (int w = 0; w < aux.W; ++w) {
            json ju = json::array();
            for (int u = 0; u < aux.U; ++u) {
                json jv = json::array();
                for (int v = 0; v < aux.V; ++v) jv.push_back(aux.cond(s, w, u, v));
                ju.push_back(jv);
            }
            jw.push_back(ju);
        }
        jp.push_back(jw);
    }
    json jx = json::array();
    for (int w = 0; w < aux.W; ++w) {
        json ju = json::array();
        for (int u = 0; u < aux.U; ++u) {
            json jv = json::array();
            for (int v = 0; v < aux.V; ++v) {
                json js = json::array();
                for (int s = 0; s < aux.S; ++s) js.push_back(static_cast<int>(aux.x(w, u, v, s)));
                jv.push_back(js);
            }
            ju.push_back(jv);
        }
        jx.push_back(ju);
    }
    json j = {{"W", aux.W}, {"U", aux.U}, {"V", aux.V}, {"p_wuv_s", jp}, {"x_map", jx}};
    return j.dump(2);
}

std::string gp_aux_to_json_text(const GpAux& aux) {
    json jp = json::array();
    for (int s = 0; s < aux.S; ++s) {
        json ju = json::array();
        for (int u = 0; u < aux.U; ++u) ju.push_back(aux.cond(s, u));
        jp.push_back(ju);
    }
    json jx = json::array();
    for (int u = 0; u < aux.U; ++u) {
        json js = json::array();
        for (int s = 0; s < aux.S; ++s) js.push_back(static_cast<int>(aux.x(u, s)));
        jx.push_back(js);
    }
    json j = {{"U", aux.U}, {"p_u_s", jp}, {"x_map", jx}};
    return j.dump(2);
}

}  // namespace statecoder
