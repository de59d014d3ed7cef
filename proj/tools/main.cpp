// statecoder: rate bounds, scheme optimization and Monte Carlo simulation for
// two-receiver channels whose i.i.d. state is known noncausally at the
// encoder.
//
// Exit codes: 0 success, 1 infeasible or oversized request, 2 malformed input.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "statecoder/bounds.hpp"
#include "statecoder/channel.hpp"
#include "statecoder/gaussian.hpp"
#include "statecoder/optimize.hpp"
#include "statecoder/sim.hpp"

using namespace statecoder;
using nlohmann::json;

namespace {

constexpr int kExitInfeasible = 1;
constexpr int kExitBadInput = 2;

struct BadInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct Infeasible : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BadInput("cannot open file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

StateChannel load_channel(const std::string& spec) {
    if (spec == "example") return example_channel();
    try {
        return channel_from_json_text(slurp(spec));
    } catch (const BadInput&) {
        throw;
    } catch (const std::exception& e) {
        throw BadInput(std::string("channel file: ") + e.what());
    }
}

AuxScheme preset_aux(const StateChannel& ch, const std::string& name) {
    if (name != "section3") throw BadInput("unknown preset: " + name);
    if (!deterministic_maps(ch))
        throw Infeasible("preset section3 needs a deterministic channel");
    std::vector<double> uniform(static_cast<size_t>(ch.S) * ch.X, 1.0 / ch.X);
    return outputs_as_aux(ch, uniform);
}

AuxScheme load_aux(const StateChannel& ch, const std::string& aux_file,
                   const std::string& preset) {
    if (!preset.empty()) return preset_aux(ch, preset);
    if (aux_file.empty()) throw BadInput("provide --aux or --preset");
    try {
        return aux_from_json_text(slurp(aux_file), ch);
    } catch (const BadInput&) {
        throw;
    } catch (const std::exception& e) {
        throw BadInput(std::string("aux file: ") + e.what());
    }
}

void write_out(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) throw BadInput("cannot write file: " + path);
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
}

void print_report(const RateReport& r, const std::string& format, const std::string& out) {
    if (format == "json") {
        write_out(out, r.to_json_text());
        return;
    }
    std::ostringstream os;
    for (const auto& [name, v] : r.terms) os << name << " = " << v << '\n';
    os << "rate = " << r.overall << '\n';
    write_out(out, os.str());
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    if (out.empty()) throw BadInput("empty list: " + text);
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (double v : parse_list(text)) out.push_back(static_cast<int>(v));
    return out;
}

// T's from the rate constraints with a uniform margin. A packing side left
// with less than the margin is reported, not rejected: simulating a rate the
// region cannot support is exactly how one demonstrates decoding failure.
std::string derive_sim_rates(const StateChannel& ch, const AuxScheme& aux, double margin, double R,
                             SimConfig& cfg) {
    JointPmf j1 = induced_joint(ch, aux, 1);
    JointPmf j2 = induced_joint(ch, aux, 2);
    std::vector<std::string> W = {"W"}, U = {"U"}, V = {"V"}, S = {"S"}, WS = {"W", "S"},
                             WU = {"W", "U"}, WV = {"W", "V"}, Y1 = {"Y1"}, Y2 = {"Y2"};
    double i_ws = mutual_information(j1, std::span(W), std::span(S));
    double i_us = mutual_information(j1, std::span(U), std::span(S), std::span(W));
    double i_vs = mutual_information(j2, std::span(V), std::span(S), std::span(W));
    double i_uv = mutual_information(j1, std::span(U), std::span(V), std::span(WS));
    cfg.T0 = aux.W == 1 ? 0.0 : i_ws + margin;
    double bump = std::max(margin, 0.5 * (margin + i_uv));
    cfg.T1 = i_us + bump;
    cfg.T2 = i_vs + bump;
    double cap1 = mutual_information(j1, std::span(WU), std::span(Y1));
    double cap2 = mutual_information(j2, std::span(WV), std::span(Y2));
    if (R + cfg.T0 + cfg.T1 > cap1 - margin || R + cfg.T0 + cfg.T2 > cap2 - margin) {
        std::ostringstream os;
        os << "# warning: rate leaves less than the margin (R+T0+T1 = " << R + cfg.T0 + cfg.T1
           << " vs I(W,U;Y1) = " << cap1 << ", R+T0+T2 = " << R + cfg.T0 + cfg.T2
           << " vs I(W,V;Y2) = " << cap2 << "); expect decoding failure\n";
        return os.str();
    }
    return {};
}

int cmd_bounds(const std::string& channel_spec, const std::string& aux_file, bool want_gp,
               bool want_thm1, bool witness, const std::string& preset, bool optimize, int card,
               const std::string& cards_text, int budget, uint64_t seed, const std::string& format,
               const std::string& out) {
    StateChannel ch = load_channel(channel_spec);

    if (witness) {
        if (!is_example_channel(ch))
            throw Infeasible("--appendix-b-witness is defined for the example channel");
        print_report(gp_rate(ch, exact_example::witness()), format, out);
        return 0;
    }
    if (optimize) {
        if (want_gp) {
            GpSearchResult r = maximize_gp(ch, card, budget, seed);
            if (format == "json")
                write_out(out, r.to_json_text());
            else
                print_report(r.report, format, out);
            return 0;
        }
        Cards cards{1, 2, 2};
        if (!cards_text.empty()) {
            std::vector<int> c = parse_int_list(cards_text);
            if (c.size() != 3) throw BadInput("--cards expects W,U,V");
            cards = {c[0], c[1], c[2]};
        }
        SuperpositionSearchResult r = maximize_superposition(ch, cards, budget, seed);
        if (format == "json")
            write_out(out, r.to_json_text());
        else
            print_report(r.report, format, out);
        return 0;
    }

    AuxScheme aux;
    std::optional<GpAux> gp;
    if (!preset.empty()) {
        aux = preset_aux(ch, preset);
    } else if (!aux_file.empty()) {
        std::string text = slurp(aux_file);
        try {
            if (aux_json_is_single_layer(text)) gp = gp_aux_from_json_text(text, ch);
            aux = aux_from_json_text(text, ch);
        } catch (const std::exception& e) {
            throw BadInput(std::string("aux file: ") + e.what());
        }
    } else {
        throw BadInput("bounds: provide --aux, --preset, --appendix-b-witness or --optimize");
    }

    if (want_gp) {
        if (!gp) throw BadInput("--gp needs a single-auxiliary scheme (keys U, p_u_s, x_map)");
        print_report(gp_rate(ch, *gp), format, out);
        return 0;
    }
    (void)want_thm1;  // the three-term bound is the default report
    print_report(superposition_rate(ch, aux), format, out);
    return 0;
}

int cmd_simulate(const std::string& channel_spec, const std::string& aux_file,
                 const std::string& preset, double rate, double margin, double t0, double t1,
                 double t2, const std::string& n_list, int trials, uint64_t seed, double eps,
                 double eps_prime, const std::string& engine_name, const std::string& out) {
    StateChannel ch = load_channel(channel_spec);
    AuxScheme aux = load_aux(ch, aux_file, preset);
    Engine engine = engine_name == "reference" ? Engine::reference : Engine::fast;
    std::ostringstream csv;
    csv << "# channel=" << channel_spec << " preset=" << preset << " seed=" << seed
        << " engine=" << engine_name << " margin=" << margin << '\n';
    csv << SimResult::csv_header() << '\n';
    for (int n : parse_int_list(n_list)) {
        SimConfig cfg;
        cfg.n = n;
        cfg.R = rate;
        cfg.trials = trials;
        cfg.seed = seed;
        cfg.epsilon = eps > 0 ? eps : default_epsilon(n);
        cfg.epsilon_prime = eps_prime > 0 ? eps_prime : 2.0 * cfg.epsilon;
        if (t1 >= 0 && t2 >= 0) {
            cfg.T0 = t0 >= 0 ? t0 : 0.0;
            cfg.T1 = t1;
            cfg.T2 = t2;
        } else {
            csv << derive_sim_rates(ch, aux, margin, rate, cfg);
        }
        try {
            cfg.validate();
            check_scan_guard(aux, cfg);
        } catch (const std::exception& e) {
            throw Infeasible(e.what());
        }
        SimResult r = run_trials(ch, aux, cfg, engine);
        csv << r.csv_row() << '\n';
    }
    write_out(out, csv.str());
    return 0;
}

int cmd_covering(const std::string& channel_spec, const std::string& aux_file,
                 const std::string& preset, int n, int trials, double eps, double eps_given,
                 uint64_t seed, const std::string& grid, const std::string& t1_list,
                 const std::string& t2_list, const std::string& out) {
    StateChannel ch = load_channel(channel_spec);
    AuxScheme aux = load_aux(ch, aux_file, preset);
    CoveringConditions cond = covering_conditions(ch, aux);
    std::vector<double> t1s, t2s;
    if (!t1_list.empty() && !t2_list.empty()) {
        t1s = parse_list(t1_list);
        t2s = parse_list(t2_list);
    } else {
        std::vector<double> offsets =
            grid == "fine" ? std::vector<double>{-0.15, -0.1, -0.05, 0.0, 0.05, 0.1, 0.15}
                           : std::vector<double>{-0.1, -0.033, 0.033, 0.1};
        for (double d : offsets) t1s.push_back(std::max(0.0, cond.t1 + d));
        for (double d : offsets) t2s.push_back(std::max(0.0, cond.t2 + d));
    }
    std::vector<CoveringCell> cells;
    try {
        cells = covering_experiment(ch, aux, t1s, t2s, n, trials, eps > 0 ? eps : 0.2, seed,
                                    eps_given);
    } catch (const std::exception& e) {
        throw Infeasible(e.what());
    }
    std::ostringstream csv;
    csv << "# channel=" << channel_spec << " preset=" << preset << " n=" << n << " trials="
        << trials << " epsilon=" << (eps > 0 ? eps : 0.2) << " seed=" << seed << '\n';
    csv << "# conditions: T1>" << cond.t1 << " T2>" << cond.t2 << " T1+T2>" << cond.sum << '\n';
    csv << "T1,T2,L1,L2,trials,successes,success_rate\n";
    for (const CoveringCell& c : cells)
        csv << c.T1 << ',' << c.T2 << ',' << c.L1 << ',' << c.L2 << ',' << c.trials << ','
            << c.successes << ',' << c.success_rate << '\n';
    write_out(out, csv.str());
    return 0;
}

int cmd_appendix_b(const std::string& format, const std::string& out) {
    exact_example::Optimum opt = exact_example::maximize();
    RateReport witness_rate = gp_rate(example_channel(), exact_example::witness());
    if (format == "json") {
        json j = {{"t", opt.t},
                  {"s4", opt.s4},
                  {"value", opt.value},
                  {"grid", {{"t", opt.grid_t}, {"s4", opt.grid_s4}, {"value", opt.grid_value}}},
                  {"witness",
                   {{"report", json::parse(witness_rate.to_json_text())},
                    {"aux", json::parse(gp_aux_to_json_text(exact_example::witness()))}}}};
        write_out(out, j.dump(2));
        return 0;
    }
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(6);
    os << "t* = " << opt.t << '\n'
       << "s4* = " << opt.s4 << '\n'
       << "value = " << opt.value << '\n'
       << "grid check (step 1e-3): value = " << opt.grid_value << '\n'
       << "witness rate = " << witness_rate.overall << '\n';
    write_out(out, os.str());
    return 0;
}

int cmd_gaussian(double alpha, double g1, double g2, double q0, double q1, double p,
                 const std::string& out) {
    GaussianCompound gc{alpha, g1, g2, q0, q1, p};
    try {
        gc.validate();
    } catch (const std::exception& e) {
        throw BadInput(e.what());
    }
    PowerSplit split = optimize_power_split(gc);
    BranchRates rates = branch_rate(gc, split.P1, split.P2);
    DpcCheck d1 = split.P1 > 0 ? dpc_auxiliary(g1, split.P1, q0) : DpcCheck{};
    DpcCheck d2 = split.P2 > 0 ? dpc_auxiliary(g2, split.P2, q1) : DpcCheck{};
    json j = {{"params",
               {{"alpha", alpha}, {"g1", g1}, {"g2", g2}, {"Q0", q0}, {"Q1", q1}, {"P", p}}},
              {"P1", split.P1},
              {"P2", split.P2},
              {"rate", split.rate},
              {"branch_rates", {{"r1", rates.r1}, {"r2", rates.r2}}},
              {"precoding",
               {{"branch1", {{"coefficient", d1.coefficient}, {"identity", d1.identity_value}}},
                {"branch2", {{"coefficient", d2.coefficient}, {"identity", d2.identity_value}}}}}};
    write_out(out, j.dump(2));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rate bounds and coding simulation for channels with encoder-side state"};
    app.require_subcommand(1);

    std::string channel = "example", aux_file, preset, format = "pretty", out;
    std::string cards_text, n_list = "8,16,24", engine = "fast", grid = "coarse", t1_list, t2_list;
    bool want_gp = false, want_thm1 = false, witness = false, optimize = false;
    int card = 3, budget = 50, trials = 500, n = 24;
    uint64_t seed = 1;
    double rate = 0.0, margin = 0.05, t0 = -1, t1 = -1, t2 = -1, eps = -1, eps_prime = -1;
    double alpha = 0.5, g1 = 1.0, g2 = 1.0, q0 = 1.0, q1 = 1.0, power = 1.0;

    CLI::App* bounds = app.add_subcommand("bounds", "evaluate or maximize the rate bounds");
    bounds->add_option("--channel", channel, "channel json file or 'example'");
    bounds->add_option("--aux", aux_file, "auxiliary scheme json");
    bounds->add_flag("--gp", want_gp, "single-auxiliary bound");
    bounds->add_flag("--thm1", want_thm1, "three-term layered bound (default)");
    bounds->add_flag("--appendix-b-witness", witness, "evaluate the exact cardinality-3 scheme");
    bounds->add_option("--preset", preset, "built-in scheme (section3)");
    bounds->add_flag("--optimize", optimize, "search for the best scheme");
    bounds->add_option("--card", card, "auxiliary cardinality for --gp --optimize");
    bounds->add_option("--cards", cards_text, "W,U,V cardinalities for --optimize");
    bounds->add_option("--budget", budget, "random restarts per map");
    bounds->add_option("--seed", seed, "search seed");
    bounds->add_option("--format", format, "pretty|json");
    bounds->add_option("--out", out, "output file (default stdout)");

    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo runs of the coding scheme");
    simulate->add_option("--channel", channel);
    simulate->add_option("--aux", aux_file);
    simulate->add_option("--preset", preset);
    simulate->add_option("--rate", rate, "message rate R")->required();
    simulate->add_option("--margin", margin, "slack used when deriving the T's");
    simulate->add_option("--T0", t0);
    simulate->add_option("--T1", t1);
    simulate->add_option("--T2", t2);
    simulate->add_option("--n-list", n_list, "comma-separated blocklengths");
    simulate->add_option("--trials", trials);
    simulate->add_option("--seed", seed);
    simulate->add_option("--epsilon", eps);
    simulate->add_option("--epsilon-prime", eps_prime);
    simulate->add_option("--engine", engine, "fast|reference");
    simulate->add_option("--out", out, "CSV output file");

    CLI::App* covering = app.add_subcommand("covering", "encoder success vs (T1,T2)");
    covering->add_option("--channel", channel);
    covering->add_option("--aux", aux_file);
    covering->add_option("--preset", preset);
    covering->add_option("--n", n);
    covering->add_option("--trials", trials);
    covering->add_option("--epsilon", eps);
    covering->add_option("--epsilon-given", eps_prime, "conditioning slack (default epsilon/2)");
    covering->add_option("--seed", seed);
    covering->add_option("--grid", grid, "coarse|fine offsets around the conditions");
    covering->add_option("--T1-list", t1_list);
    covering->add_option("--T2-list", t2_list);
    covering->add_option("--out", out);

    CLI::App* appendixb = app.add_subcommand("appendix-b", "exact single-auxiliary optimum");
    appendixb->add_option("--format", format, "pretty|json");
    appendixb->add_option("--out", out);

    CLI::App* gaussian = app.add_subcommand("gaussian", "time-shared Gaussian power split");
    gaussian->add_option("--alpha", alpha);
    gaussian->add_option("--g1", g1);
    gaussian->add_option("--g2", g2);
    gaussian->add_option("--Q0", q0);
    gaussian->add_option("--Q1", q1);
    gaussian->add_option("--P", power);
    gaussian->add_option("--out", out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (bounds->parsed())
            return cmd_bounds(channel, aux_file, want_gp, want_thm1, witness, preset, optimize,
                              card, cards_text, budget, seed, format, out);
        if (simulate->parsed())
            return cmd_simulate(channel, aux_file, preset, rate, margin, t0, t1, t2, n_list,
                                trials, seed, eps, eps_prime, engine, out);
        if (covering->parsed())
            return cmd_covering(channel, aux_file, preset, n, trials, eps, eps_prime, seed, grid,
                                t1_list, t2_list, out);
        if (appendixb->parsed()) return cmd_appendix_b(format, out);
        if (gaussian->parsed()) return cmd_gaussian(alpha, g1, g2, q0, q1, power, out);
    } catch (const BadInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBadInput;
    } catch (const Infeasible& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBadInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInfeasible;
    }
    return 0;
}
