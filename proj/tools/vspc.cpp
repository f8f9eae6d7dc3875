// Command-line front end: steady-state solves, equilibrium checks, dynamics
// runs, parameter sweeps, ratio curves, and graph-space enumeration.
// Exit codes: 0 ok, 2 parse/validation, 3 non-convergence, 4 deviation budget.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "vspc/analysis.hpp"
#include "vspc/epidemic.hpp"
#include "vspc/game.hpp"
#include "vspc/graph.hpp"
#include "vspc/io.hpp"
#include "vspc/sweep.hpp"

namespace {

std::string fmt(double x, const char* spec = "%.10g") {
    char buf[48];
    std::snprintf(buf, sizeof buf, spec, x);
    return buf;
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw std::invalid_argument("cannot open output file " + path);
    return file;
}

std::vector<int> mask_to_list(std::uint64_t mask) {
    std::vector<int> out;
    while (mask) {
        out.push_back(std::countr_zero(mask));
        mask &= mask - 1;
    }
    return out;
}

void cmd_solve(const std::string& graph_path, double tau, double tol) {
    vspc::Graph g = vspc::read_edge_list_file(graph_path);
    vspc::SolveOptions opts;
    opts.tol = tol;
    vspc::SteadyState st = vspc::steady_state(g, tau, opts);
    if (!st.converged)
        throw std::runtime_error("steady state iteration did not converge (tau=" + fmt(tau) + ")");
    double lambda1 = vspc::spectral_radius(g);
    std::cout << "# tau=" << fmt(tau) << " tau_c=" << fmt(1.0 / lambda1)
              << " lambda1=" << fmt(lambda1) << " converged=1 iterations=" << st.iterations
              << " residual=" << fmt(st.residual, "%.3e") << "\n";
    if (tau * lambda1 <= 1.0 + 1e-12)
        std::cout << "# below threshold: tau <= tau_c, the infection dies out\n";
    for (double v : st.v) std::cout << fmt(v, "%.6f") << "\n";
}

struct GameFlags {
    double alpha = 1.0, gamma = 1.0, tau = 2.0, eps = 1e-9;
    bool zero_gamma = false, no_virus = false;

    vspc::GameParams params() const {
        vspc::GameParams p;
        p.alpha = alpha;
        p.gamma = gamma;
        p.tau = tau;
        p.zero_gamma = zero_gamma;
        p.no_virus = no_virus;
        p.improvement_epsilon = eps;
        return p;
    }
};

void add_game_flags(CLI::App* cmd, GameFlags& f) {
    cmd->add_option("--alpha", f.alpha, "link installation cost");
    cmd->add_option("--gamma", f.gamma, "hopcount weight");
    cmd->add_option("--tau", f.tau, "effective infection rate")->check(CLI::PositiveNumber);
    cmd->add_option("--eps", f.eps, "strict-improvement epsilon");
    cmd->add_flag("--zero-gamma", f.zero_gamma, "drop the hopcount term (connectivity still required)");
    cmd->add_flag("--no-virus", f.no_virus, "drop the infection term");
}

void cmd_equilibrium(const std::string& graph_path, const std::string& own_path,
                     const GameFlags& flags, std::uint64_t budget) {
    vspc::Graph g = vspc::read_edge_list_file(graph_path);
    vspc::OwnershipProfile own = vspc::read_ownership_file(own_path, g);
    vspc::GameParams p = flags.params();
    vspc::EpidemicSolver solver;
    vspc::EquilibriumReport rep = vspc::is_nash_exact(g, own, p, solver, budget);

    nlohmann::json out;
    out["n"] = g.n();
    out["alpha"] = p.alpha;
    out["gamma"] = p.gamma;
    out["tau"] = p.tau;
    out["zero_gamma"] = p.zero_gamma;
    out["no_virus"] = p.no_virus;
    out["exact_ne"] = rep.exact_ne;
    out["ad_stable"] = rep.ad_stable;
    out["deviations_checked"] = rep.deviations_checked;
    out["J"] = vspc::social_cost(g, p, solver);
    nlohmann::json per_player = nlohmann::json::array();
    for (int i = 0; i < g.n(); ++i)
        per_player.push_back(vspc::player_cost(g, own, i, p, solver).total);
    out["J_i"] = per_player;
    if (rep.best_deviation) {
        out["best_deviation"] = {{"player", rep.best_deviation->player},
                                 {"links", mask_to_list(rep.best_deviation->links)},
                                 {"cost_delta", rep.best_deviation->cost_delta}};
    } else {
        out["best_deviation"] = nullptr;
    }
    std::cout << out.dump(2) << "\n";
}

void cmd_dynamics(int n, const GameFlags& flags, std::uint64_t seed, double p_init, int t_max,
                  const std::string& events_path) {
    vspc::GameParams p = flags.params();
    vspc::EpidemicSolver solver;
    vspc::DynamicsResult run = vspc::run_dynamics(n, p, seed, p_init, t_max, solver);
    const vspc::DynamicsState& end = run.terminal();
    std::cout << "# dynamics n=" << n << " alpha=" << fmt(p.alpha) << " gamma=" << fmt(p.gamma)
              << " tau=" << fmt(p.tau) << " seed=" << seed << " p_init=" << fmt(p_init)
              << " t_max=" << t_max << "\n";
    std::cout << "converged=" << (run.status == vspc::DynamicsStatus::converged ? 1 : 0)
              << " slots=" << run.slots_used << "\n";
    std::cout << "terminal_links=" << end.graph.link_count()
              << " social_cost=" << fmt(vspc::social_cost(end.graph, p, solver)) << " ad_stable="
              << (vspc::is_ad_stable(end.graph, end.ownership, p, solver) ? 1 : 0) << "\n";
    std::cout << "# terminal graph\n";
    vspc::write_edge_list(end.graph, std::cout);
    if (!events_path.empty()) {
        std::ofstream ev(events_path);
        if (!ev) throw std::invalid_argument("cannot open output file " + events_path);
        ev << "slot,node,action,counterpart,j_before,j_after\n";
        for (const vspc::ActionEvent& e : run.events)
            ev << e.slot << "," << e.node << "," << e.action << "," << e.counterpart << ","
               << fmt(e.j_before) << "," << fmt(e.j_after) << "\n";
    }
}

void cmd_enumerate(const std::string& kind, int n, bool list) {
    long long count = 0;
    auto emit = [&](const vspc::Graph& g) {
        ++count;
        if (!list) return;
        std::string line;
        for (auto [u, v] : g.links()) {
            if (!line.empty()) line += " ";
            line += std::to_string(u) + "-" + std::to_string(v);
        }
        std::cout << line << "\n";
    };
    if (kind == "trees")
        vspc::for_each_tree(n, emit);
    else
        vspc::for_each_connected_graph(n, emit);
    std::cout << "count=" << count << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SIS epidemic network formation game toolkit"};
    app.require_subcommand(1);

    // solve
    std::string solve_graph;
    double solve_tau = 1.0, solve_tol = 1e-12;
    CLI::App* solve = app.add_subcommand("solve", "steady-state infection probabilities");
    solve->add_option("graph", solve_graph, "edge-list file")->required();
    solve->add_option("--tau", solve_tau, "effective infection rate")
        ->required()
        ->check(CLI::PositiveNumber);
    solve->add_option("--tol", solve_tol, "fixed-point tolerance");
    solve->callback([&] { cmd_solve(solve_graph, solve_tau, solve_tol); });

    // equilibrium
    std::string eq_graph, eq_own;
    GameFlags eq_flags;
    std::uint64_t eq_budget = 10000000;
    CLI::App* eq = app.add_subcommand("equilibrium", "exact Nash / drop-add stability check");
    eq->add_option("graph", eq_graph, "edge-list file")->required();
    eq->add_option("ownership", eq_own, "ownership file (u v owner)")->required();
    add_game_flags(eq, eq_flags);
    eq->add_option("--budget", eq_budget, "max deviations to enumerate");
    eq->callback([&] { cmd_equilibrium(eq_graph, eq_own, eq_flags, eq_budget); });

    // dynamics
    int dyn_n = 10, dyn_tmax = 200;
    GameFlags dyn_flags;
    std::uint64_t dyn_seed = 1;
    double dyn_pinit = 0.5;
    std::string dyn_events;
    CLI::App* dyn = app.add_subcommand("dynamics", "asynchronous drop/add best-response run");
    dyn->add_option("--n", dyn_n, "node count")->check(CLI::Range(2, 64));
    add_game_flags(dyn, dyn_flags);
    dyn->add_option("--seed", dyn_seed, "rng seed");
    dyn->add_option("--p-init", dyn_pinit, "initial link probability");
    dyn->add_option("--t-max", dyn_tmax, "slot budget");
    dyn->add_option("--out", dyn_events, "write per-turn action events to this file");
    dyn->callback([&] {
        cmd_dynamics(dyn_n, dyn_flags, dyn_seed, dyn_pinit, dyn_tmax, dyn_events);
    });

    // sweep
    std::string sweep_spec_path, sweep_out;
    CLI::App* sweep = app.add_subcommand("sweep", "grid of dynamics runs, CSV output");
    sweep->add_option("spec", sweep_spec_path, "key=value spec file")->required();
    sweep->add_option("--out", sweep_out, "output CSV path (default: spec's out=, else stdout)");
    sweep->callback([&] {
        std::ifstream in(sweep_spec_path);
        if (!in) throw vspc::ParseError("cannot open " + sweep_spec_path, 0);
        vspc::SweepSpec spec = vspc::parse_sweep_spec(in);
        std::string path = !sweep_out.empty() ? sweep_out : spec.out;
        std::ofstream file;
        vspc::run_sweep(spec, open_out(file, path));
    });

    // poa-curve
    int curve_n = 10;
    GameFlags curve_flags;
    double curve_tau_min = 0.34, curve_tau_max = 20.0, curve_tau_step = 0.02;
    std::string curve_out;
    CLI::App* curve = app.add_subcommand("poa-curve", "star/path cost-ratio curve over tau");
    curve->add_option("--n", curve_n, "node count")->check(CLI::Range(2, 64));
    curve->add_option("--alpha", curve_flags.alpha, "link installation cost")->required();
    curve->add_option("--gamma", curve_flags.gamma, "hopcount weight");
    curve->add_flag("--zero-gamma", curve_flags.zero_gamma, "drop the hopcount term");
    curve->add_flag("--no-virus", curve_flags.no_virus, "drop the infection term");
    curve->add_option("--tau-min", curve_tau_min, "grid start")->check(CLI::PositiveNumber);
    curve->add_option("--tau-max", curve_tau_max, "grid end");
    curve->add_option("--tau-step", curve_tau_step, "grid step")->check(CLI::PositiveNumber);
    curve->add_option("--out", curve_out, "output CSV path (default stdout)");
    curve->callback([&] {
        std::ofstream file;
        vspc::run_poa_curve(curve_n, curve_flags.params(), curve_tau_min, curve_tau_max,
                            curve_tau_step, open_out(file, curve_out));
    });

    // enumerate
    std::string enum_kind = "trees";
    int enum_n = 5;
    bool enum_list = false;
    CLI::App* enu = app.add_subcommand("enumerate", "count labeled trees or connected graphs");
    enu->add_option("--kind", enum_kind, "trees | connected")
        ->check(CLI::IsMember({"trees", "connected"}));
    enu->add_option("--n", enum_n, "node count")->required();
    enu->add_flag("--list", enum_list, "print each graph as u-v pairs");
    enu->callback([&] { cmd_enumerate(enum_kind, enum_n, enum_list); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const vspc::BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const vspc::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
