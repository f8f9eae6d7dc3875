#pragma once
// Batch layer: (alpha, gamma, tau, seed) dynamics sweeps emitting versioned
// CSV, and the star-vs-path cost-ratio curve over tau. Cells run on a worker
// pool but rows are emitted in spec order, so identical specs give
// byte-identical output regardless of scheduling.

#include <atomic>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "analysis.hpp"
#include "epidemic.hpp"
#include "game.hpp"
#include "graph.hpp"
#include "io.hpp"

namespace vspc {

struct SweepSpec {
    int n = 10;
    std::vector<double> alphas;
    std::vector<double> gammas;
    std::vector<double> taus;
    std::vector<std::uint64_t> seeds;
    bool zero_gamma = false;
    bool no_virus = false;
    int t_max = 200;
    double p_init = 0.5;
    std::string out;  // optional output path; CLI may override
};

namespace detail {

inline std::string fmt_g(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

inline std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> parts;
    size_t pos = 0;
    while (true) {
        size_t comma = s.find(',', pos);
        parts.push_back(s.substr(pos, comma - pos));
        if (comma == std::string::npos) return parts;
        pos = comma + 1;
    }
}

inline double parse_double(const std::string& s, int line_no) {
    try {
        size_t used = 0;
        double x = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return x;
    } catch (const std::exception&) {
        throw ParseError("bad number \"" + s + "\"", line_no);
    }
}

inline bool parse_bool(const std::string& s, int line_no) {
    if (s == "1" || s == "true") return true;
    if (s == "0" || s == "false") return false;
    throw ParseError("bad flag \"" + s + "\" (use true/false/1/0)", line_no);
}

}  // namespace detail

/** Flat key=value spec; lists are comma-separated. Unknown keys are errors. */
inline SweepSpec parse_sweep_spec(std::istream& in) {
    SweepSpec spec;
    std::string s;
    int line_no = 0;
    while (std::getline(in, s)) {
        ++line_no;
        if (!detail::data_line(s)) continue;
        size_t eq = s.find('=');
        if (eq == std::string::npos) throw ParseError("expected key=value, got \"" + s + "\"", line_no);
        std::string key = s.substr(0, eq), value = s.substr(eq + 1);
        while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
        while (!value.empty() && (value.front() == ' ' || value.front() == '\t')) value.erase(0, 1);
        if (key == "n") {
            spec.n = static_cast<int>(detail::parse_double(value, line_no));
        } else if (key == "alpha" || key == "gamma" || key == "tau") {
            std::vector<double>& grid =
                key == "alpha" ? spec.alphas : (key == "gamma" ? spec.gammas : spec.taus);
            grid.clear();
            for (const std::string& part : detail::split_csv(value))
                grid.push_back(detail::parse_double(part, line_no));
        } else if (key == "seeds") {
            spec.seeds.clear();
            for (const std::string& part : detail::split_csv(value)) {
                double x = detail::parse_double(part, line_no);
                if (x < 0 || x != std::floor(x)) throw ParseError("bad seed \"" + part + "\"", line_no);
                spec.seeds.push_back(static_cast<std::uint64_t>(x));
            }
        } else if (key == "zero_gamma") {
            spec.zero_gamma = detail::parse_bool(value, line_no);
        } else if (key == "no_virus") {
            spec.no_virus = detail::parse_bool(value, line_no);
        } else if (key == "t_max") {
            spec.t_max = static_cast<int>(detail::parse_double(value, line_no));
        } else if (key == "p_init") {
            spec.p_init = detail::parse_double(value, line_no);
        } else if (key == "out") {
            spec.out = value;
        } else {
            throw ParseError("unknown key \"" + key + "\"", line_no);
        }
    }
    if (spec.n < 2 || spec.n > kMaxNodes) throw ParseError("n outside [2, 64]", line_no + 1);
    if (spec.alphas.empty() || spec.gammas.empty() || spec.taus.empty())
        throw ParseError("alpha, gamma and tau grids must be non-empty", line_no + 1);
    if (spec.seeds.empty()) throw ParseError("seeds must be non-empty", line_no + 1);
    for (const std::vector<double>* grid : {&spec.alphas, &spec.gammas, &spec.taus})
        for (double x : *grid)
            if (!std::isfinite(x) || x < 0) throw ParseError("grid values must be finite and >= 0", line_no + 1);
    for (double t : spec.taus)
        if (t <= 0) throw ParseError("tau values must be positive", line_no + 1);
    if (spec.t_max < 1) throw ParseError("t_max must be >= 1", line_no + 1);
    if (!(spec.p_init > 0 && spec.p_init < 1)) throw ParseError("p_init must be in (0, 1)", line_no + 1);
    return spec;
}

namespace detail {

struct SweepRow {
    std::uint64_t seed = 0;
    double links = 0;
    double avg_hop = 0;
    double sum_inf = 0;
    double j = 0;
    double ad_stable = 0;
    double poa = 0;
};

struct SweepCell {
    double alpha = 0, gamma = 0, tau = 0;
    std::vector<SweepRow> rows;
    SweepRow mean;
    const char* poa_kind = "exact";
};

inline void compute_sweep_cell(const SweepSpec& spec, SweepCell& cell) {
    GameParams p;
    p.alpha = cell.alpha;
    p.gamma = cell.gamma;
    p.tau = cell.tau;
    p.zero_gamma = spec.zero_gamma;
    p.no_virus = spec.no_virus;
    EpidemicSolver solver;

    std::vector<Graph> terminals;
    for (std::uint64_t seed : spec.seeds) {
        DynamicsResult run = run_dynamics(spec.n, p, seed, spec.p_init, spec.t_max, solver);
        terminals.push_back(run.terminal().graph);
        SweepRow row;
        row.seed = seed;
        const Graph& g = terminals.back();
        row.links = g.link_count();
        long long hop_sum = 0;
        for (int i = 0; i < g.n(); ++i) hop_sum += hop_row(g, i).sum;
        row.avg_hop = static_cast<double>(hop_sum) / (static_cast<double>(g.n()) * (g.n() - 1));
        row.sum_inf = p.no_virus ? 0.0 : solver.total_infection(g, p.tau);
        row.j = p.alpha * row.links + row.sum_inf;
        if (!p.zero_gamma) row.j += p.gamma * static_cast<double>(hop_sum);
        double j_check = social_cost(g, p, solver);
        if (std::abs(row.j - j_check) >= 1e-9)
            throw std::logic_error("sweep self-audit failed: social cost mismatch");
        row.ad_stable = is_ad_stable(g, run.terminal().ownership, p, solver) ? 1.0 : 0.0;
        cell.rows.push_back(row);
    }

    double j_ref;
    if (spec.n <= 7) {
        j_ref = optimal_social_cost(spec.n, p, solver, SearchSpace::all_connected).cost;
        cell.poa_kind = "exact";
    } else {
        j_ref = std::min(social_cost(Graph::star(spec.n), p, solver),
                         social_cost(Graph::path(spec.n), p, solver));
        j_ref = std::min(j_ref, social_cost(Graph::complete(spec.n), p, solver));
        for (const Graph& g : terminals) j_ref = std::min(j_ref, social_cost(g, p, solver));
        cell.poa_kind = "reference";
    }
    for (SweepRow& row : cell.rows) {
        row.poa = row.j / j_ref;
        cell.mean.links += row.links;
        cell.mean.avg_hop += row.avg_hop;
        cell.mean.sum_inf += row.sum_inf;
        cell.mean.j += row.j;
        cell.mean.ad_stable += row.ad_stable;
        cell.mean.poa += row.poa;
    }
    const double k = static_cast<double>(cell.rows.size());
    cell.mean.links /= k;
    cell.mean.avg_hop /= k;
    cell.mean.sum_inf /= k;
    cell.mean.j /= k;
    cell.mean.ad_stable /= k;
    cell.mean.poa /= k;
}

inline void write_sweep_row(std::ostream& os, const SweepCell& cell, const SweepRow& row,
                            bool is_mean) {
    os << fmt_g(cell.alpha) << "," << fmt_g(cell.gamma) << "," << fmt_g(cell.tau) << ",";
    if (is_mean)
        os << "mean";
    else
        os << row.seed;
    os << "," << fmt_g(row.links) << "," << fmt_g(row.avg_hop) << "," << fmt_g(row.sum_inf) << ","
       << fmt_g(row.j) << "," << fmt_g(row.ad_stable) << "," << fmt_g(row.poa) << ","
       << cell.poa_kind << "\n";
}

}  // namespace detail

/**
 * Runs the full grid and writes the v1 CSV: one row per (alpha, gamma, tau,
 * seed) plus a per-cell aggregate row with seed column "mean". Cells execute
 * on a worker pool; emission order and content are deterministic.
 */
inline void run_sweep(const SweepSpec& spec, std::ostream& os) {
    std::vector<detail::SweepCell> cells;
    for (double a : spec.alphas)
        for (double g : spec.gammas)
            for (double t : spec.taus) {
                detail::SweepCell cell;
                cell.alpha = a;
                cell.gamma = g;
                cell.tau = t;
                cells.push_back(cell);
            }

    std::atomic<size_t> next{0};
    auto worker = [&]() {
        while (true) {
            size_t k = next.fetch_add(1);
            if (k >= cells.size()) return;
            detail::compute_sweep_cell(spec, cells[k]);
        }
    };
    unsigned pool = std::max(1u, std::thread::hardware_concurrency());
    pool = static_cast<unsigned>(std::min<size_t>(pool, cells.size()));
    if (pool <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (unsigned w = 0; w < pool; ++w) threads.emplace_back(worker);
        for (std::thread& th : threads) th.join();
    }

    os << "vspc-csv v1\n";
    os << "# n=" << spec.n << " zero_gamma=" << (spec.zero_gamma ? 1 : 0)
       << " no_virus=" << (spec.no_virus ? 1 : 0) << " t_max=" << spec.t_max
       << " p_init=" << detail::fmt_g(spec.p_init) << "\n";
    os << "alpha,gamma,tau,seed,L,avg_hopcount,sum_infection,social_cost,ad_stable,poa,poa_kind\n";
    for (const detail::SweepCell& cell : cells) {
        for (const detail::SweepRow& row : cell.rows) detail::write_sweep_row(os, cell, row, false);
        detail::write_sweep_row(os, cell, cell.mean, true);
    }
}

/**
 * Exact star/path social costs over a tau grid with both cost ratios, their
 * max, and the scalar ratio bound (blank where its guard fails).
 */
inline void run_poa_curve(int n, const GameParams& base, double tau_min, double tau_max,
                          double tau_step, std::ostream& os) {
    if (n < 2 || n > kMaxNodes) throw std::invalid_argument("run_poa_curve: n outside [2, 64]");
    if (!(tau_min > 0) || !(tau_step > 0) || tau_max < tau_min)
        throw std::invalid_argument("run_poa_curve: need 0 < tau_min <= tau_max and tau_step > 0");
    if ((tau_max - tau_min) / tau_step > 1e6)
        throw std::invalid_argument("run_poa_curve: grid too large");
    EpidemicSolver solver;
    os << "vspc-csv v1\n";
    os << "# poa-curve n=" << n << " alpha=" << detail::fmt_g(base.alpha)
       << " gamma=" << detail::fmt_g(base.gamma) << " zero_gamma=" << (base.zero_gamma ? 1 : 0)
       << " no_virus=" << (base.no_virus ? 1 : 0) << "\n";
    os << "tau,J_star,J_path,ratio_star_over_path,ratio_path_over_star,poa,corollary2_bound\n";
    for (long long k = 0;; ++k) {
        double tau = tau_min + static_cast<double>(k) * tau_step;
        if (tau > tau_max + 1e-12) break;
        GameParams p = base;
        p.tau = tau;
        StarPathPoint pt = star_path_point(n, p, solver);
        os << detail::fmt_g(tau) << "," << detail::fmt_g(pt.j_star) << "," << detail::fmt_g(pt.j_path)
           << "," << detail::fmt_g(pt.star_over_path) << "," << detail::fmt_g(pt.path_over_star)
           << "," << detail::fmt_g(pt.poa) << ",";
        if (tau * (p.alpha + 1) > 1.0) os << detail::fmt_g(corollary2_bound(p.alpha, tau));
        os << "\n";
    }
}

}  // namespace vspc
