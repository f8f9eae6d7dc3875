#pragma once
// Analysis layer on top of the game: exhaustive social-cost optima, extreme
// trees, equilibrium existence scans, price of anarchy / stability, the
// star-vs-complete closed forms, the four-regime classifier, and structural
// bound reports. Everything here is exact (exhaustive over labeled graphs);
// nothing in this header samples or approximates a search space.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "epidemic.hpp"
#include "game.hpp"
#include "graph.hpp"

namespace vspc {

enum class SearchSpace { trees, all_connected };

struct OptimumResult {
    Graph best;
    double cost = kInfiniteCost;
    SearchSpace space = SearchSpace::trees;
    long long examined = 0;
};

/**
 * Exhaustive social-cost minimum over labeled trees (n <= 10) or all labeled
 * connected graphs (n <= 7). First graph attaining the minimum is kept, so
 * ties resolve to the lowest enumeration rank.
 */
inline OptimumResult optimal_social_cost(int n, const GameParams& p, EpidemicSolver& solver,
                                         SearchSpace space) {
    OptimumResult out;
    out.space = space;
    auto consider = [&](const Graph& g) {
        ++out.examined;
        double c = social_cost(g, p, solver);
        if (c < out.cost) {
            out.cost = c;
            out.best = g;
        }
    };
    if (space == SearchSpace::trees) {
        if (n < 2 || n > 10) throw std::invalid_argument("optimal_social_cost: tree space needs 2 <= n <= 10");
        for_each_tree(n, consider);
    } else {
        if (n < 2 || n > 7)
            throw std::invalid_argument("optimal_social_cost: connected space needs 2 <= n <= 7");
        for_each_connected_graph(n, consider);
    }
    return out;
}

struct TreeExtremes {
    Graph min_tree;
    double min_cost = 0;
    long long min_ties = 0;  // labeled trees within tolerance of the minimum
    Graph max_tree;
    double max_cost = 0;
    long long max_ties = 0;
    long long examined = 0;
};

/**
 * Social-cost extremes over all labeled trees, with tie counts. A shape that
 * is uniquely extremal up to relabeling shows up as min_ties (or max_ties)
 * equal to its number of labelings: n!/2 for the path, n for the star.
 */
inline TreeExtremes tree_extremes(int n, const GameParams& p, EpidemicSolver& solver,
                                  double tie_tol = 1e-9) {
    if (n < 3 || n > 9) throw std::invalid_argument("tree_extremes: needs 3 <= n <= 9");
    TreeExtremes out;
    double lo = kInfiniteCost, hi = -kInfiniteCost;
    for_each_tree(n, [&](const Graph& g) {
        ++out.examined;
        double c = social_cost(g, p, solver);
        if (c < lo) {
            lo = c;
            out.min_tree = g;
        }
        if (c > hi) {
            hi = c;
            out.max_tree = g;
        }
    });
    out.min_cost = lo;
    out.max_cost = hi;
    const double tol_lo = tie_tol * std::max(1.0, std::abs(lo));
    const double tol_hi = tie_tol * std::max(1.0, std::abs(hi));
    for_each_tree(n, [&](const Graph& g) {
        double c = social_cost(g, p, solver);
        if (c <= lo + tol_lo) ++out.min_ties;
        if (c >= hi - tol_hi) ++out.max_ties;
    });
    return out;
}

struct EquilibriumScan {
    std::vector<Graph> ne_graphs;    // connected graphs admitting >= 1 exact-NE ownership
    std::vector<Graph> no_ne_trees;  // trees admitting none
    long long graphs = 0;
    long long profiles = 0;
};

/**
 * For every labeled connected graph on n nodes, try every ownership profile
 * until one verifies as an exact NE. n <= 5 keeps the full scan under 3^10
 * profile checks.
 */
inline EquilibriumScan scan_equilibria(int n, const GameParams& p, EpidemicSolver& solver) {
    if (n < 2 || n > 5) throw std::invalid_argument("scan_equilibria: needs 2 <= n <= 5");
    EquilibriumScan out;
    for_each_connected_graph(n, [&](const Graph& g) {
        ++out.graphs;
        auto links = g.links();
        const int m = static_cast<int>(links.size());
        bool found = false;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m) && !found; ++mask) {
            OwnershipProfile own(n);
            for (int k = 0; k < m; ++k) {
                auto [u, v] = links[static_cast<size_t>(k)];
                if (mask >> k & 1)
                    own.claim(v, u);
                else
                    own.claim(u, v);
            }
            ++out.profiles;
            if (is_nash_exact(g, own, p, solver, 10000000, true).exact_ne) found = true;
        }
        if (found)
            out.ne_graphs.push_back(g);
        else if (is_tree(g))
            out.no_ne_trees.push_back(g);
    });
    return out;
}

struct PoaResult {
    double poa = 1;
    double pos = 1;
    Graph optimum;
    double optimum_cost = 0;
    Graph worst_equilibrium;
    double worst_cost = 0;
    Graph best_equilibrium;
    double best_cost = 0;
    long long equilibrium_graphs = 0;
    long long graphs_examined = 0;
};

/**
 * Exact PoA / PoS at n <= 5: exhaustive optimum over connected graphs versus
 * the worst/best social cost among graphs admitting an exact-NE ownership.
 * Throws when no equilibrium exists anywhere in the space.
 */
inline PoaResult poa_pos(int n, const GameParams& p, EpidemicSolver& solver) {
    OptimumResult opt = optimal_social_cost(n, p, solver, SearchSpace::all_connected);
    EquilibriumScan scan = scan_equilibria(n, p, solver);
    if (scan.ne_graphs.empty()) throw std::domain_error("poa_pos: no exact Nash equilibrium in the space");
    PoaResult out;
    out.optimum = opt.best;
    out.optimum_cost = opt.cost;
    out.graphs_examined = opt.examined;
    out.equilibrium_graphs = static_cast<long long>(scan.ne_graphs.size());
    out.worst_cost = -kInfiniteCost;
    out.best_cost = kInfiniteCost;
    for (const Graph& g : scan.ne_graphs) {
        double c = social_cost(g, p, solver);
        if (c > out.worst_cost) {
            out.worst_cost = c;
            out.worst_equilibrium = g;
        }
        if (c < out.best_cost) {
            out.best_cost = c;
            out.best_equilibrium = g;
        }
    }
    out.poa = out.worst_cost / out.optimum_cost;
    out.pos = out.best_cost / out.optimum_cost;
    return out;
}

// --- star vs path ratio curve (the two extreme-tree equilibria) -------------

struct StarPathPoint {
    double j_star = 0;
    double j_path = 0;
    double star_over_path = 1;
    double path_over_star = 1;
    double poa = 1;  // max of the two ratios
};

namespace detail {

inline double safe_ratio(double a, double b) {
    if (b > 0) return a / b;
    return a > 0 ? kInfiniteCost : 1.0;  // 0/0 treated as parity
}

}  // namespace detail

/** Exact social costs of K_{1,n-1} and P_n plus both cost ratios. */
inline StarPathPoint star_path_point(int n, const GameParams& p, EpidemicSolver& solver) {
    StarPathPoint out;
    out.j_star = social_cost(Graph::star(n), p, solver);
    out.j_path = social_cost(Graph::path(n), p, solver);
    out.star_over_path = detail::safe_ratio(out.j_star, out.j_path);
    out.path_over_star = detail::safe_ratio(out.j_path, out.j_star);
    out.poa = std::max(out.star_over_path, out.path_over_star);
    return out;
}

// --- closed forms and scalar bounds ------------------------------------------

struct ClosedFormCosts {
    double star = 0;               // high-tau approximation (exact hop/link parts)
    double complete = 0;           // exact for the complete graph
    double complete_minus_star = 0;
};

/**
 * Closed-form social costs of the star and the complete graph. The infection
 * part truncates each v_i to 1 - 1/(tau d_i), which is exact on the complete
 * graph and a high-tau approximation on the star. Guarded by tau(n-1) > 1.
 */
inline ClosedFormCosts closed_form_costs(int n, const GameParams& p) {
    if (n < 2) throw std::invalid_argument("closed_form_costs: needs n >= 2");
    if (!p.no_virus && p.tau * (n - 1) <= 1.0)
        throw std::domain_error("closed_form_costs: requires tau*(n-1) > 1");
    const double N = n;
    const double g = p.zero_gamma ? 0.0 : p.gamma;
    ClosedFormCosts out;
    out.star = p.alpha * (N - 1) + 2 * g * (N - 1) * (N - 1);
    out.complete = p.alpha * N * (N - 1) / 2 + g * N * (N - 1);
    if (!p.no_virus) {
        out.star += N - ((N - 1) * (N - 1) + 1) / (p.tau * (N - 1));
        out.complete += N - N / (p.tau * (N - 1));
    }
    out.complete_minus_star = out.complete - out.star;
    return out;
}

/** Ratio bound 1 + 1/(2(tau(alpha+1) - 1)) on the path-vs-star cost gap. */
inline double corollary2_bound(double alpha, double tau) {
    if (tau * (alpha + 1) <= 1.0) throw std::domain_error("corollary2_bound: requires tau*(alpha+1) > 1");
    return 1.0 + 1.0 / (2.0 * (tau * (alpha + 1) - 1.0));
}

// --- four-regime classifier ---------------------------------------------------

struct RegimeClassification {
    int case_number = 0;   // 1..4, by descending installation cost
    char sub_case = 0;     // 'a'/'b' for cases 1-2 (by gamma*diameter-cap), 0 otherwise
    double t1 = 0;         // alpha >= t1            -> case 1
    double t2 = 0;         // alpha in [t2, t1)      -> case 2
    double t3 = 0;         // alpha in [t3, t2)      -> case 3, below -> case 4
    bool boundary_tie = false;
    std::optional<double> predicted_poa_bound;  // 4/3 for case 3, 1 for case 4
    std::optional<double> predicted_pos;        // 1 for cases 1 and 4
    std::string label;
};

/**
 * Places (alpha, gamma, tau) into the four-regime map. Thresholds are
 * compared with a 1e-6 relative band; inside the band the lower-numbered case
 * wins and boundary_tie is set. Cases 1-2 carry only asymptotic cost-ratio
 * bounds, split into sub-case 'a' (gamma times the diameter cap above 1/2)
 * and 'b' (at or below); cases 3-4 carry the numeric bounds 4/3 and 1.
 */
inline RegimeClassification regime_classify(int n, const GameParams& p) {
    if (n < 3) throw std::invalid_argument("regime_classify: needs n >= 3");
    if (p.tau <= 0) throw std::invalid_argument("regime_classify: tau must be positive");
    const double g = p.zero_gamma ? 0.0 : p.gamma;
    const double a = p.alpha;
    RegimeClassification out;
    out.t1 = 2 * g - 2.0 / (p.tau * (n - 1));
    out.t2 = 2 * g - 1.0 / p.tau;
    out.t3 = g - 1.0 / (p.tau * (n - 1));
    auto band = [](double t) { return 1e-6 * std::max(1.0, std::abs(t)); };
    for (double t : {out.t1, out.t2, out.t3})
        if (std::abs(a - t) <= band(t)) out.boundary_tie = true;

    if (a >= out.t1 - band(out.t1))
        out.case_number = 1;
    else if (a >= out.t2 - band(out.t2))
        out.case_number = 2;
    else if (a >= out.t3 - band(out.t3))
        out.case_number = 3;
    else
        out.case_number = 4;

    if (out.case_number <= 2) {
        double d_cap = static_cast<double>(n);
        if (g > 0)
            d_cap = std::min(std::sqrt(1.0 + (4.0 / g) * (a + 1.0 / (2.0 * p.tau))),
                             static_cast<double>(n));
        out.sub_case = g * d_cap <= 0.5 ? 'b' : 'a';
    }
    if (out.case_number == 3) out.predicted_poa_bound = 4.0 / 3.0;
    if (out.case_number == 4) out.predicted_poa_bound = 1.0;
    if (out.case_number == 1 || out.case_number == 4) out.predicted_pos = 1.0;
    out.label = "case " + std::to_string(out.case_number);
    if (out.sub_case) out.label += out.sub_case;
    return out;
}

// --- structural bound report ---------------------------------------------------

struct StructuralBounds {
    int n = 0;
    int links = 0;
    double social_cost = 0;
    double social_cost_lower_bound = 0;  // hop truncation + inverse-degree infection truncation
    double inv_degree_sum = 0;
    double inv_degree_bound = 0;         // N^2/(2L) + (1/dmin - 1/dmax)(N/2 - 1)
    double infection_sum = 0;
    double infection_lower_bound = 0;    // N - sum 1/(1 + (tau-1) d_i), needs tau > 1
    int diam = 0;
    double diameter_bound = 0;           // equilibrium graphs satisfy diam < this
    double link_count_bound = 0;         // equilibrium graphs satisfy L <= this
};

/**
 * Evaluates both sides of each structural inequality on one graph. The social
 * cost and inverse-degree bounds hold on every connected graph; the diameter
 * and link-count bounds are equilibrium properties and are only reported
 * here. Guarded by connectivity and tau > 1.
 */
inline StructuralBounds structural_bounds(const Graph& g, const GameParams& p,
                                          EpidemicSolver& solver) {
    if (!is_connected(g)) throw std::invalid_argument("structural_bounds: graph must be connected");
    if (p.tau <= 1.0) throw std::domain_error("structural_bounds: requires tau > 1");
    const int n = g.n();
    if (n < 2) throw std::invalid_argument("structural_bounds: needs n >= 2");
    const double N = n;
    const double gam = p.zero_gamma ? 0.0 : p.gamma;

    StructuralBounds out;
    out.n = n;
    out.links = g.link_count();
    out.social_cost = social_cost(g, p, solver);

    int dmin = n, dmax = 0;
    for (int i = 0; i < n; ++i) {
        int d = g.degree(i);
        dmin = std::min(dmin, d);
        dmax = std::max(dmax, d);
        out.inv_degree_sum += 1.0 / d;
        out.infection_lower_bound += 1.0 / (1.0 + (p.tau - 1.0) * d);
    }
    out.infection_lower_bound = N - out.infection_lower_bound;
    out.inv_degree_bound =
        N * N / (2.0 * out.links) + (1.0 / dmin - 1.0 / dmax) * (N / 2.0 - 1.0);

    out.social_cost_lower_bound = 2 * gam * N * (N - 1) + (p.alpha - 2 * gam) * out.links;
    if (!p.no_virus) out.social_cost_lower_bound += N - out.inv_degree_sum / p.tau;
    if (!p.no_virus) out.infection_sum = solver.total_infection(g, p.tau);

    out.diam = diameter(g);
    double d_cap = N;
    if (gam > 0)
        d_cap = std::min(std::sqrt(1.0 + (4.0 / gam) * (p.alpha + 1.0 / (2.0 * p.tau))), N);
    out.diameter_bound = d_cap;
    out.link_count_bound =
        N - 1 + 2.0 * out.diam * gam * N * N / (p.alpha + 1.0 / (2.0 * p.tau));
    return out;
}

}  // namespace vspc
