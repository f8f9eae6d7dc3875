#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <set>

#include "test_util.hpp"
#include "vspc/analysis.hpp"

using namespace vspc;
using Catch::Approx;

namespace {

GameParams make(double alpha, double gamma, double tau, bool zero_gamma = false,
                bool no_virus = false) {
    GameParams p;
    p.alpha = alpha;
    p.gamma = gamma;
    p.tau = tau;
    p.zero_gamma = zero_gamma;
    p.no_virus = no_virus;
    return p;
}

std::multiset<int> degree_multiset(const Graph& g) {
    std::multiset<int> out;
    for (int i = 0; i < g.n(); ++i) out.insert(g.degree(i));
    return out;
}

}  // namespace

TEST_CASE("closed-form costs match brute-force evaluation") {
    EpidemicSolver solver;
    GameParams p = make(1, 1, 5);
    ClosedFormCosts cf = closed_form_costs(4, p);

    CHECK(cf.complete == Approx(21.0 + 11.0 / 15.0).margin(1e-9));
    CHECK(cf.star == Approx(24.0 + 1.0 / 3.0).margin(1e-9));
    // the complete-graph expression is exact
    CHECK(cf.complete == Approx(social_cost(Graph::complete(4), p, solver)).margin(1e-9));
    // difference identity: (N-1)(N-2)(alpha/2 - gamma + 1/(tau(N-1)))
    CHECK(cf.complete_minus_star ==
          Approx(3.0 * 2.0 * (0.5 - 1.0 + 1.0 / 15.0)).margin(1e-9));

    // the star expression is a high-tau approximation: its error shrinks as tau grows
    double err5 = std::abs(cf.star - social_cost(Graph::star(4), p, solver));
    GameParams p50 = make(1, 1, 50);
    double err50 = std::abs(closed_form_costs(4, p50).star -
                            social_cost(Graph::star(4), p50, solver));
    CHECK(err5 < 0.1);
    CHECK(err50 < err5 / 5.0);

    // flag variants
    ClosedFormCosts zg = closed_form_costs(4, make(1, 1, 5, true));
    CHECK(zg.complete == Approx(6.0 + 4.0 - 4.0 / 15.0).margin(1e-9));
    ClosedFormCosts nv = closed_form_costs(4, make(1, 1, 5, false, true));
    CHECK(nv.star == Approx(3.0 + 18.0).margin(1e-9));
    CHECK(nv.complete == Approx(6.0 + 12.0).margin(1e-9));

    CHECK_THROWS_AS(closed_form_costs(4, make(1, 1, 0.3)), std::domain_error);
    CHECK_NOTHROW(closed_form_costs(4, make(1, 1, 0.3, false, true)));
    CHECK_THROWS_AS(closed_form_costs(1, p), std::invalid_argument);
}

TEST_CASE("path-vs-star ratio bound evaluates and guards") {
    CHECK(corollary2_bound(1.0, 1.0) == Approx(1.5).margin(1e-12));
    CHECK(corollary2_bound(0.0, 5.2) == Approx(1.0 + 1.0 / 8.4).margin(1e-12));
    CHECK_THROWS_AS(corollary2_bound(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(corollary2_bound(-0.5, 1.9), std::domain_error);
}

TEST_CASE("regime classification") {
    // n = 6, gamma = 1, tau = 5: thresholds t1 = 1.92, t2 = 1.8, t3 = 0.96
    RegimeClassification r1 = regime_classify(6, make(3, 1, 5));
    CHECK(r1.case_number == 1);
    CHECK(r1.t1 == Approx(1.92).margin(1e-12));
    CHECK(r1.t2 == Approx(1.8).margin(1e-12));
    CHECK(r1.t3 == Approx(0.96).margin(1e-12));
    CHECK_FALSE(r1.boundary_tie);
    REQUIRE(r1.predicted_pos.has_value());
    CHECK(*r1.predicted_pos == 1.0);
    CHECK_FALSE(r1.predicted_poa_bound.has_value());
    CHECK(r1.sub_case == 'a');
    CHECK(r1.label == "case 1a");

    RegimeClassification r2 = regime_classify(6, make(1.85, 1, 5));
    CHECK(r2.case_number == 2);
    CHECK_FALSE(r2.predicted_pos.has_value());

    RegimeClassification r3 = regime_classify(6, make(1.0, 1, 5));
    CHECK(r3.case_number == 3);
    REQUIRE(r3.predicted_poa_bound.has_value());
    CHECK(*r3.predicted_poa_bound == Approx(4.0 / 3.0));
    CHECK(r3.sub_case == 0);

    RegimeClassification r4 = regime_classify(6, make(0.5, 1, 5));
    CHECK(r4.case_number == 4);
    REQUIRE(r4.predicted_poa_bound.has_value());
    CHECK(*r4.predicted_poa_bound == 1.0);
    REQUIRE(r4.predicted_pos.has_value());
    CHECK(*r4.predicted_pos == 1.0);

    // sitting on a threshold resolves to the lower case number and flags the tie
    RegimeClassification tie = regime_classify(6, make(1.92, 1, 5));
    CHECK(tie.case_number == 1);
    CHECK(tie.boundary_tie);

    // gamma small enough turns sub-case 'b'
    RegimeClassification rb = regime_classify(6, make(1.0, 0.01, 5));
    CHECK(rb.case_number == 1);
    CHECK(rb.sub_case == 'b');

    // zero-gamma collapses every threshold below zero: alpha >= 0 is case 1
    RegimeClassification rz = regime_classify(6, make(0.0, 7, 5, true));
    CHECK(rz.case_number == 1);
    CHECK(rz.sub_case == 'b');

    CHECK_THROWS_AS(regime_classify(2, make(1, 1, 5)), std::invalid_argument);
    CHECK_THROWS_AS(regime_classify(6, make(1, 1, 0)), std::invalid_argument);
}

TEST_CASE("structural bounds: equalities and generic inequalities") {
    EpidemicSolver solver;
    GameParams p = make(1, 1, 5);

    // inverse-degree bound is tight exactly on stars and regular graphs
    StructuralBounds star = structural_bounds(Graph::star(6), p, solver);
    CHECK(star.inv_degree_sum == Approx(5.2).margin(1e-12));
    CHECK(star.inv_degree_bound == Approx(5.2).margin(1e-12));
    StructuralBounds k6 = structural_bounds(Graph::complete(6), p, solver);
    CHECK(k6.inv_degree_sum == Approx(k6.inv_degree_bound).margin(1e-12));
    StructuralBounds c5 = structural_bounds(Graph::cycle(5), p, solver);
    CHECK(c5.inv_degree_sum == Approx(c5.inv_degree_bound).margin(1e-12));
    StructuralBounds p4 = structural_bounds(Graph::path(4), p, solver);
    CHECK(p4.inv_degree_sum == Approx(3.0).margin(1e-12));
    CHECK(p4.inv_degree_bound > p4.inv_degree_sum + 1e-3);  // strict off the tight shapes

    // social-cost lower bound is tight on the complete graph
    StructuralBounds k5 = structural_bounds(Graph::complete(5), make(1, 1, 2), solver);
    CHECK(k5.social_cost == Approx(k5.social_cost_lower_bound).margin(1e-9));

    // diameter/link-count fields report the equilibrium-property bounds
    CHECK(star.diam == 2);
    CHECK(star.diameter_bound == Approx(std::sqrt(1.0 + 4.0 * 1.1)).margin(1e-12));
    CHECK(star.link_count_bound ==
          Approx(5.0 + 2.0 * 2.0 * 36.0 / 1.1).margin(1e-9));

    // randomized inequality sweep
    std::mt19937_64 rng(2024);
    for (int rep = 0; rep < 30; ++rep) {
        int n = 4 + static_cast<int>(rng() % 5);
        Graph g = testutil::random_connected(rng, n, 0.5);
        GameParams q = make(0.2 + 2 * testutil::urand(rng), 0.2 + testutil::urand(rng),
                            2.0 + 4.0 * testutil::urand(rng));
        StructuralBounds b = structural_bounds(g, q, solver);
        REQUIRE(b.social_cost >= b.social_cost_lower_bound - 1e-9);
        REQUIRE(b.inv_degree_sum <= b.inv_degree_bound + 1e-9);
        REQUIRE(b.infection_sum >= b.infection_lower_bound - 1e-9);
    }

    CHECK_THROWS_AS(structural_bounds(Graph::from_edge_list(4, {{0, 1}, {2, 3}}), p, solver),
                    std::invalid_argument);
    CHECK_THROWS_AS(structural_bounds(Graph::star(4), make(1, 1, 1.0), solver),
                    std::domain_error);
}

TEST_CASE("exhaustive optima: clique below the pivot, star above") {
    EpidemicSolver solver;
    // pivot 2*gamma - 2/(tau(n-1)) with gamma = 1, tau = 5, n = 5: 1.9
    const double pivot = 2.0 - 2.0 / 20.0;
    OptimumResult lo = optimal_social_cost(5, make(0.9 * pivot, 1, 5), solver,
                                           SearchSpace::all_connected);
    CHECK(lo.best == Graph::complete(5));
    CHECK(lo.examined == 728);
    OptimumResult hi = optimal_social_cost(5, make(1.1 * pivot, 1, 5), solver,
                                           SearchSpace::all_connected);
    CHECK(is_star_graph(hi.best));
    CHECK(hi.cost <= social_cost(Graph::complete(5), make(1.1 * pivot, 1, 5), solver) + 1e-12);

    CHECK_THROWS_AS(optimal_social_cost(11, make(1, 1, 5), solver, SearchSpace::trees),
                    std::invalid_argument);
    CHECK_THROWS_AS(optimal_social_cost(8, make(1, 1, 5), solver, SearchSpace::all_connected),
                    std::invalid_argument);
}

TEST_CASE("intermediate tau favors trees between path and star") {
    EpidemicSolver solver;
    // zero-gamma tree optimum: the best infection profile shifts from the
    // path through interior shapes to the star as tau grows
    OptimumResult cat = optimal_social_cost(6, make(1, 0, 1.40, true), solver, SearchSpace::trees);
    CHECK(cat.examined == 1296);
    CHECK_FALSE(is_path_graph(cat.best));
    CHECK_FALSE(is_star_graph(cat.best));
    CHECK(degree_multiset(cat.best) == std::multiset<int>{1, 1, 1, 2, 2, 3});

    OptimumResult broom = optimal_social_cost(6, make(1, 0, 1.51, true), solver, SearchSpace::trees);
    CHECK(degree_multiset(broom.best) == std::multiset<int>{1, 1, 1, 1, 2, 4});

    OptimumResult low = optimal_social_cost(6, make(1, 0, 1.10, true), solver, SearchSpace::trees);
    CHECK(is_path_graph(low.best));
    OptimumResult high = optimal_social_cost(6, make(1, 0, 2.50, true), solver, SearchSpace::trees);
    CHECK(is_star_graph(high.best));
}

TEST_CASE("tree extremes with tie counting") {
    EpidemicSolver solver;

    // tau well above every tree threshold: star min, path max
    TreeExtremes high = tree_extremes(6, make(1, 0, 5, true), solver);
    CHECK(high.examined == 1296);
    CHECK(is_star_graph(high.min_tree));
    CHECK(high.min_ties == 6);
    CHECK(is_path_graph(high.max_tree));
    CHECK(high.max_ties == 360);

    // just above the star threshold only the star is infected: unique max shape
    TreeExtremes star_only = tree_extremes(6, make(1, 0, 1.0 / std::sqrt(5.0) + 0.01, true), solver);
    CHECK(is_star_graph(star_only.max_tree));
    CHECK(star_only.max_ties == 6);
    CHECK(star_only.min_cost == Approx(5.0).margin(1e-12));  // alpha * 5, zero infection
    CHECK(star_only.min_ties == 1296 - 6);

    // just below the path threshold only the path escapes infection: unique min shape
    TreeExtremes path_zero =
        tree_extremes(6, make(1, 0, 1.0 / (2.0 * std::cos(M_PI / 7.0)) - 0.01, true), solver);
    CHECK(is_path_graph(path_zero.min_tree));
    CHECK(path_zero.min_ties == 360);
    CHECK(path_zero.min_cost == Approx(5.0).margin(1e-12));

    CHECK_THROWS_AS(tree_extremes(2, make(1, 0, 5, true), solver), std::invalid_argument);
    CHECK_THROWS_AS(tree_extremes(10, make(1, 0, 5, true), solver), std::invalid_argument);
}

TEST_CASE("equilibrium scan and exact poa/pos at n = 5") {
    EpidemicSolver solver;
    GameParams p = make(1, 0, 5, true);

    EquilibriumScan scan = scan_equilibria(5, p, solver);
    CHECK(scan.graphs == 728);
    // zero-gamma: every equilibrium graph is a tree and every tree has one
    CHECK(scan.ne_graphs.size() == 125);
    for (const Graph& g : scan.ne_graphs) REQUIRE(is_tree(g));
    CHECK(scan.no_ne_trees.empty());

    PoaResult pr = poa_pos(5, p, solver);
    CHECK(pr.equilibrium_graphs == 125);
    CHECK(is_star_graph(pr.optimum));
    CHECK(is_star_graph(pr.best_equilibrium));
    CHECK(is_path_graph(pr.worst_equilibrium));
    CHECK(pr.pos == Approx(1.0).margin(1e-9));
    const double j_star = social_cost(Graph::star(5), p, solver);
    const double j_path = social_cost(Graph::path(5), p, solver);
    CHECK(pr.poa == Approx(j_path / j_star).margin(1e-9));
    CHECK(pr.poa >= pr.pos - 1e-12);
    CHECK(pr.pos >= 1.0 - 1e-12);

    StarPathPoint sp = star_path_point(5, p, solver);
    CHECK(sp.j_star == Approx(j_star).margin(1e-12));
    CHECK(sp.j_path == Approx(j_path).margin(1e-12));
    CHECK(sp.poa == Approx(pr.poa).margin(1e-9));

    CHECK_THROWS_AS(scan_equilibria(6, p, solver), std::invalid_argument);
}

TEST_CASE("ratio conventions when a tree cost vanishes") {
    EpidemicSolver solver;
    // alpha = 0, zero-gamma, below both tree thresholds: both costs are zero
    GameParams p0 = make(0, 0, 0.30, true);
    StarPathPoint both_zero = star_path_point(4, p0, solver);
    CHECK(both_zero.j_star == 0.0);
    CHECK(both_zero.j_path == 0.0);
    CHECK(both_zero.poa == 1.0);

    // between the thresholds the star is infected, the path is not
    GameParams p1 = make(0, 0, 0.60, true);
    StarPathPoint one_sided = star_path_point(4, p1, solver);
    CHECK(one_sided.j_path == 0.0);
    CHECK(one_sided.j_star > 0.0);
    CHECK(std::isinf(one_sided.star_over_path));
    CHECK(one_sided.path_over_star == 0.0);
}
