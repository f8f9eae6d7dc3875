#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "test_util.hpp"
#include "vspc/epidemic.hpp"
#include "vspc/graph.hpp"

using namespace vspc;
using Catch::Approx;

namespace {

/** Max-norm defect of v as a fixed point of v_i = 1 - 1/(1 + tau sum_j a_ij v_j). */
double fixed_point_defect(const Graph& g, double tau, const std::vector<double>& v) {
    double worst = 0;
    for (int i = 0; i < g.n(); ++i) {
        double s = 0;
        for (int j = 0; j < g.n(); ++j)
            if (g.has_link(i, j)) s += v[static_cast<size_t>(j)];
        worst = std::max(worst, std::abs(v[static_cast<size_t>(i)] - (1.0 - 1.0 / (1.0 + tau * s))));
    }
    return worst;
}

}  // namespace

TEST_CASE("regular graphs have the closed-form steady state 1 - 1/(tau d)") {
    struct Case {
        Graph g;
        double tau;
        double d;
    };
    for (const Case& c : {Case{Graph::complete(4), 1.0, 3}, Case{Graph::complete(6), 0.5, 5},
                          Case{Graph::cycle(6), 1.0, 2}, Case{Graph::cycle(8), 2.0, 2},
                          Case{Graph::complete(2), 3.0, 1}}) {
        SteadyState s = steady_state(c.g, c.tau);
        REQUIRE(s.converged);
        const double expect = 1.0 - 1.0 / (c.tau * c.d);
        for (double vi : s.v) CHECK(vi == Approx(expect).margin(1e-10));
    }
}

TEST_CASE("below and at the threshold the state is exactly zero") {
    // K_3: lambda1 = 2, so tau <= 0.5 dies out
    SteadyState s = steady_state(Graph::complete(3), 0.4);
    REQUIRE(s.converged);
    for (double vi : s.v) CHECK(vi == 0.0);

    // star K_{1,4}: lambda1 = 2 exactly; tau = 0.5 sits on the threshold
    SteadyState t = steady_state(Graph::star(5), 0.5);
    REQUIRE(t.converged);
    for (double vi : t.v) CHECK(vi == 0.0);
    CHECK(t.total() == 0.0);

    // barely above the threshold the state is small but nonzero
    SteadyState u = steady_state(Graph::star(5), 0.56);
    REQUIRE(u.converged);
    CHECK(u.total() > 0.0);
}

TEST_CASE("frozen star fixed points") {
    // 6-node star at tau = 1: center 2/3, leaves 2/5
    SteadyState s = steady_state(Graph::star(6), 1.0);
    REQUIRE(s.converged);
    CHECK(s.v[0] == Approx(2.0 / 3.0).margin(1e-10));
    for (int i = 1; i < 6; ++i) CHECK(s.v[static_cast<size_t>(i)] == Approx(0.4).margin(1e-10));
    CHECK(s.total() == Approx(2.0 / 3.0 + 2.0).margin(1e-9));
}

TEST_CASE("epidemic threshold closed forms") {
    CHECK(epidemic_threshold(Graph::star(6)) == Approx(1.0 / std::sqrt(5.0)).margin(1e-9));
    CHECK(epidemic_threshold(Graph::complete(4)) == Approx(1.0 / 3.0).margin(1e-9));
    CHECK(epidemic_threshold(Graph::path(5)) == Approx(1.0 / std::sqrt(3.0)).margin(1e-9));
    CHECK(epidemic_threshold(Graph::cycle(7)) == Approx(0.5).margin(1e-9));
    CHECK_THROWS_AS(epidemic_threshold(Graph(3)), std::domain_error);
}

TEST_CASE("input guards") {
    CHECK_THROWS_AS(steady_state(Graph::complete(3), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(steady_state(Graph::complete(3), -1.0), std::invalid_argument);
    CHECK_THROWS_AS(transient_solve(Graph::complete(3), 1, 1, {0.5, 0.5}, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(transient_solve(Graph::complete(3), 1, 1, {0.5, 0.5, 1.5}, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(transient_solve(Graph::complete(3), 1, 1, {0.5, 0.5, 0.5}, 1.0, -0.1),
                    std::invalid_argument);
}

TEST_CASE("returned iterate satisfies the fixed-point equation to tolerance") {
    std::mt19937_64 rng(777);
    for (int rep = 0; rep < 25; ++rep) {
        int n = 4 + static_cast<int>(rng() % 5);  // 4..8
        Graph g = testutil::random_connected(rng, n, 0.5);
        double tau_c = epidemic_threshold(g);
        double tau = tau_c * (1.3 + 2.0 * testutil::urand(rng));
        SteadyState s = steady_state(g, tau);
        REQUIRE(s.converged);
        REQUIRE(s.residual < 1e-12);
        CHECK(fixed_point_defect(g, tau, s.v) < 1e-11);
        for (double vi : s.v) {
            CHECK(vi > 0.0);
            CHECK(vi < 1.0);
        }
    }
}

TEST_CASE("steady state is monotone in tau and in links") {
    Graph broom = Graph::from_edge_list(6, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {4, 5}});
    SteadyState lo = steady_state(broom, 2.0);
    SteadyState hi = steady_state(broom, 3.0);
    for (int i = 0; i < 6; ++i)
        CHECK(hi.v[static_cast<size_t>(i)] > lo.v[static_cast<size_t>(i)]);

    Graph star = Graph::star(6);
    SteadyState base = steady_state(star, 1.0);
    SteadyState more = steady_state(star.with_link(1, 2), 1.0);
    for (int i = 0; i < 6; ++i)
        CHECK(more.v[static_cast<size_t>(i)] > base.v[static_cast<size_t>(i)]);
}

TEST_CASE("steady state is equivariant under relabeling") {
    std::mt19937_64 rng(31337);
    Graph g = testutil::random_connected(rng, 7, 0.4);
    double tau = 1.5 * epidemic_threshold(g);
    SteadyState s = steady_state(g, tau);
    for (int rep = 0; rep < 10; ++rep) {
        auto perm = testutil::random_perm(rng, 7);
        SteadyState t = steady_state(testutil::relabel(g, perm), tau);
        for (int i = 0; i < 7; ++i)
            REQUIRE(t.v[static_cast<size_t>(perm[static_cast<size_t>(i)])] ==
                    Approx(s.v[static_cast<size_t>(i)]).margin(1e-10));
    }
}

TEST_CASE("transient dynamics settle onto the fixed point") {
    // beta = tau, delta = 1 so the rest state solves the same equation
    Graph k4 = Graph::complete(4);
    std::vector<double> v0(4, 0.5);
    auto v = transient_solve(k4, 1.0, 1.0, v0, 200.0, 0.01);
    for (double vi : v) CHECK(vi == Approx(2.0 / 3.0).margin(1e-6));

    // from a tiny seed above threshold the infection grows to the same branch
    auto w = transient_solve(k4, 1.0, 1.0, {1e-3, 1e-3, 1e-3, 1e-3}, 400.0, 0.01);
    for (double wi : w) CHECK(wi == Approx(2.0 / 3.0).margin(1e-6));

    // below threshold it decays to zero
    auto z = transient_solve(Graph::complete(3), 0.4, 1.0, {0.9, 0.9, 0.9}, 400.0, 0.01);
    for (double zi : z) CHECK(zi == Approx(0.0).margin(1e-6));
}

TEST_CASE("caching solver reuses states and tracks entries") {
    EpidemicSolver solver;
    Graph g = Graph::star(6);
    auto a = solver.solve(g, 1.0);
    auto b = solver.solve(g, 1.0);
    CHECK(a.get() == b.get());  // cache hit returns the same block
    CHECK(solver.size() == 1);

    solver.solve(g, 2.0);
    CHECK(solver.size() == 1);  // same graph, second tau shares the entry

    solver.solve(Graph::path(4), 1.0);
    CHECK(solver.size() == 2);

    CHECK(solver.v_node(g, 1.0, 0) == Approx(2.0 / 3.0).margin(1e-10));
    CHECK(solver.total_infection(g, 1.0) == Approx(2.0 / 3.0 + 2.0).margin(1e-9));
    CHECK(solver.lambda1(g) == Approx(std::sqrt(5.0)).margin(1e-9));
    CHECK(solver.threshold(g) == Approx(1.0 / std::sqrt(5.0)).margin(1e-9));

    solver.clear();
    CHECK(solver.size() == 0);
}
