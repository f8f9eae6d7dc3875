#pragma once
// Network formation game against an SIS epidemic. Each node i pays
//
//     J_i = alpha * k_i + gamma * sum_j h(i, j) + v_i,
//
// where k_i counts the links i installed (and is the only thing i controls),
// h is the hopcount and v_i the metastable infection probability. A strategy
// is the set of links a node pays for; nobody can remove a link somebody else
// installed. In the zero-gamma variant the hop term is dropped exactly and
// connectivity becomes a hard constraint (disconnection costs +infinity).

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "epidemic.hpp"
#include "graph.hpp"

namespace vspc {

inline constexpr double kInfiniteCost = std::numeric_limits<double>::infinity();

/** Which endpoint pays for each link. Owners are always link endpoints. */
class OwnershipProfile {
public:
    OwnershipProfile() = default;
    explicit OwnershipProfile(int n) : owned_(static_cast<size_t>(n), 0) {}

    int n() const { return static_cast<int>(owned_.size()); }

    bool owns(int i, int j) const { return owned_[static_cast<size_t>(i)] >> j & 1u; }

    /** Endpoint that pays for {u, v}, or -1 if the link is unclaimed. */
    int owner_of(int u, int v) const {
        if (owns(u, v)) return u;
        if (owns(v, u)) return v;
        return -1;
    }

    std::uint64_t owned_mask(int i) const { return owned_[static_cast<size_t>(i)]; }

    int owned_count(int i) const { return std::popcount(owned_[static_cast<size_t>(i)]); }

    void claim(int owner, int other) {
        if (owner == other) throw std::invalid_argument("ownership: self-link");
        owned_[static_cast<size_t>(owner)] |= std::uint64_t{1} << other;
        owned_[static_cast<size_t>(other)] &= ~(std::uint64_t{1} << owner);
    }

    void release(int u, int v) {
        owned_[static_cast<size_t>(u)] &= ~(std::uint64_t{1} << v);
        owned_[static_cast<size_t>(v)] &= ~(std::uint64_t{1} << u);
    }

    /** Every link of g must have exactly one owning endpoint, and nothing else may be claimed. */
    void validate_against(const Graph& g) const {
        if (g.n() != n()) throw std::invalid_argument("ownership: node count mismatch");
        for (int i = 0; i < n(); ++i) {
            std::uint64_t m = owned_[static_cast<size_t>(i)];
            while (m) {
                int j = std::countr_zero(m);
                m &= m - 1;
                if (!g.has_link(i, j))
                    throw std::invalid_argument("ownership: claim on absent link " + std::to_string(i) +
                                                "-" + std::to_string(j));
                if (owns(j, i))
                    throw std::invalid_argument("ownership: link " + std::to_string(i) + "-" +
                                                std::to_string(j) + " claimed by both endpoints");
            }
        }
        for (auto [u, v] : g.links())
            if (owner_of(u, v) < 0)
                throw std::invalid_argument("ownership: link " + std::to_string(u) + "-" +
                                            std::to_string(v) + " has no owner");
    }

    bool operator==(const OwnershipProfile& o) const { return owned_ == o.owned_; }

private:
    std::vector<std::uint64_t> owned_;
};

/** Each link paid for by its lower-indexed endpoint. */
inline OwnershipProfile min_endpoint_ownership(const Graph& g) {
    OwnershipProfile own(g.n());
    for (auto [u, v] : g.links()) own.claim(u, v);
    return own;
}

/** Every link paid for by node i; valid only when all links touch i (stars). */
inline OwnershipProfile single_payer_ownership(const Graph& g, int i) {
    OwnershipProfile own(g.n());
    for (auto [u, v] : g.links()) {
        if (u != i && v != i)
            throw std::invalid_argument("single_payer_ownership: link not incident to payer");
        own.claim(i, u == i ? v : u);
    }
    return own;
}

/** Path 0-1-...-(n-1) with each link paid for by its higher-indexed endpoint. */
inline OwnershipProfile path_successor_ownership(int n) {
    OwnershipProfile own(n);
    for (int i = 1; i < n; ++i) own.claim(i, i - 1);
    return own;
}

struct GameParams {
    double alpha = 1.0;
    double gamma = 1.0;
    double tau = 2.0;
    bool zero_gamma = false;        // drop the hop term exactly; connectivity still mandatory
    bool no_virus = false;          // infection term forced to zero (no epidemic solve)
    double improvement_epsilon = 1e-9;
    SolveOptions solve{};
};

struct CostBreakdown {
    double link_cost = 0;
    double hop_cost = 0;
    double infection = 0;
    double total = 0;
    bool is_finite = true;
};

namespace detail {

/** Player total with an explicit installed-link count; +inf when i cannot reach everyone. */
inline double player_total(const Graph& g, int i, int owned_count, const GameParams& p,
                           EpidemicSolver& solver) {
    HopRow hr = hop_row(g, i);
    if (hr.reached != g.n()) return kInfiniteCost;
    double c = p.alpha * owned_count;
    if (!p.zero_gamma) c += p.gamma * static_cast<double>(hr.sum);
    if (!p.no_virus) c += solver.v_node(g, p.tau, i);
    return c;
}

}  // namespace detail

inline CostBreakdown player_cost(const Graph& g, const OwnershipProfile& own, int i,
                                 const GameParams& p, EpidemicSolver& solver) {
    CostBreakdown out;
    out.link_cost = p.alpha * own.owned_count(i);
    HopRow hr = hop_row(g, i);
    if (hr.reached != g.n()) {
        out.is_finite = false;
        out.hop_cost = p.zero_gamma ? 0.0 : kInfiniteCost;
        out.infection = 0.0;  // not computed: the total is already infinite
        out.total = kInfiniteCost;
        return out;
    }
    out.hop_cost = p.zero_gamma ? 0.0 : p.gamma * static_cast<double>(hr.sum);
    out.infection = p.no_virus ? 0.0 : solver.v_node(g, p.tau, i);
    out.total = out.link_cost + out.hop_cost + out.infection;
    return out;
}

struct SocialBreakdown {
    int links = 0;
    long long hop_sum = 0;        // over ordered pairs
    double infection_sum = 0;
    double total = 0;
    bool connected = true;
};

inline SocialBreakdown social_cost_parts(const Graph& g, const GameParams& p, EpidemicSolver& solver) {
    SocialBreakdown out;
    out.links = g.link_count();
    for (int i = 0; i < g.n(); ++i) {
        HopRow hr = hop_row(g, i);
        if (hr.reached != g.n()) {
            out.connected = false;
            out.total = kInfiniteCost;
            return out;
        }
        out.hop_sum += hr.sum;
    }
    if (!p.no_virus) out.infection_sum = solver.total_infection(g, p.tau);
    out.total = p.alpha * out.links + out.infection_sum;
    if (!p.zero_gamma) out.total += p.gamma * static_cast<double>(out.hop_sum);
    return out;
}

/** Ownership-independent sum of all player costs; +inf if disconnected. */
inline double social_cost(const Graph& g, const GameParams& p, EpidemicSolver& solver) {
    return social_cost_parts(g, p, solver).total;
}

/** Endpoints i may link to in a deviation: absent links plus links i already pays for. */
inline std::uint64_t deviation_candidates(const Graph& g, const OwnershipProfile& own, int i) {
    std::uint64_t all = ((g.n() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << g.n()) - 1)) &
                        ~(std::uint64_t{1} << i);
    std::uint64_t absent = all & ~g.neighbors(i);
    return absent | own.owned_mask(i);
}

inline std::uint64_t deviation_count(const Graph& g, const OwnershipProfile& own, int i) {
    return std::uint64_t{1} << std::popcount(deviation_candidates(g, own, i));
}

struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(const std::string& msg) : std::runtime_error(msg) {}
};

struct Deviation {
    int player = -1;
    std::uint64_t links = 0;  // bitmask of counterparts the player would pay for
    double cost_delta = 0;
};

struct EquilibriumReport {
    bool exact_ne = false;
    bool ad_stable = false;
    std::uint64_t deviations_checked = 0;
    std::optional<Deviation> best_deviation;
};

namespace detail {

/** Graph after player i replaces its installed set by `links`. */
inline Graph apply_strategy(const Graph& g, const OwnershipProfile& own, int i, std::uint64_t links) {
    Graph out = g;
    std::uint64_t drop = own.owned_mask(i) & ~links;
    std::uint64_t add = links & ~own.owned_mask(i);
    while (drop) {
        int j = std::countr_zero(drop);
        out.remove_link(i, j);
        drop &= drop - 1;
    }
    while (add) {
        int j = std::countr_zero(add);
        out.add_link(i, j);
        add &= add - 1;
    }
    return out;
}

}  // namespace detail

/** True when no single-link drop (by its owner) or add (by either endpoint) pays off. */
inline bool is_ad_stable(const Graph& g, const OwnershipProfile& own, const GameParams& p,
                         EpidemicSolver& solver) {
    const double eps = p.improvement_epsilon;
    for (auto [u, v] : g.links()) {
        int o = own.owner_of(u, v);
        double before = detail::player_total(g, o, own.owned_count(o), p, solver);
        double after = detail::player_total(g.without_link(u, v), o, own.owned_count(o) - 1, p, solver);
        if (after < before - eps) return false;
    }
    for (int u = 0; u < g.n(); ++u) {
        for (int v = u + 1; v < g.n(); ++v) {
            if (g.has_link(u, v)) continue;
            Graph g2 = g.with_link(u, v);
            for (int payer : {u, v}) {
                double before = detail::player_total(g, payer, own.owned_count(payer), p, solver);
                double after = detail::player_total(g2, payer, own.owned_count(payer) + 1, p, solver);
                if (after < before - eps) return false;
            }
        }
    }
    return true;
}

/**
 * Exhaustive Nash check: every player, every subset of its candidate set.
 * Throws BudgetExceeded before starting if the total deviation count would
 * pass `budget`. With `stop_at_first_improvement` the scan stops at the first
 * profitable deviation instead of hunting for the best one.
 */
inline EquilibriumReport is_nash_exact(const Graph& g, const OwnershipProfile& own,
                                       const GameParams& p, EpidemicSolver& solver,
                                       std::uint64_t budget = 10000000,
                                       bool stop_at_first_improvement = false) {
    own.validate_against(g);
    const int n = g.n();
    const double eps = p.improvement_epsilon;

    double total = 0;
    for (int i = 0; i < n; ++i)
        total += std::ldexp(1.0, std::popcount(deviation_candidates(g, own, i)));
    if (total > static_cast<double>(budget))
        throw BudgetExceeded("is_nash_exact: " + std::to_string(static_cast<long long>(total)) +
                             " deviations exceed budget " + std::to_string(budget));

    EquilibriumReport rep;
    rep.exact_ne = true;
    for (int i = 0; i < n && !(stop_at_first_improvement && !rep.exact_ne); ++i) {
        const std::uint64_t cand = deviation_candidates(g, own, i);
        const std::uint64_t current = own.owned_mask(i);
        const double j_cur = detail::player_total(g, i, own.owned_count(i), p, solver);
        std::uint64_t s = cand;
        while (true) {
            if (s != current) {
                ++rep.deviations_checked;
                Graph g2 = detail::apply_strategy(g, own, i, s);
                double j_dev = detail::player_total(g2, i, std::popcount(s), p, solver);
                bool improving;
                double delta;
                if (std::isinf(j_cur)) {
                    improving = !std::isinf(j_dev);
                    delta = improving ? -kInfiniteCost : 0.0;
                } else {
                    delta = j_dev - j_cur;
                    improving = delta < -eps;
                }
                if (improving) {
                    rep.exact_ne = false;
                    if (!rep.best_deviation || delta < rep.best_deviation->cost_delta)
                        rep.best_deviation = Deviation{i, s, delta};
                    if (stop_at_first_improvement) break;
                }
            }
            if (!s) break;
            s = (s - 1) & cand;
        }
    }
    rep.ad_stable = rep.exact_ne ? true : is_ad_stable(g, own, p, solver);
    return rep;
}

// --- asynchronous drop/add best-response dynamics ---------------------------

enum class DynamicsStatus { converged, slot_budget };

struct ActionEvent {
    int slot = 0;
    int node = 0;
    char action = 'N';     // 'D' drop, 'A' add, 'N' no action this turn
    int counterpart = -1;
    double j_before = 0;
    double j_after = 0;
};

struct DynamicsState {
    Graph graph;
    OwnershipProfile ownership;
};

struct DynamicsResult {
    std::vector<DynamicsState> states;  // states[0] initial, states[k] after slot k
    std::vector<ActionEvent> events;
    DynamicsStatus status = DynamicsStatus::slot_budget;
    int slots_used = 0;

    const DynamicsState& terminal() const { return states.back(); }
};

namespace detail {

class SplitMixUniform {
public:
    explicit SplitMixUniform(std::uint64_t seed) : state_(seed) {}

    // splitmix64; platform-independent unlike the <random> distributions
    double next() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        z ^= z >> 31;
        return static_cast<double>(z >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

}  // namespace detail

/**
 * Seeded connected start graph, then slots of node turns in index order. Each
 * turn the node applies its best single-link drop (among links it pays for),
 * then its best single-link add, each only when it strictly lowers J_i. Ties
 * go to the lowest counterpart index. A full slot without any action is
 * convergence; otherwise the run stops after t_max slots.
 */
inline DynamicsResult run_dynamics(int n, const GameParams& p, std::uint64_t seed,
                                   double p_init, int t_max, EpidemicSolver& solver) {
    if (n < 2 || n > kMaxNodes) throw std::invalid_argument("run_dynamics: bad node count");
    if (!(p_init > 0.0) || !(p_init < 1.0))
        throw std::invalid_argument("run_dynamics: p_init must be in (0, 1)");
    detail::SplitMixUniform rng(seed);

    Graph g(n);
    while (true) {
        g = Graph(n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng.next() < p_init) g.add_link(i, j);
        if (is_connected(g)) break;
    }
    OwnershipProfile own(n);
    for (auto [u, v] : g.links()) {
        int payer = rng.next() < 0.5 ? u : v;
        own.claim(payer, payer == u ? v : u);
    }

    DynamicsResult out;
    out.states.push_back({g, own});

    const double eps = p.improvement_epsilon;
    for (int slot = 1; slot <= t_max; ++slot) {
        bool acted = false;
        for (int i = 0; i < n; ++i) {
            bool node_acted = false;
            // drop phase
            {
                double before = detail::player_total(g, i, own.owned_count(i), p, solver);
                int best_j = -1;
                double best_after = before - eps;
                std::uint64_t m = own.owned_mask(i);
                while (m) {
                    int j = std::countr_zero(m);
                    m &= m - 1;
                    double after =
                        detail::player_total(g.without_link(i, j), i, own.owned_count(i) - 1, p, solver);
                    if (after < best_after) {
                        best_after = after;
                        best_j = j;
                    }
                }
                if (best_j >= 0) {
                    g.remove_link(i, best_j);
                    own.release(i, best_j);
                    out.events.push_back({slot, i, 'D', best_j, before, best_after});
                    node_acted = acted = true;
                }
            }
            // add phase, on the possibly-updated graph
            {
                double before = detail::player_total(g, i, own.owned_count(i), p, solver);
                int best_j = -1;
                double best_after = std::isinf(before) ? kInfiniteCost : before - eps;
                for (int j = 0; j < n; ++j) {
                    if (j == i || g.has_link(i, j)) continue;
                    double after =
                        detail::player_total(g.with_link(i, j), i, own.owned_count(i) + 1, p, solver);
                    if (after < best_after) {
                        best_after = after;
                        best_j = j;
                    }
                }
                if (best_j >= 0) {
                    g.add_link(i, best_j);
                    own.claim(i, best_j);
                    out.events.push_back({slot, i, 'A', best_j, before, best_after});
                    node_acted = acted = true;
                }
            }
            if (!node_acted) {
                double j_now = detail::player_total(g, i, own.owned_count(i), p, solver);
                out.events.push_back({slot, i, 'N', -1, j_now, j_now});
            }
        }
        out.states.push_back({g, own});
        out.slots_used = slot;
        if (!acted) {
            out.status = DynamicsStatus::converged;
            return out;
        }
    }
    out.status = DynamicsStatus::slot_budget;
    return out;
}

}  // namespace vspc
