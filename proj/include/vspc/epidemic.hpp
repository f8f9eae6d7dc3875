#pragma once
// SIS epidemics under the N-intertwined mean-field approximation. The
// metastable infection probabilities solve
//
//     v_i = 1 - 1 / (1 + tau * sum_{j ~ i} v_j),      tau = beta / delta,
//
// and are obtained by iterating that map from the all-ones vector, which
// decreases monotonically onto the largest fixed point. At or below the
// epidemic threshold tau_c = 1 / lambda1 the only fixed point is zero and the
// solver returns exact zeros instead of iteration dust.

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "graph.hpp"

namespace vspc {

struct SolveOptions {
    double tol = 1e-12;               // max-norm fixed-point defect at exit
    std::uint64_t max_iter = 1000000;
};

struct SteadyState {
    std::vector<double> v;
    bool converged = false;
    std::uint64_t iterations = 0;
    double residual = 0.0;

    double total() const {
        double s = 0;
        for (double t : v) s += t;
        return s;
    }
};

namespace detail {

// Cheap two-sided bounds on lambda1: mean degree and sqrt(max degree) from
// below, max degree from above. They classify almost every (graph, tau) pair
// against the threshold without a power iteration.
inline double lambda1_lower_bound(const Graph& g) {
    double mean = 2.0 * g.link_count() / g.n();
    int dmax = 0;
    for (int i = 0; i < g.n(); ++i) dmax = std::max(dmax, g.degree(i));
    return std::max(mean, std::sqrt(static_cast<double>(dmax)));
}

inline double lambda1_upper_bound(const Graph& g) {
    int dmax = 0;
    for (int i = 0; i < g.n(); ++i) dmax = std::max(dmax, g.degree(i));
    return static_cast<double>(dmax);
}

inline SteadyState zero_state(int n) {
    SteadyState s;
    s.v.assign(static_cast<size_t>(n), 0.0);
    s.converged = true;
    return s;
}

inline SteadyState iterate_from_ones(const Graph& g, double tau, const SolveOptions& opts) {
    const auto& adj = g.rows();
    const int n = g.n();
    SteadyState out;
    std::vector<double> v(static_cast<size_t>(n), 1.0);
    std::vector<double> w(static_cast<size_t>(n));
    for (std::uint64_t it = 0; it < opts.max_iter; ++it) {
        double defect = 0.0;
        for (int i = 0; i < n; ++i) {
            double s = 0;
            std::uint64_t m = adj[static_cast<size_t>(i)];
            while (m) {
                int j = std::countr_zero(m);
                s += v[static_cast<size_t>(j)];
                m &= m - 1;
            }
            double next = 1.0 - 1.0 / (1.0 + tau * s);
            w[static_cast<size_t>(i)] = next;
            defect = std::max(defect, std::abs(next - v[static_cast<size_t>(i)]));
        }
        if (defect < opts.tol) {
            // v itself satisfies the defect bound; w would need one more check.
            out.v = v;
            out.converged = true;
            out.iterations = it;
            out.residual = defect;
            return out;
        }
        v.swap(w);
    }
    out.v = v;
    out.converged = false;
    out.iterations = opts.max_iter;
    out.residual = std::numeric_limits<double>::infinity();
    return out;
}

}  // namespace detail

/** tau * lambda1 <= 1 + 1e-12 counts as at-or-below threshold. */
inline constexpr double kThresholdSlack = 1e-12;

/**
 * Metastable steady state for the given effective spreading rate. Uncached;
 * prefer EpidemicSolver when the same graphs recur.
 */
inline SteadyState steady_state(const Graph& g, double tau, const SolveOptions& opts = {}) {
    if (!(tau > 0)) throw std::invalid_argument("steady_state: tau must be positive");
    if (tau * detail::lambda1_upper_bound(g) <= 1.0 + kThresholdSlack)
        return detail::zero_state(g.n());
    if (tau * detail::lambda1_lower_bound(g) <= 1.0 + kThresholdSlack) {
        if (tau * spectral_radius(g) <= 1.0 + kThresholdSlack)
            return detail::zero_state(g.n());
    }
    return detail::iterate_from_ones(g, tau, opts);
}

/** tau_c = 1 / lambda1. Undefined on graphs without links. */
inline double epidemic_threshold(const Graph& g) {
    double lam = spectral_radius(g);
    if (lam <= 1e-12)
        throw std::domain_error("epidemic_threshold: graph has no links, threshold undefined");
    return 1.0 / lam;
}

inline double total_infection(const Graph& g, double tau, const SolveOptions& opts = {}) {
    return steady_state(g, tau, opts).total();
}

/**
 * Explicit Euler integration of dv_i/dt = beta (1 - v_i) sum_{j~i} v_j -
 * delta v_i. Probabilities must stay in [0, 1]; leaving the band by more than
 * 1e-9 aborts (the step size is too coarse for the given rates), smaller
 * excursions are clamped.
 */
inline std::vector<double> transient_solve(const Graph& g, double beta, double delta,
                                           std::vector<double> v, double t_end, double dt = 0.01) {
    if (static_cast<int>(v.size()) != g.n())
        throw std::invalid_argument("transient_solve: initial state has wrong size");
    if (!(dt > 0) || !(t_end >= 0)) throw std::invalid_argument("transient_solve: bad time grid");
    for (double t : v)
        if (t < 0.0 || t > 1.0) throw std::invalid_argument("transient_solve: initial state outside [0,1]");
    const auto& adj = g.rows();
    const int n = g.n();
    std::vector<double> w(static_cast<size_t>(n));
    const long long steps = static_cast<long long>(std::ceil(t_end / dt - 1e-12));
    for (long long s = 0; s < steps; ++s) {
        for (int i = 0; i < n; ++i) {
            double sum = 0;
            std::uint64_t m = adj[static_cast<size_t>(i)];
            while (m) {
                int j = std::countr_zero(m);
                sum += v[static_cast<size_t>(j)];
                m &= m - 1;
            }
            double vi = v[static_cast<size_t>(i)];
            double next = vi + dt * (beta * (1.0 - vi) * sum - delta * vi);
            if (next < -1e-9 || next > 1.0 + 1e-9)
                throw std::runtime_error("transient_solve: step left [0,1], reduce dt");
            w[static_cast<size_t>(i)] = std::min(1.0, std::max(0.0, next));
        }
        v.swap(w);
    }
    return v;
}

/**
 * Caching solver. Steady states are keyed on (adjacency rows, tau) and
 * lambda1 on the rows alone; both maps are guarded by a shared mutex so
 * concurrent workers may share one instance. Scope an instance per workload
 * to keep memory in check (entries are never evicted).
 */
class EpidemicSolver {
public:
    explicit EpidemicSolver(SolveOptions opts = {}) : opts_(opts) {}

    const SolveOptions& options() const { return opts_; }

    std::shared_ptr<const SteadyState> solve(const Graph& g, double tau) {
        {
            std::shared_lock lock(mu_);
            auto it = cache_.find(g.rows());
            if (it != cache_.end()) {
                for (const auto& [t, ss] : it->second.states)
                    if (t == tau) return ss;
            }
        }
        SteadyState computed = solve_uncached(g, tau);
        auto ss = std::make_shared<const SteadyState>(std::move(computed));
        std::unique_lock lock(mu_);
        auto& entry = cache_[g.rows()];
        for (const auto& [t, prev] : entry.states)
            if (t == tau) return prev;  // lost a benign race, results identical
        entry.states.emplace_back(tau, ss);
        return ss;
    }

    double v_node(const Graph& g, double tau, int i) { return solve(g, tau)->v[static_cast<size_t>(i)]; }

    double total_infection(const Graph& g, double tau) { return solve(g, tau)->total(); }

    double lambda1(const Graph& g) {
        {
            std::shared_lock lock(mu_);
            auto it = cache_.find(g.rows());
            if (it != cache_.end() && it->second.lambda1 >= 0) return it->second.lambda1;
        }
        double lam = spectral_radius(g);
        std::unique_lock lock(mu_);
        cache_[g.rows()].lambda1 = lam;
        return lam;
    }

    double threshold(const Graph& g) {
        double lam = lambda1(g);
        if (lam <= 1e-12)
            throw std::domain_error("threshold: graph has no links, threshold undefined");
        return 1.0 / lam;
    }

    void clear() {
        std::unique_lock lock(mu_);
        cache_.clear();
    }

    size_t size() const {
        std::shared_lock lock(mu_);
        return cache_.size();
    }

private:
    struct Entry {
        double lambda1 = -1.0;
        std::vector<std::pair<double, std::shared_ptr<const SteadyState>>> states;
    };

    SteadyState solve_uncached(const Graph& g, double tau) {
        if (!(tau > 0)) throw std::invalid_argument("solve: tau must be positive");
        if (tau * detail::lambda1_upper_bound(g) <= 1.0 + kThresholdSlack)
            return detail::zero_state(g.n());
        if (tau * detail::lambda1_lower_bound(g) <= 1.0 + kThresholdSlack) {
            if (tau * lambda1(g) <= 1.0 + kThresholdSlack) return detail::zero_state(g.n());
        }
        return detail::iterate_from_ones(g, tau, opts_);
    }

    SolveOptions opts_;
    mutable std::shared_mutex mu_;
    std::unordered_map<std::vector<std::uint64_t>, Entry, RowsHash> cache_;
};

}  // namespace vspc
