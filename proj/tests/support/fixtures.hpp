#pragma once

// Small instances and brute-force reference computations shared by the tests.
// The references deliberately avoid the library's algorithms: stationary laws
// come from power iteration, CVaR from integrating the quantile function.

#include "lrcvar/model.hpp"
#include "lrcvar/risk.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace fixtures {

using lrcvar::MdpInstance;
using lrcvar::RewardMode;

/// One state, one self-loop per action, state-action rewards.
inline MdpInstance one_state(std::vector<double> rewards) {
    std::vector<std::string> acts;
    for (std::size_t a = 0; a < rewards.size(); ++a) acts.push_back("a" + std::to_string(a));
    std::vector<double> kernel(rewards.size(), 1.0);
    return MdpInstance("one-state", {"s"}, {acts}, std::move(kernel), RewardMode::state_action,
                       std::move(rewards));
}

/// Deterministic 2-cycle with one action per state.
inline MdpInstance two_cycle(double r0 = 1.0, double r1 = 3.0) {
    return MdpInstance("two-cycle", {"u", "v"}, {{"go"}, {"go"}}, {0.0, 1.0, 1.0, 0.0},
                       RewardMode::state_action, {r0, r1});
}

/// Three states; state 2 is transient under every policy and has two actions
/// that both lead into the absorbing pair {0, 1}.
inline MdpInstance with_transient_state() {
    std::vector<double> kernel = {
        0.5, 0.5, 0.0, // (0,a)
        0.3, 0.7, 0.0, // (1,a)
        1.0, 0.0, 0.0, // (2,a)
        0.0, 1.0, 0.0, // (2,b)
    };
    return MdpInstance("transient", {"0", "1", "2"}, {{"a"}, {"a"}, {"a", "b"}}, std::move(kernel),
                       RewardMode::state_action, {1.0, 2.0, 10.0, 20.0});
}

/// Quantile integral: (1/(1-alpha)) * integral over (alpha,1] of VaR_q dq.
/// Uses the ascending CDF, the reverse of the library's top-down accumulation.
inline double cvar_by_quantiles(std::vector<std::pair<double, double>> atoms, double alpha) {
    std::sort(atoms.begin(), atoms.end());
    if (alpha == 0.0) {
        double m = 0.0;
        for (auto [v, p] : atoms) m += v * p;
        return m;
    }
    double lo = 0.0, integral = 0.0;
    for (auto [v, p] : atoms) {
        const double hi = lo + p;
        const double a = std::max(lo, alpha);
        const double b = std::min(hi, 1.0);
        if (b > a) integral += v * (b - a);
        lo = hi;
    }
    return integral / (1.0 - alpha);
}

/// Stationary state law of a row-stochastic matrix by repeated squaring of
/// the lazy chain (I + P) / 2, which converges for any unichain matrix.
inline std::vector<double> power_stationary(const std::vector<std::vector<double>>& p) {
    const std::size_t n = p.size();
    std::vector<std::vector<double>> m(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m[i][j] = 0.5 * p[i][j] + (i == j ? 0.5 : 0.0);
    }
    for (int it = 0; it < 60; ++it) {
        std::vector<std::vector<double>> sq(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < n; ++k) {
                for (std::size_t j = 0; j < n; ++j) sq[i][j] += m[i][k] * m[k][j];
            }
        }
        for (auto& row : sq) {
            double total = 0.0;
            for (double v : row) total += v;
            for (double& v : row) v /= total;
        }
        m = std::move(sq);
    }
    return m[0];
}

/// Long-run reward atoms of a stationary randomized policy, by power iteration.
inline std::vector<std::pair<double, double>> stationary_reward_atoms(const MdpInstance& mdp,
                                                                     const std::vector<std::vector<double>>& rule) {
    const std::size_t n = mdp.n_states();
    std::vector<std::vector<double>> p(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < mdp.n_actions(i); ++a) {
            for (std::size_t j = 0; j < n; ++j) p[i][j] += rule[i][a] * mdp.transition(mdp.pair(i, a), j);
        }
    }
    const auto pi = power_stationary(p);
    std::vector<std::pair<double, double>> atoms;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < mdp.n_actions(i); ++a) {
            const std::size_t k = mdp.pair(i, a);
            for (std::size_t j = 0; j < n; ++j) {
                const double w = pi[i] * rule[i][a] * mdp.transition(k, j);
                if (w > 0.0) atoms.emplace_back(mdp.reward(k, j), w);
            }
        }
    }
    return atoms;
}

inline double mean_of(const std::vector<std::pair<double, double>>& atoms) {
    double m = 0.0;
    for (auto [v, p] : atoms) m += v * p;
    return m;
}

/// Random distribution with n atoms on a grid of integers, probabilities summing to one.
inline lrcvar::DiscreteDistribution random_distribution(std::mt19937_64& rng, std::size_t n) {
    std::uniform_int_distribution<int> value(-50, 50);
    std::uniform_real_distribution<double> weight(0.01, 1.0);
    std::vector<double> w(n);
    double total = 0.0;
    for (double& x : w) total += (x = weight(rng));
    std::vector<lrcvar::Atom> atoms;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double p = i + 1 == n ? 1.0 - acc : w[i] / total;
        acc += p;
        atoms.push_back({static_cast<double>(value(rng)), p});
    }
    return lrcvar::DiscreteDistribution(std::move(atoms));
}

} // namespace fixtures
