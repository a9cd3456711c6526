#include "lrcvar/evaluate.hpp"

#include "lrcvar/chains.hpp"
#include "lrcvar/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <thread>

namespace lrcvar {

CvarSequence cvar_sequence(const MdpInstance& mdp, const MarkovPolicy& policy, std::size_t s0,
                           std::size_t horizon, double alpha) {
    if (horizon == 0) throw InputError("horizon must be at least 1");
    if (const auto* td = std::get_if<TimeDependentPolicy>(&policy); td != nullptr && horizon > td->horizon()) {
        throw InputError("requested " + std::to_string(horizon) + " steps but the policy horizon is " +
                         std::to_string(td->horizon()));
    }
    CvarSequence seq;
    seq.alpha = alpha;
    seq.initial_state = s0;
    seq.policy = std::holds_alternative<StationaryPolicy>(policy) ? "stationary"
                                                                  : std::get<TimeDependentPolicy>(policy).description();
    seq.per_step.reserve(horizon);
    seq.cesaro.reserve(horizon);
    ForwardEvolution evo(mdp, policy, s0);
    double sum = 0.0;
    for (std::size_t t = 0; t < horizon; ++t) {
        if (t > 0) evo.advance();
        const double c = cvar_right(reward_distribution(mdp, evo.pair_mass()), alpha);
        seq.per_step.push_back(c);
        sum += c;
        seq.cesaro.push_back(sum / static_cast<double>(t + 1));
    }
    return seq;
}

LimitEstimate limsup_liminf_estimate(const CvarSequence& seq, std::size_t window) {
    if (window == 0 || window > seq.cesaro.size()) {
        throw InputError("window must lie in [1, T]");
    }
    const auto first = seq.cesaro.end() - static_cast<std::ptrdiff_t>(window);
    const auto [lo, hi] = std::minmax_element(first, seq.cesaro.end());
    return {*hi, *lo, window};
}

std::size_t example1_block(std::uint64_t t) {
    // block k ends just before (3^(k+1) - 1) / 2
    std::size_t k = 0;
    std::uint64_t end = 1;
    std::uint64_t len = 1;
    while (t >= end) {
        len *= 3;
        end += len;
        ++k;
    }
    return k;
}

TimeDependentPolicy example1_policy(std::size_t horizon) {
    if (horizon == 0) throw InputError("horizon must be at least 1");
    return TimeDependentPolicy(
        horizon,
        [](std::size_t t) {
            const bool to_first = example1_block(t + 1) % 2 == 0;
            // s1: (stay, move); s2: (move, stay)
            return StationaryPolicy({to_first ? std::vector<double>{1.0, 0.0} : std::vector<double>{0.0, 1.0},
                                     to_first ? std::vector<double>{1.0, 0.0} : std::vector<double>{0.0, 1.0}});
        },
        "example1");
}

double example1_cumulative(std::uint64_t t) {
    const std::size_t k = example1_block(t);
    // blocks 0..k-1 contribute 2 * sum (-3)^b = (1 - (-3)^k) / 2
    const double full = (1.0 - std::pow(-3.0, static_cast<double>(k))) / 2.0;
    const double start = (std::pow(3.0, static_cast<double>(k)) - 1.0) / 2.0;
    const double inside = static_cast<double>(t) - start + 1.0;
    return full + (k % 2 == 0 ? 2.0 : -2.0) * inside;
}

namespace {

// Cumulative action probabilities per state for one rule.
std::vector<std::vector<double>> cumulative_rule(const MdpInstance& mdp, const StationaryPolicy& d) {
    std::vector<std::vector<double>> cum(mdp.n_states());
    for (std::size_t i = 0; i < mdp.n_states(); ++i) {
        double c = 0.0;
        for (std::size_t a = 0; a < mdp.n_actions(i); ++a) {
            c += d(i, a);
            cum[i].push_back(c);
        }
    }
    return cum;
}

std::size_t draw(const std::vector<double>& cum, double u) {
    const double target = u * cum.back();
    const auto it = std::upper_bound(cum.begin(), cum.end(), target);
    return std::min(static_cast<std::size_t>(it - cum.begin()), cum.size() - 1);
}

} // namespace

MonteCarloResult monte_carlo_eval(const MdpInstance& mdp, const MarkovPolicy& policy, std::size_t s0,
                                  std::size_t horizon, std::size_t replications, std::uint64_t seed,
                                  double alpha, unsigned threads) {
    if (replications == 0) throw InputError("replications must be at least 1");
    if (horizon == 0) throw InputError("horizon must be at least 1");
    if (s0 >= mdp.n_states()) throw InputError("initial state index out of range");

    std::vector<std::vector<std::vector<double>>> rules;
    if (const auto* sp = std::get_if<StationaryPolicy>(&policy)) {
        if (!validate(mdp, *sp).ok()) throw InputError("invalid policy");
        rules.push_back(cumulative_rule(mdp, *sp));
    } else {
        const auto& td = std::get<TimeDependentPolicy>(policy);
        if (horizon > td.horizon()) throw InputError("horizon exceeds the policy horizon");
        for (std::size_t t = 0; t < horizon; ++t) rules.push_back(cumulative_rule(mdp, td.rule(t)));
    }
    std::vector<std::vector<double>> kernel_cum(mdp.n_pairs());
    for (std::size_t k = 0; k < mdp.n_pairs(); ++k) {
        double c = 0.0;
        for (double p : mdp.kernel_row(k)) kernel_cum[k].push_back(c += p);
    }

    MonteCarloResult out;
    out.values = breakpoints(mdp).values;
    out.replications = replications;
    const auto value_index = [&](double r) {
        return static_cast<std::size_t>(std::lower_bound(out.values.begin(), out.values.end(), r) - out.values.begin());
    };

    if (threads == 0) threads = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, replications));
    std::vector<std::vector<std::uint64_t>> partial(threads,
                                                    std::vector<std::uint64_t>(horizon * out.values.size(), 0));
    const auto work = [&](unsigned w) {
        auto& hist = partial[w];
        for (std::size_t r = w; r < replications; r += threads) {
            std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                              static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(r >> 32)};
            std::mt19937_64 rng(seq);
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            std::size_t s = s0;
            for (std::size_t t = 0; t < horizon; ++t) {
                const auto& rule = rules[rules.size() == 1 ? 0 : t];
                const std::size_t a = draw(rule[s], unit(rng));
                const std::size_t k = mdp.pair(s, a);
                const std::size_t j = draw(kernel_cum[k], unit(rng));
                ++hist[t * out.values.size() + value_index(mdp.reward(k, j))];
                s = j;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < threads; ++w) pool.emplace_back(work, w);
    work(0);
    for (auto& th : pool) th.join();

    out.counts.assign(horizon, std::vector<std::uint64_t>(out.values.size(), 0));
    for (const auto& hist : partial) {
        for (std::size_t t = 0; t < horizon; ++t) {
            for (std::size_t v = 0; v < out.values.size(); ++v) out.counts[t][v] += hist[t * out.values.size() + v];
        }
    }
    for (std::size_t t = 0; t < horizon; ++t) {
        std::vector<Atom> atoms;
        for (std::size_t v = 0; v < out.values.size(); ++v) {
            if (out.counts[t][v] > 0) {
                atoms.push_back({out.values[v], static_cast<double>(out.counts[t][v]) / static_cast<double>(replications)});
            }
        }
        out.cvar.push_back(cvar_right(DiscreteDistribution(std::move(atoms)), alpha));
    }
    return out;
}

GapBound lemma2_gap(const MdpInstance& mdp, const StationaryPolicy& d, std::size_t s0, std::size_t t,
                    double alpha) {
    const OccupationMeasure pi = stationary_distribution(mdp, d);
    const std::vector<double> pt = t_step_distribution(mdp, d, s0, t);
    const auto [lo, hi] = mdp.reward_bounds();
    double tv = 0.0;
    for (std::size_t k = 0; k < pt.size(); ++k) tv += std::abs(pt[k] - pi[k]);
    GapBound g;
    g.gap = std::abs(cvar_right(reward_distribution(mdp, pt), alpha) - cvar_right(reward_distribution(mdp, pi), alpha));
    g.bound = (hi - lo) / (1.0 - alpha) * tv;
    return g;
}

void write_sequence_csv(const CvarSequence& seq, std::ostream& out) {
    out << "t,cvar_t,cesaro_t\n" << std::setprecision(17);
    for (std::size_t t = 0; t < seq.per_step.size(); ++t) {
        out << t << ',' << seq.per_step[t] << ',' << seq.cesaro[t] << '\n';
    }
}

} // namespace lrcvar
