#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace lrcvar {

/// How rewards are attached to transitions.
enum class RewardMode {
    state_action, ///< r(i,a)
    next_state,   ///< r(i,a,j), depends on the state reached
};

/**
 * Finite MDP: states, per-state admissible actions, transition kernel and
 * rewards.
 *
 * State-action pairs are numbered state-major: all actions of state 0, then
 * state 1, and so on. Most of the library addresses pairs by this index.
 * The kernel is stored densely as one row of length n_states() per pair.
 * In next-state reward mode rewards use the same layout; an entry may be NaN
 * when the corresponding transition has probability zero.
 *
 * Instances are immutable once built and safe to share across threads.
 * Construction only checks shapes; probabilistic invariants are reported by
 * validate().
 */
class MdpInstance {
  public:
    MdpInstance(std::string name, std::vector<std::string> states,
                std::vector<std::vector<std::string>> actions, std::vector<double> kernel,
                RewardMode mode, std::vector<double> rewards);

    const std::string& name() const noexcept { return name_; }

    std::size_t n_states() const noexcept { return states_.size(); }
    std::size_t n_pairs() const noexcept { return pair_state_.size(); }
    std::size_t n_actions(std::size_t state) const { return actions_.at(state).size(); }

    const std::vector<std::string>& states() const noexcept { return states_; }
    const std::vector<std::string>& actions(std::size_t state) const { return actions_.at(state); }
    const std::vector<std::vector<std::string>>& action_sets() const noexcept { return actions_; }

    std::optional<std::size_t> state_index(const std::string& state) const;
    std::optional<std::size_t> action_index(std::size_t state, const std::string& action) const;

    /// First pair index of a state; pairs of state i are [pair_begin(i), pair_begin(i+1)).
    std::size_t pair_begin(std::size_t state) const { return pair_begin_.at(state); }
    std::size_t pair(std::size_t state, std::size_t action) const {
        return pair_begin_.at(state) + action;
    }
    std::size_t pair_state(std::size_t pair) const { return pair_state_.at(pair); }
    std::size_t pair_action(std::size_t pair) const { return pair - pair_begin_[pair_state_.at(pair)]; }

    double transition(std::size_t pair, std::size_t next) const {
        return kernel_[pair * n_states() + next];
    }
    std::span<const double> kernel_row(std::size_t pair) const {
        return {kernel_.data() + pair * n_states(), n_states()};
    }
    std::span<const double> kernel() const noexcept { return kernel_; }

    RewardMode reward_mode() const noexcept { return mode_; }
    bool future_state_rewards() const noexcept { return mode_ == RewardMode::next_state; }

    /// Reward of a transition. In state-action mode the next state is ignored.
    double reward(std::size_t pair, std::size_t next) const {
        return mode_ == RewardMode::state_action ? rewards_[pair] : rewards_[pair * n_states() + next];
    }
    /// r(i,a) in state-action mode; sum_j P(j|i,a) r(i,a,j) otherwise.
    double expected_reward(std::size_t pair) const;
    std::span<const double> rewards() const noexcept { return rewards_; }

    /// Smallest and largest reward among transitions that can occur.
    std::pair<double, double> reward_bounds() const;

    /// Calls f(next, probability, reward) for every next state with positive probability.
    template <typename F> void for_each_outcome(std::size_t pair, F&& f) const {
        const auto row = kernel_row(pair);
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (row[j] > 0.0) f(j, row[j], reward(pair, j));
        }
    }

    /// Number of deterministic policies, saturating at UINT64_MAX.
    std::uint64_t n_deterministic_policies() const noexcept;

    friend bool operator==(const MdpInstance& a, const MdpInstance& b);

  private:
    std::string name_;
    std::vector<std::string> states_;
    std::vector<std::vector<std::string>> actions_;
    std::vector<double> kernel_;
    RewardMode mode_;
    std::vector<double> rewards_;
    std::vector<std::size_t> pair_begin_;
    std::vector<std::size_t> pair_state_;
};

/// One admissible action per state, stored as the local action index.
struct DeterministicPolicy {
    std::vector<std::size_t> choice;

    friend bool operator==(const DeterministicPolicy&, const DeterministicPolicy&) = default;
};

/// Stationary randomized policy d(a|i), indexed by state then local action.
class StationaryPolicy {
  public:
    StationaryPolicy() = default;
    explicit StationaryPolicy(std::vector<std::vector<double>> rule) : rule_(std::move(rule)) {}

    static StationaryPolicy deterministic(const MdpInstance& mdp, const DeterministicPolicy& d);
    static StationaryPolicy uniform(const MdpInstance& mdp);

    std::size_t n_states() const noexcept { return rule_.size(); }
    double operator()(std::size_t state, std::size_t action) const { return rule_.at(state).at(action); }
    const std::vector<double>& at_state(std::size_t state) const { return rule_.at(state); }
    const std::vector<std::vector<double>>& rule() const noexcept { return rule_; }

    /// Probability per pair index of `mdp`.
    std::vector<double> pair_weights(const MdpInstance& mdp) const;

  private:
    std::vector<std::vector<double>> rule_;
};

/// Markov policy whose rule may change with time. Rules are produced on
/// demand so schedules can be indexed far beyond what could be stored.
class TimeDependentPolicy {
  public:
    using RuleFn = std::function<StationaryPolicy(std::size_t)>;

    TimeDependentPolicy(std::size_t horizon, RuleFn rule, std::string description = {});
    explicit TimeDependentPolicy(std::vector<StationaryPolicy> rules, std::string description = {});

    std::size_t horizon() const noexcept { return horizon_; }
    /// Rule in force at time t. Throws InputError when t >= horizon().
    StationaryPolicy rule(std::size_t t) const;
    const std::string& description() const noexcept { return description_; }

  private:
    std::size_t horizon_;
    RuleFn rule_;
    std::string description_;
};

using MarkovPolicy = std::variant<StationaryPolicy, TimeDependentPolicy>;

/// Steady-state state-action frequencies x(i,a), indexed by pair.
struct OccupationMeasure {
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
    double operator[](std::size_t pair) const { return values[pair]; }
};

struct Violation {
    std::string location; ///< e.g. "P(.|s1,a2)"
    std::string rule;     ///< which invariant failed
    double magnitude;     ///< size of the violation
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const noexcept { return violations.empty(); }
    std::string to_string() const;
};

inline constexpr double kProbabilityTolerance = 1e-9;
inline constexpr double kOccupationTolerance = 1e-8;
inline constexpr double kRandomizationTolerance = 1e-6;

ValidationReport validate(const MdpInstance& mdp);
ValidationReport validate(const MdpInstance& mdp, const StationaryPolicy& policy);
/// Flow balance, normalization and nonnegativity of an occupation measure.
ValidationReport validate(const MdpInstance& mdp, const OccupationMeasure& x,
                          double tol = kOccupationTolerance);

/// Largest absolute residual of the stationarity system for x.
double occupation_residual(const MdpInstance& mdp, const OccupationMeasure& x);

/// d(a|i) = x(i,a) / sum_a' x(i,a'). States whose marginal is zero (up to
/// LP noise, 1e-12) put all mass on their first listed action.
StationaryPolicy extract_policy(const MdpInstance& mdp, const OccupationMeasure& x);

/// Sum over states of (number of actions with probability > tol) - 1.
std::size_t n_randomizations(const StationaryPolicy& d, double tol = kRandomizationTolerance);

/// Instances from the numerical examples: "example1", "example2", "endowment".
MdpInstance builtin(const std::string& name);
std::vector<std::string> builtin_names();

/// Random instance with strictly positive kernel rows (mixed with the uniform
/// row at weight 0.05) and rewards drawn uniformly from [reward_lo, reward_hi]
/// and rounded to 4 decimals. Deterministic for a given seed.
MdpInstance random_instance(std::uint64_t seed, std::size_t n_states, std::size_t n_actions,
                            double reward_lo = 0.0, double reward_hi = 100.0);

/// Enumerates deterministic policies in lexicographic order (state 0 most
/// significant). Stops early when f returns false.
void for_each_deterministic_policy(const MdpInstance& mdp,
                                   const std::function<bool(const DeterministicPolicy&)>& f);

} // namespace lrcvar
