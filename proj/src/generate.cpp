#include "lrcvar/errors.hpp"
#include "lrcvar/model.hpp"

#include <cmath>
#include <random>

namespace lrcvar {

MdpInstance random_instance(std::uint64_t seed, std::size_t n_states, std::size_t n_actions,
                            double reward_lo, double reward_hi) {
    if (n_states == 0 || n_actions == 0) throw InputError("random instance needs at least one state and one action");
    if (!std::isfinite(reward_lo) || !std::isfinite(reward_hi) || reward_lo > reward_hi) {
        throw InputError("reward range must be finite with lo <= hi");
    }
    constexpr double mix = 0.05;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> reward(reward_lo, reward_hi);

    std::vector<std::string> states(n_states);
    for (std::size_t i = 0; i < n_states; ++i) states[i] = "s" + std::to_string(i);
    std::vector<std::string> acts(n_actions);
    for (std::size_t a = 0; a < n_actions; ++a) acts[a] = "a" + std::to_string(a);

    const std::size_t nk = n_states * n_actions;
    std::vector<double> kernel(nk * n_states);
    std::vector<double> rewards(nk);
    for (std::size_t k = 0; k < nk; ++k) {
        double* row = kernel.data() + k * n_states;
        double sum = 0.0;
        for (std::size_t j = 0; j < n_states; ++j) {
            row[j] = unit(rng);
            sum += row[j];
        }
        for (std::size_t j = 0; j < n_states; ++j) {
            row[j] = (1.0 - mix) * row[j] / sum + mix / static_cast<double>(n_states);
        }
        rewards[k] = std::round(reward(rng) * 1e4) / 1e4;
    }
    return MdpInstance("random-" + std::to_string(seed), std::move(states),
                       std::vector<std::vector<std::string>>(n_states, acts), std::move(kernel),
                       RewardMode::state_action, std::move(rewards));
}

} // namespace lrcvar
