#include "lrcvar/errors.hpp"
#include "lrcvar/model.hpp"

#include <array>
#include <cmath>

namespace lrcvar {
namespace {

MdpInstance make_example1() {
    // s1 --a11--> s1, s1 --a12--> s2, s2 --a21--> s1, s2 --a22--> s2
    std::vector<double> kernel = {
        1.0, 0.0, // (s1,a11)
        0.0, 1.0, // (s1,a12)
        1.0, 0.0, // (s2,a21)
        0.0, 1.0, // (s2,a22)
    };
    return MdpInstance("example1", {"s1", "s2"}, {{"a11", "a12"}, {"a21", "a22"}}, std::move(kernel),
                       RewardMode::state_action, {2.0, 2.0, -2.0, -2.0});
}

MdpInstance make_example2() {
    // columns (state, action); rows next state 1..3
    constexpr std::array<std::array<double, 9>, 3> column = {{
        {0.4688, 0.3564, 0.3991, 0.1083, 0.7012, 0.4370, 0.5457, 0.4102, 0.1460},
        {0.0741, 0.0857, 0.1457, 0.1839, 0.1863, 0.4373, 0.1834, 0.4357, 0.3986},
        {0.4571, 0.5579, 0.4552, 0.7078, 0.1124, 0.1257, 0.2709, 0.1541, 0.4554},
    }};
    std::vector<double> kernel(27);
    for (std::size_t k = 0; k < 9; ++k) {
        const double sum = column[0][k] + column[1][k] + column[2][k];
        // The published column for (2,2) adds up to 0.9999; every column is
        // rescaled to sum to one so the kernel is exactly stochastic.
        for (std::size_t j = 0; j < 3; ++j) kernel[k * 3 + j] = column[j][k] / sum;
    }
    const std::vector<std::string> acts = {"1", "2", "3"};
    return MdpInstance("example2", {"1", "2", "3"}, {acts, acts, acts}, std::move(kernel),
                       RewardMode::state_action, {5, 69, 13, 94, 4, 71, 77, 70, 39});
}

MdpInstance make_endowment() {
    constexpr std::array<double, 3> level = {0.2, 0.5, 0.8};
    constexpr double env[2][2] = {{0.8, 0.2}, {0.3, 0.7}};
    constexpr std::array<double, 2> stock_return = {-0.05, 0.1};
    constexpr double riskless = 0.02;
    constexpr double cost = 0.005;
    const std::array<std::string, 3> names = {"0.2", "0.5", "0.8"};

    std::vector<std::string> states;
    for (int x = 0; x < 2; ++x) {
        for (const auto& w : names) states.push_back("(" + std::to_string(x) + "," + w + ")");
    }
    const auto state_of = [](std::size_t x, std::size_t w) { return x * 3 + w; };

    const std::size_t ns = 6;
    std::vector<double> kernel(ns * 3 * ns, 0.0);
    std::vector<double> rewards(ns * 3 * ns, 0.0);
    for (std::size_t x = 0; x < 2; ++x) {
        for (std::size_t w = 0; w < 3; ++w) {
            for (std::size_t a = 0; a < 3; ++a) {
                const std::size_t k = state_of(x, w) * 3 + a;
                for (std::size_t x2 = 0; x2 < 2; ++x2) {
                    for (std::size_t w2 = 0; w2 < 3; ++w2) {
                        const std::size_t j = state_of(x2, w2);
                        if (w2 == a) kernel[k * ns + j] = env[x][x2];
                        const double r = 1000.0 * ((1.0 - level[a]) * riskless +
                                                   level[a] * stock_return[x2] -
                                                   cost * std::abs(level[a] - level[w]));
                        // strip binary representation noise (84.00000000000001 -> 84)
                        rewards[k * ns + j] = std::round(r * 1e6) / 1e6;
                    }
                }
            }
        }
    }
    std::vector<std::vector<std::string>> actions(ns, {names.begin(), names.end()});
    return MdpInstance("endowment", std::move(states), std::move(actions), std::move(kernel),
                       RewardMode::next_state, std::move(rewards));
}

} // namespace

std::vector<std::string> builtin_names() { return {"example1", "example2", "endowment"}; }

MdpInstance builtin(const std::string& name) {
    if (name == "example1") return make_example1();
    if (name == "example2") return make_example2();
    if (name == "endowment") return make_endowment();
    throw InputError("unknown builtin instance '" + name +
                     "' (expected example1, example2 or endowment)");
}

} // namespace lrcvar
