#include "lrcvar/instance_io.hpp"

#include "lrcvar/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace lrcvar {
namespace {

using nlohmann::json;

class Parser {
  public:
    explicit Parser(std::string_view text) : text_(text) {}

    MdpInstance run() {
        json doc;
        try {
            doc = json::parse(text_);
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("malformed JSON: ") + e.what(), line_at(e.byte), "");
        }
        if (!doc.is_object()) throw ParseError("top level must be an object", 1, "");

        static const std::set<std::string> known = {"name",        "version", "states", "actions",
                                                    "transitions", "rewards", "rewards3"};
        for (const auto& [key, value] : doc.items()) {
            if (!known.contains(key)) fail("unknown key '" + key + "'", key);
        }
        if (doc.contains("version")) {
            const auto& v = doc["version"];
            if (!v.is_number_integer() || v.get<long long>() != kInstanceSchemaVersion) {
                fail("schema version mismatch: expected " + std::to_string(kInstanceSchemaVersion) +
                         ", found " + v.dump(),
                     "version");
            }
        }

        const std::string name = require(doc, "name", "name").is_string()
                                     ? doc["name"].get<std::string>()
                                     : fail<std::string>("'name' must be a string", "name");

        const auto& states_json = require(doc, "states", "states");
        if (!states_json.is_array() || states_json.empty()) fail("'states' must be a nonempty array", "states");
        std::vector<std::string> states;
        for (const auto& s : states_json) {
            if (!s.is_string()) fail("state identifiers must be strings", "states");
            states.push_back(s.get<std::string>());
        }
        check_unique(states, "states");

        const auto& actions_json = require(doc, "actions", "actions");
        if (!actions_json.is_object()) fail("'actions' must map states to arrays", "actions");
        reject_unknown_states(actions_json, states, "actions");
        std::vector<std::vector<std::string>> actions;
        for (const auto& s : states) {
            const std::string field = "actions." + s;
            if (!actions_json.contains(s)) fail("missing action list for state '" + s + "'", field);
            const auto& list = actions_json[s];
            if (!list.is_array()) fail("action list must be an array", field);
            std::vector<std::string> acts;
            for (const auto& a : list) {
                if (!a.is_string()) fail("action identifiers must be strings", field);
                acts.push_back(a.get<std::string>());
            }
            check_unique(acts, field);
            actions.push_back(std::move(acts));
        }

        const bool has_r = doc.contains("rewards");
        const bool has_r3 = doc.contains("rewards3");
        if (has_r == has_r3) {
            fail("exactly one of 'rewards' or 'rewards3' must be present", has_r ? "rewards3" : "rewards");
        }

        const std::size_t ns = states.size();
        std::size_t nk = 0;
        for (const auto& acts : actions) nk += acts.size();

        std::vector<double> kernel(nk * ns, 0.0);
        const auto& trans = require(doc, "transitions", "transitions");
        for_each_pair(trans, states, actions, "transitions", [&](std::size_t k, const json& row,
                                                                const std::string& field) {
            read_row(row, states, field, [&](std::size_t j, double p) { kernel[k * ns + j] = p; });
        });

        const RewardMode mode = has_r ? RewardMode::state_action : RewardMode::next_state;
        std::vector<double> rewards;
        if (has_r) {
            rewards.assign(nk, 0.0);
            for_each_pair(doc["rewards"], states, actions, "rewards",
                          [&](std::size_t k, const json& v, const std::string& field) {
                              rewards[k] = number(v, field);
                          });
        } else {
            rewards.assign(nk * ns, std::numeric_limits<double>::quiet_NaN());
            for_each_pair(doc["rewards3"], states, actions, "rewards3",
                          [&](std::size_t k, const json& row, const std::string& field) {
                              read_row(row, states, field,
                                       [&](std::size_t j, double r) { rewards[k * ns + j] = r; });
                          });
        }
        return MdpInstance(name, std::move(states), std::move(actions), std::move(kernel), mode,
                           std::move(rewards));
    }

  private:
    std::string_view text_;

    std::size_t line_at(std::size_t byte) const {
        byte = std::min(byte, text_.size());
        return 1 + static_cast<std::size_t>(std::count(text_.begin(), text_.begin() + byte, '\n'));
    }

    // Best-effort line lookup: the first occurrence of the last path component as a key.
    std::size_t line_of(const std::string& field) const {
        if (field.empty()) return 0;
        const auto dot = field.rfind('.');
        const std::string key = "\"" + (dot == std::string::npos ? field : field.substr(dot + 1)) + "\"";
        const auto pos = text_.find(key);
        return pos == std::string_view::npos ? 0 : line_at(pos);
    }

    template <typename T = void> [[noreturn]] T fail(const std::string& message, const std::string& field) const {
        throw ParseError(message + (field.empty() ? "" : " (field " + field + ")"), line_of(field), field);
    }

    const json& require(const json& obj, const std::string& key, const std::string& field) const {
        if (!obj.contains(key)) {
            throw ParseError("missing required block '" + key + "'", 0, field);
        }
        return obj[key];
    }

    double number(const json& v, const std::string& field) const {
        if (!v.is_number()) fail("expected a number", field);
        return v.get<double>();
    }

    void check_unique(const std::vector<std::string>& ids, const std::string& field) const {
        std::set<std::string> seen;
        for (const auto& id : ids) {
            if (!seen.insert(id).second) fail("duplicate identifier '" + id + "'", field);
        }
    }

    void reject_unknown_states(const json& obj, const std::vector<std::string>& states,
                               const std::string& field) const {
        for (const auto& [key, value] : obj.items()) {
            if (std::find(states.begin(), states.end(), key) == states.end()) {
                fail("unknown state '" + key + "'", field + "." + key);
            }
        }
    }

    template <typename F>
    void for_each_pair(const json& block, const std::vector<std::string>& states,
                       const std::vector<std::vector<std::string>>& actions, const std::string& name,
                       F&& f) const {
        if (!block.is_object()) fail("'" + name + "' must be an object keyed by state", name);
        reject_unknown_states(block, states, name);
        std::size_t k = 0;
        for (std::size_t i = 0; i < states.size(); ++i) {
            const std::string sfield = name + "." + states[i];
            if (!block.contains(states[i])) fail("missing entry for state '" + states[i] + "'", sfield);
            const auto& per_state = block[states[i]];
            if (!per_state.is_object()) fail("expected an object keyed by action", sfield);
            for (const auto& [key, value] : per_state.items()) {
                if (std::find(actions[i].begin(), actions[i].end(), key) == actions[i].end()) {
                    fail("action '" + key + "' is not admissible in state '" + states[i] + "'",
                         sfield + "." + key);
                }
            }
            for (const auto& a : actions[i]) {
                const std::string afield = sfield + "." + a;
                if (!per_state.contains(a)) fail("missing entry for action '" + a + "'", afield);
                f(k++, per_state[a], afield);
            }
        }
    }

    template <typename F>
    void read_row(const json& row, const std::vector<std::string>& states, const std::string& field,
                  F&& set) const {
        if (!row.is_object()) fail("expected an object keyed by next state", field);
        for (const auto& [key, value] : row.items()) {
            const auto it = std::find(states.begin(), states.end(), key);
            if (it == states.end()) fail("unknown next state '" + key + "'", field + "." + key);
            set(static_cast<std::size_t>(it - states.begin()), number(value, field + "." + key));
        }
    }
};

} // namespace

MdpInstance parse_instance(std::string_view text) { return Parser(text).run(); }

std::string serialize_instance(const MdpInstance& mdp) {
    using ojson = nlohmann::ordered_json;
    ojson doc;
    doc["version"] = kInstanceSchemaVersion;
    doc["name"] = mdp.name();
    doc["states"] = mdp.states();
    ojson actions = ojson::object();
    ojson trans = ojson::object();
    ojson rewards = ojson::object();
    const std::size_t ns = mdp.n_states();
    for (std::size_t i = 0; i < ns; ++i) {
        const auto& s = mdp.states()[i];
        actions[s] = mdp.actions(i);
        ojson t_state = ojson::object();
        ojson r_state = ojson::object();
        for (std::size_t a = 0; a < mdp.n_actions(i); ++a) {
            const std::size_t k = mdp.pair(i, a);
            const auto& act = mdp.actions(i)[a];
            ojson row = ojson::object();
            for (std::size_t j = 0; j < ns; ++j) {
                if (mdp.transition(k, j) != 0.0) row[mdp.states()[j]] = mdp.transition(k, j);
            }
            t_state[act] = std::move(row);
            if (mdp.reward_mode() == RewardMode::state_action) {
                r_state[act] = mdp.reward(k, 0);
            } else {
                ojson rrow = ojson::object();
                for (std::size_t j = 0; j < ns; ++j) {
                    if (!std::isnan(mdp.reward(k, j))) rrow[mdp.states()[j]] = mdp.reward(k, j);
                }
                r_state[act] = std::move(rrow);
            }
        }
        trans[s] = std::move(t_state);
        rewards[s] = std::move(r_state);
    }
    doc["actions"] = std::move(actions);
    doc["transitions"] = std::move(trans);
    doc[mdp.reward_mode() == RewardMode::state_action ? "rewards" : "rewards3"] = std::move(rewards);
    return doc.dump(2) + "\n";
}

MdpInstance load_instance(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open instance file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str());
}

void save_instance(const MdpInstance& mdp, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write instance file '" + path.string() + "'");
    out << serialize_instance(mdp);
    if (!out) throw InputError("failed writing instance file '" + path.string() + "'");
}

} // namespace lrcvar
