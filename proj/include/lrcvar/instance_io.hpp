#pragma once

#include "lrcvar/model.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace lrcvar {

/// Current instance file schema version. Files may omit "version"; any other
/// value is rejected.
inline constexpr int kInstanceSchemaVersion = 1;

/**
 * @brief Parse an instance from JSON text.
 *
 * Keys: name, states, actions, transitions and exactly one of rewards or
 * rewards3 (plus an optional version). Unlisted next states have probability
 * zero. Throws ParseError naming the line and field at fault.
 */
MdpInstance parse_instance(std::string_view text);

/// Inverse of parse_instance. Zero probabilities and undefined triple rewards are omitted.
std::string serialize_instance(const MdpInstance& mdp);

MdpInstance load_instance(const std::filesystem::path& path);
void save_instance(const MdpInstance& mdp, const std::filesystem::path& path);

} // namespace lrcvar
