#pragma once

#include <string>
#include <string_view>

#include "idiomine/grammar.hpp"
#include "idiomine/miner.hpp"

namespace idiomine {

inline constexpr int kIdiomFormatVersion = 1;

// JSON idiom file: mining config, base-grammar fingerprint and one record
// per idiom {rank, rule_id, lhs, rhs, provenance, support}. `grammar` names
// the symbols; it must be the grammar the set is bound to.
std::string idiom_set_to_json(const IdiomSet& set, const Grammar& grammar);

// Verifies format version, fingerprint, rank contiguity and that every
// recorded rule equals the collapse of its provenance.
IdiomSet idiom_set_from_json(std::string_view text, const Grammar& grammar);

IdiomSet read_idiom_file(const std::string& path, const Grammar& grammar);
void write_idiom_file(const std::string& path, const IdiomSet& set, const Grammar& grammar);

} // namespace idiomine
