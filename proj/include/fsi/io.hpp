#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "fsi/interp.hpp"
#include "fsi/parking.hpp"

namespace fsi {

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view text);

/// Lines "<node address> <count>"; '#' starts a comment. Nodes must belong
/// to t and appear at most once.
Distribution parse_distribution(const FiniteTree& t, std::string_view text);
std::string format_distribution(const FiniteTree& t, const Distribution& d);
/// Lines "<node> <value>".
std::string format_flow(const FiniteTree& t, const Flow& f);
/// Lines "<node> <slot> -> <node>".
std::string format_placement(const FiniteTree& t, const Placement& p);

using AnyInterpretation = std::variant<Interpretation, FOInterpretation, WmsoInterpretation>;

/// JSON interpretation files. A formula is a string or an array of strings
/// joined by spaces. "kind" is "sets" (default), "fo" or "wmso".
AnyInterpretation parse_interpretation(std::string_view json_text);
AnyInterpretation load_interpretation(const std::string& path);
/// Throws InvalidInput when the file holds another kind.
Interpretation load_sets_interpretation(const std::string& path);

std::string interpretation_json(const Interpretation& i);
std::string interpretation_json(const FOInterpretation& i);
std::string interpretation_json(const WmsoInterpretation& w);

} // namespace fsi
