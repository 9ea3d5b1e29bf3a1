#pragma once

#include <string>

#include "sprcal/spr/board.hpp"

namespace sprcal::spr {

// One JSON object per line: a header {n, s, seed, pointer_id, labeler_id,
// terminated_early} followed by one {j, removed, sign} object per round.
std::string to_jsonl(const Transcript& transcript);
Transcript from_jsonl(const std::string& text);

}  // namespace sprcal::spr
