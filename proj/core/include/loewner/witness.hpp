#pragma once

// Witness and report JSON, plus replay of a witness through the check that
// produced it.
//
// Witness schema:
//   { version, command, function, domain:[interval..], k, index:{l,j} | null,
//     orders, seed, trial, margin, operands:[matrix..],
//     decompositions:[[matrix..]..], partitions:[[matrix..]..],
//     rows:[[matrix..]..], operands_y, lambda, point, C,
//     ordering:"lex-1based" }

#include "loewner/checkers.hpp"
#include "loewner/serialize.hpp"

namespace loewner {

Json witness_to_json(const Witness& w);
/// Throws ConfigError on schema violations.
Witness witness_from_json(const Json& j);

/// { verdict, margin, tolerance_used, trials_run, seed, trial, dead_zone,
///   note, witness? }
Json report_to_json(const CheckReport& r);

/// Rebuilds the instance and re-runs its check. The function is re-parsed
/// from its source text with the recorded domain.
CheckReport replay(const Witness& w, const CheckOptions& opts = {});

}  // namespace loewner
