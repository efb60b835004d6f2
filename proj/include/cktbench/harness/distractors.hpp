#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include "cktbench/equiv/equiv.hpp"
#include "cktbench/rng.hpp"
#include "cktbench/symexpr/rational_func.hpp"

namespace cktbench::harness {

using symexpr::RationalFunc;

class MutationExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mutation { CoefficientScale, SignFlip, Reciprocal, SymbolSubstitution, TimesS };

/// One mutation of `truth`, no equivalence check.
RationalFunc mutate(const RationalFunc& truth, Mutation kind, Rng& rng);

/// Three mutations of `truth`, each NotEquivalent to the truth and to each
/// other under `sampling`. Gives up after `max_tries` candidates.
std::array<RationalFunc, 3> gen_distractors(const RationalFunc& truth, Rng& rng,
                                            const equiv::SamplingConfig& sampling = {}, int max_tries = 50);

inline constexpr std::string_view kNoneOfTheAbove = "None of the above";

struct McOptions {
  /// A, B, C, D; D is always "None of the above".
  std::array<std::string, 4> options;
  char key = 'A';
};

/// Truth and two distractors shuffled into A..C. With probability
/// `omit_truth` the third distractor takes the truth's place and the key is D.
McOptions build_mc(const RationalFunc& truth, Rng& rng, double omit_truth,
                   const equiv::SamplingConfig& sampling = {});

}  // namespace cktbench::harness
