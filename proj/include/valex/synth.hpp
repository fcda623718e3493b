#ifndef VALEX_SYNTH_HPP
#define VALEX_SYNTH_HPP

#include <cstdint>
#include <vector>

#include "valex/bank_io.hpp"
#include "valex/frame_core.hpp"

namespace valex {

enum class GoldMode { Free, MatrixConsistent };

struct SynthConfig {
    std::uint64_t seed = 1;
    int n_verbs = 10;
    int inventory = 12;
    GoldMode mode = GoldMode::MatrixConsistent;
    int clauses_min = 30;
    int clauses_max = 60;
    int ambiguity_min = 1;
    int ambiguity_max = 5;
    double noise = 0.0;            // rho: parse-replacement probability
    double w_add = 0.4;            // distractor edit distribution
    double w_drop = 0.3;
    double w_swap = 0.3;
    double zipf_exponent = 1.0;    // verb frequency skew for extra clauses
    int min_frame_obs = 0;         // guaranteed true-parse count per gold frame
    int max_args_per_verb = 5;
    int max_frames_per_verb = 5;
};

// The shared argument inventory: "a00", "a01", ...
std::vector<ArgToken> inventory_tokens(int n);

// Seeded gold dictionary. In matrix-consistent mode every verb's frame set is
// the reconstruction of a valid triple over a single global relation matrix,
// so derive-then-reconstruct is lossless on it.
Lexicon gen_gold(const SynthConfig& config);

// Seeded ambiguous bank over a gold dictionary: true parses gold-marked,
// noise replaces the true parse by a one-edit corruption, distractors are
// one-edit frame variants.
Bank gen_bank(const Lexicon& gold, const SynthConfig& config);

}  // namespace valex

#endif
