#ifndef VALEX_FILTERS_HPP
#define VALEX_FILTERS_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <utility>

#include "valex/bank_io.hpp"
#include "valex/frame_core.hpp"

namespace valex {

// Grid minimizer with plateau refinement. Starts at resolution N = 10,
// multiplies by 10 until at least 10 grid points tie at minimal error or the
// resolution cap is hit; returns the median tying point (lower middle for
// even counts).
struct GridLearnerResult {
    double threshold = 0.0;
    long resolution = 10;
    int degeneration = 0;
    bool capped = false;
};

GridLearnerResult learn_threshold(const std::function<long(double)>& error,
                                  long n_cap = 100000);

// Per-argument thresholds p_a / p_not_a plus the additive offset t.
struct ArgThresholds {
    std::map<ArgToken, double> p_pos;
    std::map<ArgToken, double> p_neg;
    int t = 1;
};

ArgThresholds learn_arg_thresholds(const Lexicon& prelim, const Lexicon& training,
                                   int t = 1);

using CountedEntry = std::map<Frame, double>;

// Keep a iff c(v,a) >= p_a * c(v) + t. Arguments without a learned
// threshold are rejected.
ArgSet filter_possible(const CountedEntry& entry, const ArgThresholds& th);

// a in possible stays required unless c(v) - c(v,a) >= p_not_a * c(v) + 1.
ArgSet filter_required(const CountedEntry& entry, const ArgSet& possible,
                       const ArgThresholds& th);

// f -> (f | required) & possible, counts of colliding images summed.
CountedEntry restrict_frames(const CountedEntry& entry, const ArgSet& possible,
                             const ArgSet& required);

// Upper binomial tail P[X >= k] for X ~ Bin(n, p).
double binomial_tail(long k, long n, double p);

struct FrameThresholds {
    std::map<Frame, double> p_f;
    double alpha = 0.05;
};

FrameThresholds learn_frame_thresholds(const Lexicon& prelim,
                                       const Lexicon& training,
                                       double alpha = 0.05);

// Retain f iff binomial_tail(c(v,f), c(v), p_f) <= alpha. Frames without a
// learned threshold are rejected.
FrameSet bht_filter(const CountedEntry& entry, const FrameThresholds& th);

// One substitution rule S => R: disabled (never), or enabled with a count
// threshold C(a R b) >= p * C(a,b) + t.
struct RuleParam {
    bool never = true;
    double p = 1.0;
    int t = 3;

    friend bool operator==(const RuleParam&, const RuleParam&) = default;
};

enum class CorrectionMethod { A, B, C };

CorrectionMethod method_from_name(const std::string& name);

struct MatrixCorrectionParams {
    // Keyed on ordered token pairs; populated for pairs with C(a,b) >= 1.
    std::map<std::pair<ArgToken, ArgToken>, Relation> majority;
    std::map<std::pair<ArgToken, ArgToken>, long> pair_count;       // C(a,b)
    std::map<std::pair<ArgToken, ArgToken>,
             std::map<Relation, long>> relation_count;              // C(a R b)
    std::map<std::pair<Relation, Relation>, RuleParam> rule;        // S => R

    long rel_count(const ArgToken& a, const ArgToken& b, Relation r) const;
};

// Majority relation and pair counts across the training dictionary's verbs.
// Ties break in the fixed order Excl, Cooc, Impl, ImplBy, Indep.
MatrixCorrectionParams matrix_majority(const Lexicon& training);

// A: identity. B: overwrite with the training majority where defined.
// C: substitute per rule table. Cells are corrected from the original values
// simultaneously; each unordered pair is written once and mirrored.
CoocMatrix correct_matrix(const CoocMatrix& matrix, CorrectionMethod method,
                          const MatrixCorrectionParams& params);

// Learns the 20 S => R rules on the grid {0, 0.05, ..., 1} x {0..3} plus a
// NEVER sentinel, maximizing agreement with the training matrices. Ties
// prefer NEVER, then larger p, then larger t.
MatrixCorrectionParams learn_matrix_params(const MatrixCollection& step4,
                                           const Lexicon& training);

// TSV sidecar: kind TAB key TAB value; kinds p_pos, p_neg, p_frame,
// matrix_rule. Round-trips bit-exactly.
void write_params(std::ostream& out, const ArgThresholds& arg_th,
                  const FrameThresholds& frame_th,
                  const MatrixCorrectionParams& mat);
void read_params(std::istream& in, ArgThresholds& arg_th,
                 FrameThresholds& frame_th, MatrixCorrectionParams& mat);

}  // namespace valex

#endif
