#ifndef VALEX_EVAL_HPP
#define VALEX_EVAL_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "valex/bank_io.hpp"

namespace valex {

enum class EvalLevel { Frame, Argument };

EvalLevel level_from_name(const std::string& name);

// Number of pairs shared by two dictionaries, restricted to the listed test
// verbs. FRAME level counts (verb, frame); ARGUMENT level counts (verb, a)
// with a drawn from each lexicon's possible set L(v).
long pair_count(const Lexicon& lex1, const Lexicon& lex2, EvalLevel level,
                const std::vector<std::string>& verbs);

struct PRF {
    double recall = 0.0;
    double precision = 0.0;
    double f = 0.0;
};

PRF prf(const Lexicon& candidate, const Lexicon& reference, EvalLevel level,
        const std::vector<std::string>& verbs);

// Lower-triangular pairwise count table plus recall/precision/F rows of every
// lexicon against the designated reference. Two decimal places in the main
// table; a full-precision sidecar block follows.
void report_matrix(std::ostream& out,
                   const std::vector<std::pair<std::string, Lexicon>>& lexica,
                   EvalLevel level, const std::vector<std::string>& verbs,
                   std::size_t ref_index);

}  // namespace valex

#endif
