#ifndef VALEX_FRAME_CORE_HPP
#define VALEX_FRAME_CORE_HPP

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "valex/frame.hpp"

namespace valex {

// The five pairwise argument relations.
enum class Relation { Excl, Cooc, Impl, ImplBy, Indep };

Relation converse(Relation r);

// Stable short codes used in files and on the CLI:
// "x", "<->", "->", "<-", "T".
std::string_view relation_code(Relation r);
Relation relation_from_code(std::string_view code);

// Square relation table over a fixed argument enumeration.
// Invariants: diagonal is Cooc; cells[j][i] == converse(cells[i][j]).
struct CoocMatrix {
    std::vector<ArgToken> order;
    std::vector<Relation> cells;  // row-major, order.size()^2

    Relation at(std::size_t i, std::size_t j) const {
        return cells[i * order.size() + j];
    }
    Relation at(const ArgToken& a, const ArgToken& b) const;

    // Writes cell (i,j) and mirrors the converse into (j,i).
    void set_pair(std::size_t i, std::size_t j, Relation r);

    // Index of a token in `order`, or npos.
    std::size_t index_of(const ArgToken& tok) const;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    friend bool operator==(const CoocMatrix&, const CoocMatrix&) = default;
};

// Returns an N x N matrix with Cooc on the diagonal and `fill` elsewhere.
CoocMatrix make_matrix(std::vector<ArgToken> order, Relation fill = Relation::Indep);

// (L(v), E(v), M(v)) for one verb entry.
struct EntryTriple {
    ArgSet possible;
    ArgSet required;
    CoocMatrix matrix;
};

// (possible, required) = (union, intersection) over a nonempty frame family.
std::pair<ArgSet, ArgSet> arg_sets(const FrameSet& frames);

// Relation between two possible arguments, from the supports [a], [b].
Relation relation_of(const FrameSet& frames, const ArgToken& a, const ArgToken& b);

CoocMatrix cooc_matrix(const FrameSet& frames);

// Convenience: (arg_sets, cooc_matrix) in one pass.
EntryTriple derive_triple(const FrameSet& frames);

// Pairwise consistency predicate of a frame against one matrix cell.
bool phi(const Frame& f, const CoocMatrix& m, const ArgToken& a, const ArgToken& b);

// Full power-set scan; guards |possible| > 20. Serves as the oracle for the DP.
FrameSet reconstruct_bruteforce(const EntryTriple& triple);

// Prefix chain over (included, excluded) argument splits with early pruning.
// Agrees with reconstruct_bruteforce on every valid triple.
FrameSet reconstruct_dp(const EntryTriple& triple);

using MatrixCollection = std::map<std::string, CoocMatrix>;

// Observed agreement over all shared (a, b, verb) triples, diagonal and both
// orders included. Throws DataError when no triple is comparable.
double agreement_score(const MatrixCollection& coll1, const MatrixCollection& coll2);

}  // namespace valex

#endif
