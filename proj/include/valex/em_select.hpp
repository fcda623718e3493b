#ifndef VALEX_EM_SELECT_HPP
#define VALEX_EM_SELECT_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "valex/bank_io.hpp"

namespace valex {

// p_j over the bank's parse-type inventory. iteration == 1 means the
// all-ones initialization; for iteration >= 2 the weights sum to 1.
struct WeightTable {
    std::map<ParseType, double> weights;
    int iteration = 1;
};

enum class SelectionPolicy { EmShort, EmMax, MinLength, Blind };

SelectionPolicy policy_from_name(const std::string& name);
std::string policy_name(SelectionPolicy p);

// Alternating per-forest normalization and bank-wide averaging, started from
// all-ones weights; n_iters = 1 returns the initialization itself.
WeightTable em_weights(const Bank& bank, int n_iters);

// Per-forest conditionals p_ji at the table's weights.
std::vector<double> forest_conditionals(const ParseForest& forest,
                                        const WeightTable& table);

// Sum over forests of log of the forest's total weight. A forest with zero
// total yields -infinity.
double log_likelihood(const Bank& bank, const WeightTable& table);

// One parse per forest. Deterministic given (bank, table, policy, seed);
// per-forest randomness is derived from the seed and the clause id.
std::vector<ReducedParse> select(const Bank& bank, const WeightTable& table,
                                 SelectionPolicy policy, std::uint64_t seed);

// Fraction of gold-marked forests whose selection is a gold parse.
double disambiguation_accuracy(const Bank& bank,
                               const std::vector<ReducedParse>& selections);

}  // namespace valex

#endif
