#ifndef VALEX_PIPELINE_HPP
#define VALEX_PIPELINE_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "valex/em_select.hpp"
#include "valex/filters.hpp"

namespace valex {

enum class CountingMode { Hard, Soft };

struct PipelineConfig {
    int em_iters = 10;
    SelectionPolicy policy = SelectionPolicy::EmShort;
    std::uint64_t seed = 0;
    CountingMode counting = CountingMode::Hard;
    CorrectionMethod matrix_method = CorrectionMethod::C;
    double alpha = 0.05;
    int t_offset = 1;
    double min_verb_count = 1.0;
};

// Per-stage entry/frame counts for the run manifest.
struct StageStats {
    std::vector<std::pair<std::string, std::string>> rows;
    void note(const std::string& stage, const std::string& value) {
        rows.emplace_back(stage, value);
    }
};

// EM disambiguation + counting; the preliminary dictionary.
Lexicon preliminary_lexicon(const Bank& bank, const PipelineConfig& config);

// Argument filtering, frame restriction, matrix correction, reconstruction.
// Output frames carry count 1. Verbs with an empty filtered possible set or
// an empty reconstructed frame set are dropped.
Lexicon run_two_stage(const Bank& bank, const Lexicon& training,
                      const PipelineConfig& config, StageStats* stats = nullptr);

// Same front end, then the binomial-test frame filter.
Lexicon run_bht(const Bank& bank, const Lexicon& training,
                const PipelineConfig& config, StageStats* stats = nullptr);

enum class CombineMode { Union, Intersection, Majority };

CombineMode combine_from_name(const std::string& name);

// UNION: max counts; INTERSECTION: min counts on shared pairs; MAJORITY:
// strict majority among the lexica that list the verb.
Lexicon combine(const std::vector<Lexicon>& lexica, CombineMode mode);

}  // namespace valex

#endif
