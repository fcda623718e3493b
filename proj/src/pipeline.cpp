#include "valex/pipeline.hpp"

#include <algorithm>

#include "valex/error.hpp"

namespace valex {

Lexicon preliminary_lexicon(const Bank& bank, const PipelineConfig& config) {
    WeightTable table = em_weights(bank, config.em_iters);
    if (config.counting == CountingMode::Soft) return soft_counts(bank, table.weights);
    return hard_counts(bank, select(bank, table, config.policy, config.seed));
}

namespace {

FrameSet frame_keys(const CountedEntry& entry) {
    FrameSet fs;
    for (const auto& [f, c] : entry) fs.insert(f);
    return fs;
}

double entry_total(const CountedEntry& entry) {
    double sum = 0.0;
    for (const auto& [f, c] : entry) sum += c;
    return sum;
}

std::size_t pair_total(const Lexicon& lex) {
    std::size_t n = 0;
    for (const auto& [v, fs] : lex.entries) n += fs.size();
    return n;
}

}  // namespace

Lexicon run_two_stage(const Bank& bank, const Lexicon& training,
                      const PipelineConfig& config, StageStats* stats) {
    if (training.entries.empty()) throw DataError("run_two_stage: empty training lexicon");

    Lexicon prelim = preliminary_lexicon(bank, config);
    if (stats) {
        stats->note("prelim_verbs", std::to_string(prelim.entries.size()));
        stats->note("prelim_pairs", std::to_string(pair_total(prelim)));
    }

    ArgThresholds arg_th = learn_arg_thresholds(prelim, training, config.t_offset);

    // Steps 1-4 per verb: argument sets, argument filtering, frame
    // restriction, matrix derivation.
    struct VerbState {
        CountedEntry restricted;
        EntryTriple triple;
    };
    std::map<std::string, VerbState> states;
    for (const auto& [verb, entry] : prelim.entries) {
        if (entry_total(entry) < config.min_verb_count) continue;
        ArgSet possible = filter_possible(entry, arg_th);
        if (possible.empty()) continue;
        ArgSet required = filter_required(entry, possible, arg_th);
        CountedEntry restricted = restrict_frames(entry, possible, required);
        EntryTriple triple = derive_triple(frame_keys(restricted));
        states.emplace(verb, VerbState{std::move(restricted), std::move(triple)});
    }
    if (stats) stats->note("filtered_verbs", std::to_string(states.size()));

    // Step 5 parameters come from the training verbs' step-4 matrices.
    MatrixCollection step4_training;
    for (const auto& [verb, st] : states)
        if (training.entries.count(verb)) step4_training.emplace(verb, st.triple.matrix);
    MatrixCorrectionParams mat_params;
    if (config.matrix_method == CorrectionMethod::A) {
        mat_params = MatrixCorrectionParams{};
    } else if (config.matrix_method == CorrectionMethod::B) {
        mat_params = matrix_majority(training);
    } else {
        mat_params = learn_matrix_params(step4_training, training);
    }

    // Steps 5-7: correction, reconstruction, output with count 1.
    Lexicon out;
    for (const auto& [verb, st] : states) {
        EntryTriple triple = st.triple;
        triple.matrix = correct_matrix(triple.matrix, config.matrix_method, mat_params);
        FrameSet frames = reconstruct_dp(triple);
        for (const Frame& f : frames) out.add(verb, f, 1.0);
    }
    if (stats) {
        stats->note("output_verbs", std::to_string(out.entries.size()));
        stats->note("output_pairs", std::to_string(pair_total(out)));
    }
    return out;
}

Lexicon run_bht(const Bank& bank, const Lexicon& training,
                const PipelineConfig& config, StageStats* stats) {
    if (training.entries.empty()) throw DataError("run_bht: empty training lexicon");

    Lexicon prelim = preliminary_lexicon(bank, config);
    if (stats) {
        stats->note("prelim_verbs", std::to_string(prelim.entries.size()));
        stats->note("prelim_pairs", std::to_string(pair_total(prelim)));
    }

    FrameThresholds th = learn_frame_thresholds(prelim, training, config.alpha);

    Lexicon out;
    for (const auto& [verb, entry] : prelim.entries) {
        if (entry_total(entry) < config.min_verb_count) continue;
        for (const Frame& f : bht_filter(entry, th)) out.add(verb, f, 1.0);
    }
    if (stats) {
        stats->note("output_verbs", std::to_string(out.entries.size()));
        stats->note("output_pairs", std::to_string(pair_total(out)));
    }
    return out;
}

CombineMode combine_from_name(const std::string& name) {
    if (name == "union") return CombineMode::Union;
    if (name == "intersection") return CombineMode::Intersection;
    if (name == "majority") return CombineMode::Majority;
    throw DataError("unknown combine mode: '" + name + "'");
}

Lexicon combine(const std::vector<Lexicon>& lexica, CombineMode mode) {
    if (lexica.empty()) throw DataError("combine: no input lexica");
    if (mode == CombineMode::Majority && lexica.size() < 2)
        throw DataError("combine: majority voting needs at least 2 lexica");

    Lexicon out;
    switch (mode) {
        case CombineMode::Union:
            for (const Lexicon& lex : lexica)
                for (const auto& [verb, frames] : lex.entries)
                    for (const auto& [f, c] : frames) {
                        double& cur = out.entries[verb][f];
                        cur = std::max(cur, c);
                    }
            break;
        case CombineMode::Intersection: {
            const Lexicon& first = lexica[0];
            for (const auto& [verb, frames] : first.entries)
                for (const auto& [f, c] : frames) {
                    double mn = c;
                    bool everywhere = true;
                    for (std::size_t i = 1; i < lexica.size() && everywhere; ++i) {
                        auto it = lexica[i].entries.find(verb);
                        if (it == lexica[i].entries.end()) { everywhere = false; break; }
                        auto jt = it->second.find(f);
                        if (jt == it->second.end()) { everywhere = false; break; }
                        mn = std::min(mn, jt->second);
                    }
                    if (everywhere) out.add(verb, f, mn);
                }
            break;
        }
        case CombineMode::Majority: {
            std::map<std::string, std::size_t> verb_sources;
            for (const Lexicon& lex : lexica)
                for (const auto& [verb, frames] : lex.entries) ++verb_sources[verb];
            std::map<std::pair<std::string, Frame>, std::size_t> votes;
            for (const Lexicon& lex : lexica)
                for (const auto& [verb, frames] : lex.entries)
                    for (const auto& [f, c] : frames) ++votes[{verb, f}];
            for (const auto& [pair, n] : votes)
                if (2 * n > verb_sources.at(pair.first))
                    out.add(pair.first, pair.second, 1.0);
            break;
        }
    }
    return out;
}

}  // namespace valex
