// valex: verb valence dictionary extraction toolkit.
//
// Exit codes: 0 success, 1 usage error, 2 data/format error,
// 3 numeric/invariant failure.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "valex/bank_io.hpp"
#include "valex/em_select.hpp"
#include "valex/error.hpp"
#include "valex/eval.hpp"
#include "valex/filters.hpp"
#include "valex/frame_core.hpp"
#include "valex/pipeline.hpp"
#include "valex/synth.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using valex::Bank;
using valex::Lexicon;

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw valex::DataError("cannot open input file: " + path);
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw valex::DataError("cannot open output file: " + path);
    return out;
}

Bank load_bank(const std::string& path) {
    auto in = open_in(path);
    return valex::read_bank(in);
}

Lexicon load_lexicon(const std::string& path) {
    auto in = open_in(path);
    return valex::read_lexicon(in);
}

void save_lexicon(const Lexicon& lex, const std::string& path) {
    auto out = open_out(path);
    valex::write_lexicon(lex, out);
}

std::vector<std::string> load_verb_list(const std::string& path) {
    auto in = open_in(path);
    std::vector<std::string> verbs;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) verbs.push_back(line);
    }
    return verbs;
}

void write_manifest(const std::string& out_path, const std::string& command,
                    const std::string& flags, std::uint64_t seed,
                    const valex::StageStats* stats = nullptr) {
    auto out = open_out(out_path + ".manifest");
    out << "version\t" << kVersion << "\n";
    out << "command\t" << command << "\n";
    out << "flags\t" << flags << "\n";
    out << "seed\t" << seed << "\n";
    if (stats)
        for (const auto& [stage, value] : stats->rows)
            out << stage << "\t" << value << "\n";
}

std::string joined_flags(int argc, char** argv) {
    std::ostringstream os;
    for (int i = 1; i < argc; ++i) os << (i > 1 ? " " : "") << argv[i];
    return os.str();
}

valex::MatrixCollection lexicon_matrices(const Lexicon& lex) {
    valex::MatrixCollection coll;
    for (const auto& [verb, frames] : lex.entries) {
        valex::FrameSet fs;
        for (const auto& [f, c] : frames) fs.insert(f);
        coll.emplace(verb, valex::cooc_matrix(fs));
    }
    return coll;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"valex: verb valence dictionary extraction toolkit"};
    app.require_subcommand(1);
    std::string flags = joined_flags(argc, argv);

    // Shared option storage.
    std::string bank_path, train_path, prelim_path, lexicon_path, params_path;
    std::string out_path, verbs_path, ref_path, verb;
    std::vector<std::string> in_paths;
    std::uint64_t seed = 0;
    int em_iters = 10;
    std::string policy = "em-short", counting = "hard", method = "C";
    std::string mode_str, level_str = "frame", path_str = "two-stage";
    double alpha = 0.05, noise = 0.0, min_count = 1.0;
    int t_offset = 1;
    valex::SynthConfig synth_cfg;
    std::string gold_mode = "matrix-consistent", out_gold, out_bank;

    auto* em = app.add_subcommand("em-select", "disambiguate a bank with EM selection");
    em->add_option("--bank", bank_path)->required();
    em->add_option("--out", out_path)->required();
    em->add_option("--seed", seed)->required();
    em->add_option("--em-iters", em_iters);
    em->add_option("--policy", policy);

    auto* bd = app.add_subcommand("build-dict", "preliminary dictionary from a bank");
    bd->add_option("--bank", bank_path)->required();
    bd->add_option("--out", out_path)->required();
    bd->add_option("--seed", seed)->required();
    bd->add_option("--em-iters", em_iters);
    bd->add_option("--policy", policy);
    bd->add_option("--counting", counting)->check(CLI::IsMember({"hard", "soft"}));

    auto* learn = app.add_subcommand("learn", "learn filter thresholds and matrix rules");
    learn->add_option("--prelim", prelim_path)->required();
    learn->add_option("--train", train_path)->required();
    learn->add_option("--params", params_path)->required();
    learn->add_option("--alpha", alpha);
    learn->add_option("--t", t_offset);

    auto* fa = app.add_subcommand("filter-args", "argument-threshold filtering");
    fa->add_option("--prelim", prelim_path)->required();
    fa->add_option("--params", params_path)->required();
    fa->add_option("--out", out_path)->required();
    fa->add_option("--t", t_offset);

    auto* fm = app.add_subcommand("filter-matrix",
                                  "matrix correction plus reconstruction");
    fm->add_option("--lexicon", lexicon_path)->required();
    fm->add_option("--train", train_path)->required();
    fm->add_option("--params", params_path)->required();
    fm->add_option("--out", out_path)->required();
    fm->add_option("--matrix-method", method);

    auto* fb = app.add_subcommand("filter-bht", "binomial-test frame filtering");
    fb->add_option("--prelim", prelim_path)->required();
    fb->add_option("--params", params_path)->required();
    fb->add_option("--out", out_path)->required();
    fb->add_option("--alpha", alpha);

    auto* pl = app.add_subcommand("pipeline", "full extraction pipeline");
    pl->add_option("--bank", bank_path)->required();
    pl->add_option("--train", train_path)->required();
    pl->add_option("--out", out_path)->required();
    pl->add_option("--seed", seed)->required();
    pl->add_option("--em-iters", em_iters);
    pl->add_option("--policy", policy);
    pl->add_option("--counting", counting)->check(CLI::IsMember({"hard", "soft"}));
    pl->add_option("--matrix-method", method);
    pl->add_option("--alpha", alpha);
    pl->add_option("--min-count", min_count);
    pl->add_option("--path", path_str)
        ->check(CLI::IsMember({"two-stage", "bht", "both"}));

    auto* cb = app.add_subcommand("combine", "union/intersection/majority of lexica");
    cb->add_option("--in", in_paths)->required()->expected(-1);
    cb->add_option("--mode", mode_str)->required();
    cb->add_option("--out", out_path)->required();

    auto* ev = app.add_subcommand("eval", "pairwise dictionary comparison report");
    ev->add_option("--ref", ref_path)->required();
    ev->add_option("--cand", in_paths)->required()->expected(-1);
    ev->add_option("--verbs", verbs_path)->required();
    ev->add_option("--level", level_str)->check(CLI::IsMember({"frame", "argument"}));
    ev->add_option("--out", out_path)->required();

    auto* rc = app.add_subcommand("reconstruct", "frame-set reconstruction for a verb");
    rc->add_option("--lexicon", lexicon_path)->required();
    rc->add_option("--verb", verb)->required();

    auto* ag = app.add_subcommand("agreement", "matrix agreement between two lexica");
    ag->add_option("--lex1", in_paths)->expected(1);
    ag->add_option("--lex2", lexicon_path)->required();

    auto* sy = app.add_subcommand("synth", "generate a synthetic gold lexicon and bank");
    sy->add_option("--seed", seed)->required();
    sy->add_option("--verbs", synth_cfg.n_verbs);
    sy->add_option("--inventory", synth_cfg.inventory);
    sy->add_option("--mode", gold_mode)
        ->check(CLI::IsMember({"free", "matrix-consistent"}));
    sy->add_option("--clauses-min", synth_cfg.clauses_min);
    sy->add_option("--clauses-max", synth_cfg.clauses_max);
    sy->add_option("--ambiguity-min", synth_cfg.ambiguity_min);
    sy->add_option("--ambiguity-max", synth_cfg.ambiguity_max);
    sy->add_option("--noise", noise);
    sy->add_option("--min-frame-obs", synth_cfg.min_frame_obs);
    sy->add_option("--out-gold", out_gold)->required();
    sy->add_option("--out-bank", out_bank)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        valex::PipelineConfig cfg;
        cfg.em_iters = em_iters;
        cfg.seed = seed;
        cfg.alpha = alpha;
        cfg.t_offset = t_offset;
        cfg.min_verb_count = min_count;
        cfg.policy = valex::policy_from_name(policy);
        cfg.counting = counting == "soft" ? valex::CountingMode::Soft
                                          : valex::CountingMode::Hard;
        cfg.matrix_method = valex::method_from_name(method);

        if (em->parsed()) {
            Bank bank = load_bank(bank_path);
            auto table = valex::em_weights(bank, cfg.em_iters);
            auto selections = valex::select(bank, table, cfg.policy, cfg.seed);
            Bank out;
            for (std::size_t i = 0; i < bank.forests.size(); ++i) {
                valex::ParseForest f;
                f.clause_id = static_cast<int>(i);
                f.sentence = bank.forests[i].sentence;
                f.parses.push_back(selections[i]);
                out.forests.push_back(std::move(f));
            }
            auto os = open_out(out_path);
            valex::write_bank(out, os);
            write_manifest(out_path, "em-select", flags, seed);
        } else if (bd->parsed()) {
            Bank bank = load_bank(bank_path);
            Lexicon prelim = valex::preliminary_lexicon(bank, cfg);
            save_lexicon(prelim, out_path);
            write_manifest(out_path, "build-dict", flags, seed);
        } else if (learn->parsed()) {
            Lexicon prelim = load_lexicon(prelim_path);
            Lexicon training = load_lexicon(train_path);
            auto arg_th = valex::learn_arg_thresholds(prelim, training, t_offset);
            auto frame_th = valex::learn_frame_thresholds(prelim, training, alpha);
            // Step-4 matrices from the argument-filtered preliminary lexicon.
            valex::MatrixCollection step4;
            for (const auto& [v, entry] : prelim.entries) {
                if (!training.entries.count(v)) continue;
                auto possible = valex::filter_possible(entry, arg_th);
                if (possible.empty()) continue;
                auto required = valex::filter_required(entry, possible, arg_th);
                auto restricted = valex::restrict_frames(entry, possible, required);
                valex::FrameSet fs;
                for (const auto& [f, c] : restricted) fs.insert(f);
                step4.emplace(v, valex::cooc_matrix(fs));
            }
            auto mat = valex::learn_matrix_params(step4, training);
            auto os = open_out(params_path);
            valex::write_params(os, arg_th, frame_th, mat);
            write_manifest(params_path, "learn", flags, seed);
        } else if (fa->parsed()) {
            Lexicon prelim = load_lexicon(prelim_path);
            valex::ArgThresholds arg_th;
            valex::FrameThresholds frame_th;
            valex::MatrixCorrectionParams mat;
            auto is = open_in(params_path);
            valex::read_params(is, arg_th, frame_th, mat);
            arg_th.t = t_offset;
            Lexicon out;
            for (const auto& [v, entry] : prelim.entries) {
                auto possible = valex::filter_possible(entry, arg_th);
                if (possible.empty()) continue;
                auto required = valex::filter_required(entry, possible, arg_th);
                for (const auto& [f, c] : valex::restrict_frames(entry, possible, required))
                    out.add(v, f, c);
            }
            save_lexicon(out, out_path);
            write_manifest(out_path, "filter-args", flags, seed);
        } else if (fm->parsed()) {
            Lexicon step3 = load_lexicon(lexicon_path);
            Lexicon training = load_lexicon(train_path);
            valex::ArgThresholds arg_th;
            valex::FrameThresholds frame_th;
            valex::MatrixCorrectionParams mat;
            auto is = open_in(params_path);
            valex::read_params(is, arg_th, frame_th, mat);
            // Majority and counts are recomputed from the training lexicon;
            // the params file carries only the learned rules.
            auto full = valex::matrix_majority(training);
            full.rule = mat.rule;
            Lexicon out;
            for (const auto& [v, entry] : step3.entries) {
                valex::FrameSet fs;
                for (const auto& [f, c] : entry) fs.insert(f);
                auto triple = valex::derive_triple(fs);
                triple.matrix = valex::correct_matrix(triple.matrix,
                                                      cfg.matrix_method, full);
                for (const valex::Frame& f : valex::reconstruct_dp(triple))
                    out.add(v, f, 1.0);
            }
            save_lexicon(out, out_path);
            write_manifest(out_path, "filter-matrix", flags, seed);
        } else if (fb->parsed()) {
            Lexicon prelim = load_lexicon(prelim_path);
            valex::ArgThresholds arg_th;
            valex::FrameThresholds frame_th;
            valex::MatrixCorrectionParams mat;
            auto is = open_in(params_path);
            valex::read_params(is, arg_th, frame_th, mat);
            frame_th.alpha = alpha;
            Lexicon out;
            for (const auto& [v, entry] : prelim.entries)
                for (const valex::Frame& f : valex::bht_filter(entry, frame_th))
                    out.add(v, f, 1.0);
            save_lexicon(out, out_path);
            write_manifest(out_path, "filter-bht", flags, seed);
        } else if (pl->parsed()) {
            Bank bank = load_bank(bank_path);
            Lexicon training = load_lexicon(train_path);
            valex::StageStats stats;
            Lexicon out;
            if (path_str == "two-stage") {
                out = valex::run_two_stage(bank, training, cfg, &stats);
            } else if (path_str == "bht") {
                out = valex::run_bht(bank, training, cfg, &stats);
            } else {
                Lexicon a = valex::run_two_stage(bank, training, cfg, &stats);
                Lexicon b = valex::run_bht(bank, training, cfg, nullptr);
                out = valex::combine({a, b}, valex::CombineMode::Union);
            }
            save_lexicon(out, out_path);
            write_manifest(out_path, "pipeline", flags, seed, &stats);
        } else if (cb->parsed()) {
            std::vector<Lexicon> lexica;
            for (const std::string& p : in_paths) lexica.push_back(load_lexicon(p));
            Lexicon out = valex::combine(lexica, valex::combine_from_name(mode_str));
            save_lexicon(out, out_path);
            write_manifest(out_path, "combine", flags, seed);
        } else if (ev->parsed()) {
            std::vector<std::pair<std::string, Lexicon>> lexica;
            for (const std::string& p : in_paths)
                lexica.emplace_back(p, load_lexicon(p));
            lexica.emplace_back(ref_path, load_lexicon(ref_path));
            auto verbs = load_verb_list(verbs_path);
            auto os = open_out(out_path);
            valex::report_matrix(os, lexica, valex::level_from_name(level_str),
                                 verbs, lexica.size() - 1);
            write_manifest(out_path, "eval", flags, seed);
        } else if (rc->parsed()) {
            Lexicon lex = load_lexicon(lexicon_path);
            auto it = lex.entries.find(verb);
            if (it == lex.entries.end())
                throw valex::DataError("verb not in lexicon: " + verb);
            valex::FrameSet fs;
            for (const auto& [f, c] : it->second) fs.insert(f);
            for (const valex::Frame& f : valex::reconstruct_dp(valex::derive_triple(fs)))
                std::cout << f.str() << "\n";
        } else if (ag->parsed()) {
            Lexicon a = load_lexicon(in_paths.at(0));
            Lexicon b = load_lexicon(lexicon_path);
            std::cout << valex::format_count(
                             valex::agreement_score(lexicon_matrices(a),
                                                    lexicon_matrices(b)))
                      << "\n";
        } else if (sy->parsed()) {
            synth_cfg.seed = seed;
            synth_cfg.noise = noise;
            synth_cfg.mode = gold_mode == "free" ? valex::GoldMode::Free
                                                 : valex::GoldMode::MatrixConsistent;
            Lexicon gold = valex::gen_gold(synth_cfg);
            Bank bank = valex::gen_bank(gold, synth_cfg);
            save_lexicon(gold, out_gold);
            auto os = open_out(out_bank);
            valex::write_bank(bank, os);
            write_manifest(out_bank, "synth", flags, seed);
        }
    } catch (const valex::NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const valex::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
