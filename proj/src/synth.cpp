#include "valex/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "valex/error.hpp"

namespace valex {

std::vector<ArgToken> inventory_tokens(int n) {
    std::vector<ArgToken> toks;
    toks.reserve(n);
    for (int i = 0; i < n; ++i) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "a%02d", i);
        toks.emplace_back(buf);
    }
    return toks;
}

namespace {

std::string verb_name(int i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "v%03d", i);
    return buf;
}

std::mt19937_64 derived_rng(std::uint64_t seed, std::uint64_t salt) {
    return std::mt19937_64(seed ^ (0x9e3779b97f4a7c15ULL * (salt + 1)));
}

CoocMatrix random_global_matrix(const std::vector<ArgToken>& inv,
                                std::mt19937_64& rng) {
    CoocMatrix m = make_matrix(inv);
    // Indep-leaning mix keeps reconstruction sets from collapsing to one or
    // two frames while Excl/Impl cells keep them from exploding.
    static constexpr Relation kChoices[] = {
        Relation::Excl, Relation::Impl, Relation::ImplBy, Relation::Indep,
        Relation::Indep, Relation::Excl};
    std::uniform_int_distribution<int> pick(0, 5);
    for (std::size_t i = 0; i < m.order.size(); ++i)
        for (std::size_t j = i + 1; j < m.order.size(); ++j)
            m.set_pair(i, j, kChoices[pick(rng)]);
    return m;
}

CoocMatrix restrict_matrix(const CoocMatrix& global,
                           const std::vector<ArgToken>& order) {
    CoocMatrix m = make_matrix(order);
    for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t j = i + 1; j < order.size(); ++j)
            m.set_pair(i, j, global.at(order[i], order[j]));
    return m;
}

Frame random_frame(const std::vector<ArgToken>& pool, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> len(1, std::max<std::size_t>(1, pool.size()));
    std::vector<ArgToken> shuffled = pool;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    shuffled.resize(len(rng));
    return Frame(std::move(shuffled));
}

}  // namespace

Lexicon gen_gold(const SynthConfig& config) {
    if (config.inventory < 2) throw DataError("gen_gold: inventory too small");
    if (config.max_args_per_verb > config.inventory)
        throw DataError("gen_gold: inventory smaller than max args per verb");
    std::vector<ArgToken> inv = inventory_tokens(config.inventory);
    std::mt19937_64 setup_rng = derived_rng(config.seed, 0);
    CoocMatrix global = random_global_matrix(inv, setup_rng);

    Lexicon gold;
    for (int vi = 0; vi < config.n_verbs; ++vi) {
        std::mt19937_64 rng = derived_rng(config.seed, 1000 + vi);
        FrameSet frames;
        for (int attempt = 0; attempt < 200 && frames.empty(); ++attempt) {
            std::uniform_int_distribution<int> nargs(2, config.max_args_per_verb);
            std::vector<ArgToken> pool = inv;
            std::shuffle(pool.begin(), pool.end(), rng);
            pool.resize(nargs(rng));
            std::sort(pool.begin(), pool.end());

            FrameSet candidate;
            if (config.mode == GoldMode::MatrixConsistent) {
                CoocMatrix m = restrict_matrix(global, pool);
                ArgSet possible(pool.begin(), pool.end());
                ArgSet required;
                std::bernoulli_distribution req(0.3);
                for (const ArgToken& a : pool)
                    if (req(rng)) required.insert(a);
                candidate = reconstruct_dp(EntryTriple{possible, required, m});
            } else {
                std::uniform_int_distribution<int> nframes(2, config.max_frames_per_verb);
                int want = nframes(rng);
                for (int f = 0; f < want; ++f) candidate.insert(random_frame(pool, rng));
            }
            if (candidate.size() >= 2 &&
                candidate.size() <= static_cast<std::size_t>(config.max_frames_per_verb))
                frames = std::move(candidate);
        }
        // A stubborn verb falls back to a simple two-frame entry consistent
        // with any matrix restricted to a single chain.
        if (frames.empty()) {
            frames.insert(Frame({inv[vi % config.inventory]}));
            frames.insert(Frame({inv[vi % config.inventory],
                                 inv[(vi + 1) % config.inventory]}));
            if (config.mode == GoldMode::MatrixConsistent)
                frames = reconstruct_dp(derive_triple(frames));
        }
        for (const Frame& f : frames) gold.add(verb_name(vi), f, 1.0);
    }
    return gold;
}

namespace {

Frame edit_frame(const Frame& f, const std::vector<ArgToken>& inv,
                 const SynthConfig& config, std::mt19937_64& rng) {
    std::vector<ArgToken> absent;
    for (const ArgToken& a : inv)
        if (!f.contains(a)) absent.push_back(a);

    double wsum = config.w_add + config.w_drop + config.w_swap;
    std::uniform_real_distribution<double> u(0.0, wsum);
    double x = u(rng);
    int kind = x < config.w_add ? 0 : x < config.w_add + config.w_drop ? 1 : 2;
    if (f.empty()) kind = 0;
    if (absent.empty()) kind = 1;

    std::vector<ArgToken> toks(f.begin(), f.end());
    auto pick = [&rng](std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    };
    switch (kind) {
        case 0:  // add
            toks.push_back(absent[pick(absent.size())]);
            break;
        case 1:  // drop
            toks.erase(toks.begin() + static_cast<long>(pick(toks.size())));
            break;
        default:  // swap
            toks[pick(toks.size())] = absent[pick(absent.size())];
            break;
    }
    return Frame(std::move(toks));
}

}  // namespace

Bank gen_bank(const Lexicon& gold, const SynthConfig& config) {
    if (gold.entries.empty()) throw DataError("gen_bank: empty gold lexicon");
    if (config.ambiguity_min < 1 || config.ambiguity_max < config.ambiguity_min ||
        config.ambiguity_max > 40)
        throw DataError("gen_bank: ambiguity range invalid");
    if (config.noise < 0.0 || config.noise >= 1.0)
        throw DataError("gen_bank: noise must lie in [0, 1)");

    std::vector<ArgToken> inv = inventory_tokens(config.inventory);
    std::vector<std::string> verbs;
    for (const auto& [v, fs] : gold.entries) verbs.push_back(v);

    // Clause schedule: guaranteed observations per gold frame, then extra
    // clauses with Zipf-skewed verb choice.
    std::mt19937_64 sched_rng = derived_rng(config.seed, 0xB0B);
    std::vector<std::pair<std::string, Frame>> schedule;
    long long extra_total = 0;
    for (const std::string& v : verbs) {
        const auto& frames = gold.entries.at(v);
        std::uniform_int_distribution<int> target(config.clauses_min, config.clauses_max);
        long long guaranteed =
            static_cast<long long>(config.min_frame_obs) * frames.size();
        long long n = std::max<long long>(target(sched_rng), guaranteed);
        for (const auto& [f, c] : frames)
            for (int r = 0; r < config.min_frame_obs; ++r) schedule.emplace_back(v, f);
        extra_total += n - guaranteed;
    }
    std::vector<double> zipf(verbs.size());
    for (std::size_t i = 0; i < verbs.size(); ++i)
        zipf[i] = 1.0 / std::pow(static_cast<double>(i + 1), config.zipf_exponent);
    std::discrete_distribution<std::size_t> verb_dist(zipf.begin(), zipf.end());
    for (long long e = 0; e < extra_total; ++e) {
        const std::string& v = verbs[verb_dist(sched_rng)];
        const auto& frames = gold.entries.at(v);
        std::uniform_int_distribution<std::size_t> fpick(0, frames.size() - 1);
        auto it = frames.begin();
        std::advance(it, fpick(sched_rng));
        schedule.emplace_back(v, it->first);
    }
    std::shuffle(schedule.begin(), schedule.end(), sched_rng);

    Bank bank;
    bank.forests.reserve(schedule.size());
    for (std::size_t ci = 0; ci < schedule.size(); ++ci) {
        std::mt19937_64 rng = derived_rng(config.seed, 0xC1A05E + ci);
        const auto& [verb, true_frame] = schedule[ci];

        ParseForest forest;
        forest.clause_id = static_cast<int>(ci);

        std::bernoulli_distribution corrupt(config.noise);
        bool noisy = config.noise > 0.0 && corrupt(rng);
        Frame shown = noisy ? edit_frame(true_frame, inv, config, rng) : true_frame;
        forest.parses.push_back(ReducedParse{verb, shown, !noisy});

        std::uniform_int_distribution<int> kdist(config.ambiguity_min,
                                                 config.ambiguity_max);
        int k = kdist(rng);
        const auto& gold_frames = gold.entries.at(verb);
        for (int d = 1; d < k; ++d) {
            for (int attempt = 0; attempt < 8; ++attempt) {
                Frame alt = edit_frame(shown, inv, config, rng);
                // Distractors must stay outside the verb's true frame set;
                // otherwise they masquerade as evidence for another frame.
                if (gold_frames.count(alt)) continue;
                ReducedParse p{verb, alt, false};
                bool dup = false;
                for (const ReducedParse& q : forest.parses)
                    if (q == p) { dup = true; break; }
                if (!dup) {
                    forest.parses.push_back(std::move(p));
                    break;
                }
            }
        }
        std::shuffle(forest.parses.begin(), forest.parses.end(), rng);
        bank.forests.push_back(std::move(forest));
    }
    return bank;
}

}  // namespace valex
