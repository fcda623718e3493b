#include "valex/em_select.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "valex/error.hpp"

namespace valex {

SelectionPolicy policy_from_name(const std::string& name) {
    if (name == "em-short") return SelectionPolicy::EmShort;
    if (name == "em-max") return SelectionPolicy::EmMax;
    if (name == "min-length") return SelectionPolicy::MinLength;
    if (name == "blind") return SelectionPolicy::Blind;
    throw DataError("unknown selection policy: '" + name + "'");
}

std::string policy_name(SelectionPolicy p) {
    switch (p) {
        case SelectionPolicy::EmShort: return "em-short";
        case SelectionPolicy::EmMax: return "em-max";
        case SelectionPolicy::MinLength: return "min-length";
        case SelectionPolicy::Blind: return "blind";
    }
    return "?";
}

WeightTable em_weights(const Bank& bank, int n_iters) {
    if (bank.forests.empty()) throw DataError("em_weights: empty bank");
    if (n_iters < 1) throw DataError("em_weights: n_iters must be >= 1");

    WeightTable table;
    for (const ParseForest& forest : bank.forests)
        for (const ReducedParse& p : forest.parses)
            table.weights[parse_type(p)] = 1.0;

    const double m = static_cast<double>(bank.forests.size());
    for (int n = 2; n <= n_iters; ++n) {
        std::map<ParseType, double> next;
        for (const auto& [type, w] : table.weights) next[type] = 0.0;
        for (const ParseForest& forest : bank.forests) {
            double total = 0.0;
            for (const ReducedParse& p : forest.parses)
                total += table.weights.at(parse_type(p));
            // Impossible with all-ones init and finite banks.
            if (total <= 0.0)
                throw NumericError("em_weights: zero-weight forest");
            for (const ReducedParse& p : forest.parses)
                next[parse_type(p)] += table.weights.at(parse_type(p)) / total;
        }
        for (auto& [type, w] : next) w /= m;
        table.weights = std::move(next);
        table.iteration = n;
    }
    if (n_iters == 1) table.iteration = 1;
    return table;
}

std::vector<double> forest_conditionals(const ParseForest& forest,
                                        const WeightTable& table) {
    std::vector<double> cond(forest.parses.size(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < forest.parses.size(); ++i) {
        auto it = table.weights.find(parse_type(forest.parses[i]));
        if (it == table.weights.end())
            throw DataError("forest_conditionals: parse type missing from table");
        cond[i] = it->second;
        total += it->second;
    }
    if (total <= 0.0) throw NumericError("forest_conditionals: zero total weight");
    for (double& c : cond) c /= total;
    return cond;
}

double log_likelihood(const Bank& bank, const WeightTable& table) {
    double ll = 0.0;
    for (const ParseForest& forest : bank.forests) {
        double total = 0.0;
        for (const ReducedParse& p : forest.parses) {
            auto it = table.weights.find(parse_type(p));
            if (it == table.weights.end())
                throw DataError("log_likelihood: parse type missing from table");
            total += it->second;
        }
        if (total <= 0.0) return -std::numeric_limits<double>::infinity();
        ll += std::log(total);
    }
    return ll;
}

namespace {

constexpr double kTieRelTol = 1e-12;

std::mt19937_64 forest_rng(std::uint64_t seed, int clause_id) {
    std::uint64_t mixed =
        seed ^ (0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(clause_id) + 1));
    return std::mt19937_64(mixed);
}

std::size_t pick_uniform(const std::vector<std::size_t>& pool, std::mt19937_64& rng) {
    if (pool.size() == 1) return pool[0];
    std::uniform_int_distribution<std::size_t> dist(0, pool.size() - 1);
    return pool[dist(rng)];
}

}  // namespace

std::vector<ReducedParse> select(const Bank& bank, const WeightTable& table,
                                 SelectionPolicy policy, std::uint64_t seed) {
    std::vector<ReducedParse> out;
    out.reserve(bank.forests.size());
    for (const ParseForest& forest : bank.forests) {
        auto rng = forest_rng(seed, forest.clause_id);
        std::vector<std::size_t> pool;

        auto min_length_pool = [&](const std::vector<std::size_t>& among) {
            std::size_t best = static_cast<std::size_t>(-1);
            for (std::size_t i : among)
                best = std::min(best, forest.parses[i].frame.size());
            std::vector<std::size_t> kept;
            for (std::size_t i : among)
                if (forest.parses[i].frame.size() == best) kept.push_back(i);
            return kept;
        };
        auto argmax_pool = [&]() {
            std::vector<double> cond = forest_conditionals(forest, table);
            double best = 0.0;
            for (double c : cond) best = std::max(best, c);
            std::vector<std::size_t> kept;
            for (std::size_t i = 0; i < cond.size(); ++i)
                if (cond[i] >= best * (1.0 - kTieRelTol)) kept.push_back(i);
            return kept;
        };

        std::vector<std::size_t> all(forest.parses.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;

        switch (policy) {
            case SelectionPolicy::EmMax: pool = argmax_pool(); break;
            case SelectionPolicy::EmShort: pool = min_length_pool(argmax_pool()); break;
            case SelectionPolicy::MinLength: pool = min_length_pool(all); break;
            case SelectionPolicy::Blind: pool = all; break;
        }
        out.push_back(forest.parses[pick_uniform(pool, rng)]);
    }
    return out;
}

double disambiguation_accuracy(const Bank& bank,
                               const std::vector<ReducedParse>& selections) {
    if (selections.size() != bank.forests.size())
        throw DataError("disambiguation_accuracy: one selection per forest required");
    long long marked = 0, correct = 0;
    for (std::size_t i = 0; i < bank.forests.size(); ++i) {
        bool has_gold = false, sel_gold = false;
        for (const ReducedParse& p : bank.forests[i].parses) {
            if (!p.gold) continue;
            has_gold = true;
            if (p == selections[i]) sel_gold = true;
        }
        if (has_gold) {
            ++marked;
            if (sel_gold) ++correct;
        }
    }
    if (marked == 0)
        throw DataError("disambiguation_accuracy: no gold-marked forest");
    return static_cast<double>(correct) / static_cast<double>(marked);
}

}  // namespace valex
