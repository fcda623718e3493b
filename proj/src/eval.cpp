#include "valex/eval.hpp"

#include <cstdio>
#include <ostream>
#include <set>

#include "valex/error.hpp"
#include "valex/frame_core.hpp"

namespace valex {

EvalLevel level_from_name(const std::string& name) {
    if (name == "frame") return EvalLevel::Frame;
    if (name == "argument") return EvalLevel::Argument;
    throw DataError("unknown eval level: '" + name + "'");
}

namespace {

using PairSet = std::set<std::pair<std::string, std::string>>;

PairSet pairs_of(const Lexicon& lex, EvalLevel level,
                 const std::vector<std::string>& verbs) {
    PairSet out;
    for (const std::string& verb : verbs) {
        auto it = lex.entries.find(verb);
        if (it == lex.entries.end()) continue;
        if (level == EvalLevel::Frame) {
            for (const auto& [f, c] : it->second) out.emplace(verb, f.str());
        } else {
            for (const auto& [f, c] : it->second)
                for (const ArgToken& a : f) out.emplace(verb, a);
        }
    }
    return out;
}

long intersection_size(const PairSet& a, const PairSet& b) {
    long n = 0;
    for (const auto& p : a)
        if (b.count(p)) ++n;
    return n;
}

std::string two_places(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", x);
    return buf;
}

}  // namespace

long pair_count(const Lexicon& lex1, const Lexicon& lex2, EvalLevel level,
                const std::vector<std::string>& verbs) {
    if (verbs.empty()) throw DataError("pair_count: empty verb list");
    PairSet a = pairs_of(lex1, level, verbs);
    PairSet b = pairs_of(lex2, level, verbs);
    return intersection_size(a, b);
}

PRF prf(const Lexicon& candidate, const Lexicon& reference, EvalLevel level,
        const std::vector<std::string>& verbs) {
    if (verbs.empty()) throw DataError("prf: empty verb list");
    PairSet cand = pairs_of(candidate, level, verbs);
    PairSet ref = pairs_of(reference, level, verbs);
    if (ref.empty()) throw DataError("prf: reference has no pairs on the verb list");
    long shared = intersection_size(cand, ref);
    PRF out;
    out.recall = static_cast<double>(shared) / static_cast<double>(ref.size());
    out.precision = cand.empty() ? 0.0
                                 : static_cast<double>(shared) /
                                       static_cast<double>(cand.size());
    double pr = out.precision + out.recall;
    out.f = pr > 0 ? 2.0 * out.precision * out.recall / pr : 0.0;
    return out;
}

void report_matrix(std::ostream& out,
                   const std::vector<std::pair<std::string, Lexicon>>& lexica,
                   EvalLevel level, const std::vector<std::string>& verbs,
                   std::size_t ref_index) {
    if (lexica.size() < 2) throw DataError("report_matrix: need at least 2 lexica");
    if (ref_index >= lexica.size()) throw DataError("report_matrix: bad reference index");
    if (verbs.empty()) throw DataError("report_matrix: empty verb list");

    std::vector<PairSet> sets;
    sets.reserve(lexica.size());
    for (const auto& [name, lex] : lexica) sets.push_back(pairs_of(lex, level, verbs));

    out << "name";
    for (const auto& [name, lex] : lexica) out << "\t" << name;
    out << "\n";
    for (std::size_t i = 0; i < lexica.size(); ++i) {
        out << lexica[i].first;
        for (std::size_t j = 0; j <= i; ++j)
            out << "\t" << intersection_size(sets[i], sets[j]);
        out << "\n";
    }

    std::vector<PRF> scores;
    for (std::size_t i = 0; i < lexica.size(); ++i)
        scores.push_back(prf(lexica[i].second, lexica[ref_index].second, level, verbs));
    out << "recall";
    for (const PRF& s : scores) out << "\t" << two_places(s.recall);
    out << "\nprecision";
    for (const PRF& s : scores) out << "\t" << two_places(s.precision);
    out << "\nF";
    for (const PRF& s : scores) out << "\t" << two_places(s.f);
    out << "\n";

    // Full precision sidecar rows.
    out << "#full\trecall";
    for (const PRF& s : scores) out << "\t" << format_count(s.recall);
    out << "\n#full\tprecision";
    for (const PRF& s : scores) out << "\t" << format_count(s.precision);
    out << "\n#full\tF";
    for (const PRF& s : scores) out << "\t" << format_count(s.f);
    out << "\n";
}

}  // namespace valex
