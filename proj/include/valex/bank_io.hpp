#ifndef VALEX_BANK_IO_HPP
#define VALEX_BANK_IO_HPP

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "valex/frame.hpp"

namespace valex {

// (verb, frame) is the parse's identity; equal pairs are the same parse type.
struct ReducedParse {
    std::string verb;
    Frame frame;
    bool gold = false;

    friend bool operator==(const ReducedParse& a, const ReducedParse& b) {
        return a.verb == b.verb && a.frame == b.frame;
    }
};

using ParseType = std::pair<std::string, Frame>;

inline ParseType parse_type(const ReducedParse& p) { return {p.verb, p.frame}; }

struct ParseForest {
    int clause_id = 0;
    std::optional<std::string> sentence;
    std::vector<ReducedParse> parses;
};

struct Bank {
    std::vector<ParseForest> forests;
};

// Verb -> (frame -> count). Counts are positive; gold dictionaries use 1.
struct Lexicon {
    std::map<std::string, std::map<Frame, double>> entries;

    void add(const std::string& verb, const Frame& f, double count);
    bool contains(const std::string& verb, const Frame& f) const;
    double total(const std::string& verb) const;

    friend bool operator==(const Lexicon&, const Lexicon&) = default;
};

// Bank file: blank-line-separated blocks, optional "# <sentence>" line,
// parse lines "[+] <verb> | <comma-joined args>".
Bank read_bank(std::istream& in);
void write_bank(const Bank& bank, std::ostream& out);

// Lexicon file: TSV rows "verb \t args \t count", count optional on input.
Lexicon read_lexicon(std::istream& in);
void write_lexicon(const Lexicon& lex, std::ostream& out);

// Canonical decimal rendering of a count, up to 9 fractional digits.
std::string format_count(double c);

// Frequency table of one selected parse per forest.
Lexicon hard_counts(const Bank& bank, const std::vector<ReducedParse>& selections);

// Fractional counts M * p_j from a converged weight table.
Lexicon soft_counts(const Bank& bank, const std::map<ParseType, double>& weights);

}  // namespace valex

#endif
