#include "valex/bank_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

#include "valex/error.hpp"

namespace valex {

void Lexicon::add(const std::string& verb, const Frame& f, double count) {
    if (count <= 0) return;
    entries[verb][f] += count;
}

bool Lexicon::contains(const std::string& verb, const Frame& f) const {
    auto it = entries.find(verb);
    return it != entries.end() && it->second.count(f) > 0;
}

double Lexicon::total(const std::string& verb) const {
    auto it = entries.find(verb);
    if (it == entries.end()) return 0.0;
    double sum = 0.0;
    for (const auto& [f, c] : it->second) sum += c;
    return sum;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void fail(int line_no, const std::string& msg) {
    throw DataError("line " + std::to_string(line_no) + ": " + msg);
}

void finish_forest(Bank& bank, ParseForest& cur, int line_no) {
    if (cur.parses.empty()) {
        if (cur.sentence) fail(line_no, "forest with sentence but no parses");
        return;
    }
    cur.clause_id = static_cast<int>(bank.forests.size());
    bank.forests.push_back(std::move(cur));
    cur = ParseForest{};
}

}  // namespace

Bank read_bank(std::istream& in) {
    Bank bank;
    ParseForest cur;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string t = trim(line);
        if (t.empty()) {
            finish_forest(bank, cur, line_no);
            continue;
        }
        if (t[0] == '#') {
            if (!cur.parses.empty() || cur.sentence)
                fail(line_no, "sentence line must open a block");
            cur.sentence = trim(t.substr(1));
            continue;
        }
        bool gold = false;
        if (t[0] == '+') {
            gold = true;
            t = trim(t.substr(1));
        }
        std::size_t bar = t.find('|');
        if (bar == std::string::npos) fail(line_no, "missing '|' separator");
        std::string verb = trim(t.substr(0, bar));
        if (verb.empty()) fail(line_no, "empty verb lemma");
        Frame frame;
        try {
            frame = Frame::parse(t.substr(bar + 1));
        } catch (const DataError& e) {
            fail(line_no, e.what());
        }
        ReducedParse p{verb, frame, gold};
        for (const ReducedParse& q : cur.parses)
            if (q == p) fail(line_no, "duplicate (verb, frame) parse in forest");
        cur.parses.push_back(std::move(p));
    }
    finish_forest(bank, cur, line_no);
    return bank;
}

void write_bank(const Bank& bank, std::ostream& out) {
    for (const ParseForest& forest : bank.forests) {
        if (forest.sentence) out << "# " << *forest.sentence << "\n";
        for (const ReducedParse& p : forest.parses)
            out << (p.gold ? "+ " : "  ") << p.verb << " | " << p.frame.str()
                << "\n";
        out << "\n";
    }
}

std::string format_count(double c) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9f", c);
    std::string s(buf);
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

Lexicon read_lexicon(std::istream& in) {
    Lexicon lex;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        std::vector<std::string> fields;
        std::size_t pos = 0;
        while (true) {
            std::size_t tab = line.find('\t', pos);
            fields.push_back(tab == std::string::npos
                                 ? line.substr(pos)
                                 : line.substr(pos, tab - pos));
            if (tab == std::string::npos) break;
            pos = tab + 1;
        }
        if (fields.size() < 2 || fields.size() > 3)
            fail(line_no, "expected 2 or 3 TSV fields");
        std::string verb = trim(fields[0]);
        if (verb.empty()) fail(line_no, "empty verb lemma");
        Frame frame;
        try {
            frame = Frame::parse(fields[1]);
        } catch (const DataError& e) {
            fail(line_no, e.what());
        }
        double count = 1.0;  // gold convention when the column is absent
        if (fields.size() == 3) {
            std::string cs = trim(fields[2]);
            char* end = nullptr;
            count = std::strtod(cs.c_str(), &end);
            if (cs.empty() || end != cs.c_str() + cs.size() ||
                !std::isfinite(count) || count <= 0)
                fail(line_no, "non-numeric or non-positive count: '" + cs + "'");
        }
        if (lex.contains(verb, frame))
            fail(line_no, "duplicate (verb, frame) row");
        lex.add(verb, frame, count);
    }
    return lex;
}

void write_lexicon(const Lexicon& lex, std::ostream& out) {
    for (const auto& [verb, frames] : lex.entries)
        for (const auto& [frame, count] : frames)
            out << verb << "\t" << frame.str() << "\t" << format_count(count)
                << "\n";
}

Lexicon hard_counts(const Bank& bank, const std::vector<ReducedParse>& selections) {
    if (selections.size() != bank.forests.size())
        throw DataError("hard_counts: one selection per forest required");
    Lexicon lex;
    for (std::size_t i = 0; i < bank.forests.size(); ++i) {
        const ReducedParse& sel = selections[i];
        bool found = false;
        for (const ReducedParse& p : bank.forests[i].parses)
            if (p == sel) { found = true; break; }
        if (!found)
            throw DataError("hard_counts: selection not in forest " +
                            std::to_string(bank.forests[i].clause_id));
        lex.add(sel.verb, sel.frame, 1.0);
    }
    return lex;
}

Lexicon soft_counts(const Bank& bank, const std::map<ParseType, double>& weights) {
    Lexicon lex;
    const double m = static_cast<double>(bank.forests.size());
    // Only parse types that occur in the bank get mass.
    std::map<ParseType, bool> seen;
    for (const ParseForest& forest : bank.forests)
        for (const ReducedParse& p : forest.parses) seen[parse_type(p)] = true;
    for (const auto& [type, present] : seen) {
        auto it = weights.find(type);
        if (it == weights.end())
            throw DataError("soft_counts: no weight for parse type " +
                            type.first + " | " + type.second.str());
        lex.add(type.first, type.second, m * it->second);
    }
    return lex;
}

}  // namespace valex
