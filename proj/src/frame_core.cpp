#include "valex/frame_core.hpp"

#include <algorithm>
#include <cstdint>

#include "valex/error.hpp"

namespace valex {

Relation converse(Relation r) {
    switch (r) {
        case Relation::Impl: return Relation::ImplBy;
        case Relation::ImplBy: return Relation::Impl;
        default: return r;
    }
}

std::string_view relation_code(Relation r) {
    switch (r) {
        case Relation::Excl: return "x";
        case Relation::Cooc: return "<->";
        case Relation::Impl: return "->";
        case Relation::ImplBy: return "<-";
        case Relation::Indep: return "T";
    }
    return "?";
}

Relation relation_from_code(std::string_view code) {
    if (code == "x") return Relation::Excl;
    if (code == "<->") return Relation::Cooc;
    if (code == "->") return Relation::Impl;
    if (code == "<-") return Relation::ImplBy;
    if (code == "T") return Relation::Indep;
    throw DataError("unknown relation code: '" + std::string(code) + "'");
}

Relation CoocMatrix::at(const ArgToken& a, const ArgToken& b) const {
    std::size_t i = index_of(a), j = index_of(b);
    if (i == npos || j == npos)
        throw DataError("argument not in matrix order: " + (i == npos ? a : b));
    return at(i, j);
}

void CoocMatrix::set_pair(std::size_t i, std::size_t j, Relation r) {
    cells[i * order.size() + j] = r;
    cells[j * order.size() + i] = converse(r);
}

std::size_t CoocMatrix::index_of(const ArgToken& tok) const {
    auto it = std::find(order.begin(), order.end(), tok);
    return it == order.end() ? npos : static_cast<std::size_t>(it - order.begin());
}

CoocMatrix make_matrix(std::vector<ArgToken> order, Relation fill) {
    CoocMatrix m;
    m.order = std::move(order);
    std::size_t n = m.order.size();
    m.cells.assign(n * n, fill);
    for (std::size_t i = 0; i < n; ++i) m.cells[i * n + i] = Relation::Cooc;
    return m;
}

std::pair<ArgSet, ArgSet> arg_sets(const FrameSet& frames) {
    if (frames.empty())
        throw DataError("arg_sets: undefined required set (empty frame family)");
    ArgSet possible, required;
    bool first = true;
    for (const Frame& f : frames) {
        possible.insert(f.begin(), f.end());
        if (first) {
            required.insert(f.begin(), f.end());
            first = false;
        } else {
            ArgSet kept;
            for (const ArgToken& a : required)
                if (f.contains(a)) kept.insert(a);
            required = std::move(kept);
        }
    }
    return {std::move(possible), std::move(required)};
}

namespace {

Relation classify(const FrameSet& frames, const ArgToken& a, const ArgToken& b) {
    // [a], [b] as frame index sets; works for any family size.
    std::vector<bool> sa, sb;
    sa.reserve(frames.size());
    sb.reserve(frames.size());
    for (const Frame& f : frames) {
        sa.push_back(f.contains(a));
        sb.push_back(f.contains(b));
    }
    bool inter_empty = true, inter_eq_a = true, inter_eq_b = true;
    for (std::size_t i = 0; i < sa.size(); ++i) {
        bool both = sa[i] && sb[i];
        if (both) inter_empty = false;
        if (sa[i] && !both) inter_eq_a = false;
        if (sb[i] && !both) inter_eq_b = false;
    }
    if (inter_empty) return Relation::Excl;
    if (inter_eq_a && inter_eq_b) return Relation::Cooc;
    if (inter_eq_a) return Relation::Impl;
    if (inter_eq_b) return Relation::ImplBy;
    return Relation::Indep;
}

}  // namespace

Relation relation_of(const FrameSet& frames, const ArgToken& a, const ArgToken& b) {
    auto [possible, required] = arg_sets(frames);
    if (!possible.count(a) || !possible.count(b))
        throw DataError("relation_of: argument not possible: " +
                        (possible.count(a) ? b : a));
    return classify(frames, a, b);
}

CoocMatrix cooc_matrix(const FrameSet& frames) {
    auto [possible, required] = arg_sets(frames);
    CoocMatrix m = make_matrix({possible.begin(), possible.end()});
    std::size_t n = m.order.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            m.set_pair(i, j, classify(frames, m.order[i], m.order[j]));
    return m;
}

EntryTriple derive_triple(const FrameSet& frames) {
    auto [possible, required] = arg_sets(frames);
    return EntryTriple{possible, required, cooc_matrix(frames)};
}

bool phi(const Frame& f, const CoocMatrix& m, const ArgToken& a, const ArgToken& b) {
    bool ina = f.contains(a), inb = f.contains(b);
    switch (m.at(a, b)) {
        case Relation::Excl: return !(ina && inb);
        case Relation::Cooc: return ina == inb;
        case Relation::Impl: return !ina || inb;
        case Relation::ImplBy: return !inb || ina;
        case Relation::Indep: return true;
    }
    return true;
}

namespace {

void check_triple(const EntryTriple& t) {
    for (const ArgToken& a : t.required)
        if (!t.possible.count(a))
            throw DataError("triple: required argument not possible: " + a);
    if (t.matrix.order.size() != t.possible.size())
        throw DataError("triple: matrix order does not enumerate possible set");
    for (const ArgToken& a : t.matrix.order)
        if (!t.possible.count(a))
            throw DataError("triple: matrix argument not possible: " + a);
}

Frame frame_from_mask(const std::vector<ArgToken>& order, std::uint32_t mask) {
    std::vector<ArgToken> toks;
    for (std::size_t i = 0; i < order.size(); ++i)
        if (mask & (std::uint32_t{1} << i)) toks.push_back(order[i]);
    return Frame(std::move(toks));
}

}  // namespace

FrameSet reconstruct_bruteforce(const EntryTriple& triple) {
    check_triple(triple);
    const std::size_t n = triple.matrix.order.size();
    if (n > 20) throw NumericError("reconstruct_bruteforce: |possible| > 20, use DP");

    std::uint32_t req_mask = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (triple.required.count(triple.matrix.order[i]))
            req_mask |= std::uint32_t{1} << i;

    FrameSet out;
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
        if ((mask & req_mask) != req_mask) continue;
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i)
            for (std::size_t j = 0; j < n && ok; ++j) {
                bool ina = mask & (std::uint32_t{1} << i);
                bool inb = mask & (std::uint32_t{1} << j);
                switch (triple.matrix.at(i, j)) {
                    case Relation::Excl: ok = !(ina && inb); break;
                    case Relation::Cooc: ok = ina == inb; break;
                    case Relation::Impl: ok = !ina || inb; break;
                    case Relation::ImplBy: ok = !inb || ina; break;
                    case Relation::Indep: break;
                }
            }
        if (ok) out.insert(frame_from_mask(triple.matrix.order, mask));
    }
    return out;
}

FrameSet reconstruct_dp(const EntryTriple& triple) {
    check_triple(triple);
    const std::size_t n = triple.matrix.order.size();

    // A state at level k is the set of included arguments among b_1..b_k;
    // the excluded set is the complement within the prefix, so a bitmask of
    // the included ones identifies the state.
    std::vector<std::uint64_t> states{0};
    for (std::size_t k = 0; k < n; ++k) {
        const bool req = triple.required.count(triple.matrix.order[k]) > 0;
        std::vector<std::uint64_t> next;
        next.reserve(states.size() * 2);
        for (std::uint64_t inc : states) {
            bool can_include = true, can_exclude = !req;
            for (std::size_t a = 0; a < k && (can_include || can_exclude); ++a) {
                Relation r = triple.matrix.at(k, a);
                if (inc & (std::uint64_t{1} << a)) {
                    // a already included
                    if (r == Relation::Excl) can_include = false;
                    if (r == Relation::Cooc || r == Relation::ImplBy)
                        can_exclude = false;
                } else {
                    // a already excluded: b_k -> a or b_k <-> a would force a in.
                    if (r == Relation::Cooc || r == Relation::Impl)
                        can_include = false;
                }
            }
            if (can_include) next.push_back(inc | (std::uint64_t{1} << k));
            if (can_exclude) next.push_back(inc);
        }
        states = std::move(next);
    }

    FrameSet out;
    for (std::uint64_t inc : states)
        out.insert(frame_from_mask(triple.matrix.order, static_cast<std::uint32_t>(inc)));
    return out;
}

double agreement_score(const MatrixCollection& coll1, const MatrixCollection& coll2) {
    long long total = 0, agree = 0;
    for (const auto& [verb, m1] : coll1) {
        auto it = coll2.find(verb);
        if (it == coll2.end()) continue;
        const CoocMatrix& m2 = it->second;
        std::vector<std::pair<std::size_t, std::size_t>> shared;
        for (std::size_t i = 0; i < m1.order.size(); ++i) {
            std::size_t j = m2.index_of(m1.order[i]);
            if (j != CoocMatrix::npos) shared.emplace_back(i, j);
        }
        for (const auto& [i1, i2] : shared)
            for (const auto& [j1, j2] : shared) {
                ++total;
                if (m1.at(i1, j1) == m2.at(i2, j2)) ++agree;
            }
    }
    if (total == 0) throw DataError("agreement_score: no comparable triples");
    return static_cast<double>(agree) / static_cast<double>(total);
}

}  // namespace valex
