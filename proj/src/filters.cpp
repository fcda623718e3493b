#include "valex/filters.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <vector>

#include "valex/error.hpp"

namespace valex {

GridLearnerResult learn_threshold(const std::function<long(double)>& error,
                                  long n_cap) {
    long resolution = 10;
    while (true) {
        long best = -1;
        std::vector<double> minimizers;
        for (long n = 0; n <= resolution; ++n) {
            double p = static_cast<double>(n) / static_cast<double>(resolution);
            long e = error(p);
            if (best < 0 || e < best) {
                best = e;
                minimizers.clear();
            }
            if (e == best) minimizers.push_back(p);
        }
        int d = static_cast<int>(minimizers.size());
        bool capped = resolution >= n_cap;
        if (d >= 10 || capped) {
            // Lower middle grid point for even plateau sizes.
            double median = minimizers[(minimizers.size() - 1) / 2];
            return GridLearnerResult{median, resolution, d, capped && d < 10};
        }
        resolution *= 10;
    }
}

namespace {

double entry_total(const CountedEntry& entry) {
    double sum = 0.0;
    for (const auto& [f, c] : entry) sum += c;
    return sum;
}

double entry_arg_count(const CountedEntry& entry, const ArgToken& a) {
    double sum = 0.0;
    for (const auto& [f, c] : entry)
        if (f.contains(a)) sum += c;
    return sum;
}

FrameSet frame_keys(const CountedEntry& entry) {
    FrameSet fs;
    for (const auto& [f, c] : entry) fs.insert(f);
    return fs;
}

std::vector<std::string> shared_verbs(const Lexicon& prelim,
                                      const Lexicon& training) {
    std::vector<std::string> verbs;
    for (const auto& [verb, frames] : prelim.entries)
        if (training.entries.count(verb)) verbs.push_back(verb);
    if (verbs.empty())
        throw DataError("no verbs shared between preliminary and training lexica");
    return verbs;
}

}  // namespace

ArgThresholds learn_arg_thresholds(const Lexicon& prelim, const Lexicon& training,
                                   int t) {
    std::vector<std::string> verbs = shared_verbs(prelim, training);

    // Gold argument sets and per-verb counts, one classification per verb.
    struct VerbView {
        double total;
        ArgSet gold_possible;
        ArgSet gold_required;
        const CountedEntry* entry;
    };
    std::vector<VerbView> views;
    ArgSet all_args;
    for (const std::string& v : verbs) {
        const CountedEntry& entry = prelim.entries.at(v);
        auto [gl, ge] = arg_sets(frame_keys(training.entries.at(v)));
        for (const auto& [f, c] : entry) all_args.insert(f.begin(), f.end());
        all_args.insert(gl.begin(), gl.end());
        views.push_back(VerbView{entry_total(entry), std::move(gl), std::move(ge),
                                 &entry});
    }

    ArgThresholds th;
    th.t = t;
    for (const ArgToken& a : all_args) {
        std::vector<std::pair<double, double>> counts;  // (c(v,a), c(v))
        counts.reserve(views.size());
        for (const VerbView& vw : views)
            counts.emplace_back(entry_arg_count(*vw.entry, a), vw.total);

        auto err_pos = [&](double p) {
            long e = 0;
            for (std::size_t i = 0; i < views.size(); ++i) {
                bool kept = counts[i].first >= p * counts[i].second + t;
                if (kept != (views[i].gold_possible.count(a) > 0)) ++e;
            }
            return e;
        };
        auto err_neg = [&](double p) {
            long e = 0;
            for (std::size_t i = 0; i < views.size(); ++i) {
                bool required =
                    !(counts[i].second - counts[i].first >= p * counts[i].second + 1);
                if (required != (views[i].gold_required.count(a) > 0)) ++e;
            }
            return e;
        };
        th.p_pos[a] = learn_threshold(err_pos).threshold;
        th.p_neg[a] = learn_threshold(err_neg).threshold;
    }
    return th;
}

ArgSet filter_possible(const CountedEntry& entry, const ArgThresholds& th) {
    double total = entry_total(entry);
    if (total <= 0) throw DataError("filter_possible: empty entry");
    ArgSet args;
    for (const auto& [f, c] : entry) args.insert(f.begin(), f.end());
    ArgSet kept;
    for (const ArgToken& a : args) {
        auto it = th.p_pos.find(a);
        if (it == th.p_pos.end()) continue;  // unlearnable: reject
        if (entry_arg_count(entry, a) >= it->second * total + th.t) kept.insert(a);
    }
    return kept;
}

ArgSet filter_required(const CountedEntry& entry, const ArgSet& possible,
                       const ArgThresholds& th) {
    double total = entry_total(entry);
    if (total <= 0) throw DataError("filter_required: empty entry");
    ArgSet required;
    for (const ArgToken& a : possible) {
        auto it = th.p_neg.find(a);
        if (it == th.p_neg.end()) continue;  // unlearnable: reject
        double absent = total - entry_arg_count(entry, a);
        if (!(absent >= it->second * total + 1)) required.insert(a);
    }
    return required;
}

CountedEntry restrict_frames(const CountedEntry& entry, const ArgSet& possible,
                             const ArgSet& required) {
    CountedEntry out;
    for (const auto& [f, c] : entry) {
        std::vector<ArgToken> toks;
        for (const ArgToken& a : f)
            if (possible.count(a)) toks.push_back(a);
        for (const ArgToken& a : required)
            if (!f.contains(a)) toks.push_back(a);
        out[Frame(std::move(toks))] += c;
    }
    return out;
}

double binomial_tail(long k, long n, double p) {
    if (k < 0 || n < 0 || k > n || p < 0.0 || p > 1.0 || !std::isfinite(p))
        throw NumericError("binomial_tail: arguments out of range");
    if (k == 0) return 1.0;
    if (p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;

    long double sum = 0.0L;
    if (n <= 64) {
        // Binomial coefficients via the running product; exact until ~2^63.
        long double q = 1.0L - static_cast<long double>(p);
        long double coef = 1.0L;  // C(n, 0)
        for (long m = 0; m <= n; ++m) {
            if (m >= k)
                sum += coef * std::pow(static_cast<long double>(p), m) *
                       std::pow(q, n - m);
            coef *= static_cast<long double>(n - m) / static_cast<long double>(m + 1);
        }
    } else {
        // Log-space for large n.
        long double lp = std::log(static_cast<long double>(p));
        long double lq = std::log1p(-static_cast<long double>(p));
        long double lgn = std::lgamma(static_cast<long double>(n) + 1.0L);
        long double max_term = -std::numeric_limits<long double>::infinity();
        std::vector<long double> terms;
        terms.reserve(n - k + 1);
        for (long m = k; m <= n; ++m) {
            long double lt = lgn - std::lgamma(static_cast<long double>(m) + 1.0L) -
                             std::lgamma(static_cast<long double>(n - m) + 1.0L) +
                             m * lp + (n - m) * lq;
            terms.push_back(lt);
            max_term = std::max(max_term, lt);
        }
        for (long double lt : terms) sum += std::exp(lt - max_term);
        sum *= std::exp(max_term);
    }
    double result = static_cast<double>(sum);
    return std::clamp(result, 0.0, 1.0);
}

FrameThresholds learn_frame_thresholds(const Lexicon& prelim,
                                       const Lexicon& training, double alpha) {
    std::vector<std::string> verbs = shared_verbs(prelim, training);

    FrameSet all_frames;
    for (const std::string& v : verbs) {
        for (const auto& [f, c] : prelim.entries.at(v)) all_frames.insert(f);
        for (const auto& [f, c] : training.entries.at(v)) all_frames.insert(f);
    }

    FrameThresholds th;
    th.alpha = alpha;
    for (const Frame& f : all_frames) {
        std::vector<std::pair<long, long>> counts;  // (c(v,f), c(v))
        std::vector<bool> gold;
        for (const std::string& v : verbs) {
            const CountedEntry& entry = prelim.entries.at(v);
            auto it = entry.find(f);
            long k = it == entry.end() ? 0 : std::lround(it->second);
            long n = std::lround(entry_total(entry));
            counts.emplace_back(std::min(k, n), n);
            gold.push_back(training.contains(v, f));
        }
        auto err = [&](double p) {
            long e = 0;
            for (std::size_t i = 0; i < counts.size(); ++i) {
                bool retained =
                    binomial_tail(counts[i].first, counts[i].second, p) <= alpha;
                if (retained != static_cast<bool>(gold[i])) ++e;
            }
            return e;
        };
        th.p_f[f] = learn_threshold(err).threshold;
    }
    return th;
}

FrameSet bht_filter(const CountedEntry& entry, const FrameThresholds& th) {
    double total = entry_total(entry);
    if (total <= 0) throw DataError("bht_filter: empty entry");
    long n = std::lround(total);
    FrameSet kept;
    for (const auto& [f, c] : entry) {
        auto it = th.p_f.find(f);
        if (it == th.p_f.end()) continue;  // unlearnable: reject
        long k = std::min(std::lround(c), n);
        if (binomial_tail(k, n, it->second) <= th.alpha) kept.insert(f);
    }
    return kept;
}

CorrectionMethod method_from_name(const std::string& name) {
    if (name == "A" || name == "a") return CorrectionMethod::A;
    if (name == "B" || name == "b") return CorrectionMethod::B;
    if (name == "C" || name == "c") return CorrectionMethod::C;
    throw DataError("unknown matrix correction method: '" + name + "'");
}

long MatrixCorrectionParams::rel_count(const ArgToken& a, const ArgToken& b,
                                       Relation r) const {
    auto it = relation_count.find({a, b});
    if (it == relation_count.end()) return 0;
    auto jt = it->second.find(r);
    return jt == it->second.end() ? 0 : jt->second;
}

MatrixCorrectionParams matrix_majority(const Lexicon& training) {
    // Fixed tie-break order.
    static constexpr Relation kOrder[] = {Relation::Excl, Relation::Cooc,
                                          Relation::Impl, Relation::ImplBy,
                                          Relation::Indep};
    MatrixCorrectionParams params;
    std::map<std::pair<ArgToken, ArgToken>, std::map<Relation, long>> counts;
    for (const auto& [verb, entry] : training.entries) {
        FrameSet frames = frame_keys(entry);
        CoocMatrix m = cooc_matrix(frames);
        for (std::size_t i = 0; i < m.order.size(); ++i)
            for (std::size_t j = i + 1; j < m.order.size(); ++j)
                ++counts[{m.order[i], m.order[j]}][m.at(i, j)];
    }
    // Majorities are decided once per unordered pair and mirrored via the
    // converse so both orientations stay consistent.
    for (const auto& [pair, by_rel] : counts) {
        long total = 0;
        for (const auto& [r, c] : by_rel) total += c;
        Relation best = Relation::Indep;
        long best_count = -1;
        for (Relation r : kOrder) {
            auto it = by_rel.find(r);
            long c = it == by_rel.end() ? 0 : it->second;
            if (c > best_count) {
                best_count = c;
                best = r;
            }
        }
        auto rev = std::make_pair(pair.second, pair.first);
        params.majority[pair] = best;
        params.majority[rev] = converse(best);
        params.pair_count[pair] = total;
        params.pair_count[rev] = total;
        for (const auto& [r, c] : by_rel) {
            params.relation_count[pair][r] = c;
            params.relation_count[rev][converse(r)] = c;
        }
    }
    // All 20 ordered (S, R) rules exist, disabled by default.
    for (Relation s : kOrder)
        for (Relation r : kOrder)
            if (s != r) params.rule[{s, r}] = RuleParam{};
    return params;
}

CoocMatrix correct_matrix(const CoocMatrix& matrix, CorrectionMethod method,
                          const MatrixCorrectionParams& params) {
    if (method == CorrectionMethod::A) return matrix;
    CoocMatrix out = matrix;
    for (std::size_t i = 0; i < matrix.order.size(); ++i)
        for (std::size_t j = i + 1; j < matrix.order.size(); ++j) {
            auto key = std::make_pair(matrix.order[i], matrix.order[j]);
            auto mit = params.majority.find(key);
            if (mit == params.majority.end()) continue;  // unseen pair: keep
            Relation s = matrix.at(i, j);
            Relation r = mit->second;
            if (method == CorrectionMethod::B) {
                out.set_pair(i, j, r);
                continue;
            }
            if (r == s) continue;
            auto rit = params.rule.find({s, r});
            if (rit == params.rule.end() || rit->second.never) continue;
            long crab = params.rel_count(key.first, key.second, r);
            long cab = params.pair_count.at(key);
            if (crab >= rit->second.p * cab + rit->second.t) out.set_pair(i, j, r);
        }
    return out;
}

MatrixCorrectionParams learn_matrix_params(const MatrixCollection& step4,
                                           const Lexicon& training) {
    MatrixCorrectionParams params = matrix_majority(training);

    MatrixCollection gold;
    for (const auto& [verb, entry] : training.entries)
        gold.emplace(verb, cooc_matrix(frame_keys(entry)));

    // Each correctable cell instance belongs to exactly one (S, R) class, so
    // the 20 rules can be optimized independently.
    struct Instance {
        long crab;
        long cab;
        int delta;  // agreement change (both orders) if substituted
    };
    std::map<std::pair<Relation, Relation>, std::vector<Instance>> classes;
    long long total = 0;
    for (const auto& [verb, m4] : step4) {
        auto git = gold.find(verb);
        if (git == gold.end()) continue;
        const CoocMatrix& mg = git->second;
        std::vector<std::pair<std::size_t, std::size_t>> shared;
        for (std::size_t i = 0; i < m4.order.size(); ++i) {
            std::size_t j = mg.index_of(m4.order[i]);
            if (j != CoocMatrix::npos) shared.emplace_back(i, j);
        }
        total += static_cast<long long>(shared.size()) * shared.size();
        for (std::size_t x = 0; x < shared.size(); ++x)
            for (std::size_t y = x + 1; y < shared.size(); ++y) {
                auto [i4, ig] = shared[x];
                auto [j4, jg] = shared[y];
                auto key = std::make_pair(m4.order[i4], m4.order[j4]);
                auto mit = params.majority.find(key);
                if (mit == params.majority.end()) continue;
                Relation s = m4.at(i4, j4);
                Relation r = mit->second;
                if (r == s) continue;
                Relation g = mg.at(ig, jg);
                int delta = 2 * ((r == g) - (s == g));
                if (delta == 0) continue;
                classes[{s, r}].push_back(Instance{
                    params.rel_count(key.first, key.second, r),
                    params.pair_count.at(key), delta});
            }
    }
    if (total == 0)
        throw DataError("learn_matrix_params: no comparable triples");

    for (auto& [sr, rule] : params.rule) {
        auto cit = classes.find(sr);
        if (cit == classes.end()) continue;  // nothing to gain: stay NEVER
        const std::vector<Instance>& inst = cit->second;
        RuleParam best;  // NEVER, gain 0
        long best_gain = 0;
        // Most conservative candidates first; only strict gains replace.
        for (int pi = 20; pi >= 0; --pi)
            for (int t = 3; t >= 0; --t) {
                double p = pi * 0.05;
                long gain = 0;
                for (const Instance& in : inst)
                    if (in.crab >= p * in.cab + t) gain += in.delta;
                if (gain > best_gain) {
                    best_gain = gain;
                    best = RuleParam{false, p, t};
                }
            }
        rule = best;
    }
    return params;
}

void write_params(std::ostream& out, const ArgThresholds& arg_th,
                  const FrameThresholds& frame_th,
                  const MatrixCorrectionParams& mat) {
    for (const auto& [a, p] : arg_th.p_pos)
        out << "p_pos\t" << a << "\t" << format_count(p) << "\n";
    for (const auto& [a, p] : arg_th.p_neg)
        out << "p_neg\t" << a << "\t" << format_count(p) << "\n";
    for (const auto& [f, p] : frame_th.p_f)
        out << "p_frame\t" << f.str() << "\t" << format_count(p) << "\n";
    for (const auto& [sr, rule] : mat.rule) {
        out << "matrix_rule\t" << relation_code(sr.first) << "=>"
            << relation_code(sr.second) << "\t";
        if (rule.never)
            out << "NEVER\n";
        else
            out << format_count(rule.p) << "," << rule.t << "\n";
    }
}

void read_params(std::istream& in, ArgThresholds& arg_th,
                 FrameThresholds& frame_th, MatrixCorrectionParams& mat) {
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::size_t t1 = line.find('\t');
        std::size_t t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
        if (t2 == std::string::npos)
            throw DataError("params line " + std::to_string(line_no) +
                            ": expected 3 TSV fields");
        std::string kind = line.substr(0, t1);
        std::string key = line.substr(t1 + 1, t2 - t1 - 1);
        std::string value = line.substr(t2 + 1);
        if (kind == "p_pos") {
            arg_th.p_pos[normalize_token(key)] = std::stod(value);
        } else if (kind == "p_neg") {
            arg_th.p_neg[normalize_token(key)] = std::stod(value);
        } else if (kind == "p_frame") {
            frame_th.p_f[Frame::parse(key)] = std::stod(value);
        } else if (kind == "matrix_rule") {
            std::size_t arrow = key.find("=>");
            if (arrow == std::string::npos)
                throw DataError("params line " + std::to_string(line_no) +
                                ": malformed matrix_rule key");
            Relation s = relation_from_code(key.substr(0, arrow));
            Relation r = relation_from_code(key.substr(arrow + 2));
            RuleParam rule;
            if (value == "NEVER") {
                rule = RuleParam{};
            } else {
                std::size_t comma = value.find(',');
                if (comma == std::string::npos)
                    throw DataError("params line " + std::to_string(line_no) +
                                    ": malformed matrix_rule value");
                rule.never = false;
                rule.p = std::stod(value.substr(0, comma));
                rule.t = std::stoi(value.substr(comma + 1));
            }
            mat.rule[{s, r}] = rule;
        } else {
            throw DataError("params line " + std::to_string(line_no) +
                            ": unknown kind '" + kind + "'");
        }
    }
}

}  // namespace valex
