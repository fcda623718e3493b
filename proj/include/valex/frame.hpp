#ifndef VALEX_FRAME_HPP
#define VALEX_FRAME_HPP

#include <compare>
#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace valex {

// Canonical argument-type identifier, e.g. "np(nom)", "sie", "na+np(loc)".
using ArgToken = std::string;
using ArgSet = std::set<ArgToken>;

// Trims surrounding whitespace, collapses internal runs to a single space.
// Throws DataError on empty result or forbidden characters (',', '|',
// embedded whitespace after collapsing is kept as a single space but plain
// spaces are rejected since tokens are identifiers).
ArgToken normalize_token(std::string_view raw);

// A duplicate-free, canonically sorted set of argument tokens.
// Order-insensitive equality falls out of the canonical representation.
class Frame {
public:
    Frame() = default;
    explicit Frame(std::vector<ArgToken> args);

    // Parses a comma-separated token list; "" is the empty frame.
    static Frame parse(std::string_view text);

    // Canonical rendering: tokens joined with ','.
    std::string str() const;

    bool contains(const ArgToken& tok) const;
    std::size_t size() const { return args_.size(); }
    bool empty() const { return args_.empty(); }

    const std::vector<ArgToken>& args() const { return args_; }
    auto begin() const { return args_.begin(); }
    auto end() const { return args_.end(); }

    friend auto operator<=>(const Frame&, const Frame&) = default;

private:
    std::vector<ArgToken> args_;
};

using FrameSet = std::set<Frame>;

}  // namespace valex

#endif
