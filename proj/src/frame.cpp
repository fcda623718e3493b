#include "valex/frame.hpp"

#include <algorithm>
#include <cctype>

#include "valex/error.hpp"

namespace valex {

ArgToken normalize_token(std::string_view raw) {
    std::size_t b = 0, e = raw.size();
    while (b < e && std::isspace(static_cast<unsigned char>(raw[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(raw[e - 1]))) --e;
    ArgToken out;
    out.reserve(e - b);
    for (std::size_t i = b; i < e; ++i) {
        char c = raw[i];
        if (std::isspace(static_cast<unsigned char>(c))) continue;  // collapse
        if (c == ',' || c == '|')
            throw DataError("argument token contains forbidden character: '" +
                            std::string(raw) + "'");
        out.push_back(c);
    }
    if (out.empty()) throw DataError("empty argument token");
    return out;
}

Frame::Frame(std::vector<ArgToken> args) : args_(std::move(args)) {
    std::sort(args_.begin(), args_.end());
    args_.erase(std::unique(args_.begin(), args_.end()), args_.end());
}

Frame Frame::parse(std::string_view text) {
    // Trim the whole field first so "  " parses as the empty frame.
    std::size_t b = 0, e = text.size();
    while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
    text = text.substr(b, e - b);
    if (text.empty()) return Frame{};

    std::vector<ArgToken> toks;
    std::size_t pos = 0;
    while (true) {
        std::size_t comma = text.find(',', pos);
        std::string_view piece = (comma == std::string_view::npos)
                                     ? text.substr(pos)
                                     : text.substr(pos, comma - pos);
        toks.push_back(normalize_token(piece));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return Frame(std::move(toks));
}

std::string Frame::str() const {
    std::string out;
    for (std::size_t i = 0; i < args_.size(); ++i) {
        if (i) out.push_back(',');
        out += args_[i];
    }
    return out;
}

bool Frame::contains(const ArgToken& tok) const {
    return std::binary_search(args_.begin(), args_.end(), tok);
}

}  // namespace valex
