#include "wienerlab/polyparse.hpp"

#include <cctype>
#include <stdexcept>

#include "wienerlab/numtheory.hpp"

namespace wienerlab {

namespace {

constexpr std::int64_t kMaxDegree = 64;

using Poly = std::vector<std::int64_t>;

Poly multiply(const Poly& a, const Poly& b) {
    Poly out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[i + j] = narrow_checked(static_cast<i128>(out[i + j]) + static_cast<i128>(a[i]) * b[j], "polynomial");
        }
    }
    return out;
}

void add_into(Poly& acc, const Poly& p, int sign) {
    if (acc.size() < p.size()) acc.resize(p.size(), 0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        acc[i] = narrow_checked(static_cast<i128>(acc[i]) + static_cast<i128>(sign) * p[i], "polynomial");
    }
}

class Parser {
public:
    explicit Parser(std::string text) : s_(std::move(text)) {}

    Poly parse() {
        Poly acc{0};
        int sign = 1;
        skip();
        if (peek() == '+' || peek() == '-') sign = take() == '-' ? -1 : 1;
        add_into(acc, term(), sign);
        for (skip(); pos_ < s_.size(); skip()) {
            const char op = take();
            if (op != '+' && op != '-') fail("expected '+' or '-'");
            add_into(acc, term(), op == '-' ? -1 : 1);
        }
        return acc;
    }

private:
    Poly term() {
        Poly p = factor();
        for (skip(); pos_ < s_.size() && peek() != '+' && peek() != '-'; skip()) {
            if (peek() == '*') {
                ++pos_;
                skip();
            }
            p = multiply(p, factor());
        }
        return p;
    }

    Poly factor() {
        skip();
        Poly base;
        if (peek() == 'x' || peek() == 'X') {
            ++pos_;
            base = {0, 1};
        } else if (std::isdigit(static_cast<unsigned char>(peek()))) {
            base = {integer()};
        } else {
            fail("expected an integer or x");
        }
        skip();
        if (peek() == '^') {
            ++pos_;
            skip();
            if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected an exponent");
            const std::int64_t e = integer();
            if (e > kMaxDegree) fail("exponent too large");
            Poly out{1};
            for (std::int64_t i = 0; i < e; ++i) out = multiply(out, base);
            return out;
        }
        return base;
    }

    std::int64_t integer() {
        i128 v = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            v = v * 10 + (s_[pos_++] - '0');
            if (v > static_cast<i128>(INT64_MAX)) throw std::overflow_error("integer literal exceeds 64 bits");
        }
        return static_cast<std::int64_t>(v);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    char take() { return s_[pos_++]; }

    [[noreturn]] void fail(const std::string& what) const {
        throw std::invalid_argument("polynomial \"" + s_ + "\": " + what + " at position " + std::to_string(pos_));
    }

    std::string s_;
    std::size_t pos_ = 0;
};

std::string normalize_minus(std::string_view text) {
    std::string out;
    for (std::size_t i = 0; i < text.size(); ++i) {
        // U+2212 MINUS SIGN
        if (i + 2 < text.size() && static_cast<unsigned char>(text[i]) == 0xE2 &&
            static_cast<unsigned char>(text[i + 1]) == 0x88 && static_cast<unsigned char>(text[i + 2]) == 0x92) {
            out.push_back('-');
            i += 2;
        } else {
            out.push_back(text[i]);
        }
    }
    return out;
}

}  // namespace

std::vector<std::int64_t> parse_polynomial(std::string_view text) {
    std::string s = normalize_minus(text);
    if (s.find_first_not_of(" \t") == std::string::npos) throw std::invalid_argument("empty polynomial");
    Poly p = Parser(std::move(s)).parse();
    while (p.size() > 1 && p.back() == 0) p.pop_back();
    return p;
}

std::string format_polynomial(const std::vector<std::int64_t>& coeffs) {
    std::string out;
    for (std::size_t i = coeffs.size(); i-- > 0;) {
        const std::int64_t c = coeffs[i];
        if (c == 0) continue;
        const bool neg = c < 0;
        const std::string mag = neg ? std::to_string(c).substr(1) : std::to_string(c);
        if (out.empty()) {
            if (neg) out += "-";
        } else {
            out += neg ? " - " : " + ";
        }
        if (i == 0 || mag != "1") out += mag;
        if (i >= 1) out += "x";
        if (i >= 2) out += "^" + std::to_string(i);
    }
    return out.empty() ? "0" : out;
}

}  // namespace wienerlab
