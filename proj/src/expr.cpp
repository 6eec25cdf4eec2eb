#include "spmul/expr.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

#include "spmul/error.hpp"

namespace spmul {

namespace {

bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Parser {
public:
    Parser(std::string_view text, const VarTable& vars) : text_(text), vars_(vars) {}

    Expr parse() {
        Expr e = expr();
        skip_space();
        if (pos_ != text_.size())
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("syntax error at position " + std::to_string(pos_) + ": " + msg, pos_);
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    static Expr binary(Expr::Kind kind, Expr lhs, Expr rhs, std::size_t at) {
        Expr e;
        e.kind = kind;
        e.position = at;
        e.args.push_back(std::move(lhs));
        e.args.push_back(std::move(rhs));
        return e;
    }

    Expr expr() {
        Expr lhs = term();
        for (;;) {
            skip_space();
            const std::size_t at = pos_;
            if (accept('+'))
                lhs = binary(Expr::Kind::add, std::move(lhs), term(), at);
            else if (accept('-'))
                lhs = binary(Expr::Kind::sub, std::move(lhs), term(), at);
            else
                return lhs;
        }
    }

    Expr term() {
        Expr lhs = factor();
        for (;;) {
            skip_space();
            const std::size_t at = pos_;
            if (!accept('*'))
                return lhs;
            lhs = binary(Expr::Kind::mul, std::move(lhs), factor(), at);
        }
    }

    Expr factor() {
        skip_space();
        const std::size_t at = pos_;
        if (accept('-')) {
            Expr zero;
            zero.kind = Expr::Kind::number;
            zero.text = "0";
            zero.position = at;
            return binary(Expr::Kind::sub, std::move(zero), factor(), at);
        }
        Expr base = atom();
        skip_space();
        const std::size_t caret = pos_;
        if (!accept('^'))
            return base;
        skip_space();
        if (pos_ >= text_.size() || !is_digit(text_[pos_]))
            fail("exponent must be a non-negative integer literal");
        std::uint64_t n = 0;
        while (pos_ < text_.size() && is_digit(text_[pos_])) {
            n = n * 10 + static_cast<std::uint64_t>(text_[pos_] - '0');
            if (n > std::numeric_limits<std::uint32_t>::max())
                fail("exponent too large");
            ++pos_;
        }
        Expr e;
        e.kind = Expr::Kind::pow;
        e.exponent = static_cast<std::uint32_t>(n);
        e.position = caret;
        e.args.push_back(std::move(base));
        return e;
    }

    Expr atom() {
        skip_space();
        if (pos_ >= text_.size())
            fail("unexpected end of input");
        const std::size_t start = pos_;
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr inner = expr();
            if (!accept(')'))
                fail("expected ')'");
            return inner;
        }
        if (is_digit(c)) {
            while (pos_ < text_.size() && is_digit(text_[pos_]))
                ++pos_;
            if (pos_ < text_.size() && text_[pos_] == '.') {
                ++pos_;
                if (pos_ >= text_.size() || !is_digit(text_[pos_]))
                    fail("malformed decimal literal");
                while (pos_ < text_.size() && is_digit(text_[pos_]))
                    ++pos_;
            }
            Expr e;
            e.kind = Expr::Kind::number;
            e.text = std::string(text_.substr(start, pos_ - start));
            e.position = start;
            return e;
        }
        if (is_ident_start(c)) {
            while (pos_ < text_.size() && is_ident_char(text_[pos_]))
                ++pos_;
            const std::string_view name = text_.substr(start, pos_ - start);
            const auto idx = vars_.index_of(name);
            if (!idx) {
                pos_ = start;
                fail("unknown variable '" + std::string(name) + "'");
            }
            Expr e;
            e.kind = Expr::Kind::variable;
            e.var = *idx;
            e.position = start;
            return e;
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view text_;
    const VarTable& vars_;
    std::size_t pos_ = 0;
};

} // namespace

std::string Expr::to_string(const VarTable& vars) const {
    switch (kind) {
    case Kind::number:
        return text;
    case Kind::variable:
        return vars.name(var);
    case Kind::pow:
        return "pow(" + args[0].to_string(vars) + "," + std::to_string(exponent) + ")";
    case Kind::add:
    case Kind::sub:
    case Kind::mul: {
        const char* op = kind == Kind::add ? "add" : kind == Kind::sub ? "sub" : "mul";
        return std::string(op) + "(" + args[0].to_string(vars) + "," + args[1].to_string(vars) +
               ")";
    }
    }
    return {};
}

Expr parse_expr(std::string_view text, const VarTable& vars) {
    return Parser(text, vars).parse();
}

std::vector<std::string> scan_identifiers(std::string_view text) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < text.size();) {
        if (is_digit(text[i])) {
            while (i < text.size() && (is_ident_char(text[i]) || text[i] == '.'))
                ++i;
        } else if (is_ident_start(text[i])) {
            const std::size_t start = i;
            while (i < text.size() && is_ident_char(text[i]))
                ++i;
            std::string name(text.substr(start, i - start));
            if (std::find(out.begin(), out.end(), name) == out.end())
                out.push_back(std::move(name));
        } else {
            ++i;
        }
    }
    return out;
}

} // namespace spmul
