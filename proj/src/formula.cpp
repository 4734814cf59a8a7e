#include "bvselect/formula.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "bvselect/dataset.hpp"
#include "bvselect/error.hpp"

namespace bvs {

std::string Term::name() const {
    if (!derived) return columns.front();
    std::string out = "I(";
    for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "+" : "") + columns[i];
    return out + ")";
}

std::string Term::canonical() const {
    if (!derived) return columns.front();
    Term sorted = *this;
    std::sort(sorted.columns.begin(), sorted.columns.end());
    return sorted.name();
}

namespace {

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_'; }

class Parser {
  public:
    explicit Parser(std::string_view text) : s_(text) {}

    Formula parse() {
        Formula f;
        f.response = identifier("response");
        skip_ws();
        expect('~');
        skip_ws();
        if (peek() == '.' && !ident_char(peek(1))) {
            ++pos_;
            f.dot = true;
        } else if (peek() == '1' && !ident_char(peek(1))) {
            ++pos_;
        } else {
            f.terms.push_back(term());
            skip_ws();
            while (peek() == '+') {
                ++pos_;
                skip_ws();
                f.terms.push_back(term());
                skip_ws();
            }
        }
        skip_ws();
        if (pos_ != s_.size()) unexpected();
        for (const auto& t : f.terms)
            for (const auto& c : t.columns)
                if (c == f.response) throw ParseError("response '" + c + "' appears among the terms", 0);
        return f;
    }

  private:
    char peek(std::size_t ahead = 0) const { return pos_ + ahead < s_.size() ? s_[pos_ + ahead] : '\0'; }

    void skip_ws() {
        while (std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
    }

    void expect(char c) {
        if (peek() != c) {
            if (pos_ >= s_.size()) throw ParseError(std::string("expected '") + c + "' but reached end of formula", pos_);
            unexpected();
        }
        ++pos_;
    }

    [[noreturn]] void unexpected() const {
        char c = peek();
        if (c == '\0') throw ParseError("unexpected end of formula", pos_);
        static const std::string unsupported = "*:-^/|%";
        if (unsupported.find(c) != std::string::npos)
            throw ParseError(std::string("unsupported operator '") + c + "'; only '+', '1', '.' and I(a+b) are allowed",
                             pos_);
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    std::string identifier(const char* what) {
        skip_ws();
        std::size_t start = pos_;
        while (ident_char(peek())) ++pos_;
        if (start == pos_) {
            if (peek() == '\0') throw ParseError(std::string("expected ") + what, pos_);
            unexpected();
        }
        std::string id(s_.substr(start, pos_ - start));
        if (std::isdigit(static_cast<unsigned char>(id[0])) || id == ".")
            throw ParseError("'" + id + "' is not a valid " + what, start);
        return id;
    }

    Term term() {
        if (peek() == 'I' && peek(1) == '(') {
            pos_ += 2;
            Term t{{}, true};
            t.columns.push_back(identifier("column name"));
            skip_ws();
            while (peek() == '+') {
                ++pos_;
                t.columns.push_back(identifier("column name"));
                skip_ws();
            }
            expect(')');
            return t;
        }
        return Term{{identifier("term")}, false};
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace

Formula parse_formula(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const Formula& f) {
    std::string out = f.response + "~";
    if (f.dot) return out + ".";
    if (f.terms.empty()) return out + "1";
    for (std::size_t i = 0; i < f.terms.size(); ++i) out += (i ? "+" : "") + f.terms[i].name();
    return out;
}

Formula bind(const Formula& f, const Dataset& ds) {
    if (!ds.find(f.response)) throw DataError("response '" + f.response + "' is not a column of the data");
    Formula out = f;
    if (f.dot) {
        out.dot = false;
        out.terms.clear();
        for (const auto& name : ds.names())
            if (name != f.response) out.terms.push_back(Term{{name}, false});
    }
    std::set<std::string> seen;
    for (const auto& t : out.terms) {
        for (const auto& c : t.columns) {
            if (!ds.find(c)) throw DataError("term references unknown column '" + c + "'");
            if (c == f.response) throw DataError("response '" + c + "' appears among the terms");
        }
        if (!seen.insert(t.canonical()).second) throw DataError("duplicate term '" + t.name() + "'");
    }
    return out;
}

}  // namespace bvs
