#include <algorithm>
#include <cctype>

#include "taxgraph/patterns.hpp"

namespace taxgraph {

const char* constraint_field_name(ConstraintField field) {
    switch (field) {
        case ConstraintField::hq_country: return "hq";
        case ConstraintField::legal_country: return "legal";
        case ConstraintField::legal_form: return "form";
        case ConstraintField::region: return "region";
    }
    return "?";
}

namespace {

enum class TokenKind { var, value, dot, equals, semicolon, plus, arrow_open, arrow_close, end };

struct Token {
    TokenKind kind = TokenKind::end;
    std::string text;
    std::size_t line = 1;
    std::size_t column = 1;
};

const char* token_kind_name(TokenKind kind) {
    switch (kind) {
        case TokenKind::var: return "variable";
        case TokenKind::value: return "VALUE";
        case TokenKind::dot: return "'.'";
        case TokenKind::equals: return "'='";
        case TokenKind::semicolon: return "';'";
        case TokenKind::plus: return "'+'";
        case TokenKind::arrow_open: return "'-['";
        case TokenKind::arrow_close: return "']->'";
        case TokenKind::end: return "end of input";
    }
    return "?";
}

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    Token next() {
        skip_blank();
        Token token;
        token.line = line_;
        token.column = column_;
        if (pos_ >= text_.size()) return token;  // end

        char c = text_[pos_];
        if (c >= 'a' && c <= 'z') {
            std::size_t start = pos_;
            while (pos_ < text_.size() && ((text_[pos_] >= 'a' && text_[pos_] <= 'z') ||
                                           (text_[pos_] >= '0' && text_[pos_] <= '9'))) {
                advance();
            }
            token.kind = TokenKind::var;
            token.text = std::string(text_.substr(start, pos_ - start));
            return token;
        }
        if ((c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9')) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && ((text_[pos_] >= 'A' && text_[pos_] <= 'Z') ||
                                           (text_[pos_] >= '0' && text_[pos_] <= '9'))) {
                advance();
            }
            token.kind = TokenKind::value;
            token.text = std::string(text_.substr(start, pos_ - start));
            return token;
        }
        switch (c) {
            case '.': token.kind = TokenKind::dot; advance(); return token;
            case '=': token.kind = TokenKind::equals; advance(); return token;
            case ';': token.kind = TokenKind::semicolon; advance(); return token;
            case '+': token.kind = TokenKind::plus; advance(); return token;
            case '-':
                if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '[') {
                    token.kind = TokenKind::arrow_open;
                    advance();
                    advance();
                    return token;
                }
                break;
            case ']':
                if (pos_ + 2 < text_.size() && text_[pos_ + 1] == '-' && text_[pos_ + 2] == '>') {
                    token.kind = TokenKind::arrow_close;
                    advance();
                    advance();
                    advance();
                    return token;
                }
                break;
            default: break;
        }
        throw PatternError("unexpected character '" + std::string(1, c) + "'", line_, column_);
    }

private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void skip_blank() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

class Parser {
public:
    explicit Parser(std::string_view text) : lexer_(text) { shift(); }

    PatternAst parse() {
        if (current_.kind == TokenKind::end) {
            throw PatternError("empty pattern", current_.line, current_.column,
                               {"variable"});
        }
        while (current_.kind != TokenKind::end) parse_statement();
        if (ast_.edges.empty()) {
            throw PatternError("pattern has no edge clause", current_.line, current_.column);
        }
        for (auto& var : ast_.vars) {
            std::sort(var.constraints.begin(), var.constraints.end());
        }
        return std::move(ast_);
    }

private:
    void shift() { current_ = lexer_.next(); }

    Token expect(TokenKind kind, std::vector<std::string> expected) {
        if (current_.kind != kind) {
            throw PatternError("expected " + expected_text(expected) + ", got " +
                                   describe(current_),
                               current_.line, current_.column, std::move(expected));
        }
        Token token = current_;
        shift();
        return token;
    }

    static std::string describe(const Token& t) {
        if (t.kind == TokenKind::var || t.kind == TokenKind::value) {
            return std::string(token_kind_name(t.kind)) + " \"" + t.text + "\"";
        }
        return token_kind_name(t.kind);
    }

    static std::string expected_text(const std::vector<std::string>& expected) {
        std::string out;
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (i) out += i + 1 == expected.size() ? " or " : ", ";
            out += expected[i];
        }
        return out;
    }

    std::uint32_t declare(const std::string& name) {
        for (std::uint32_t i = 0; i < ast_.vars.size(); ++i) {
            if (ast_.vars[i].name == name) return i;
        }
        ast_.vars.push_back({name, {}});
        return static_cast<std::uint32_t>(ast_.vars.size() - 1);
    }

    void parse_statement() {
        Token var_token = expect(TokenKind::var, {"variable"});
        if (current_.kind == TokenKind::dot) {
            shift();
            parse_constraint(var_token);
        } else if (current_.kind == TokenKind::arrow_open) {
            shift();
            parse_edge(var_token);
        } else {
            throw PatternError("expected '.' or '-[' after variable \"" + var_token.text + "\"",
                               current_.line, current_.column, {"'.'", "'-['"});
        }
        expect(TokenKind::semicolon, {"';'"});
    }

    void parse_constraint(const Token& var_token) {
        Token field_token = expect(TokenKind::var, {"hq", "legal", "form", "region"});
        ConstraintField field;
        if (field_token.text == "hq") {
            field = ConstraintField::hq_country;
        } else if (field_token.text == "legal") {
            field = ConstraintField::legal_country;
        } else if (field_token.text == "form") {
            field = ConstraintField::legal_form;
        } else if (field_token.text == "region") {
            field = ConstraintField::region;
        } else {
            throw PatternError("unknown field \"" + field_token.text + "\"", field_token.line,
                               field_token.column, {"hq", "legal", "form", "region"});
        }
        expect(TokenKind::equals, {"'='"});
        Token value_token = expect(TokenKind::value, {"VALUE"});

        std::uint32_t var = declare(var_token.text);
        for (const NodeConstraint& existing : ast_.vars[var].constraints) {
            if (existing.field == field) {
                if (existing.value == value_token.text) return;  // harmless repeat
                throw PatternError("conflicting constraint " + var_token.text + "." +
                                       constraint_field_name(field) + "=" + value_token.text +
                                       " (already " + existing.value + ")",
                                   value_token.line, value_token.column);
            }
        }
        ast_.vars[var].constraints.push_back({field, value_token.text});
    }

    void parse_edge(const Token& from_token) {
        Token kind_token = expect(TokenKind::var, {"direct", "ultimate"});
        RelKind kind;
        if (kind_token.text == "direct") {
            kind = RelKind::direct;
        } else if (kind_token.text == "ultimate") {
            kind = RelKind::ultimate;
        } else {
            throw PatternError("unknown edge kind \"" + kind_token.text + "\"", kind_token.line,
                               kind_token.column, {"direct", "ultimate"});
        }
        bool transitive = false;
        if (current_.kind == TokenKind::plus) {
            transitive = true;
            shift();
        }
        expect(TokenKind::arrow_close, {"']->'"});
        Token to_token = expect(TokenKind::var, {"variable"});

        EdgeClause clause;
        clause.from = declare(from_token.text);
        clause.to = declare(to_token.text);
        clause.kind = kind;
        clause.transitive = transitive;
        ast_.edges.push_back(clause);
    }

    Lexer lexer_;
    Token current_;
    PatternAst ast_;
};

}  // namespace

bool PatternAst::operator==(const PatternAst& other) const {
    // Variable order is parser bookkeeping, not meaning: compare vars as a
    // name-sorted set and edges with endpoints resolved to names.
    auto sorted_vars = [](const PatternAst& ast) {
        std::vector<PatternVar> v = ast.vars;
        std::sort(v.begin(), v.end(),
                  [](const PatternVar& a, const PatternVar& b) { return a.name < b.name; });
        return v;
    };
    if (sorted_vars(*this) != sorted_vars(other)) return false;

    auto named_edges = [](const PatternAst& ast) {
        std::vector<std::tuple<std::string, std::string, RelKind, bool>> edges;
        edges.reserve(ast.edges.size());
        for (const EdgeClause& e : ast.edges) {
            edges.emplace_back(ast.vars[e.from].name, ast.vars[e.to].name, e.kind, e.transitive);
        }
        return edges;
    };
    return named_edges(*this) == named_edges(other);
}

PatternAst parse_pattern(std::string_view text) { return Parser(text).parse(); }

std::string print_pattern(const PatternAst& ast) {
    std::string out;
    for (const PatternVar& var : ast.vars) {
        for (const NodeConstraint& c : var.constraints) {
            out += var.name;
            out += '.';
            out += constraint_field_name(c.field);
            out += '=';
            out += c.value;
            out += ";\n";
        }
    }
    for (const EdgeClause& e : ast.edges) {
        out += ast.vars[e.from].name;
        out += " -[";
        out += rel_kind_name(e.kind);
        if (e.transitive) out += '+';
        out += "]-> ";
        out += ast.vars[e.to].name;
        out += ";\n";
    }
    return out;
}

}  // namespace taxgraph
