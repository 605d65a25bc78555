#include "orep/io.hpp"

#include <cctype>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace orep {

namespace {

const std::unordered_set<std::string> kReserved = {
    "Top", "Bottom", "Not", "And", "Or", "All", "Some",
    "SubClassOf", "ClassAssertion", "PropertyAssertion",
};

struct Token {
    enum Kind { Identifier, LParen, RParen, End } kind;
    std::string text;
    int line;
    int column;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    Token next() {
        skip_trivia();
        if (pos_ >= text_.size()) return {Token::End, "", line_, column_};
        int line = line_, column = column_;
        char c = text_[pos_];
        if (c == '(') {
            advance();
            return {Token::LParen, "(", line, column};
        }
        if (c == ')') {
            advance();
            return {Token::RParen, ")", line, column};
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string word;
            while (pos_ < text_.size()) {
                char w = text_[pos_];
                if (!std::isalnum(static_cast<unsigned char>(w)) && w != '_') break;
                word.push_back(w);
                advance();
            }
            return {Token::Identifier, word, line, column};
        }
        throw ParseError(line, column, std::string("unexpected character '") + c + "'");
    }

private:
    void skip_trivia() {
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

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

class Parser {
public:
    explicit Parser(std::string_view text) : lexer_(text) { shift(); }

    Ontology parse_statements(std::vector<std::string>* warnings) {
        std::vector<Axiom> axioms;
        while (current_.kind != Token::End) {
            axioms.push_back(parse_statement());
        }
        std::size_t duplicates = 0;
        Ontology o(std::move(axioms), &duplicates);
        if (duplicates > 0 && warnings) {
            warnings->push_back("dropped " + std::to_string(duplicates) + " duplicate axiom" +
                                (duplicates == 1 ? "" : "s"));
        }
        return o;
    }

    Axiom parse_statement() {
        Token head = expect_identifier("statement");
        if (head.text == "SubClassOf") {
            expect(Token::LParen);
            Concept lhs = parse_concept_expr();
            Concept rhs = parse_concept_expr();
            expect(Token::RParen);
            return Axiom::subsumption(lhs, rhs);
        }
        if (head.text == "ClassAssertion") {
            expect(Token::LParen);
            Concept c = parse_concept_expr();
            std::string ind = parse_plain_name("individual");
            expect(Token::RParen);
            return Axiom::class_assertion(c, ind);
        }
        if (head.text == "PropertyAssertion") {
            expect(Token::LParen);
            std::string role = parse_plain_name("role");
            std::string subj = parse_plain_name("individual");
            std::string obj = parse_plain_name("individual");
            expect(Token::RParen);
            return Axiom::role_assertion(role, subj, obj);
        }
        throw ParseError(head.line, head.column, "unknown construct '" + head.text + "'");
    }

    Concept parse_concept_expr() {
        Token head = expect_identifier("concept");
        if (head.text == "Top") return Concept::top();
        if (head.text == "Bottom") return Concept::bottom();
        if (head.text == "Not") {
            expect(Token::LParen);
            Concept arg = parse_concept_expr();
            expect(Token::RParen);
            return Concept::negation(arg);
        }
        if (head.text == "And" || head.text == "Or") {
            bool is_and = head.text == "And";
            expect(Token::LParen);
            std::vector<Concept> args;
            args.push_back(parse_concept_expr());
            while (current_.kind != Token::RParen) {
                args.push_back(parse_concept_expr());
            }
            expect(Token::RParen);
            Concept acc = args[0];
            for (std::size_t i = 1; i < args.size(); ++i) {
                acc = is_and ? Concept::conj(acc, args[i]) : Concept::disj(acc, args[i]);
            }
            return acc;
        }
        if (head.text == "All" || head.text == "Some") {
            bool universal = head.text == "All";
            expect(Token::LParen);
            std::string role = parse_plain_name("role");
            Concept arg = parse_concept_expr();
            expect(Token::RParen);
            return universal ? Concept::forall(role, arg) : Concept::exists(role, arg);
        }
        check_plain_name(head, "concept name");
        return Concept::name(head.text);
    }

    void expect_end() {
        if (current_.kind != Token::End) {
            throw ParseError(current_.line, current_.column, "trailing input after expression");
        }
    }

private:
    void shift() { current_ = lexer_.next(); }

    Token expect_identifier(const char* what) {
        if (current_.kind != Token::Identifier) {
            throw ParseError(current_.line, current_.column,
                             std::string("expected ") + what + ", got '" + describe(current_) + "'");
        }
        Token t = current_;
        shift();
        return t;
    }

    void expect(Token::Kind kind) {
        if (current_.kind != kind) {
            throw ParseError(current_.line, current_.column,
                             std::string("expected '") + (kind == Token::LParen ? "(" : ")") + "', got '" +
                                 describe(current_) + "'");
        }
        shift();
    }

    std::string parse_plain_name(const char* what) {
        Token t = expect_identifier(what);
        check_plain_name(t, what);
        return t.text;
    }

    void check_plain_name(const Token& t, const char* what) {
        if (kReserved.count(t.text)) {
            throw ParseError(t.line, t.column,
                             "reserved word '" + t.text + "' cannot be used as " + what);
        }
        if (t.text.rfind("__fresh_", 0) == 0) {
            throw ParseError(t.line, t.column, "identifier prefix '__fresh_' is reserved");
        }
    }

    static std::string describe(const Token& t) {
        switch (t.kind) {
            case Token::End:
                return "end of input";
            default:
                return t.text;
        }
    }

    Lexer lexer_;
    Token current_;
};

void write_concept(std::ostream& os, Concept c) {
    switch (c.kind()) {
        case ConceptKind::Top:
            os << "Top";
            break;
        case ConceptKind::Bottom:
            os << "Bottom";
            break;
        case ConceptKind::Name:
            os << c.label();
            break;
        case ConceptKind::Not:
            os << "Not(";
            write_concept(os, c.child());
            os << ')';
            break;
        case ConceptKind::And:
        case ConceptKind::Or:
            os << (c.kind() == ConceptKind::And ? "And(" : "Or(");
            write_concept(os, c.left());
            os << ' ';
            write_concept(os, c.right());
            os << ')';
            break;
        case ConceptKind::Forall:
        case ConceptKind::Exists:
            os << (c.kind() == ConceptKind::Forall ? "All(" : "Some(");
            os << c.label() << ' ';
            write_concept(os, c.child());
            os << ')';
            break;
    }
}

}  // namespace

Ontology parse_ontology(std::string_view text, std::vector<std::string>* warnings) {
    Parser parser(text);
    return parser.parse_statements(warnings);
}

Concept parse_concept(std::string_view text) {
    Parser parser(text);
    Concept c = parser.parse_concept_expr();
    parser.expect_end();
    return c;
}

Axiom parse_axiom(std::string_view text) {
    Parser parser(text);
    Axiom ax = parser.parse_statement();
    parser.expect_end();
    return ax;
}

std::string serialize_concept(Concept c) {
    std::ostringstream os;
    write_concept(os, c);
    return os.str();
}

std::string serialize_axiom(const Axiom& ax) {
    std::ostringstream os;
    os << ax;
    return os.str();
}

std::string serialize_ontology(const Ontology& o) {
    std::ostringstream os;
    for (const auto& ax : o.axioms()) {
        os << ax << '\n';
    }
    return os.str();
}

std::ostream& operator<<(std::ostream& os, Concept c) {
    write_concept(os, c);
    return os;
}

std::ostream& operator<<(std::ostream& os, const Axiom& ax) {
    switch (ax.kind()) {
        case AxiomKind::Subsumption:
            os << "SubClassOf(";
            write_concept(os, ax.lhs());
            os << ' ';
            write_concept(os, ax.rhs());
            os << ')';
            break;
        case AxiomKind::ClassAssertion:
            os << "ClassAssertion(";
            write_concept(os, ax.concept_arg());
            os << ' ' << ax.individual() << ')';
            break;
        case AxiomKind::RoleAssertion:
            os << "PropertyAssertion(" << ax.role() << ' ' << ax.subject() << ' ' << ax.object() << ')';
            break;
    }
    return os;
}

}  // namespace orep
