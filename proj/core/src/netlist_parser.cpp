#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <optional>
#include <set>
#include <unordered_map>

#include "flowmine/netlist.hpp"

namespace flowmine {

namespace {

enum class Tok { Ident, Int, Colon, Assign, NonBlocking, Eq, Ne, Lt, And, Or, Xor, Plus, Tilde,
                 LParen, RParen, Comma, End };

struct Token {
    Tok kind = Tok::End;
    std::string_view text;
    std::size_t column = 0;
};

const std::set<std::string_view, std::less<>> kKeywords = {"design", "input", "wire", "reg",
                                                           "assign", "always", "mux"};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> lex(std::string_view line, std::size_t line_no) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        char c = line[i];
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            continue;
        }
        std::size_t col = i + 1;
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < line.size() && ident_char(line[j])) {
                ++j;
            }
            out.push_back({Tok::Ident, line.substr(i, j - i), col});
            i = j;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) {
                ++j;
            }
            if (j < line.size() && ident_char(line[j])) {
                throw ParseError("malformed number", line_no, col);
            }
            out.push_back({Tok::Int, line.substr(i, j - i), col});
            i = j;
            continue;
        }
        auto two = line.substr(i, 2);
        if (two == "<=") { out.push_back({Tok::NonBlocking, two, col}); i += 2; continue; }
        if (two == "==") { out.push_back({Tok::Eq, two, col}); i += 2; continue; }
        if (two == "!=") { out.push_back({Tok::Ne, two, col}); i += 2; continue; }
        Tok t;
        switch (c) {
            case ':': t = Tok::Colon; break;
            case '=': t = Tok::Assign; break;
            case '<': t = Tok::Lt; break;
            case '&': t = Tok::And; break;
            case '|': t = Tok::Or; break;
            case '^': t = Tok::Xor; break;
            case '+': t = Tok::Plus; break;
            case '~': t = Tok::Tilde; break;
            case '(': t = Tok::LParen; break;
            case ')': t = Tok::RParen; break;
            case ',': t = Tok::Comma; break;
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", line_no, col);
        }
        out.push_back({t, line.substr(i, 1), col});
        ++i;
    }
    out.push_back({Tok::End, {}, line.size() + 1});
    return out;
}

// Untyped expression; widths are assigned in a second pass once the
// context width is known.
struct Node {
    ExprKind kind = ExprKind::Const;
    std::uint64_t value = 0;
    std::string name;
    std::vector<Node> args;
    std::size_t column = 0;
};

class LineParser {
public:
    LineParser(std::vector<Token> tokens, std::size_t line_no)
        : toks_(std::move(tokens)), line_(line_no) {}

    const Token& peek() const { return toks_[pos_]; }
    Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    [[noreturn]] void fail(const std::string& msg, const Token& at) const {
        throw ParseError(msg, line_, at.column);
    }

    std::string describe(const Token& t) const {
        return t.kind == Tok::End ? "end of line" : "'" + std::string(t.text) + "'";
    }

    Token expect(Tok kind, const char* what) {
        if (peek().kind != kind) {
            fail(std::string("expected ") + what + ", found " + describe(peek()), peek());
        }
        return next();
    }

    std::string identifier() {
        Token t = expect(Tok::Ident, "identifier");
        if (kKeywords.contains(t.text)) {
            fail("'" + std::string(t.text) + "' is a reserved word", t);
        }
        return std::string(t.text);
    }

    std::uint64_t integer() {
        Token t = expect(Tok::Int, "integer");
        std::uint64_t v = 0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc{}) {
            fail("integer '" + std::string(t.text) + "' out of range", t);
        }
        return v;
    }

    void end() {
        if (peek().kind != Tok::End) {
            fail("unexpected " + describe(peek()), peek());
        }
    }

    Node expression() {
        Node lhs = arithmetic();
        auto kind = comparison_kind(peek().kind);
        if (!kind) {
            return lhs;
        }
        Token op = next();
        Node rhs = arithmetic();
        if (comparison_kind(peek().kind)) {
            fail("comparisons do not chain; add parentheses", peek());
        }
        return binary(*kind, std::move(lhs), std::move(rhs), op.column);
    }

    std::size_t line() const { return line_; }

private:
    static std::optional<ExprKind> comparison_kind(Tok t) {
        switch (t) {
            case Tok::Eq: return ExprKind::Eq;
            case Tok::Ne: return ExprKind::Ne;
            case Tok::Lt: return ExprKind::Lt;
            default: return std::nullopt;
        }
    }

    static std::optional<ExprKind> arithmetic_kind(Tok t) {
        switch (t) {
            case Tok::And: return ExprKind::And;
            case Tok::Or: return ExprKind::Or;
            case Tok::Xor: return ExprKind::Xor;
            case Tok::Plus: return ExprKind::Add;
            default: return std::nullopt;
        }
    }

    static Node binary(ExprKind kind, Node lhs, Node rhs, std::size_t column) {
        Node n;
        n.kind = kind;
        n.column = column;
        n.args.push_back(std::move(lhs));
        n.args.push_back(std::move(rhs));
        return n;
    }

    Node arithmetic() {
        Node lhs = unary();
        while (auto kind = arithmetic_kind(peek().kind)) {
            Token op = next();
            Node rhs = unary();
            lhs = binary(*kind, std::move(lhs), std::move(rhs), op.column);
        }
        return lhs;
    }

    Node unary() {
        if (peek().kind == Tok::Tilde) {
            Token op = next();
            Node n;
            n.kind = ExprKind::Not;
            n.column = op.column;
            n.args.push_back(unary());
            return n;
        }
        return primary();
    }

    Node primary() {
        const Token& t = peek();
        Node n;
        n.column = t.column;
        switch (t.kind) {
            case Tok::Int:
                n.kind = ExprKind::Const;
                n.value = integer();
                return n;
            case Tok::LParen: {
                next();
                Node inner = expression();
                expect(Tok::RParen, "')'");
                return inner;
            }
            case Tok::Ident:
                if (t.text == "mux") {
                    next();
                    n.kind = ExprKind::Mux;
                    expect(Tok::LParen, "'(' after mux");
                    n.args.push_back(expression());
                    expect(Tok::Comma, "','");
                    n.args.push_back(expression());
                    expect(Tok::Comma, "','");
                    n.args.push_back(expression());
                    expect(Tok::RParen, "')'");
                    return n;
                }
                n.kind = ExprKind::Ref;
                n.name = identifier();
                return n;
            default:
                fail("expected expression, found " + describe(t), t);
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::size_t line_;
};

// Assigns widths. Unsized literals take the width of their context:
// the assignment target, the other operand, or the other mux arm.
class Typer {
public:
    Typer(const std::unordered_map<std::string, SignalDecl>& decls, std::size_t line)
        : decls_(decls), line_(line) {}

    Expr type(const Node& n, std::optional<unsigned> expected) {
        switch (n.kind) {
            case ExprKind::Const: {
                unsigned w = expected.value_or(natural_width(n));
                if (n.value > width_mask(w)) {
                    throw ParseError("width mismatch: constant " + std::to_string(n.value) +
                                         " does not fit in " + std::to_string(w) + " bits",
                                     line_, n.column);
                }
                return Expr::constant(n.value, w);
            }
            case ExprKind::Ref: {
                auto it = decls_.find(n.name);
                if (it == decls_.end()) {
                    throw ParseError("unknown identifier '" + n.name + "'", line_, n.column);
                }
                unsigned w = it->second.width;
                if (expected && *expected != w) {
                    mismatch(n, *expected, w);
                }
                return Expr::ref(n.name, w);
            }
            case ExprKind::Not:
                return Expr::bit_not(type(n.args[0], expected));
            case ExprKind::Mux: {
                Expr cond = type(n.args[0], std::nullopt);
                auto [t, e] = same_width(n.args[1], n.args[2], expected);
                return Expr::mux(std::move(cond), std::move(t), std::move(e));
            }
            case ExprKind::Eq:
            case ExprKind::Ne:
            case ExprKind::Lt: {
                if (expected && *expected != 1) {
                    mismatch(n, *expected, 1);
                }
                const Node& l = n.args[0];
                const Node& r = n.args[1];
                Expr le, re;
                if (!literal_like(l)) {
                    le = type(l, std::nullopt);
                    re = type(r, literal_like(r) ? std::optional<unsigned>(
                                                       std::max(le.width, natural_width(r)))
                                                 : std::nullopt);
                } else if (!literal_like(r)) {
                    re = type(r, std::nullopt);
                    le = type(l, std::max(re.width, natural_width(l)));
                } else {
                    le = type(l, std::nullopt);
                    re = type(r, std::nullopt);
                }
                return Expr::binary(n.kind, std::move(le), std::move(re));
            }
            default: {
                auto [l, r] = same_width(n.args[0], n.args[1], expected);
                return Expr::binary(n.kind, std::move(l), std::move(r));
            }
        }
    }

private:
    [[noreturn]] void mismatch(const Node& n, unsigned expected, unsigned actual) const {
        throw ParseError("width mismatch: expected " + std::to_string(expected) + " bits, found " +
                             std::to_string(actual),
                         line_, n.column);
    }

    std::pair<Expr, Expr> same_width(const Node& a, const Node& b, std::optional<unsigned> expected) {
        if (expected) {
            return {type(a, expected), type(b, expected)};
        }
        if (!literal_like(a)) {
            Expr ae = type(a, std::nullopt);
            Expr be = type(b, ae.width);
            return {std::move(ae), std::move(be)};
        }
        if (!literal_like(b)) {
            Expr be = type(b, std::nullopt);
            Expr ae = type(a, be.width);
            return {std::move(ae), std::move(be)};
        }
        unsigned w = std::max(natural_width(a), natural_width(b));
        return {type(a, w), type(b, w)};
    }

    // True when the width of n is entirely determined by its context.
    static bool literal_like(const Node& n) {
        switch (n.kind) {
            case ExprKind::Const: return true;
            case ExprKind::Not: return literal_like(n.args[0]);
            case ExprKind::Mux: return literal_like(n.args[1]) && literal_like(n.args[2]);
            case ExprKind::And:
            case ExprKind::Or:
            case ExprKind::Xor:
            case ExprKind::Add: return literal_like(n.args[0]) && literal_like(n.args[1]);
            default: return false;
        }
    }

    unsigned natural_width(const Node& n) const {
        switch (n.kind) {
            case ExprKind::Const:
                return std::max(1u, static_cast<unsigned>(std::bit_width(n.value)));
            case ExprKind::Ref: {
                auto it = decls_.find(n.name);
                return it == decls_.end() ? 1 : it->second.width;
            }
            case ExprKind::Not: return natural_width(n.args[0]);
            case ExprKind::Mux: return std::max(natural_width(n.args[1]), natural_width(n.args[2]));
            case ExprKind::Eq:
            case ExprKind::Ne:
            case ExprKind::Lt: return 1;
            default: return std::max(natural_width(n.args[0]), natural_width(n.args[1]));
        }
    }

    const std::unordered_map<std::string, SignalDecl>& decls_;
    std::size_t line_;
};

}  // namespace

Design parse_design(std::string_view text) {
    Design design;
    std::unordered_map<std::string, SignalDecl> decls;
    bool have_header = false;
    std::size_t line_no = 0;

    while (!text.empty() || line_no == 0) {
        auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }

        LineParser p(lex(line, line_no), line_no);
        if (p.peek().kind == Tok::End) {
            continue;
        }
        Token head = p.expect(Tok::Ident, "statement keyword");

        if (head.text == "design") {
            if (have_header) {
                p.fail("duplicate 'design' statement", head);
            }
            design.name = p.identifier();
            p.end();
            have_header = true;
            continue;
        }
        if (!have_header) {
            p.fail("expected 'design <name>' before other statements", head);
        }

        if (head.text == "input" || head.text == "wire" || head.text == "reg") {
            Token name_tok = p.peek();
            SignalDecl d;
            d.name = p.identifier();
            d.kind = head.text == "input" ? SignalKind::Input
                     : head.text == "wire" ? SignalKind::Wire
                                           : SignalKind::Reg;
            p.expect(Tok::Colon, "':'");
            Token width_tok = p.peek();
            std::uint64_t w = p.integer();
            if (w < 1 || w > kMaxWidth) {
                p.fail("width must be between 1 and " + std::to_string(kMaxWidth), width_tok);
            }
            d.width = static_cast<unsigned>(w);
            if (d.kind == SignalKind::Reg) {
                p.expect(Tok::Assign, "'=' and reset value");
                Token reset_tok = p.peek();
                d.reset_value = p.integer();
                if (d.reset_value > width_mask(d.width)) {
                    p.fail("width mismatch: reset value does not fit in " + std::to_string(d.width) +
                               " bits",
                           reset_tok);
                }
            }
            p.end();
            if (decls.contains(d.name)) {
                p.fail("duplicate declaration of '" + d.name + "'", name_tok);
            }
            decls.emplace(d.name, d);
            if (d.kind == SignalKind::Input) {
                design.inputs.push_back(d.name);
            }
            design.decls.push_back(std::move(d));
            continue;
        }

        if (head.text == "assign" || head.text == "always") {
            bool is_assign = head.text == "assign";
            Token target_tok = p.peek();
            std::string target = p.identifier();
            auto it = decls.find(target);
            if (it == decls.end()) {
                p.fail("unknown identifier '" + target + "'", target_tok);
            }
            SignalKind want = is_assign ? SignalKind::Wire : SignalKind::Reg;
            if (it->second.kind != want) {
                p.fail(std::string(head.text) + " target '" + target + "' is a " +
                           std::string(to_string(it->second.kind)) + ", expected a " +
                           std::string(to_string(want)),
                       target_tok);
            }
            p.expect(is_assign ? Tok::Assign : Tok::NonBlocking, is_assign ? "'='" : "'<='");
            Node rhs = p.expression();
            p.end();
            Expr typed = Typer(decls, line_no).type(rhs, it->second.width);
            auto& table = is_assign ? design.assigns : design.updates;
            if (!table.emplace(target, std::move(typed)).second) {
                p.fail(std::string("duplicate ") + (is_assign ? "assign" : "always update") +
                           " for '" + target + "'",
                       target_tok);
            }
            continue;
        }

        p.fail("unknown statement '" + std::string(head.text) + "'", head);
    }

    if (!have_header) {
        throw ParseError("missing 'design <name>' statement", 1);
    }
    return design;
}

}  // namespace flowmine
