// Copyright 2026 The qoffload developers

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qoffload/qasm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>

namespace qoffload::qasm {

SyntaxError::SyntaxError(const std::string &msg, std::size_t line_, std::size_t col_)
    : QasmError("SyntaxError at " + std::to_string(line_) + ":" + std::to_string(col_) +
                ": " + msg),
      line(line_), col(col_) {}

namespace {

struct GateInfo {
    GateKind kind;
    const char *name;
    int arity;  // -1: variadic
    int params;
};

constexpr GateInfo kGates[] = {
    {GateKind::H, "h", 1, 0},        {GateKind::X, "x", 1, 0},
    {GateKind::Y, "y", 1, 0},        {GateKind::Z, "z", 1, 0},
    {GateKind::S, "s", 1, 0},        {GateKind::Sdg, "sdg", 1, 0},
    {GateKind::T, "t", 1, 0},        {GateKind::Tdg, "tdg", 1, 0},
    {GateKind::Sx, "sx", 1, 0},      {GateKind::Rx, "rx", 1, 1},
    {GateKind::Ry, "ry", 1, 1},      {GateKind::Rz, "rz", 1, 1},
    {GateKind::U1, "u1", 1, 1},      {GateKind::U2, "u2", 1, 2},
    {GateKind::U3, "u3", 1, 3},      {GateKind::Cx, "cx", 2, 0},
    {GateKind::Cz, "cz", 2, 0},      {GateKind::Swap, "swap", 2, 0},
    {GateKind::Ccx, "ccx", 3, 0},    {GateKind::Barrier, "barrier", -1, 0},
    {GateKind::Measure, "measure", 1, 0},
};

const GateInfo &info(GateKind kind) {
    for (const auto &g : kGates)
        if (g.kind == kind)
            return g;
    std::abort();
}

} // namespace

int gate_arity(GateKind kind) { return info(kind).arity; }
int gate_param_count(GateKind kind) { return info(kind).params; }
const char *gate_name(GateKind kind) { return info(kind).name; }

std::optional<GateKind> gate_from_name(std::string_view name) {
    for (const auto &g : kGates)
        if (name == g.name)
            return g.kind;
    return std::nullopt;
}

std::string format_angle(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15f", v);
    double back = std::strtod(buf, nullptr);
    if (back == v && std::isfinite(v))
        return buf;
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string substitute_params(std::string_view source, const std::vector<double> &values,
                              int *highest_used) {
    std::string out;
    out.reserve(source.size());
    int highest = -1;
    std::size_t i = 0;
    while (i < source.size()) {
        if (source[i] == '$' && i + 1 < source.size() && source[i + 1] == '[') {
            std::size_t j = i + 2;
            std::size_t start = j;
            while (j < source.size() && std::isdigit(static_cast<unsigned char>(source[j])))
                ++j;
            if (j > start && j < source.size() && source[j] == ']') {
                unsigned long k = std::stoul(std::string(source.substr(start, j - start)));
                if (k >= values.size())
                    throw PlaceholderOutOfRange("placeholder $[" + std::to_string(k) +
                                                "] has no bound value (" +
                                                std::to_string(values.size()) + " supplied)");
                out += format_angle(values[k]);
                highest = std::max(highest, static_cast<int>(k));
                i = j + 1;
                continue;
            }
        }
        out += source[i++];
    }
    if (highest_used)
        *highest_used = highest;
    return out;
}

std::string append_extension(std::string_view source, std::string_view extension,
                             int default_registers) {
    if (extension.empty())
        return std::string(source);
    if (source.empty()) {
        std::string n = std::to_string(default_registers);
        std::string out = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[" + n +
                          "];\ncreg c[" + n + "];\n";
        out += extension;
        return out;
    }
    std::string out(source);
    out += '\n';
    out += extension;
    return out;
}

namespace {

// ---------------------------------------------------------------------------
// Tokenizer

enum class Tok {
    Id,
    Number,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semicolon,
    Arrow,
    Plus,
    Minus,
    Star,
    Slash,
    String,
    End,
};

struct Token {
    Tok type;
    std::string text;
    double number = 0;
    std::size_t line = 1;
    std::size_t col = 1;
};

class Lexer {
  public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token &peek() const { return cur_; }

    Token next() {
        Token t = cur_;
        advance();
        return t;
    }

  private:
    void advance() {
        skip_ws();
        cur_.line = line_;
        cur_.col = col_;
        if (pos_ >= src_.size()) {
            cur_ = {Tok::End, "", 0, line_, col_};
            return;
        }
        char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                step();
            cur_ = {Tok::Id, std::string(src_.substr(start, pos_ - start)), 0, cur_.line,
                    cur_.col};
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && pos_ + 1 < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
                step();
            if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
                step();
                if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-'))
                    step();
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    step();
            }
            std::string text(src_.substr(start, pos_ - start));
            cur_ = {Tok::Number, text, std::strtod(text.c_str(), nullptr), cur_.line, cur_.col};
            return;
        }
        if (c == '"') {
            step();
            std::size_t start = pos_;
            while (pos_ < src_.size() && src_[pos_] != '"')
                step();
            if (pos_ >= src_.size())
                throw SyntaxError("unterminated string", cur_.line, cur_.col);
            std::string text(src_.substr(start, pos_ - start));
            step();
            cur_ = {Tok::String, text, 0, cur_.line, cur_.col};
            return;
        }
        if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
            step();
            step();
            cur_ = {Tok::Arrow, "->", 0, cur_.line, cur_.col};
            return;
        }
        Tok type;
        switch (c) {
        case '(': type = Tok::LParen; break;
        case ')': type = Tok::RParen; break;
        case '[': type = Tok::LBracket; break;
        case ']': type = Tok::RBracket; break;
        case ',': type = Tok::Comma; break;
        case ';': type = Tok::Semicolon; break;
        case '+': type = Tok::Plus; break;
        case '-': type = Tok::Minus; break;
        case '*': type = Tok::Star; break;
        case '/': type = Tok::Slash; break;
        default:
            throw SyntaxError(std::string("unexpected character '") + c + "'", line_, col_);
        }
        step();
        cur_ = {type, std::string(1, c), 0, cur_.line, cur_.col};
    }

    void skip_ws() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
                while (pos_ < src_.size() && src_[pos_] != '\n')
                    step();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                step();
            } else {
                break;
            }
        }
    }

    void step() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
    Token cur_;
};

// ---------------------------------------------------------------------------
// Parser

struct Register {
    int offset;
    int size;
};

class Parser {
  public:
    Parser(std::string_view src, std::string_view name) : lex_(src) {
        circuit_.source_name = std::string(name);
    }

    Circuit run() {
        maybe_header();
        while (lex_.peek().type != Tok::End)
            statement();
        return std::move(circuit_);
    }

  private:
    [[noreturn]] void fail(const std::string &msg, const Token &t) {
        throw SyntaxError(msg, t.line, t.col);
    }

    Token expect(Tok type, const char *what) {
        Token t = lex_.next();
        if (t.type != type)
            fail(std::string("expected ") + what + ", got '" + t.text + "'", t);
        return t;
    }

    void maybe_header() {
        if (lex_.peek().type == Tok::Id && lex_.peek().text == "OPENQASM") {
            Token t = lex_.next();
            Token v = expect(Tok::Number, "version number");
            if (v.text != "2.0")
                fail("only OpenQASM 2.0 is supported", v);
            expect(Tok::Semicolon, "';'");
            (void)t;
        }
    }

    void statement() {
        Token t = lex_.peek();
        if (t.type != Tok::Id)
            fail("expected statement, got '" + t.text + "'", t);
        const std::string &kw = t.text;
        if (kw == "include") {
            lex_.next();
            expect(Tok::String, "include path");
            expect(Tok::Semicolon, "';'");
        } else if (kw == "qreg" || kw == "creg") {
            reg_decl(kw == "qreg");
        } else if (kw == "measure") {
            measure();
        } else if (kw == "barrier") {
            barrier();
        } else if (kw == "if" || kw == "reset" || kw == "opaque" || kw == "gate") {
            throw UnsupportedFeature("'" + kw + "' is not supported in this dialect", t.line,
                                     t.col);
        } else {
            gate_statement();
        }
    }

    void reg_decl(bool quantum) {
        Token kw = lex_.next();
        Token name = expect(Tok::Id, "register name");
        expect(Tok::LBracket, "'['");
        Token size = expect(Tok::Number, "register size");
        expect(Tok::RBracket, "']'");
        expect(Tok::Semicolon, "';'");
        int n = static_cast<int>(size.number);
        if (n <= 0 || size.number != n)
            fail("register size must be a positive integer", size);
        auto &regs = quantum ? qregs_ : cregs_;
        if (regs.count(name.text) || (quantum ? cregs_ : qregs_).count(name.text))
            fail("register '" + name.text + "' already declared", name);
        int &total = quantum ? circuit_.n_qubits : circuit_.n_clbits;
        regs[name.text] = {total, n};
        total += n;
        (void)kw;
    }

    // Resolves `name` or `name[i]`; index -1 means whole register.
    std::pair<Register, int> operand(bool quantum) {
        Token name = expect(Tok::Id, "register name");
        const auto &regs = quantum ? qregs_ : cregs_;
        auto it = regs.find(name.text);
        if (it == regs.end())
            fail("UndeclaredRegister: '" + name.text + "'", name);
        if (lex_.peek().type != Tok::LBracket)
            return {it->second, -1};
        lex_.next();
        Token idx = expect(Tok::Number, "index");
        expect(Tok::RBracket, "']'");
        int i = static_cast<int>(idx.number);
        if (i < 0 || idx.number != i || i >= it->second.size)
            fail("IndexOutOfRange: " + name.text + "[" + idx.text + "]", idx);
        return {it->second, i};
    }

    void measure() {
        Token kw = lex_.next();
        auto [qreg, qi] = operand(true);
        expect(Tok::Arrow, "'->'");
        auto [creg, ci] = operand(false);
        expect(Tok::Semicolon, "';'");
        if ((qi < 0) != (ci < 0))
            fail("measure must map register to register or bit to bit", kw);
        if (qi < 0) {
            if (qreg.size != creg.size)
                fail("measure register sizes differ", kw);
            for (int k = 0; k < qreg.size; ++k)
                circuit_.ops.push_back(
                    {GateKind::Measure, {}, {qreg.offset + k}, creg.offset + k});
        } else {
            circuit_.ops.push_back({GateKind::Measure, {}, {qreg.offset + qi}, creg.offset + ci});
        }
    }

    void barrier() {
        lex_.next();
        GateOp op{GateKind::Barrier, {}, {}, -1};
        for (;;) {
            auto [reg, i] = operand(true);
            if (i < 0) {
                for (int k = 0; k < reg.size; ++k)
                    op.qubits.push_back(reg.offset + k);
            } else {
                op.qubits.push_back(reg.offset + i);
            }
            if (lex_.peek().type != Tok::Comma)
                break;
            lex_.next();
        }
        expect(Tok::Semicolon, "';'");
        circuit_.ops.push_back(std::move(op));
    }

    void gate_statement() {
        Token name = lex_.next();
        auto kind = gate_from_name(name.text);
        if (!kind || *kind == GateKind::Measure || *kind == GateKind::Barrier)
            fail("unknown gate '" + name.text + "'", name);
        std::vector<double> params;
        if (lex_.peek().type == Tok::LParen) {
            lex_.next();
            if (lex_.peek().type != Tok::RParen) {
                params.push_back(expression());
                while (lex_.peek().type == Tok::Comma) {
                    lex_.next();
                    params.push_back(expression());
                }
            }
            expect(Tok::RParen, "')'");
        }
        if (static_cast<int>(params.size()) != gate_param_count(*kind))
            fail("gate '" + name.text + "' expects " +
                     std::to_string(gate_param_count(*kind)) + " parameter(s), got " +
                     std::to_string(params.size()),
                 name);

        std::vector<std::pair<Register, int>> args;
        args.push_back(operand(true));
        while (lex_.peek().type == Tok::Comma) {
            lex_.next();
            args.push_back(operand(true));
        }
        expect(Tok::Semicolon, "';'");

        int arity = gate_arity(*kind);
        if (static_cast<int>(args.size()) != arity)
            fail("gate '" + name.text + "' expects " + std::to_string(arity) +
                     " qubit operand(s), got " + std::to_string(args.size()),
                 name);

        if (arity == 1 && args[0].second < 0) {
            // Whole-register broadcast.
            for (int k = 0; k < args[0].first.size; ++k)
                circuit_.ops.push_back({*kind, params, {args[0].first.offset + k}, -1});
            return;
        }
        std::vector<int> qubits;
        for (auto &[reg, i] : args) {
            if (i < 0)
                fail("multi-qubit gate '" + name.text + "' requires indexed operands", name);
            qubits.push_back(reg.offset + i);
        }
        for (std::size_t a = 0; a < qubits.size(); ++a)
            for (std::size_t b = a + 1; b < qubits.size(); ++b)
                if (qubits[a] == qubits[b])
                    fail("gate '" + name.text + "' operands must be distinct qubits", name);
        circuit_.ops.push_back({*kind, std::move(params), std::move(qubits), -1});
    }

    // expr := term (('+'|'-') term)*
    double expression() {
        double v = term();
        for (;;) {
            Tok t = lex_.peek().type;
            if (t == Tok::Plus) {
                lex_.next();
                v += term();
            } else if (t == Tok::Minus) {
                lex_.next();
                v -= term();
            } else {
                return v;
            }
        }
    }

    double term() {
        double v = factor();
        for (;;) {
            Tok t = lex_.peek().type;
            if (t == Tok::Star) {
                lex_.next();
                v *= factor();
            } else if (t == Tok::Slash) {
                lex_.next();
                v /= factor();
            } else {
                return v;
            }
        }
    }

    double factor() {
        Token t = lex_.next();
        switch (t.type) {
        case Tok::Number:
            return t.number;
        case Tok::Minus:
            return -factor();
        case Tok::Plus:
            return factor();
        case Tok::LParen: {
            double v = expression();
            expect(Tok::RParen, "')'");
            return v;
        }
        case Tok::Id:
            if (t.text == "pi")
                return M_PI;
            fail("unknown identifier '" + t.text + "' in expression", t);
        default:
            fail("unexpected token '" + t.text + "' in expression", t);
        }
    }

    Lexer lex_;
    Circuit circuit_;
    std::map<std::string, Register> qregs_;
    std::map<std::string, Register> cregs_;
};

} // namespace

Circuit parse(std::string_view source, std::string_view name) {
    if (auto pos = source.find("$["); pos != std::string_view::npos) {
        std::size_t line = 1 + std::count(source.begin(), source.begin() + pos, '\n');
        throw SyntaxError("unresolved parameter placeholder", line, 0);
    }
    return Parser(source, name).run();
}

std::string serialize(const Circuit &circuit) {
    std::string out = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
    if (circuit.n_qubits > 0)
        out += "qreg q[" + std::to_string(circuit.n_qubits) + "];\n";
    if (circuit.n_clbits > 0)
        out += "creg c[" + std::to_string(circuit.n_clbits) + "];\n";
    for (const auto &op : circuit.ops) {
        if (op.kind == GateKind::Measure) {
            out += "measure q[" + std::to_string(op.qubits[0]) + "] -> c[" +
                   std::to_string(op.clbit) + "];\n";
            continue;
        }
        out += gate_name(op.kind);
        if (!op.params.empty()) {
            out += '(';
            for (std::size_t i = 0; i < op.params.size(); ++i) {
                if (i)
                    out += ',';
                out += format_angle(op.params[i]);
            }
            out += ')';
        }
        for (std::size_t i = 0; i < op.qubits.size(); ++i) {
            out += i ? "," : " ";
            out += "q[" + std::to_string(op.qubits[i]) + "]";
        }
        out += ";\n";
    }
    return out;
}

} // namespace qoffload::qasm
