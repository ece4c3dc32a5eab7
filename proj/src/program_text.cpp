#include "qcluster/circuit.hpp"

#include "qcluster/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

namespace qcluster {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(std::string_view &s) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr == s.data()) {
        return std::nullopt;
    }
    s.remove_prefix(static_cast<std::size_t>(ptr - s.data()));
    return value;
}

bool consume(std::string_view &s, std::string_view token) {
    s = trim(s);
    if (s.substr(0, token.size()) == token) {
        s.remove_prefix(token.size());
        return true;
    }
    return false;
}

// Accepts a decimal number or a multiple of pi: "1.5", "-pi", "pi/2",
// "3*pi/4", "0.5pi", "2pi/3".
std::optional<double> parse_angle(std::string_view s) {
    s = trim(s);
    double sign = 1.0;
    if (consume(s, "-")) {
        sign = -1.0;
    } else {
        consume(s, "+");
    }
    s = trim(s);
    double value = 1.0;
    bool have_number = false;
    if (!s.empty() && (std::isdigit(static_cast<unsigned char>(s.front())) || s.front() == '.')) {
        const auto number = parse_number(s);
        if (!number) {
            return std::nullopt;
        }
        value = *number;
        have_number = true;
    }
    const bool starred = have_number && consume(s, "*");
    if (consume(s, "pi")) {
        value *= std::numbers::pi;
    } else if (starred || !have_number) {
        return std::nullopt;
    }
    if (consume(s, "/")) {
        s = trim(s);
        const auto divisor = parse_number(s);
        if (!divisor || *divisor == 0.0) {
            return std::nullopt;
        }
        value /= *divisor;
    }
    if (!trim(s).empty() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return sign * value;
}

std::optional<GateKind> parse_mnemonic(std::string_view name) {
    static constexpr GateKind kinds[] = {GateKind::H,    GateKind::X,  GateKind::RZ,     GateKind::RX,
                                         GateKind::CNOT, GateKind::CZ, GateKind::MEASURE};
    for (GateKind k : kinds) {
        if (mnemonic(k) == name) {
            return k;
        }
    }
    return std::nullopt;
}

std::optional<std::size_t> parse_index(std::string_view token) {
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        return std::nullopt;
    }
    return value;
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) {
            ++i;
        }
        const std::size_t start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t') {
            ++i;
        }
        if (i > start) {
            out.push_back(s.substr(start, i - start));
        }
    }
    return out;
}

struct ParsedLine {
    Gate gate;
    std::size_t line = 0;
    bool opens_round = false;
};

std::string format_angle(double angle) {
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), angle);
    return std::string(buffer, ptr);
}

} // namespace

GateProgram parse_program(std::string_view text) {
    std::vector<ParsedLine> parsed;
    std::optional<std::size_t> declared_qubits;
    bool pending_round = false;
    std::size_t rounds_seen = 0;
    std::size_t line_no = 0;

    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = trim(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '#') {
            const auto words = split_ws(line.substr(1));
            if (words.size() == 2 && words[0] == "round") {
                const auto k = parse_index(words[1]);
                if (!k || *k != rounds_seen) {
                    throw ParseError(line_no, "expected '# round " + std::to_string(rounds_seen) + "'");
                }
                if (pending_round) {
                    throw ParseError(line_no, "empty round");
                }
                pending_round = true;
                ++rounds_seen;
            } else if (words.size() == 2 && words[0] == "qubits") {
                const auto n = parse_index(words[1]);
                if (!n || *n == 0 || !parsed.empty() || declared_qubits) {
                    throw ParseError(line_no, "'# qubits N' must appear once, before any instruction");
                }
                declared_qubits = n;
            }
            continue;
        }

        std::string_view head = line;
        std::optional<double> angle;
        const auto open = line.find('(');
        std::string_view rest;
        if (open != std::string_view::npos) {
            const auto close = line.find(')', open);
            if (close == std::string_view::npos) {
                throw ParseError(line_no, "unterminated angle");
            }
            head = trim(line.substr(0, open));
            angle = parse_angle(line.substr(open + 1, close - open - 1));
            if (!angle) {
                throw ParseError(line_no, "malformed angle '" +
                                              std::string(line.substr(open + 1, close - open - 1)) + "'");
            }
            rest = line.substr(close + 1);
        } else {
            const auto words = split_ws(line);
            head = words.front();
            rest = line.substr(head.size());
        }
        const auto kind = parse_mnemonic(head);
        if (!kind) {
            throw ParseError(line_no, "unknown mnemonic '" + std::string(head) + "'");
        }
        if (takes_angle(*kind) != angle.has_value()) {
            throw ParseError(line_no, std::string(head) + (angle ? " takes no angle" : " needs an angle"));
        }
        const auto operands = split_ws(rest);
        const std::size_t arity = is_two_qubit(*kind) ? 2 : 1;
        if (operands.size() != arity) {
            throw ParseError(line_no, std::string(head) + " expects " + std::to_string(arity) + " operand(s)");
        }
        Gate gate{*kind, 0, 0, angle.value_or(0.0)};
        for (std::size_t k = 0; k < arity; ++k) {
            const auto q = parse_index(operands[k]);
            if (!q) {
                throw ParseError(line_no, "malformed qubit index '" + std::string(operands[k]) + "'");
            }
            (k == 0 ? gate.q0 : gate.q1) = *q;
        }
        if (arity == 2 && gate.q0 == gate.q1) {
            throw ParseError(line_no, std::string(head) + " operands must be distinct");
        }
        parsed.push_back({gate, line_no, pending_round});
        pending_round = false;
    }
    if (pending_round) {
        throw ParseError(line_no, "round marker with no instructions");
    }

    std::size_t n = declared_qubits.value_or(0);
    if (!declared_qubits) {
        for (const auto &p : parsed) {
            n = std::max({n, p.gate.q0 + 1, is_two_qubit(p.gate.kind) ? p.gate.q1 + 1 : 0});
        }
    }
    const std::size_t limit = declared_qubits.value_or(kMaxQubits);
    GateProgram program(n);
    for (const auto &p : parsed) {
        const std::size_t top = std::max(p.gate.q0, is_two_qubit(p.gate.kind) ? p.gate.q1 : 0);
        if (top >= limit) {
            throw ParseError(p.line, "qubit " + std::to_string(top) + " out of range (register has " +
                                         std::to_string(limit) + ")");
        }
        try {
            if (p.opens_round) {
                program.begin_round();
            }
            program.add(p.gate);
        } catch (const std::invalid_argument &e) {
            throw ParseError(p.line, e.what());
        }
    }
    return program;
}

std::string emit_program(const GateProgram &program) {
    std::string out = "# qubits " + std::to_string(program.n_qubits()) + "\n";
    const auto &markers = program.round_markers();
    std::size_t next_marker = 0;
    const auto &gates = program.instructions();
    for (std::size_t k = 0; k < gates.size(); ++k) {
        if (next_marker < markers.size() && markers[next_marker] == k) {
            out += "# round " + std::to_string(next_marker) + "\n";
            ++next_marker;
        }
        const Gate &g = gates[k];
        out += mnemonic(g.kind);
        if (takes_angle(g.kind)) {
            out += "(" + format_angle(g.angle) + ")";
        }
        out += " " + std::to_string(g.q0);
        if (is_two_qubit(g.kind)) {
            out += " " + std::to_string(g.q1);
        }
        out += "\n";
    }
    return out;
}

} // namespace qcluster
