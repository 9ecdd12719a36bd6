#include <genfn/sexpr.hpp>

#include <charconv>
#include <cmath>
#include <vector>

namespace genfn {

ParseError::ParseError(const std::string& message, std::size_t position)
    : std::runtime_error(message + " at position " + std::to_string(position)), position_(position) {}

namespace {

bool is_delimiter(char c) {
    return c == '(' || c == ')' || c == '"' || c == ';' || c == ' ' || c == '\t' || c == '\n' || c == '\r' ||
           c == '\f' || c == '\v';
}

class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    Value read_top() {
        skip_space();
        if (at_end()) throw ParseError("empty input", pos_);
        Value v = read();
        skip_space();
        if (!at_end()) throw ParseError("trailing characters after expression", pos_);
        return v;
    }

private:
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    void skip_space() {
        while (!at_end()) {
            char c = peek();
            if (c == ';') {
                while (!at_end() && peek() != '\n') ++pos_;
            } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
                ++pos_;
            } else {
                return;
            }
        }
    }

    Value read() {
        skip_space();
        if (at_end()) throw ParseError("unexpected end of input", pos_);
        char c = peek();
        if (c == '(') return read_list();
        if (c == ')') throw ParseError("unexpected ')'", pos_);
        if (c == '"') return read_string();
        return read_atom();
    }

    Value read_list() {
        ++pos_; // '('
        std::vector<Value> items;
        for (;;) {
            skip_space();
            if (at_end()) throw ParseError("unbalanced parentheses: unexpected end of input", pos_);
            if (peek() == ')') {
                ++pos_;
                return list_from(items);
            }
            items.push_back(read());
        }
    }

    Value read_string() {
        std::size_t start = pos_++;
        std::string out;
        while (!at_end()) {
            char c = text_[pos_++];
            if (c == '"') return Value::string(std::move(out));
            if (c == '\\') {
                if (at_end()) break;
                c = text_[pos_++];
            }
            out.push_back(c);
        }
        throw ParseError("unterminated string starting", start);
    }

    Value read_atom() {
        std::size_t start = pos_;
        while (!at_end() && !is_delimiter(peek())) ++pos_;
        std::string_view token = text_.substr(start, pos_ - start);
        if (auto n = parse_number(token)) return *n;
        Symbol s = intern(token);
        if (s == intern("nil")) return Value();
        return Value(s);
    }

    static std::optional<Value> parse_number(std::string_view token) {
        const char* first = token.data();
        const char* last = first + token.size();
        if (*first == '+') ++first;
        if (first == last) return std::nullopt;

        std::int64_t i = 0;
        auto [iend, iec] = std::from_chars(first, last, i);
        if (iec == std::errc() && iend == last) return Value(i);

        // Floats need a digit somewhere, which keeps symbols like `-` and `.` as symbols.
        bool has_digit = false;
        for (const char* p = first; p != last; ++p) has_digit |= (*p >= '0' && *p <= '9');
        if (!has_digit) return std::nullopt;
        double d = 0;
        auto [dend, dec] = std::from_chars(first, last, d);
        if (dec == std::errc() && dend == last && std::isfinite(d)) return Value(d);
        return std::nullopt;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

void print_to(std::string& out, const Value& v) {
    if (v.is_nil()) {
        out += "nil";
    } else if (v.is_symbol()) {
        out += v.as_symbol().name();
    } else if (v.is_integer()) {
        out += std::to_string(v.as_integer());
    } else if (v.is_float()) {
        char buf[64];
        auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v.as_float());
        std::string_view s(buf, end - buf);
        out += s;
        if (s.find_first_of(".eEn") == std::string_view::npos) out += ".0";
    } else if (v.is_string()) {
        out += '"';
        for (char c : v.as_string()) {
            if (c == '"' || c == '\\') out += '\\';
            out += c;
        }
        out += '"';
    } else if (v.is_cons()) {
        out += '(';
        const Value* p = &v;
        bool first = true;
        while (p->is_cons()) {
            if (!first) out += ' ';
            print_to(out, car(*p));
            first = false;
            p = &cdr(*p);
        }
        if (!p->is_nil()) {
            out += " . ";
            print_to(out, *p);
        }
        out += ')';
    } else if (v.is_instance()) {
        out += "#<instance>";
    } else if (v.is_request()) {
        const auto& r = v.as_request();
        out += "#<request " + r.method + " " + r.path + ">";
    }
}

} // namespace

Value read_sexpr(std::string_view text) { return Reader(text).read_top(); }

std::string print_sexpr(const Value& v) {
    std::string out;
    print_to(out, v);
    return out;
}

} // namespace genfn
