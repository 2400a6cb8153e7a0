// Problem file format (whitespace separated, '#' starts a comment):
//
//   kaczlab-problem v1
//   m n
//   <m lines of n values>
//   b
//   <m values>
//   x_true                  (optional)
//   <n values>
//   b_noisy delta <value>   (optional)
//   <m values>
//   label <text>            (optional)
//   inconsistent            (optional)
//
// Values after a marker may wrap across lines; matrix rows may not.

#include "kaczlab/error.hpp"
#include "kaczlab/problems.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace kaczlab {

namespace {

constexpr std::string_view kMagic = "kaczlab-problem v1";

struct Line {
    std::size_t number;
    std::vector<std::string> tokens;
};

std::vector<Line> tokenize(std::istream& in) {
    std::vector<Line> lines;
    std::string raw;
    std::size_t number = 0;
    while (std::getline(in, raw)) {
        ++number;
        if (const auto hash = raw.find('#'); hash != std::string::npos) {
            raw.erase(hash);
        }
        std::istringstream ss(raw);
        Line line{number, {}};
        for (std::string tok; ss >> tok;) {
            line.tokens.push_back(std::move(tok));
        }
        if (!line.tokens.empty()) {
            lines.push_back(std::move(line));
        }
    }
    return lines;
}

double parse_double(const std::string& tok, std::size_t line) {
    double value = 0.0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (!tok.empty() && *first == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw ParseError(line, "not a number: '" + tok + "'");
    }
    return value;
}

Eigen::Index parse_count(const std::string& tok, std::size_t line) {
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || value < 1) {
        throw ParseError(line, "expected a positive count, got '" + tok + "'");
    }
    return static_cast<Eigen::Index>(value);
}

bool is_marker(const std::string& tok) {
    return tok == "b" || tok == "x_true" || tok == "b_noisy" || tok == "label" || tok == "inconsistent";
}

class Cursor {
public:
    explicit Cursor(std::vector<Line> lines) : lines_(std::move(lines)) {}

    [[nodiscard]] bool done() const { return index_ >= lines_.size(); }
    [[nodiscard]] const Line& peek() const { return lines_[index_]; }
    const Line& next() { return lines_[index_++]; }

    [[nodiscard]] std::size_t last_line() const {
        return lines_.empty() ? 1 : lines_.back().number;
    }

    /// Reads `count` values that may span several lines, stopping at a marker.
    Vector values(Eigen::Index count, const char* what) {
        Vector out(count);
        Eigen::Index filled = 0;
        while (filled < count) {
            if (done()) {
                throw ParseError(last_line(), std::string("unexpected end of file in ") + what);
            }
            const Line& line = peek();
            if (is_marker(line.tokens.front())) {
                throw ParseError(line.number, std::string("too few values for ") + what);
            }
            next();
            for (const auto& tok : line.tokens) {
                if (filled == count) {
                    throw ParseError(line.number, std::string("too many values for ") + what);
                }
                out(filled++) = parse_double(tok, line.number);
            }
        }
        return out;
    }

private:
    std::vector<Line> lines_;
    std::size_t index_ = 0;
};

void write_value(std::ostream& out, double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    (void)ec;
    out.write(buf, ptr - buf);
}

void write_values(std::ostream& out, const Vector& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        write_value(out, v(i));
        out << '\n';
    }
}

}  // namespace

void write_problem(const LinearProblem& p, std::ostream& out) {
    p.validate();
    out << kMagic << '\n' << p.rows() << ' ' << p.cols() << '\n';
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
        for (Eigen::Index j = 0; j < p.cols(); ++j) {
            if (j > 0) {
                out << ' ';
            }
            write_value(out, p.A(i, j));
        }
        out << '\n';
    }
    out << "b\n";
    write_values(out, p.b);
    if (p.x_true) {
        out << "x_true\n";
        write_values(out, *p.x_true);
    }
    if (p.b_noisy) {
        out << "b_noisy delta ";
        write_value(out, *p.delta);
        out << '\n';
        write_values(out, *p.b_noisy);
    }
    if (!p.label.empty()) {
        out << "label " << p.label << '\n';
    }
    if (!p.consistent) {
        out << "inconsistent\n";
    }
}

LinearProblem read_problem(std::istream& in) {
    Cursor cur(tokenize(in));
    if (cur.done()) {
        throw ParseError(1, "empty problem file");
    }

    const Line& magic = cur.next();
    std::string header;
    for (const auto& tok : magic.tokens) {
        header += header.empty() ? tok : " " + tok;
    }
    if (header != kMagic) {
        throw ParseError(magic.number, "expected '" + std::string(kMagic) + "'");
    }

    if (cur.done()) {
        throw ParseError(magic.number, "missing dimension line");
    }
    const Line& dims = cur.next();
    if (dims.tokens.size() != 2) {
        throw ParseError(dims.number, "dimension line must be 'm n'");
    }
    const Eigen::Index m = parse_count(dims.tokens[0], dims.number);
    const Eigen::Index n = parse_count(dims.tokens[1], dims.number);

    LinearProblem p;
    p.A.resize(m, n);
    for (Eigen::Index i = 0; i < m; ++i) {
        if (cur.done()) {
            throw ParseError(cur.last_line(), "expected " + std::to_string(m) + " matrix rows, found " +
                                                  std::to_string(i));
        }
        const Line& row = cur.peek();
        if (is_marker(row.tokens.front())) {
            throw ParseError(row.number, "expected " + std::to_string(m) + " matrix rows, found " +
                                             std::to_string(i));
        }
        cur.next();
        if (static_cast<Eigen::Index>(row.tokens.size()) != n) {
            throw ParseError(row.number, "matrix row has " + std::to_string(row.tokens.size()) +
                                             " values, expected " + std::to_string(n));
        }
        for (Eigen::Index j = 0; j < n; ++j) {
            p.A(i, j) = parse_double(row.tokens[static_cast<std::size_t>(j)], row.number);
        }
    }

    bool have_b = false;
    while (!cur.done()) {
        const Line& marker = cur.next();
        const std::string& key = marker.tokens.front();
        if (key == "b" && marker.tokens.size() == 1) {
            p.b = cur.values(m, "b");
            have_b = true;
        } else if (key == "x_true" && marker.tokens.size() == 1) {
            p.x_true = cur.values(n, "x_true");
        } else if (key == "b_noisy") {
            if (marker.tokens.size() != 3 || marker.tokens[1] != "delta") {
                throw ParseError(marker.number, "expected 'b_noisy delta <value>'");
            }
            p.delta = parse_double(marker.tokens[2], marker.number);
            p.b_noisy = cur.values(m, "b_noisy");
        } else if (key == "label" && marker.tokens.size() >= 2) {
            p.label = marker.tokens[1];
            for (std::size_t t = 2; t < marker.tokens.size(); ++t) {
                p.label += " " + marker.tokens[t];
            }
        } else if (key == "inconsistent" && marker.tokens.size() == 1) {
            p.consistent = false;
        } else {
            throw ParseError(marker.number, "unexpected content '" + key + "'");
        }
    }
    if (!have_b) {
        throw ParseError(cur.last_line(), "missing 'b' section");
    }
    p.validate();
    return p;
}

void save_problem(const LinearProblem& p, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        fail(ErrorKind::InvalidInput, "cannot open '" + path.string() + "' for writing");
    }
    write_problem(p, out);
    if (!out) {
        fail(ErrorKind::InvalidInput, "write to '" + path.string() + "' failed");
    }
}

LinearProblem load_problem(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorKind::InvalidInput, "cannot open '" + path.string() + "'");
    }
    return read_problem(in);
}

}  // namespace kaczlab
