#include <ddae/dsl.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace ddae::dsl {

namespace {

// Error raised by token helpers; offset is relative to the token start.
struct TokenError {
    std::string message;
    int offset = 0;
};

struct Token {
    std::string text;
    int column = 1;  // 1-based
};

struct Location {
    int line = 0;
    int column = 0;
};

constexpr std::array<char, 4> kKernelNames = {'A', 'B', 'C', 'D'};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string strip_spaces(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c != ' ' && c != '\t') {
            out.push_back(c);
        }
    }
    return out;
}

double parse_real(std::string_view token) {
    if (!token.empty() && token.front() == '+') {
        token.remove_prefix(1);
    }
    double value = 0.0;
    const auto* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (token.empty() || ec != std::errc() || ptr != end) {
        throw TokenError{"expected a number, got '" + std::string(token) + "'", 0};
    }
    if (!std::isfinite(value)) {
        throw TokenError{"numbers must be finite", 0};
    }
    return value;
}

std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
            ++i;
            continue;
        }
        const std::size_t start = i;
        int depth = 0;
        while (i < line.size() && (depth > 0 || (line[i] != ' ' && line[i] != '\t' && line[i] != '\r'))) {
            if (line[i] == '[') {
                ++depth;
            } else if (line[i] == ']') {
                if (--depth < 0) {
                    throw TokenError{"unbalanced ']'", static_cast<int>(i)};
                }
            }
            ++i;
        }
        if (depth != 0) {
            throw TokenError{"unbalanced '['", static_cast<int>(start)};
        }
        tokens.push_back(Token{std::string(line.substr(start, i - start)), static_cast<int>(start) + 1});
    }
    return tokens;
}

std::vector<std::string> split_top_level(std::string_view s, char sep) {
    std::vector<std::string> parts;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '[') {
            ++depth;
        } else if (s[i] == ']') {
            --depth;
        } else if (s[i] == sep && depth == 0) {
            parts.emplace_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    parts.emplace_back(s.substr(start));
    return parts;
}

bool is_identifier(std::string_view s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) {
        return false;
    }
    return std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

std::pair<double, double> parse_interval(std::string_view token) {
    const std::string s = strip_spaces(token);
    if (s.size() < 2 || s.front() != '[' || s.back() != ']') {
        throw TokenError{"expected an interval [a,b]", 0};
    }
    const auto parts = split_top_level(std::string_view(s).substr(1, s.size() - 2), ',');
    if (parts.size() != 2) {
        throw TokenError{"expected an interval [a,b]", 0};
    }
    return {parse_real(parts[0]), parse_real(parts[1])};
}

MatrixRef parse_operand(std::string_view token) {
    if (is_identifier(token)) {
        return MatrixRef{std::string(token), Matrix()};
    }
    return MatrixRef{"", parse_matrix(token)};
}

HistorySpec parse_history(std::string_view token) {
    if (!token.empty() && token.front() == '[') {
        return HistorySpec{parse_vector(token)};
    }
    if (token.empty()) {
        throw TokenError{"expected a vector or a samples file", 0};
    }
    return HistorySpec{std::string(token)};
}

class Parser {
  public:
    explicit Parser(std::string_view text) : text_(text) {}

    SystemDescription run() {
        std::istringstream in{std::string(text_)};
        std::string raw;
        int line_no = 0;
        int current_kernel = -1;
        while (std::getline(in, raw)) {
            ++line_no;
            std::string_view line = raw;
            if (const auto hash = line.find('#'); hash != std::string_view::npos) {
                line = line.substr(0, hash);
            }
            if (trim(line).empty()) {
                continue;
            }
            const bool indented = line[0] == ' ' || line[0] == '\t';
            try {
                if (indented) {
                    if (current_kernel < 0) {
                        fail(ParseError::Kind::Syntax, line_no, 1,
                             "indented term outside a kernel block");
                    }
                    parse_term(line, line_no, current_kernel);
                    continue;
                }
                current_kernel = -1;
                parse_statement(line, line_no, current_kernel);
            } catch (const TokenError& e) {
                fail(ParseError::Kind::Syntax, line_no, 1 + e.offset, e.message);
            }
        }
        if (!saw_system_) {
            fail(ParseError::Kind::Syntax, 1, 1, "missing 'system n=<int> m=<int> r=<float>' line");
        }
        validate();
        return std::move(desc_);
    }

  private:
    [[noreturn]] static void fail(ParseError::Kind kind, int line, int column,
                                  const std::string& message) {
        throw ParseError(kind, line, column, message);
    }

    void parse_statement(std::string_view line, int line_no, int& current_kernel) {
        const auto tokens = tokenize(line);
        const std::string& head = tokens[0].text;
        if (head == "system") {
            parse_system(tokens, line_no);
        } else if (head == "matrix") {
            parse_matrix_definition(line, line_no);
        } else if (head == "kernel") {
            std::string name;
            for (std::size_t i = 1; i < tokens.size(); ++i) {
                name += tokens[i].text;
            }
            if (name.size() != 2 || name[1] != ':' ||
                std::find(kKernelNames.begin(), kKernelNames.end(), name[0]) == kKernelNames.end()) {
                fail(ParseError::Kind::Syntax, line_no, tokens.size() > 1 ? tokens[1].column : 7,
                     "expected 'kernel <A|B|C|D>:'");
            }
            current_kernel = static_cast<int>(
                std::find(kKernelNames.begin(), kKernelNames.end(), name[0]) - kKernelNames.begin());
            if (seen_kernel_[current_kernel]) {
                fail(ParseError::Kind::Syntax, line_no, tokens[1].column,
                     std::string("duplicate kernel block ") + name[0]);
            }
            seen_kernel_[current_kernel] = true;
        } else if (head == "init") {
            parse_init(tokens, line_no);
        } else {
            fail(ParseError::Kind::Syntax, line_no, tokens[0].column,
                 "expected 'system', 'matrix', 'kernel' or 'init', got '" + head + "'");
        }
    }

    void parse_system(const std::vector<Token>& tokens, int line_no) {
        if (saw_system_) {
            fail(ParseError::Kind::Syntax, line_no, 1, "duplicate system line");
        }
        saw_system_ = true;
        std::map<std::string, Token> values = key_values(tokens, line_no);
        for (const char* key : {"n", "m", "r"}) {
            if (!values.count(key)) {
                fail(ParseError::Kind::Syntax, line_no, 1, std::string("missing ") + key + "=");
            }
        }
        auto as_int = [&](const Token& t) -> Index {
            Index value = 0;
            const auto* end = t.text.data() + t.text.size();
            const auto [ptr, ec] = std::from_chars(t.text.data(), end, value);
            if (ec != std::errc() || ptr != end || value < 0) {
                fail(ParseError::Kind::Syntax, line_no, t.column,
                     "expected a non-negative integer");
            }
            return value;
        };
        desc_.n = as_int(values.at("n"));
        desc_.m = as_int(values.at("m"));
        if (desc_.n + desc_.m == 0) {
            fail(ParseError::Kind::DimensionMismatch, line_no, values.at("n").column,
                 "n + m must be positive");
        }
        const Token& r = values.at("r");
        desc_.r = with_column(line_no, r.column, [&] { return parse_real(r.text); });
        if (desc_.r < 0.0) {
            fail(ParseError::Kind::SupportOutOfRange, line_no, r.column, "r must be >= 0");
        }
    }

    void parse_matrix_definition(std::string_view line, int line_no) {
        const auto keyword = line.find("matrix");
        const auto eq = line.find('=', keyword);
        if (eq == std::string_view::npos) {
            fail(ParseError::Kind::Syntax, line_no, static_cast<int>(line.size()) + 1,
                 "expected 'matrix <name> = <literal>'");
        }
        const std::string_view name = trim(line.substr(keyword + 6, eq - keyword - 6));
        if (!is_identifier(name)) {
            fail(ParseError::Kind::Syntax, line_no, static_cast<int>(keyword) + 8,
                 "expected a matrix name");
        }
        const std::string_view rest = line.substr(eq + 1);
        const auto offset = rest.find_first_not_of(" \t");
        const int column = static_cast<int>(eq + 2 + (offset == std::string_view::npos ? 0 : offset));
        for (const auto& existing : desc_.matrices) {
            if (existing.name == name) {
                fail(ParseError::Kind::Syntax, line_no, static_cast<int>(keyword) + 8,
                     "matrix '" + std::string(name) + "' is already defined");
            }
        }
        const Matrix value = with_column(line_no, column, [&] { return parse_matrix(trim(rest)); });
        desc_.matrices.push_back(NamedMatrix{std::string(name), value});
    }

    void parse_term(std::string_view line, int line_no, int kernel) {
        const auto tokens = tokenize(line);
        const std::string& head = tokens[0].text;
        auto operand = [&](std::size_t i) {
            return with_column(line_no, tokens[i].column,
                               [&] { return parse_operand(tokens[i].text); });
        };
        auto interval = [&]() {
            if (tokens.size() < 2) {
                fail(ParseError::Kind::Syntax, line_no, static_cast<int>(line.size()) + 1,
                     "expected an interval [a,b]");
            }
            return with_column(line_no, tokens[1].column,
                               [&] { return parse_interval(tokens[1].text); });
        };
        TermSite site{line_no, tokens[0].column, {}};
        for (const auto& t : tokens) {
            site.columns.push_back(t.column);
        }
        if (head == "atom") {
            if (tokens.size() != 3) {
                fail(ParseError::Kind::Syntax, line_no, tokens[0].column,
                     "expected 'atom <tau> <matrix>'");
            }
            AtomTerm term;
            term.tau = with_column(line_no, tokens[1].column, [&] { return parse_real(tokens[1].text); });
            term.weight = operand(2);
            desc_.kernels[kernel].push_back(term);
        } else if (head == "poly") {
            if (tokens.size() < 3) {
                fail(ParseError::Kind::Syntax, line_no, tokens[0].column,
                     "expected 'poly [a,b] <M0> ...'");
            }
            PolyTerm term;
            std::tie(term.a, term.b) = interval();
            for (std::size_t i = 2; i < tokens.size(); ++i) {
                term.coefficients.push_back(operand(i));
            }
            desc_.kernels[kernel].push_back(term);
        } else if (head == "exp") {
            if (tokens.size() != 5) {
                fail(ParseError::Kind::Syntax, line_no, tokens[0].column,
                     "expected 'exp [a,b] <K1> <S> <K2>'");
            }
            ExpTerm term;
            std::tie(term.a, term.b) = interval();
            term.left = operand(2);
            term.generator = operand(3);
            term.right = operand(4);
            desc_.kernels[kernel].push_back(term);
        } else {
            fail(ParseError::Kind::Syntax, line_no, tokens[0].column,
                 "expected 'atom', 'poly' or 'exp', got '" + head + "'");
        }
        sites_[kernel].push_back(std::move(site));
    }

    void parse_init(const std::vector<Token>& tokens, int line_no) {
        if (desc_.init) {
            fail(ParseError::Kind::Syntax, line_no, 1, "duplicate init line");
        }
        std::map<std::string, Token> values = key_values(tokens, line_no);
        InitSpec init;
        for (const char* key : {"phi", "chi", "h"}) {
            if (!values.count(key)) {
                fail(ParseError::Kind::Syntax, line_no, 1, std::string("init is missing ") + key + "=");
            }
        }
        const Token& phi = values.at("phi");
        init.phi = with_column(line_no, phi.column, [&] { return parse_vector(phi.text); });
        const Token& chi = values.at("chi");
        init.chi = with_column(line_no, chi.column, [&] { return parse_history(chi.text); });
        if (values.count("psi")) {
            const Token& psi = values.at("psi");
            init.psi = with_column(line_no, psi.column, [&] { return parse_history(psi.text); });
        } else {
            init.psi = HistorySpec{Vector(0)};
        }
        const Token& h = values.at("h");
        init.h = with_column(line_no, h.column, [&] { return parse_real(h.text); });
        init_line_ = line_no;
        init_columns_ = {phi.column, chi.column,
                         values.count("psi") ? values.at("psi").column : 1, h.column};
        desc_.init = std::move(init);
    }

    std::map<std::string, Token> key_values(const std::vector<Token>& tokens, int line_no) {
        std::map<std::string, Token> values;
        for (std::size_t i = 1; i < tokens.size(); ++i) {
            const auto eq = tokens[i].text.find('=');
            if (eq == std::string::npos || eq == 0) {
                fail(ParseError::Kind::Syntax, line_no, tokens[i].column, "expected key=value");
            }
            const std::string key = tokens[i].text.substr(0, eq);
            if (values.count(key)) {
                fail(ParseError::Kind::Syntax, line_no, tokens[i].column, "duplicate key " + key);
            }
            values[key] = Token{tokens[i].text.substr(eq + 1), tokens[i].column + static_cast<int>(eq) + 1};
        }
        return values;
    }

    template <typename F>
    auto with_column(int line_no, int column, F&& f) -> decltype(f()) {
        try {
            return f();
        } catch (const TokenError& e) {
            fail(ParseError::Kind::Syntax, line_no, column + e.offset, e.message);
        }
    }

    const Matrix& resolve(const MatrixRef& ref, Location where) const {
        if (ref.name.empty()) {
            return ref.literal;
        }
        for (const auto& named : desc_.matrices) {
            if (named.name == ref.name) {
                return named.value;
            }
        }
        fail(ParseError::Kind::UndefinedMatrix, where.line, where.column,
             "undefined matrix '" + ref.name + "'");
    }

    void expect_shape(const Matrix& value, Index rows, Index cols, Location where,
                      const std::string& what) const {
        if (value.rows() != rows || value.cols() != cols) {
            fail(ParseError::Kind::DimensionMismatch, where.line, where.column,
                 what + " is " + std::to_string(value.rows()) + "x" + std::to_string(value.cols()) +
                     ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
        }
    }

    void validate() const {
        const std::array<std::pair<Index, Index>, 4> shapes = {
            std::pair{desc_.n, desc_.n}, std::pair{desc_.n, desc_.m}, std::pair{desc_.m, desc_.n},
            std::pair{desc_.m, desc_.m}};
        for (int k = 0; k < 4; ++k) {
            const auto [rows, cols] = shapes[k];
            const std::string label = std::string("kernel ") + kKernelNames[k];
            for (std::size_t t = 0; t < desc_.kernels[k].size(); ++t) {
                const TermSite& site = sites_[k][t];
                auto at = [&site](std::size_t token) {
                    return Location{site.line, site.columns.at(token)};
                };
                const KernelTerm& term = desc_.kernels[k][t];
                if (const auto* atom = std::get_if<AtomTerm>(&term)) {
                    if (!(atom->tau >= 0.0) || atom->tau > desc_.r) {
                        fail(ParseError::Kind::SupportOutOfRange, site.line, site.columns[1],
                             "atom location must lie in [0, r]");
                    }
                    expect_shape(resolve(atom->weight, at(2)), rows, cols, at(2), label + " atom");
                } else if (const auto* poly = std::get_if<PolyTerm>(&term)) {
                    check_interval(poly->a, poly->b, at(1));
                    if (poly->coefficients.size() > static_cast<std::size_t>(kMaxPolyDegree + 1)) {
                        fail(ParseError::Kind::Syntax, site.line, site.columns[0],
                             "polynomial degree exceeds " + std::to_string(kMaxPolyDegree));
                    }
                    for (std::size_t i = 0; i < poly->coefficients.size(); ++i) {
                        expect_shape(resolve(poly->coefficients[i], at(2 + i)), rows, cols,
                                     at(2 + i), label + " poly coefficient");
                    }
                } else {
                    const auto& e = std::get<ExpTerm>(term);
                    check_interval(e.a, e.b, at(1));
                    const Matrix& s = resolve(e.generator, at(3));
                    if (s.rows() != s.cols()) {
                        fail(ParseError::Kind::DimensionMismatch, site.line, site.columns[3],
                             "exp generator must be square");
                    }
                    expect_shape(resolve(e.left, at(2)), rows, s.rows(), at(2), label + " exp left");
                    expect_shape(resolve(e.right, at(4)), s.rows(), cols, at(4), label + " exp right");
                }
            }
        }
        if (desc_.init) {
            const InitSpec& init = *desc_.init;
            if (init.phi.size() != desc_.n) {
                fail(ParseError::Kind::DimensionMismatch, init_line_, init_columns_[0],
                     "phi must have n entries");
            }
            if (const auto* v = std::get_if<Vector>(&init.chi.source); v && v->size() != desc_.n) {
                fail(ParseError::Kind::DimensionMismatch, init_line_, init_columns_[1],
                     "chi must have n entries");
            }
            if (const auto* v = std::get_if<Vector>(&init.psi.source); v && v->size() != desc_.m) {
                fail(ParseError::Kind::DimensionMismatch, init_line_, init_columns_[2],
                     "psi must have m entries");
            }
            if (!(init.h > 0.0)) {
                fail(ParseError::Kind::Syntax, init_line_, init_columns_[3], "h must be positive");
            }
            const double ratio = desc_.r / init.h;
            if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
                fail(ParseError::Kind::Syntax, init_line_, init_columns_[3], "h must divide r");
            }
        }
    }

    void check_interval(double a, double b, Location where) const {
        if (!(a >= 0.0) || !(b > a) || b > desc_.r) {
            fail(ParseError::Kind::SupportOutOfRange, where.line, where.column,
                 "density interval must satisfy 0 <= a < b <= r");
        }
    }

    struct TermSite {
        int line = 0;
        int column = 0;
        std::vector<int> columns;
    };

    std::string_view text_;
    SystemDescription desc_;
    bool saw_system_ = false;
    std::array<bool, 4> seen_kernel_{};
    std::array<std::vector<TermSite>, 4> sites_;
    int init_line_ = 0;
    std::array<int, 4> init_columns_{};
};

std::string format_operand(const MatrixRef& ref) {
    return ref.name.empty() ? format_matrix(ref.literal) : ref.name;
}

std::string format_history(const HistorySpec& spec) {
    if (const auto* v = std::get_if<Vector>(&spec.source)) {
        return format_vector(*v);
    }
    return std::get<std::string>(spec.source);
}

bool same(const Matrix& x, const Matrix& y) {
    return x.rows() == y.rows() && x.cols() == y.cols() && x == y;
}

std::vector<Vector> read_samples(const std::filesystem::path& path, Index dim) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(ParseError::Kind::Io, 0, 0, "cannot open samples file " + path.string());
    }
    std::vector<Vector> samples;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        std::string cleaned(line);
        std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
        if (trim(cleaned).empty()) {
            continue;
        }
        std::vector<Complex> values;
        try {
            for (const auto& token : tokenize(cleaned)) {
                values.push_back(parse_complex(token.text));
            }
        } catch (const TokenError& e) {
            throw ParseError(ParseError::Kind::Syntax, line_no, 1 + e.offset,
                             path.string() + ": " + e.message);
        }
        if (static_cast<Index>(values.size()) != dim) {
            throw ParseError(ParseError::Kind::DimensionMismatch, line_no, 1,
                             path.string() + ": sample has " + std::to_string(values.size()) +
                                 " entries, expected " + std::to_string(dim));
        }
        samples.push_back(Eigen::Map<Vector>(values.data(), dim));
    }
    return samples;
}

std::vector<Vector> history(const HistorySpec& spec, const std::filesystem::path& base_dir,
                            Index dim, Index steps) {
    if (const auto* v = std::get_if<Vector>(&spec.source)) {
        if (v->size() == 0 && dim > 0) {
            throw DimensionMismatch("missing history");
        }
        return std::vector<Vector>(steps + 1, v->size() == 0 ? Vector::Zero(dim) : *v);
    }
    std::filesystem::path path = std::get<std::string>(spec.source);
    if (path.is_relative()) {
        path = base_dir / path;
    }
    auto samples = read_samples(path, dim);
    if (static_cast<Index>(samples.size()) != steps + 1) {
        throw ParseError(ParseError::Kind::DimensionMismatch, 0, 0,
                         path.string() + ": expected " + std::to_string(steps + 1) +
                             " samples (r/h + 1), found " + std::to_string(samples.size()));
    }
    return samples;
}

}  // namespace

ParseError::ParseError(Kind kind, int line, int column, const std::string& message)
    : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + to_string(kind) + ": " +
            message),
      kind(kind), line(line), column(column), detail(message) {}

const char* to_string(ParseError::Kind kind) {
    switch (kind) {
        case ParseError::Kind::Syntax:
            return "SyntaxError";
        case ParseError::Kind::UndefinedMatrix:
            return "UndefinedMatrix";
        case ParseError::Kind::DimensionMismatch:
            return "DimensionMismatch";
        case ParseError::Kind::SupportOutOfRange:
            return "SupportOutOfRange";
        case ParseError::Kind::Io:
            return "IoError";
    }
    return "?";
}

bool operator==(const MatrixRef& p, const MatrixRef& q) {
    return p.name == q.name && same(p.literal, q.literal);
}

bool operator==(const HistorySpec& p, const HistorySpec& q) {
    if (p.source.index() != q.source.index()) {
        return false;
    }
    if (const auto* v = std::get_if<Vector>(&p.source)) {
        const auto& w = std::get<Vector>(q.source);
        return v->size() == w.size() && *v == w;
    }
    return std::get<std::string>(p.source) == std::get<std::string>(q.source);
}

bool operator==(const InitSpec& p, const InitSpec& q) {
    return p.phi.size() == q.phi.size() && p.phi == q.phi && p.chi == q.chi && p.psi == q.psi &&
           p.h == q.h;
}

bool operator==(const NamedMatrix& p, const NamedMatrix& q) {
    return p.name == q.name && same(p.value, q.value);
}

Complex parse_complex(std::string_view token) {
    if (token.empty()) {
        throw TokenError{"expected a number", 0};
    }
    if (token.back() != 'i') {
        return {parse_real(token), 0.0};
    }
    const std::string_view body = token.substr(0, token.size() - 1);
    std::size_t split = std::string_view::npos;
    for (std::size_t i = body.size(); i-- > 1;) {
        if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    auto imaginary = [](std::string_view s) {
        if (s.empty() || s == "+") {
            return 1.0;
        }
        if (s == "-") {
            return -1.0;
        }
        return parse_real(s);
    };
    if (split == std::string_view::npos) {
        return {0.0, imaginary(body)};
    }
    return {parse_real(body.substr(0, split)), imaginary(body.substr(split))};
}

Matrix parse_matrix(std::string_view token) {
    const std::string s = strip_spaces(token);
    if (s.empty()) {
        throw TokenError{"expected a matrix", 0};
    }
    if (s.front() != '[') {
        Matrix scalar(1, 1);
        scalar(0, 0) = parse_complex(s);
        return scalar;
    }
    if (s.size() < 4 || s[1] != '[' || s.back() != ']' || s[s.size() - 2] != ']') {
        throw TokenError{"expected a matrix literal [[a,b],[c,d]]", 0};
    }
    const auto rows = split_top_level(std::string_view(s).substr(1, s.size() - 2), ',');
    std::vector<std::vector<Complex>> values;
    for (const auto& row : rows) {
        if (row.size() < 2 || row.front() != '[' || row.back() != ']') {
            throw TokenError{"malformed matrix row '" + row + "'", 0};
        }
        std::vector<Complex> entries;
        for (const auto& entry : split_top_level(std::string_view(row).substr(1, row.size() - 2), ',')) {
            entries.push_back(parse_complex(entry));
        }
        if (!values.empty() && entries.size() != values.front().size()) {
            throw TokenError{"matrix rows have different lengths", 0};
        }
        values.push_back(std::move(entries));
    }
    Matrix out(static_cast<Index>(values.size()), static_cast<Index>(values.front().size()));
    for (Index i = 0; i < out.rows(); ++i) {
        for (Index j = 0; j < out.cols(); ++j) {
            out(i, j) = values[i][j];
        }
    }
    return out;
}

Vector parse_vector(std::string_view token) {
    const std::string s = strip_spaces(token);
    if (s.size() < 2 || s.front() != '[' || s.back() != ']') {
        throw TokenError{"expected a vector [a,b,...]", 0};
    }
    const std::string_view body = std::string_view(s).substr(1, s.size() - 2);
    if (body.empty()) {
        return Vector(0);
    }
    const auto parts = split_top_level(body, ',');
    Vector out(static_cast<Index>(parts.size()));
    for (std::size_t i = 0; i < parts.size(); ++i) {
        out(static_cast<Index>(i)) = parse_complex(parts[i]);
    }
    return out;
}

std::string format_number(double value) {
    if (value == 0.0) {
        return "0";
    }
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

std::string format_complex(Complex value) {
    if (value.imag() == 0.0) {
        return format_number(value.real());
    }
    const std::string imag = format_number(value.imag()) + "i";
    if (value.real() == 0.0) {
        return imag;
    }
    return format_number(value.real()) + (value.imag() < 0.0 ? "" : "+") + imag;
}

std::string format_matrix(const Matrix& value) {
    std::string out = "[";
    for (Index i = 0; i < value.rows(); ++i) {
        out += i ? ",[" : "[";
        for (Index j = 0; j < value.cols(); ++j) {
            out += (j ? "," : "") + format_complex(value(i, j));
        }
        out += "]";
    }
    return out + "]";
}

std::string format_vector(const Vector& value) {
    std::string out = "[";
    for (Index i = 0; i < value.size(); ++i) {
        out += (i ? "," : "") + format_complex(value(i));
    }
    return out + "]";
}

SystemDescription parse(std::string_view text) { return Parser(text).run(); }

SystemDescription parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(ParseError::Kind::Io, 0, 0, "cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

std::string emit(const SystemDescription& d) {
    std::ostringstream out;
    out << "system n=" << d.n << " m=" << d.m << " r=" << format_number(d.r) << "\n";
    for (const auto& named : d.matrices) {
        out << "matrix " << named.name << " = " << format_matrix(named.value) << "\n";
    }
    for (int k = 0; k < 4; ++k) {
        if (d.kernels[k].empty()) {
            continue;
        }
        out << "kernel " << kKernelNames[k] << ":\n";
        for (const auto& term : d.kernels[k]) {
            if (const auto* atom = std::get_if<AtomTerm>(&term)) {
                out << "  atom " << format_number(atom->tau) << " " << format_operand(atom->weight);
            } else if (const auto* poly = std::get_if<PolyTerm>(&term)) {
                out << "  poly [" << format_number(poly->a) << "," << format_number(poly->b) << "]";
                for (const auto& c : poly->coefficients) {
                    out << " " << format_operand(c);
                }
            } else {
                const auto& e = std::get<ExpTerm>(term);
                out << "  exp [" << format_number(e.a) << "," << format_number(e.b) << "] "
                    << format_operand(e.left) << " " << format_operand(e.generator) << " "
                    << format_operand(e.right);
            }
            out << "\n";
        }
    }
    if (d.init) {
        out << "init phi=" << format_vector(d.init->phi) << " chi=" << format_history(d.init->chi)
            << " psi=" << format_history(d.init->psi) << " h=" << format_number(d.init->h) << "\n";
    }
    return out.str();
}

DdaeSystem build_system(const SystemDescription& d) {
    std::map<std::string, const Matrix*> names;
    for (const auto& named : d.matrices) {
        names[named.name] = &named.value;
    }
    auto resolve = [&names](const MatrixRef& ref) -> const Matrix& {
        if (ref.name.empty()) {
            return ref.literal;
        }
        const auto it = names.find(ref.name);
        if (it == names.end()) {
            throw ParseError(ParseError::Kind::UndefinedMatrix, 0, 0,
                             "undefined matrix '" + ref.name + "'");
        }
        return *it->second;
    };
    const std::array<std::pair<Index, Index>, 4> shapes = {
        std::pair{d.n, d.n}, std::pair{d.n, d.m}, std::pair{d.m, d.n}, std::pair{d.m, d.m}};
    std::array<DelayKernel, 4> kernels;
    for (int k = 0; k < 4; ++k) {
        DelayKernel kernel(shapes[k].first, shapes[k].second, d.r);
        for (const auto& term : d.kernels[k]) {
            if (const auto* atom = std::get_if<AtomTerm>(&term)) {
                kernel.add_atom(atom->tau, resolve(atom->weight));
            } else if (const auto* poly = std::get_if<PolyTerm>(&term)) {
                PolyDensity density;
                for (const auto& c : poly->coefficients) {
                    density.coefficients.push_back(resolve(c));
                }
                kernel.add_piece(DensityPiece{poly->a, poly->b, std::move(density)});
            } else {
                const auto& e = std::get<ExpTerm>(term);
                kernel.add_piece(DensityPiece{
                    e.a, e.b, ExpDensity{resolve(e.left), resolve(e.generator), resolve(e.right)}});
            }
        }
        kernels[k] = std::move(kernel);
    }
    return make_system(d.n, d.m, d.r, kernels[0], kernels[1], kernels[2], kernels[3]);
}

InitialState build_initial_state(const SystemDescription& d, const std::filesystem::path& base_dir,
                                 std::optional<double> h) {
    if (!d.init) {
        throw Error("the system description has no init block");
    }
    InitialState init;
    init.phi = d.init->phi;
    init.h = h.value_or(d.init->h);
    const Index steps = init.memory_steps(d.r);
    init.chi = history(d.init->chi, base_dir, d.n, steps);
    init.psi = history(d.init->psi, base_dir, d.m, steps);
    return init;
}

SystemDescription describe(const DdaeSystem& sys) {
    SystemDescription d;
    d.n = sys.n;
    d.m = sys.m;
    d.r = sys.r;
    const std::array<const DelayKernel*, 4> kernels = {&sys.a, &sys.b, &sys.c, &sys.d};
    for (int k = 0; k < 4; ++k) {
        for (const auto& at : kernels[k]->atoms()) {
            d.kernels[k].push_back(AtomTerm{at.location, MatrixRef{"", at.weight}});
        }
        for (const auto& piece : kernels[k]->pieces()) {
            if (const auto* poly = std::get_if<PolyDensity>(&piece.shape)) {
                PolyTerm term{piece.a, piece.b, {}};
                for (const auto& c : poly->coefficients) {
                    term.coefficients.push_back(MatrixRef{"", c});
                }
                d.kernels[k].push_back(term);
            } else {
                const auto& e = std::get<ExpDensity>(piece.shape);
                d.kernels[k].push_back(ExpTerm{piece.a, piece.b, MatrixRef{"", e.left},
                                               MatrixRef{"", e.generator}, MatrixRef{"", e.right}});
            }
        }
    }
    return d;
}

}  // namespace ddae::dsl
