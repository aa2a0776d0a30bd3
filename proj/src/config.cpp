#include "slgreen/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>
#include <vector>

namespace slgreen {

namespace {

struct Document {
    // section -> key -> (value text, line number)
    std::map<std::string, std::map<std::string, std::pair<std::string, int>>> sections;
};

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

Document lex(const std::string& text) {
    Document doc;
    std::istringstream in(text);
    std::string raw;
    std::string section;  // "" = top level
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const size_t hash = raw.find('#');
        std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '[') {
            require(line.back() == ']', errc::syntax_error,
                    "line " + std::to_string(line_no) + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            require(!section.empty(), errc::syntax_error,
                    "line " + std::to_string(line_no) + ": empty section name");
            continue;
        }
        const size_t eq = line.find('=');
        require(eq != std::string::npos, errc::syntax_error,
                "line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        require(!key.empty(), errc::syntax_error,
                "line " + std::to_string(line_no) + ": empty key");
        require(!value.empty(), errc::syntax_error,
                "line " + std::to_string(line_no) + ": empty value for key '" + key + "'");
        auto [it, inserted] = doc.sections[section].emplace(key, std::make_pair(value, line_no));
        require(inserted, errc::syntax_error, "line " + std::to_string(line_no) +
                                                  ": duplicate key '" + key + "' (first at line " +
                                                  std::to_string(it->second.second) + ")");
    }
    return doc;
}

double parse_number(const std::string& token, int line_no) {
    const char* begin = token.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    require(end == begin + token.size() && token.size() > 0, errc::syntax_error,
            "line " + std::to_string(line_no) + ": '" + token + "' is not a decimal literal");
    return v;
}

std::vector<double> parse_numbers(const std::string& value, int line_no) {
    std::vector<double> out;
    std::istringstream in(value);
    std::string token;
    while (in >> token) out.push_back(parse_number(token, line_no));
    require(!out.empty(), errc::syntax_error,
            "line " + std::to_string(line_no) + ": empty coefficient list");
    return out;
}

const std::pair<std::string, int>& need(const Document& doc, const std::string& section,
                                        const std::string& key) {
    auto sec = doc.sections.find(section);
    require(sec != doc.sections.end(), errc::missing_key,
            "missing section [" + section + "]");
    auto it = sec->second.find(key);
    require(it != sec->second.end(), errc::missing_key,
            "missing key '" + key + "' in section [" + section + "]");
    return it->second;
}

double need_number(const Document& doc, const std::string& section, const std::string& key) {
    const auto& [value, line] = need(doc, section, key);
    return parse_number(value, line);
}

void reject_unknown(const Document& doc,
                    const std::map<std::string, std::vector<std::string>>& schema) {
    for (const auto& [section, keys] : doc.sections) {
        auto it = schema.find(section);
        require(it != schema.end(), errc::syntax_error, "unknown section [" + section + "]");
        for (const auto& [key, value] : keys) {
            bool known = false;
            for (const auto& k : it->second) known = known || k == key;
            require(known, errc::syntax_error,
                    "line " + std::to_string(value.second) + ": unknown key '" + key +
                        "' in section [" + section + "]");
        }
    }
}

} // namespace

Problem parse_config(const std::string& text) {
    const Document doc = lex(text);
    reject_unknown(doc, {{"", {"mode"}},
                         {"interval", {"a", "c", "b"}},
                         {"potential", {"left", "right"}},
                         {"boundary.left", {"alpha10", "alpha11"}},
                         {"boundary.right", {"alpha20", "alpha21", "alpha20p", "alpha21p"}},
                         {"transmission", {"row1", "row2"}}});

    Problem p;
    p.interval.a = need_number(doc, "interval", "a");
    p.interval.c = need_number(doc, "interval", "c");
    p.interval.b = need_number(doc, "interval", "b");
    {
        const auto& [lv, ll] = need(doc, "potential", "left");
        p.potential.left_coeffs = parse_numbers(lv, ll);
        const auto& [rv, rl] = need(doc, "potential", "right");
        p.potential.right_coeffs = parse_numbers(rv, rl);
    }
    p.left.alpha10 = need_number(doc, "boundary.left", "alpha10");
    p.left.alpha11 = need_number(doc, "boundary.left", "alpha11");
    p.right.alpha20 = need_number(doc, "boundary.right", "alpha20");
    p.right.alpha21 = need_number(doc, "boundary.right", "alpha21");
    p.right.alpha20p = need_number(doc, "boundary.right", "alpha20p");
    p.right.alpha21p = need_number(doc, "boundary.right", "alpha21p");
    for (int which = 0; which < 2; ++which) {
        const auto& [value, line] = need(doc, "transmission", which == 0 ? "row1" : "row2");
        const std::vector<double> vals = parse_numbers(value, line);
        require(vals.size() == 4, errc::syntax_error,
                "line " + std::to_string(line) + ": transmission rows need exactly 4 entries");
        auto& row = which == 0 ? p.transmission.row1 : p.transmission.row2;
        std::copy(vals.begin(), vals.end(), row.begin());
    }

    ValidateMode mode = ValidateMode::full;
    if (auto top = doc.sections.find(""); top != doc.sections.end()) {
        if (auto it = top->second.find("mode"); it != top->second.end()) {
            const std::string& m = it->second.first;
            if (m == "full")
                mode = ValidateMode::full;
            else if (m == "spectrum_only")
                mode = ValidateMode::spectrum_only;
            else
                fail(errc::syntax_error, "line " + std::to_string(it->second.second) +
                                             ": mode must be 'full' or 'spectrum_only'");
        }
    }
    return validate_problem(std::move(p), mode);
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_complex(const std::complex<double>& z) {
    const double im = z.imag();
    return fmt_double(z.real()) + (im < 0.0 || (im == 0.0 && std::signbit(im)) ? "-" : "+") +
           fmt_double(std::fabs(im)) + "i";
}

std::complex<double> parse_complex(const std::string& token) {
    require(!token.empty(), errc::syntax_error, "empty numeric literal");
    if (token.back() != 'i') {
        const char* begin = token.c_str();
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        require(end == begin + token.size(), errc::syntax_error,
                "'" + token + "' is not a numeric literal");
        return {v, 0.0};
    }
    const std::string body = token.substr(0, token.size() - 1);
    // the sign splitting re and im is the last '+'/'-' not preceded by e/E
    size_t split = std::string::npos;
    for (size_t i = body.size(); i-- > 1;) {
        if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    require(split != std::string::npos, errc::syntax_error,
            "'" + token + "' is not of the form <re>+<im>i");
    auto read = [&](const std::string& s) {
        const char* begin = s.c_str();
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        require(s.size() > 0 && end == begin + s.size(), errc::syntax_error,
                "'" + token + "' is not of the form <re>+<im>i");
        return v;
    };
    const double re = read(body.substr(0, split));
    const double im = read(body.substr(split));  // sign char included
    return {re, im};
}

std::string print_config(const Problem& p) {
    std::ostringstream out;
    out << "mode = " << (p.mode == ValidateMode::full ? "full" : "spectrum_only") << "\n\n";
    out << "[interval]\n";
    out << "a = " << fmt_double(p.interval.a) << "\n";
    out << "c = " << fmt_double(p.interval.c) << "\n";
    out << "b = " << fmt_double(p.interval.b) << "\n\n";
    out << "[potential]\n";
    auto coeff_line = [&](const std::vector<double>& cs) {
        std::string s;
        for (size_t i = 0; i < cs.size(); ++i) s += (i ? " " : "") + fmt_double(cs[i]);
        return s;
    };
    out << "left = " << coeff_line(p.potential.left_coeffs) << "\n";
    out << "right = " << coeff_line(p.potential.right_coeffs) << "\n\n";
    out << "[boundary.left]\n";
    out << "alpha10 = " << fmt_double(p.left.alpha10) << "\n";
    out << "alpha11 = " << fmt_double(p.left.alpha11) << "\n\n";
    out << "[boundary.right]\n";
    out << "alpha20 = " << fmt_double(p.right.alpha20) << "\n";
    out << "alpha21 = " << fmt_double(p.right.alpha21) << "\n";
    out << "alpha20p = " << fmt_double(p.right.alpha20p) << "\n";
    out << "alpha21p = " << fmt_double(p.right.alpha21p) << "\n\n";
    out << "[transmission]\n";
    auto row_line = [&](const std::array<double, 4>& r) {
        std::string s;
        for (size_t i = 0; i < 4; ++i) s += (i ? " " : "") + fmt_double(r[i]);
        return s;
    };
    out << "row1 = " << row_line(p.transmission.row1) << "\n";
    out << "row2 = " << row_line(p.transmission.row2) << "\n";
    return out.str();
}

RhsSpec parse_rhs(const std::string& text) {
    const Document doc = lex(text);
    reject_unknown(doc, {{"", {"f1"}}, {"f.left", {"coeffs"}}, {"f.right", {"coeffs"}}});
    RhsSpec rhs;
    {
        const auto& [lv, ll] = need(doc, "f.left", "coeffs");
        rhs.left = Polynomial(parse_numbers(lv, ll));
        const auto& [rv, rl] = need(doc, "f.right", "coeffs");
        rhs.right = Polynomial(parse_numbers(rv, rl));
    }
    if (auto top = doc.sections.find(""); top != doc.sections.end()) {
        if (auto it = top->second.find("f1"); it != top->second.end())
            rhs.f1 = parse_complex(it->second.first);
    }
    return rhs;
}

} // namespace slgreen
