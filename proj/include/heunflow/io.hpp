#pragma once

// Text formats: the spectrum, TBA and match CSVs, density dumps and the
// exact series file. Reals are written with 17 significant digits.

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "heunflow/error.hpp"
#include "heunflow/jacobi_operator.hpp"
#include "heunflow/matching.hpp"
#include "heunflow/ode_spectrum.hpp"
#include "heunflow/series.hpp"
#include "heunflow/tba.hpp"

namespace heunflow {

inline constexpr const char* kSpectrumHeader = "u,m,index,kappa,err_est,method,continuum";
inline constexpr const char* kTbaHeader = "N,MR,c,iterations,residual";
inline constexpr const char* kMatchHeader = "N,MR,u,c,scaled,kappa0,deviation";
inline constexpr const char* kDensityHeader = "xi,density";

inline std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void write_spectrum_csv(std::ostream& os, const std::vector<SpectralResult>& results, bool header = true) {
    if (header) os << kSpectrumHeader << '\n';
    for (const auto& r : results)
        for (std::size_t i = 0; i < r.levels.size(); ++i)
            os << fmt(r.u) << ',' << r.m << ',' << i << ',' << fmt(r.levels[i]) << ',' << fmt(r.err_est[i]) << ','
               << to_string(r.method) << ',' << (r.continuum[i] ? 1 : 0) << '\n';
}

inline void write_tba_csv(std::ostream& os, const FlowCurve& curve) {
    os << kTbaHeader << '\n';
    for (const auto& p : curve.points)
        os << curve.N << ',' << fmt(p.x) << ',' << fmt(p.y) << ',' << p.iterations << ',' << fmt(p.residual) << '\n';
}

inline void write_match_csv(std::ostream& os, const std::vector<MatchRow>& rows) {
    os << kMatchHeader << '\n';
    for (const auto& r : rows)
        os << r.N << ',' << fmt(r.MR) << ',' << fmt(r.u) << ',' << fmt(r.c) << ',' << fmt(r.scaled) << ','
           << fmt(r.kappa0) << ',' << fmt(r.deviation) << '\n';
}

inline void write_density_csv(std::ostream& os, const DensityProfile& d) {
    os << kDensityHeader << '\n';
    for (std::size_t i = 0; i < d.xi.size(); ++i) os << fmt(d.xi[i]) << ',' << fmt(d.values[i]) << '\n';
}

/// `# variable=<v> m=<m> n=<n>`, then `order,numerator,denominator` lines.
inline void write_series(std::ostream& os, const RationalSeries& s) {
    os << "# variable=" << to_string(s.variable) << " m=" << s.m << " n=" << s.n << '\n';
    for (std::size_t k = 0; k < s.coeffs.size(); ++k)
        os << s.min_power + static_cast<int>(k) << ',' << s.coeffs[k].get_num().get_str() << ','
           << s.coeffs[k].get_den().get_str() << '\n';
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

inline std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

/// Parses a headed CSV and checks every row has the header's width.
inline CsvTable read_csv(std::istream& is, const std::string& expected_header = {}) {
    CsvTable t;
    std::string line;
    if (!std::getline(is, line)) throw DomainError("read_csv: empty input");
    if (!expected_header.empty() && line != expected_header)
        throw DomainError("read_csv: header mismatch: '" + line + "'");
    t.header = split_commas(line);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto cells = split_commas(line);
        if (cells.size() != t.header.size()) throw DomainError("read_csv: ragged row: '" + line + "'");
        t.rows.push_back(std::move(cells));
    }
    return t;
}

/// Inverse of write_series. The file does not record the target; the
/// caller supplies it.
inline RationalSeries read_series(std::istream& is, Target target) {
    RationalSeries s;
    s.target = target;
    std::string line;
    if (!std::getline(is, line) || line.rfind("# ", 0) != 0) throw DomainError("read_series: missing header");
    std::istringstream hs(line.substr(2));
    std::string tok;
    bool have_var = false, have_m = false, have_n = false;
    while (hs >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw DomainError("read_series: bad header token '" + tok + "'");
        const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "variable") {
            if (val == "lambda") s.variable = Variable::lambda;
            else if (val == "epsilon") s.variable = Variable::epsilon;
            else throw DomainError("read_series: unknown variable '" + val + "'");
            have_var = true;
        } else if (key == "m") {
            s.m = std::stoi(val);
            have_m = true;
        } else if (key == "n") {
            s.n = std::stoi(val);
            have_n = true;
        }
    }
    if (!(have_var && have_m && have_n)) throw DomainError("read_series: header needs variable, m and n");
    bool first = true;
    int expect = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto cells = split_commas(line);
        if (cells.size() != 3) throw DomainError("read_series: bad line '" + line + "'");
        const int p = std::stoi(cells[0]);
        if (first) {
            s.min_power = p;
            expect = p;
            first = false;
        }
        if (p != expect) throw DomainError("read_series: orders must be consecutive");
        ++expect;
        Rational q{mpz_class(cells[1]), mpz_class(cells[2])};
        q.canonicalize();
        s.coeffs.push_back(q);
    }
    return s;
}

}  // namespace heunflow
