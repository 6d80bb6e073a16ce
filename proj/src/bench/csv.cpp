#include "simplel/bench/csv.hpp"

#include "simplel/problem_io.hpp"

#include <cerrno>
#include <cstdlib>
#include <istream>
#include <ostream>

namespace simplel::bench
{

namespace
{

std::string num(double v)
{
    return format_double(v);
}

double parse_num(const std::string& field, int line)
{
    if (field == "nan" || field == "-nan")
        return std::numeric_limits<double>::quiet_NaN();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(field.c_str(), &end);
    if (field.empty() || end != field.c_str() + field.size())
        throw ParameterError("csv line " + std::to_string(line) + ": bad number '" + field + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& field, int line)
{
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(field.c_str(), &end, 10);
    if (field.empty() || end != field.c_str() + field.size() || errno == ERANGE)
        throw ParameterError("csv line " + std::to_string(line) + ": bad integer '" + field + "'");
    return v;
}

template <typename Row>
std::vector<Row> read_rows(std::istream& in, const char* header, std::size_t columns,
                           Row (*parse)(const std::vector<std::string>&, int))
{
    std::string line;
    if (!std::getline(in, line) || line != header)
        throw ParameterError(std::string("csv: expected header '") + header + "'");
    std::vector<Row> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        const auto f = split_csv_line(line);
        if (f.size() != columns)
            throw ParameterError("csv line " + std::to_string(line_no) + ": expected " + std::to_string(columns) +
                                 " fields");
        rows.push_back(parse(f, line_no));
    }
    return rows;
}

RawRecord parse_raw(const std::vector<std::string>& f, int line)
{
    RawRecord r;
    r.level = parse_num(f[0], line);
    r.seed = parse_u64(f[1], line);
    r.rule = f[2];
    r.alpha_star = parse_num(f[3], line);
    if (f[4] != "0" && f[4] != "1")
        throw ParameterError("csv line " + std::to_string(line) + ": interior must be 0 or 1");
    r.interior = f[4] == "1";
    r.J = parse_num(f[5], line);
    r.selected_error = parse_num(f[6], line);
    r.min_error = parse_num(f[7], line);
    return r;
}

CellSummary parse_cell(const std::vector<std::string>& f, int line)
{
    CellSummary c;
    c.level = parse_num(f[0], line);
    c.seed = parse_u64(f[1], line);
    c.C1 = parse_num(f[2], line);
    c.C2 = parse_num(f[3], line);
    c.D = parse_num(f[4], line);
    c.clamped = static_cast<int>(parse_u64(f[5], line));
    c.bregman_evaluations = static_cast<int>(parse_u64(f[6], line));
    return c;
}

} // namespace

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    if (!out.empty() && !out.back().empty() && out.back().back() == '\r')
        out.back().pop_back();
    return out;
}

void write_raw_csv(std::ostream& out, const std::vector<RawRecord>& records)
{
    out << kRawHeader << "\n";
    for (const auto& r : records) {
        out << num(r.level) << ',' << r.seed << ',' << r.rule << ',' << num(r.alpha_star) << ','
            << (r.interior ? 1 : 0) << ',' << num(r.J) << ',' << num(r.selected_error) << ',' << num(r.min_error)
            << "\n";
    }
}

std::vector<RawRecord> read_raw_csv(std::istream& in)
{
    return read_rows<RawRecord>(in, kRawHeader, 8, &parse_raw);
}

void write_cell_csv(std::ostream& out, const std::vector<CellSummary>& cells)
{
    out << kCellHeader << "\n";
    for (const auto& c : cells) {
        out << num(c.level) << ',' << c.seed << ',' << num(c.C1) << ',' << num(c.C2) << ',' << num(c.D) << ','
            << c.clamped << ',' << c.bregman_evaluations << "\n";
    }
}

std::vector<CellSummary> read_cell_csv(std::istream& in)
{
    return read_rows<CellSummary>(in, kCellHeader, 7, &parse_cell);
}

void write_path_csv(std::ostream& out, const PathCurve<double>& p)
{
    out << "alpha,eta,rho,eta_prime,rho_prime,zeta\n";
    for (Eigen::Index k = 0; k < p.size(); ++k) {
        out << num(p.alpha[k]) << ',' << num(p.eta[k]) << ',' << num(p.rho[k]) << ',' << num(p.eta_prime[k]) << ','
            << num(p.rho_prime[k]) << ',' << num(p.zeta[k]) << "\n";
    }
}

void write_error_csv(std::ostream& out, const ErrorCurve<double>& c)
{
    out << "alpha,stability,approx,total\n";
    for (Eigen::Index k = 0; k < c.alpha.size(); ++k)
        out << num(c.alpha[k]) << ',' << num(c.stability[k]) << ',' << num(c.approx[k]) << ',' << num(c.total[k])
            << "\n";
}

void write_rule_csv(std::ostream& out, const std::vector<RuleCurve<double>>& curves)
{
    out << "alpha,value,rule\n";
    for (const auto& c : curves)
        for (Eigen::Index k = 0; k < c.alpha.size(); ++k)
            out << num(c.alpha[k]) << ',' << num(c.values[k]) << ',' << rule_name(c.rule) << "\n";
}

void write_condition_csv(std::ostream& out, const std::vector<ConditionReport<double>>& reports)
{
    out << "alpha,lhs,rhs,ratio,condition\n";
    for (const auto& r : reports)
        for (Eigen::Index k = 0; k < r.alphas.size(); ++k)
            out << num(r.alphas[k]) << ',' << num(r.lhs[k]) << ',' << num(r.rhs[k]) << ',' << num(r.ratios[k]) << ','
                << condition_name(r.variant) << "\n";
}

} // namespace simplel::bench
