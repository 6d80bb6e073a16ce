#include "simplel/problem_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace simplel
{

std::string format_double(double value)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void write_problem(std::ostream& out, const SpectralProblem<double>& problem)
{
    out << "# out_of_range_norm " << format_double(problem.out_of_range_norm()) << '\n';
    out << "# i sigma xdag ydata\n";
    for (Eigen::Index i = 0; i < problem.size(); ++i) {
        out << (i + 1) << ' ' << format_double(problem.singular_values()[i]) << ' '
            << format_double(problem.xdag_coeffs()[i]) << ' ' << format_double(problem.ydata_coeffs()[i]) << '\n';
    }
}

SpectralProblem<double> read_problem(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line))
        throw ParameterError("problem file: missing header");
    std::istringstream header(line);
    std::string hash, key;
    double oor = 0.0;
    if (!(header >> hash >> key >> oor) || hash != "#" || key != "out_of_range_norm")
        throw ParameterError("problem file: header must be '# out_of_range_norm <value>'");

    std::vector<double> sigma, xdag, ydata;
    long expected = 1;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream row(line);
        long index = 0;
        double s = 0, x = 0, y = 0;
        if (!(row >> index >> s >> x >> y))
            throw ParameterError("problem file: malformed row '" + line + "'");
        if (index != expected)
            throw ParameterError("problem file: indices must run 1, 2, 3, ...");
        ++expected;
        sigma.push_back(s);
        xdag.push_back(x);
        ydata.push_back(y);
    }
    auto to_vector = [](const std::vector<double>& v) {
        return VectorXd(Eigen::Map<const VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
    };
    return SpectralProblem<double>::from_coefficients(to_vector(sigma), to_vector(xdag), to_vector(ydata), oor);
}

void save_problem(const std::string& path, const SpectralProblem<double>& problem)
{
    std::ofstream out(path);
    if (!out)
        throw ParameterError("cannot open '" + path + "' for writing");
    write_problem(out, problem);
}

SpectralProblem<double> load_problem(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParameterError("cannot open problem file '" + path + "'");
    return read_problem(in);
}

} // namespace simplel
