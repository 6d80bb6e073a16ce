#pragma once

#include "simplel/spectral_problem.hpp"

#include <iosfwd>
#include <string>

namespace simplel
{

/// Columnar text: a header line `# out_of_range_norm <value>`, a column line,
/// then one `i sigma xdag ydata` row per index, all at 17 significant digits.
void write_problem(std::ostream& out, const SpectralProblem<double>& problem);
SpectralProblem<double> read_problem(std::istream& in);

void save_problem(const std::string& path, const SpectralProblem<double>& problem);
SpectralProblem<double> load_problem(const std::string& path);

/// Shortest round-trip decimal text for a double (17 significant digits).
std::string format_double(double value);

} // namespace simplel
