#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace simplel
{

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using VectorXd = Vector<double>;
using MatrixXd = Matrix<double>;

/// Invalid argument or configuration (bad exponent, empty grid, malformed spec string).
class ParameterError : public std::invalid_argument
{
public:
    explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical routine failed to produce a usable result.
class NumericalError : public std::runtime_error
{
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// A rule curve had no defined value to select from.
class SelectionError : public std::runtime_error
{
public:
    explicit SelectionError(const std::string& what) : std::runtime_error(what) {}
};

template <typename Scalar>
Scalar relative_difference(Scalar a, Scalar b)
{
    using std::abs;
    using std::max;
    const Scalar scale = max(abs(a), abs(b));
    return scale == Scalar(0) ? Scalar(0) : abs(a - b) / scale;
}

} // namespace simplel
