#include "frns/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "frns/specfun.hpp"

namespace frns {

namespace {
constexpr std::size_t max_total_points = std::size_t{1} << 22;
}

Grid::Grid(int n_dim, std::size_t points_per_dim, double half_length)
    : n_dim_(n_dim), n_(points_per_dim), half_length_(half_length)
{
    if (n_dim != 1 && n_dim != 2)
        throw ParameterError("grid dimension must be 1 or 2");
    if (points_per_dim < 32 || (points_per_dim & (points_per_dim - 1)) != 0)
        throw ParameterError("grid points_per_dim must be a power of two >= 32");
    if (!(half_length > 0.0) || !std::isfinite(half_length))
        throw ParameterError("grid half_length must be positive");
    if (total_points() > max_total_points) {
        std::ostringstream msg;
        msg << "grid has " << total_points() << " points, above the cap of " << max_total_points;
        throw ParameterError(msg.str());
    }
}

std::size_t Grid::total_points() const
{
    return n_dim_ == 1 ? n_ : n_ * n_;
}

double Grid::cell_volume() const
{
    return std::pow(spacing(), n_dim_);
}

Point Grid::point(std::size_t flat) const
{
    if (n_dim_ == 1)
        return {coordinate(flat), 0.0};
    return {coordinate(flat / n_), coordinate(flat % n_)};
}

std::size_t Grid::flat_index(std::size_t i, std::size_t j) const
{
    return n_dim_ == 1 ? i : i * n_ + j;
}

Field::Field(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v))
{
    if (values.size() != grid.total_points())
        throw ParameterError("field length does not match grid");
}

void Field::check_finite() const
{
    if (values.size() != grid.total_points())
        throw ParameterError("field length does not match grid");
    for (double v : values)
        if (!std::isfinite(v))
            throw NumericalError("field contains non-finite values");
}

double inner_product(const Field& u, const Field& v)
{
    if (u.grid != v.grid)
        throw ParameterError("inner_product: grid mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        acc += u[i] * v[i];
    return acc * u.grid.cell_volume();
}

double l2_norm(const Field& u)
{
    return std::sqrt(inner_product(u, u));
}

double max_abs(const Field& u)
{
    double m = 0.0;
    for (double v : u.values)
        m = std::max(m, std::abs(v));
    return m;
}

double relative_l2_error(const Field& approx, const Field& exact)
{
    if (approx.grid != exact.grid)
        throw ParameterError("relative_l2_error: grid mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < exact.size(); ++i) {
        const double d = approx[i] - exact[i];
        num += d * d;
        den += exact[i] * exact[i];
    }
    if (den == 0.0)
        return std::sqrt(num);
    return std::sqrt(num / den);
}

} // namespace frns
