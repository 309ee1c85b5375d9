#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace frns {

using Point = std::array<double, 2>;

// Uniform periodic lattice on [-L, L)^N, N in {1, 2}.
class Grid {
public:
    Grid() = default;
    Grid(int n_dim, std::size_t points_per_dim, double half_length);

    int n_dim() const { return n_dim_; }
    std::size_t points_per_dim() const { return n_; }
    double half_length() const { return half_length_; }
    double spacing() const { return 2.0 * half_length_ / static_cast<double>(n_); }
    std::size_t total_points() const;
    double cell_volume() const;

    double coordinate(std::size_t i) const { return -half_length_ + spacing() * static_cast<double>(i); }
    // Row-major: the last axis varies fastest.
    Point point(std::size_t flat) const;
    std::size_t flat_index(std::size_t i, std::size_t j = 0) const;

    bool operator==(const Grid& o) const
    {
        return n_dim_ == o.n_dim_ && n_ == o.n_ && half_length_ == o.half_length_;
    }
    bool operator!=(const Grid& o) const { return !(*this == o); }

private:
    int n_dim_ = 1;
    std::size_t n_ = 32;
    double half_length_ = 1.0;
};

struct Field {
    Grid grid;
    std::vector<double> values;

    Field() = default;
    explicit Field(const Grid& g, double fill = 0.0) : grid(g), values(g.total_points(), fill) {}
    Field(const Grid& g, std::vector<double> v);

    std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }

    // Throws if any value is NaN/Inf or the length does not match the grid.
    void check_finite() const;
};

template <class F>
Field sample(const Grid& g, F&& fn)
{
    Field out(g);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = fn(g.point(i));
    return out;
}

double inner_product(const Field& u, const Field& v);
double l2_norm(const Field& u);
double max_abs(const Field& u);
double relative_l2_error(const Field& approx, const Field& exact);

} // namespace frns
