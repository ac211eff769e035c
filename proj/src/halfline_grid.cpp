#include "susyeta/halfline_grid.hpp"

#include <cmath>
#include <string>

#include "susyeta/errors.hpp"

namespace susyeta {

HalfLineGrid::HalfLineGrid(double x_max, std::size_t n) {
    if (n < 16) throw GridTooSmall("need n >= 16, got " + std::to_string(n));
    if (n % 2 == 0) ++n;
    build(x_max, n);
}

HalfLineGrid HalfLineGrid::exact(double x_max, std::size_t n) {
    if (n < 2) throw GridTooSmall("need n >= 2, got " + std::to_string(n));
    HalfLineGrid g;
    g.build(x_max, n);
    return g;
}

void HalfLineGrid::build(double x_max, std::size_t n) {
    if (!(x_max > 0.0) || !std::isfinite(x_max))
        throw InvalidParams("x_max must be positive and finite");
    auto d = std::make_shared<Data>();
    d->x_max = x_max;
    d->h = x_max / double(n - 1);
    d->nodes.resize(n);
    for (std::size_t j = 0; j < n; ++j) d->nodes[j] = double(j) * d->h;
    d->nodes[n - 1] = x_max;

    const double h = d->h;
    Eigen::VectorXd w = Eigen::VectorXd::Zero(Eigen::Index(n));
    if (n == 2) {
        w << h / 2, h / 2;
    } else {
        // Simpson over an odd-length prefix, 3/8 rule over the last four nodes
        // when n is even.
        std::size_t simpson_end = (n % 2 == 1) ? n - 1 : n - 4;
        for (std::size_t j = 0; j + 2 <= simpson_end; j += 2) {
            w[Eigen::Index(j)] += h / 3;
            w[Eigen::Index(j + 1)] += 4 * h / 3;
            w[Eigen::Index(j + 2)] += h / 3;
        }
        if (n % 2 == 0) {
            const double c = 3 * h / 8;
            w[Eigen::Index(n - 4)] += c;
            w[Eigen::Index(n - 3)] += 3 * c;
            w[Eigen::Index(n - 2)] += 3 * c;
            w[Eigen::Index(n - 1)] += c;
        }
    }
    d->weights = std::move(w);
    d_ = std::move(d);
}

GridFunction::GridFunction(HalfLineGrid g, Eigen::VectorXcd v)
    : grid(std::move(g)), values(std::move(v)) {
    if (std::size_t(values.size()) != grid.n())
        throw GridMismatch("sample count " + std::to_string(values.size()) +
                           " != grid size " + std::to_string(grid.n()));
    for (Eigen::Index j = 0; j < values.size(); ++j)
        if (!std::isfinite(values[j].real()) || !std::isfinite(values[j].imag()))
            throw NonFiniteSample("non-finite value at x = " +
                                  std::to_string(grid.node(std::size_t(j))));
}

GridFunction sample(const std::function<cplx(double)>& f, const HalfLineGrid& grid) {
    Eigen::VectorXcd v(Eigen::Index(grid.n()));
    for (std::size_t j = 0; j < grid.n(); ++j) v[Eigen::Index(j)] = f(grid.node(j));
    return GridFunction(grid, std::move(v));
}

GridFunction sample(const Fn& f, const HalfLineGrid& grid) {
    return sample_derivative(f, 0, grid);
}

GridFunction sample_derivative(const Fn& f, std::size_t m, const HalfLineGrid& grid) {
    Eigen::VectorXcd v(Eigen::Index(grid.n()));
    for (std::size_t j = 0; j < grid.n(); ++j) v[Eigen::Index(j)] = f(grid.node(j)).deriv(m);
    return GridFunction(grid, std::move(v));
}

cplx inner_product(const GridFunction& f, const GridFunction& g) {
    if (f.grid != g.grid) throw GridMismatch("inner product across different grids");
    const auto& w = f.grid.weights();
    cplx s = 0.0;
    for (Eigen::Index j = 0; j < f.values.size(); ++j) s += std::conj(f.values[j]) * g.values[j] * w[j];
    return s;
}

double norm(const GridFunction& f) { return std::sqrt(std::max(0.0, inner_product(f, f).real())); }

std::vector<double> fd_weights(double x0, const std::vector<double>& xs, int m) {
    const int n = int(xs.size());
    // c[i][k]: weight of node i for derivative k
    std::vector<std::vector<double>> c(std::size_t(n), std::vector<double>(std::size_t(m + 1), 0.0));
    double c1 = 1.0, c4 = xs[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = xs[std::size_t(i)] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = xs[std::size_t(i)] - xs[std::size_t(j)];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[std::size_t(i)][std::size_t(k)] =
                        c1 * (k * c[std::size_t(i - 1)][std::size_t(k - 1)] - c5 * c[std::size_t(i - 1)][std::size_t(k)]) / c2;
                c[std::size_t(i)][0] = -c1 * c5 * c[std::size_t(i - 1)][0] / c2;
            }
            for (int k = mn; k >= 1; --k)
                c[std::size_t(j)][std::size_t(k)] =
                    (c4 * c[std::size_t(j)][std::size_t(k)] - k * c[std::size_t(j)][std::size_t(k - 1)]) / c3;
            c[std::size_t(j)][0] = c4 * c[std::size_t(j)][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[std::size_t(i)] = c[std::size_t(i)][std::size_t(m)];
    return out;
}

GridFunction derivative(const GridFunction& f, int order) {
    if (order != 1 && order != 2) throw InvalidParams("derivative order must be 1 or 2");
    const std::size_t n = f.grid.n();
    if (n < 7) throw GridTooSmall("derivative needs n >= 7, got " + std::to_string(n));
    const double h = f.grid.h();
    const std::size_t width = order == 1 ? 5 : 7;

    // stencils in units of h, built once
    auto stencil = [&](std::size_t offset_from_start) {
        std::vector<double> xs(width);
        for (std::size_t i = 0; i < width; ++i) xs[i] = double(i);
        return fd_weights(double(offset_from_start), xs, order);
    };
    const std::vector<double> central = fd_weights(0.0, {-2, -1, 0, 1, 2}, order);
    const double scale = order == 1 ? 1.0 / h : 1.0 / (h * h);

    Eigen::VectorXcd out(f.values.size());
    for (std::size_t j = 0; j < n; ++j) {
        cplx s = 0.0;
        if (j >= 2 && j + 2 < n) {
            for (std::size_t i = 0; i < 5; ++i) s += central[i] * f.values[Eigen::Index(j + i - 2)];
        } else if (j < 2) {
            const auto w = stencil(j);
            for (std::size_t i = 0; i < width; ++i) s += w[i] * f.values[Eigen::Index(i)];
        } else {
            // mirror: nodes n-width .. n-1
            const std::size_t start = n - width;
            const auto w = stencil(j - start);
            for (std::size_t i = 0; i < width; ++i) s += w[i] * f.values[Eigen::Index(start + i)];
        }
        out[Eigen::Index(j)] = s * scale;
    }
    return GridFunction(f.grid, std::move(out));
}

}  // namespace susyeta
