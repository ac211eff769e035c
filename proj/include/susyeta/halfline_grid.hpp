#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <type_traits>
#include <vector>

#include "susyeta/jet.hpp"

namespace susyeta {

// Uniform grid on the truncated half-line [0, X].  Copies share the node and
// weight arrays.
class HalfLineGrid {
public:
    // Rounds n up to odd (Simpson) and refuses n < 16.
    HalfLineGrid(double x_max, std::size_t n);
    // Takes n literally, n >= 2.  Even n falls back to Simpson + 3/8 (or the
    // trapezoid for n = 2).  Meant for tiny sampling checks.
    static HalfLineGrid exact(double x_max, std::size_t n);

    double x_max() const { return d_->x_max; }
    std::size_t n() const { return d_->nodes.size(); }
    double h() const { return d_->h; }
    const std::vector<double>& nodes() const { return d_->nodes; }
    double node(std::size_t j) const { return d_->nodes[j]; }
    // quadrature weights of the discrete L² inner product
    const Eigen::VectorXd& weights() const { return d_->weights; }

    bool operator==(const HalfLineGrid& o) const {
        return d_ == o.d_ || (n() == o.n() && x_max() == o.x_max());
    }
    bool operator!=(const HalfLineGrid& o) const { return !(*this == o); }

private:
    struct Data {
        double x_max = 0.0;
        double h = 0.0;
        std::vector<double> nodes;
        Eigen::VectorXd weights;
    };
    HalfLineGrid() = default;
    void build(double x_max, std::size_t n);
    std::shared_ptr<const Data> d_;
};

struct GridFunction {
    GridFunction(HalfLineGrid g, Eigen::VectorXcd v);

    HalfLineGrid grid;
    Eigen::VectorXcd values;

    cplx operator[](std::size_t j) const { return values[Eigen::Index(j)]; }
    std::size_t size() const { return std::size_t(values.size()); }
};

GridFunction sample(const std::function<cplx(double)>& f, const HalfLineGrid& grid);
GridFunction sample(const Fn& f, const HalfLineGrid& grid);
// Plain lambdas convert to both callables above (Jet converts from cplx), so
// pick by what the callable returns.
template <class F>
    requires std::is_invocable_v<const F&, double>
GridFunction sample(const F& f, const HalfLineGrid& grid) {
    if constexpr (std::is_same_v<std::decay_t<std::invoke_result_t<const F&, double>>, Jet>)
        return sample(Fn(f), grid);
    else
        return sample(std::function<cplx(double)>(f), grid);
}
// m-th derivative of an analytic function at the nodes
GridFunction sample_derivative(const Fn& f, std::size_t m, const HalfLineGrid& grid);

cplx inner_product(const GridFunction& f, const GridFunction& g);
double norm(const GridFunction& f);

// 4th-order central differences inside; one-sided stencils at the two end
// nodes on each side (5 points for order 1, 7 points for order 2).
GridFunction derivative(const GridFunction& f, int order);

// Finite-difference weights for the m-th derivative at x0 from samples at xs
// (Fornberg's recursion).
std::vector<double> fd_weights(double x0, const std::vector<double>& xs, int m);

}  // namespace susyeta
