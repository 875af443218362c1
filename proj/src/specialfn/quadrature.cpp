#include "clustertet/quadrature.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "clustertet/error.hpp"

namespace clustertet {
namespace {

constexpr int kOrder = 16;

struct Rule {
    std::array<double, kOrder> x{};
    std::array<double, kOrder> w{};
};

// Nodes and weights on [-1, 1] by Newton iteration on P_16.
Rule make_rule()
{
    Rule r;
    const double pi = std::acos(-1.0);
    for (int i = 0; i < kOrder; ++i) {
        double x = std::cos(pi * (i + 0.75) / (kOrder + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int n = 2; n <= kOrder; ++n) {
                const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
                p0 = p1;
                p1 = p2;
            }
            dp = kOrder * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        r.x[i] = x;
        r.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

const Rule& rule()
{
    static const Rule r = make_rule();
    return r;
}

struct Panel {
    double a, b;
    cplx whole;
    cplx left;
    cplx right;
    double error;
    cplx halves() const { return left + right; }
    bool operator<(const Panel& o) const { return error < o.error; }
};

class Integrator {
public:
    Integrator(const std::function<cplx(double)>& f, std::size_t max_nodes) : f_(f), max_nodes_(max_nodes) {}

    cplx gauss(double a, double b)
    {
        if (nodes_ + kOrder > max_nodes_)
            throw Error(ErrorCode::QuadratureNotConverged,
                        "node budget of " + std::to_string(max_nodes_) + " evaluations exhausted");
        const Rule& r = rule();
        const double c = 0.5 * (a + b), h = 0.5 * (b - a);
        cplx sum = 0.0;
        for (int i = 0; i < kOrder; ++i) sum += r.w[i] * f_(c + h * r.x[i]);
        nodes_ += kOrder;
        return sum * h;
    }

    Panel panel(double a, double b, cplx whole)
    {
        const double m = 0.5 * (a + b);
        const cplx left = gauss(a, m);
        const cplx right = gauss(m, b);
        return Panel{a, b, whole, left, right, std::abs(left + right - whole)};
    }

    std::size_t nodes() const { return nodes_; }

private:
    const std::function<cplx(double)>& f_;
    std::size_t max_nodes_;
    std::size_t nodes_ = 0;
};

}  // namespace

QuadratureResult integrate_adaptive(const std::function<cplx(double)>& f, double a, double b, double abs_tol,
                                    std::size_t max_nodes, std::size_t initial_panels)
{
    if (!(b > a) || initial_panels == 0) throw Error(ErrorCode::DomainViolation, "empty integration interval");
    Integrator in(f, max_nodes);
    std::priority_queue<Panel> queue;
    const double width = (b - a) / static_cast<double>(initial_panels);
    for (std::size_t i = 0; i < initial_panels; ++i) {
        const double pa = a + width * static_cast<double>(i);
        const double pb = (i + 1 == initial_panels) ? b : pa + width;
        queue.push(in.panel(pa, pb, in.gauss(pa, pb)));
    }
    auto total_error = [&] {
        double e = 0.0;
        auto copy = queue;
        while (!copy.empty()) {
            e += copy.top().error;
            copy.pop();
        }
        return e;
    };
    double err = total_error();
    while (err > abs_tol) {
        Panel worst = queue.top();
        queue.pop();
        const double m = 0.5 * (worst.a + worst.b);
        Panel left = in.panel(worst.a, m, worst.left);
        Panel right = in.panel(m, worst.b, worst.right);
        err += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        // Guards against drift in the running sum.
        if (err <= abs_tol) err = total_error();
    }
    QuadratureResult out;
    out.error_estimate = err;
    while (!queue.empty()) {
        out.value += queue.top().halves();
        queue.pop();
    }
    out.nodes = in.nodes();
    return out;
}

}  // namespace clustertet
