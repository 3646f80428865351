#include "quadtrap/trap.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace quadtrap {

namespace {

// Solves m x = rhs by Gaussian elimination with partial pivoting.
// Returns false when the matrix is singular to working precision.
bool solve3(const Mat3& m, const Vec3& rhs, Vec3& x) {
    double a[3][4] = {{m(0, 0), m(0, 1), m(0, 2), rhs.x},
                      {m(1, 0), m(1, 1), m(1, 2), rhs.y},
                      {m(2, 0), m(2, 1), m(2, 2), rhs.z}};
    double scale = m.frobenius_norm();
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (std::abs(a[pivot][col]) <= 1e-14 * scale) return false;
        if (pivot != col)
            for (int c = 0; c < 4; ++c) std::swap(a[pivot][c], a[col][c]);
        for (int r = col + 1; r < 3; ++r) {
            double f = a[r][col] / a[col][col];
            for (int c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
        }
    }
    double v[3];
    for (int r = 2; r >= 0; --r) {
        double s = a[r][3];
        for (int c = r + 1; c < 3; ++c) s -= a[r][c] * v[c];
        v[r] = s / a[r][r];
    }
    x = {v[0], v[1], v[2]};
    return true;
}

// Cyclic Jacobi rotations for a symmetric 3x3 matrix. Deterministic;
// converges to machine precision in a handful of sweeps.
void jacobi_eigen3(const Mat3& sym, std::array<double, 3>& values,
                   std::array<Vec3, 3>& vectors) {
    double a[3][3];
    double v[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) a[r][c] = sym(r, c);

    double norm = sym.frobenius_norm();
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = std::sqrt(a[0][1] * a[0][1] + a[0][2] * a[0][2] +
                               a[1][2] * a[1][2]);
        if (off <= 1e-15 * norm || off == 0.0) break;
        static constexpr int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
        for (const auto& pq : pairs) {
            int p = pq[0], q = pq[1];
            if (a[p][q] == 0.0) continue;
            double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
            double t = (theta >= 0.0 ? 1.0 : -1.0) /
                       (std::abs(theta) + std::sqrt(theta * theta + 1.0));
            double c = 1.0 / std::sqrt(t * t + 1.0);
            double s = t * c;
            for (int k = 0; k < 3; ++k) {
                double akp = a[k][p], akq = a[k][q];
                a[k][p] = c * akp - s * akq;
                a[k][q] = s * akp + c * akq;
            }
            for (int k = 0; k < 3; ++k) {
                double apk = a[p][k], aqk = a[q][k];
                a[p][k] = c * apk - s * aqk;
                a[q][k] = s * apk + c * aqk;
            }
            for (int k = 0; k < 3; ++k) {
                double vkp = v[k][p], vkq = v[k][q];
                v[k][p] = c * vkp - s * vkq;
                v[k][q] = s * vkp + c * vkq;
            }
        }
    }
    for (int i = 0; i < 3; ++i) {
        values[i] = a[i][i];
        vectors[i] = {v[0][i], v[1][i], v[2][i]};
    }
}

Vec3 oriented(const Vec3& v) {
    double comps[3] = {v.x, v.y, v.z};
    for (double c : comps) {
        if (std::abs(c) > 1e-12) return c < 0.0 ? -v : v;
    }
    return v;
}

}  // namespace

Vec3 find_zero(const ConductorAssembly& a, const Vec3& guess) {
    if (!guess.finite()) throw InvalidArgumentError("guess must be finite");
    const double tolerance = 1e-13 * characteristic_field(a);

    Vec3 p = guess;
    Vec3 b = assembly_field(a, p);
    double bnorm = b.norm();
    for (int iter = 0; iter < 50; ++iter) {
        if (bnorm < tolerance) return p;

        GradientTensor jac = field_jacobian(a, p);
        Vec3 step;
        if (!solve3(jac.m, -b, step))
            throw DegenerateError("singular Jacobian in zero search");

        // Damped update: halve until |B| decreases, at most 10 times.
        double alpha = 1.0;
        Vec3 p_next, b_next;
        double bn_next;
        for (int halving = 0;; ++halving) {
            p_next = p + alpha * step;
            b_next = assembly_field(a, p_next);
            bn_next = b_next.norm();
            if (bn_next < bnorm || halving >= 10) break;
            alpha *= 0.5;
        }
        p = p_next;
        b = b_next;
        bnorm = bn_next;
    }
    if (bnorm < tolerance) return p;
    throw NoConvergenceError(
        "zero search did not converge in 50 iterations (|B| = " +
            std::to_string(bnorm) + " T)",
        bnorm);
}

TrapReport trap_report(const ConductorAssembly& a, const Vec3& guess) {
    Vec3 zero = find_zero(a, guess);
    GradientTensor grad = field_jacobian(a, zero);

    double norm = grad.m.frobenius_norm();
    if (norm == 0.0) throw DegenerateError("vanishing gradient tensor at the zero");

    Mat3 t = grad.m.transposed();
    double asym = 0.0;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            double d = grad.m(r, c) - t(r, c);
            asym += d * d;
        }
    if (std::sqrt(asym) > 1e-6 * norm)
        throw AsymmetryError("gradient tensor is not symmetric: not a vacuum point");

    Mat3 sym;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) sym(r, c) = 0.5 * (grad.m(r, c) + grad.m(c, r));

    std::array<double, 3> values;
    std::array<Vec3, 3> vectors;
    jacobi_eigen3(sym, values, vectors);

    // Strong axis first (largest magnitude), remaining two by
    // descending eigenvalue.
    std::array<int, 3> order{0, 1, 2};
    int strong = 0;
    for (int i = 1; i < 3; ++i) {
        if (std::abs(values[i]) > std::abs(values[strong]) ||
            (std::abs(values[i]) == std::abs(values[strong]) &&
             values[i] > values[strong]))
            strong = i;
    }
    int w = 0;
    for (int i = 0; i < 3; ++i)
        if (i != strong) order[1 + w++] = i;
    order[0] = strong;
    if (values[order[1]] < values[order[2]]) std::swap(order[1], order[2]);

    TrapReport report;
    report.zero = zero;
    for (int i = 0; i < 3; ++i) {
        report.eigenvalues[i] = values[order[i]];
        report.axes[i] = oriented(vectors[order[i]]);
    }

    double weak_mean = 0.5 * (report.eigenvalues[1] + report.eigenvalues[2]);
    double max_abs = std::abs(report.eigenvalues[0]);
    if (std::abs(weak_mean) <= 1e-12 * max_abs)
        throw DegenerateError("weak-axis eigenvalues average to zero");
    for (int i = 0; i < 3; ++i)
        report.ratio[i] = report.eigenvalues[i] / weak_mean;
    return report;
}

FieldMap field_map(const ConductorAssembly& a, const GridSpec& grid) {
    if (grid.x.count < 1 || grid.y.count < 1 || grid.z.count < 1)
        throw InvalidArgumentError("grid counts must be positive");

    FieldMap map;
    map.grid = grid;
    std::size_t n = grid.point_count();
    map.samples.reserve(n);
    for (std::size_t flat = 0; flat < n; ++flat) {
        Vec3 p = grid.point(flat);
        try {
            map.samples.push_back({p, assembly_field(a, p)});
        } catch (const SingularityError& e) {
            throw SingularityError("grid index " + std::to_string(flat) + ": " +
                                   e.what());
        }
    }
    return map;
}

GradientCurrentTable gradient_vs_current(const ConductorAssembly& a,
                                         std::span<const double> currents,
                                         const Vec3& guess) {
    if (currents.empty()) throw InvalidArgumentError("currents list is empty");
    for (double i : currents)
        if (!(i > 0.0) || !std::isfinite(i))
            throw InvalidArgumentError("drive currents must be positive");

    GradientCurrentTable table;
    table.rows.reserve(currents.size());
    for (double i : currents) {
        TrapReport report = trap_report(with_drive_current(a, i), guess);
        table.rows.push_back({i, std::abs(report.eigenvalues[0])});
    }

    double sgi = 0.0, sii = 0.0, gmax = 0.0;
    for (const auto& row : table.rows) {
        sgi += row.gradient * row.current;
        sii += row.current * row.current;
        gmax = std::max(gmax, std::abs(row.gradient));
    }
    table.slope = sgi / sii;
    double worst = 0.0;
    for (const auto& row : table.rows)
        worst = std::max(worst, std::abs(row.gradient - table.slope * row.current));
    table.linearity_residual = gmax > 0.0 ? worst / gmax : 0.0;
    return table;
}

}  // namespace quadtrap
