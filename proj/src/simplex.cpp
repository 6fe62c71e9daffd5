#include "latticewave/simplex.hpp"

#include "latticewave/errors.hpp"

namespace lw {

namespace {

struct Tableau {
    // rows of [A | rhs]; costs kept separately. Columns 0..n-1 are structural,
    // n..n+m-1 artificial.
    std::vector<std::vector<Rational>> row;
    std::vector<Rational> rhs;
    std::vector<int> basis;  // basis[i] = column basic in row i
    int n = 0, m = 0;

    int ncols() const { return n + m; }

    void pivot(int r, int col) {
        Rational piv = row[r][col];
        for (auto& v : row[r]) v /= piv;
        rhs[r] /= piv;
        for (int i = 0; i < m; ++i) {
            if (i == r) continue;
            Rational f = row[i][col];
            if (f == 0) continue;
            for (int j = 0; j < ncols(); ++j) row[i][j] -= f * row[r][j];
            rhs[i] -= f * rhs[r];
        }
        basis[r] = col;
    }
};

// Returns false when the problem is unbounded for the given costs.
bool run_simplex(Tableau& t, const std::vector<Rational>& cost, const std::vector<bool>& barred) {
    const int m = t.m;
    while (true) {
        // y = c_B applied through the current tableau; reduced cost per column.
        int enter = -1;
        for (int j = 0; j < t.ncols(); ++j) {
            if (barred[j]) continue;
            bool basic = false;
            for (int i = 0; i < m; ++i)
                if (t.basis[i] == j) {
                    basic = true;
                    break;
                }
            if (basic) continue;
            Rational rc = cost[j];
            for (int i = 0; i < m; ++i)
                if (cost[t.basis[i]] != 0) rc -= cost[t.basis[i]] * t.row[i][j];
            if (rc < 0) {
                enter = j;
                break;  // Bland: first improving column
            }
        }
        if (enter < 0) return true;

        int leave = -1;
        Rational best;
        for (int i = 0; i < m; ++i) {
            if (t.row[i][enter] <= 0) continue;
            Rational ratio = t.rhs[i] / t.row[i][enter];
            if (leave < 0 || ratio < best || (ratio == best && t.basis[i] < t.basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave < 0) return false;
        t.pivot(leave, enter);
    }
}

}  // namespace

LPSolution simplex_solve(const std::vector<std::vector<Rational>>& A, const std::vector<Rational>& b,
                         const std::vector<Rational>& c) {
    const int m = static_cast<int>(A.size());
    const int n = m > 0 ? static_cast<int>(A[0].size()) : static_cast<int>(c.size());

    Tableau t;
    t.n = n;
    t.m = m;
    t.row.assign(m, std::vector<Rational>(n + m, Rational(0)));
    t.rhs.assign(m, Rational(0));
    t.basis.assign(m, 0);
    std::vector<int> row_sign(m, 1);

    for (int i = 0; i < m; ++i) {
        if (static_cast<int>(A[i].size()) != n) throw DimensionMismatch("LP row width");
        int s = b[i] < 0 ? -1 : 1;
        row_sign[i] = s;
        for (int j = 0; j < n; ++j) t.row[i][j] = s * A[i][j];
        t.rhs[i] = s * b[i];
        t.row[i][n + i] = 1;
        t.basis[i] = n + i;
    }

    // Phase 1: minimize the sum of artificials.
    std::vector<Rational> cost1(n + m, Rational(0));
    for (int i = 0; i < m; ++i) cost1[n + i] = 1;
    std::vector<bool> barred(n + m, false);
    run_simplex(t, cost1, barred);

    Rational phase1 = 0;
    for (int i = 0; i < m; ++i)
        if (t.basis[i] >= n) phase1 += t.rhs[i];
    LPSolution sol;
    if (phase1 != 0) {
        sol.status = LPStatus::Infeasible;
        return sol;
    }

    // Drive remaining artificials out of the basis where possible.
    for (int i = 0; i < m; ++i) {
        if (t.basis[i] < n) continue;
        int col = -1;
        for (int j = 0; j < n; ++j)
            if (t.row[i][j] != 0) {
                col = j;
                break;
            }
        if (col >= 0) t.pivot(i, col);
        // else: redundant row; its artificial stays basic at zero.
    }

    // Phase 2: original costs, artificials barred from entering.
    std::vector<Rational> cost2(n + m, Rational(0));
    for (int j = 0; j < n; ++j) cost2[j] = c[j];
    for (int j = n; j < n + m; ++j) barred[j] = true;
    if (!run_simplex(t, cost2, barred)) {
        sol.status = LPStatus::Unbounded;
        return sol;
    }

    sol.status = LPStatus::Optimal;
    sol.x.assign(n, Rational(0));
    for (int i = 0; i < m; ++i)
        if (t.basis[i] < n) sol.x[t.basis[i]] = t.rhs[i];
    sol.objective = 0;
    for (int j = 0; j < n; ++j) sol.objective += c[j] * sol.x[j];

    // Duals read off the artificial columns: reduced cost of artificial i is
    // -y_i (up to the row sign applied during setup).
    sol.y.assign(m, Rational(0));
    for (int i = 0; i < m; ++i) {
        Rational rc = 0;
        for (int k = 0; k < m; ++k)
            if (cost2[t.basis[k]] != 0) rc += cost2[t.basis[k]] * t.row[k][n + i];
        sol.y[i] = row_sign[i] * rc;
    }
    return sol;
}

}  // namespace lw
