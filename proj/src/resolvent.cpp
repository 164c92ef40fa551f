#include "selfsim/resolvent.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace selfsim {

namespace {

// Sparse Gaussian elimination over Q(z) for A x = b with A = I - zQ.
// Diagonal pivots always exist: every principal minor of I - zQ evaluates
// to 1 at z = 0, so no diagonal entry can become the zero function.
class SparseSolver {
public:
    explicit SparseSolver(const SparseRatMatrix& q) : n_(q.n), rows_(q.n), cols_(q.n) {
        for (int i = 0; i < n_; ++i) set_entry(i, i, RationalFunction(Rat(1)));
        Polynomial minus_z = Polynomial::monomial(Rat(-1), 1);
        for (const auto& e : q.entries) {
            if (e.value == 0) continue;
            RationalFunction term(Polynomial(e.value) * minus_z);
            auto it = rows_[e.row].find(e.col);
            if (it == rows_[e.row].end())
                set_entry(e.row, e.col, std::move(term));
            else {
                it->second += term;
                if (it->second.is_zero()) erase_entry(e.row, e.col);
            }
        }
    }

    // Eliminates once; afterwards solve() may be called for several RHS.
    void factor() {
        std::vector<bool> done(n_, false);
        for (int step = 0; step < n_; ++step) {
            int p = pick_pivot(done);
            pivot_order_.push_back(p);
            done[p] = true;
            const RationalFunction piv = rows_[p].at(p);
            // Schur update of all not-yet-eliminated rows touching column p.
            std::vector<int> touched(cols_[p].begin(), cols_[p].end());
            for (int r : touched) {
                if (done[r] || r == p) continue;
                RationalFunction factor = rows_[r].at(p) / piv;
                if (factor.is_zero()) continue;
                for (const auto& [c, val] : rows_[p]) {
                    if (c == p) continue;
                    auto it = rows_[r].find(c);
                    if (it == rows_[r].end()) {
                        RationalFunction upd = -(factor * val);
                        if (!upd.is_zero()) set_entry(r, c, std::move(upd));
                    } else {
                        it->second -= factor * val;
                        if (it->second.is_zero()) erase_entry(r, c);
                    }
                }
                // Keep the multiplier for forward substitution of RHS vectors.
                lower_.push_back({r, p, std::move(factor)});
                erase_entry(r, p);
            }
        }
    }

    std::vector<RationalFunction> solve(std::vector<RationalFunction> b) const {
        for (const auto& m : lower_) {
            if (!b[m.col].is_zero()) b[m.row] -= m.factor * b[m.col];
        }
        std::vector<RationalFunction> x(n_);
        for (auto it = pivot_order_.rbegin(); it != pivot_order_.rend(); ++it) {
            int p = *it;
            RationalFunction acc = std::move(b[p]);
            for (const auto& [c, val] : rows_[p]) {
                if (c == p) continue;
                if (!x[c].is_zero()) acc -= val * x[c];
            }
            x[p] = acc / rows_[p].at(p);
        }
        return x;
    }

private:
    struct Multiplier {
        int row;
        int col;
        RationalFunction factor;
    };

    void set_entry(int r, int c, RationalFunction v) {
        rows_[r].emplace(c, std::move(v));
        cols_[c].insert(r);
    }
    void erase_entry(int r, int c) {
        rows_[r].erase(c);
        cols_[c].erase(r);
    }

    int pick_pivot(const std::vector<bool>& done) const {
        // Markowitz cost on diagonal candidates; deterministic tiebreak.
        long best_cost = -1;
        int best = -1;
        for (int i = 0; i < n_; ++i) {
            if (done[i]) continue;
            long r = 0;
            for (const auto& [c, v] : rows_[i])
                if (!done[c] && c != i) ++r;
            long cnt = 0;
            for (int rr : cols_[i])
                if (!done[rr] && rr != i) ++cnt;
            long cost = r * cnt;
            if (best < 0 || cost < best_cost) {
                best = i;
                best_cost = cost;
            }
        }
        return best;
    }

    int n_;
    std::vector<std::map<int, RationalFunction>> rows_;
    std::vector<std::set<int>> cols_;
    std::vector<Multiplier> lower_;
    std::vector<int> pivot_order_;
};

SparseRatMatrix transpose(const SparseRatMatrix& q) {
    SparseRatMatrix t;
    t.n = q.n;
    t.entries.reserve(q.entries.size());
    for (const auto& e : q.entries) t.entries.push_back({e.col, e.row, e.value});
    return t;
}

std::vector<RationalFunction> unit_vector(int n, int k) {
    std::vector<RationalFunction> b(n);
    b[k] = RationalFunction(Rat(1));
    return b;
}

} // namespace

std::vector<RationalFunction> resolvent_column(const SparseRatMatrix& q, int col) {
    SparseSolver solver(q);
    solver.factor();
    return solver.solve(unit_vector(q.n, col));
}

std::vector<RationalFunction> resolvent_row(const SparseRatMatrix& q, int row) {
    // Row of the inverse = column of the transposed system.
    SparseSolver solver(transpose(q));
    solver.factor();
    return solver.solve(unit_vector(q.n, row));
}

std::vector<std::vector<RationalFunction>> solve_resolvent(const SparseRatMatrix& q,
                                                           const std::vector<int>& rows,
                                                           const std::vector<int>& cols) {
    for (int r : rows)
        if (r < 0 || r >= q.n) throw std::out_of_range("solve_resolvent: row index");
    for (int c : cols)
        if (c < 0 || c >= q.n) throw std::out_of_range("solve_resolvent: col index");
    SparseSolver solver(q);
    solver.factor();
    std::vector<std::vector<RationalFunction>> out(rows.size(),
                                                   std::vector<RationalFunction>(cols.size()));
    for (size_t j = 0; j < cols.size(); ++j) {
        auto column = solver.solve(unit_vector(q.n, cols[j]));
        for (size_t i = 0; i < rows.size(); ++i) out[i][j] = column[rows[i]];
    }
    return out;
}

} // namespace selfsim
