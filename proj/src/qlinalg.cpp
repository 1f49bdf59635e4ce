#include "eulercx/qlinalg.hpp"

#include <stdexcept>

namespace eulercx {

std::size_t rref(Mat& a, std::vector<int>* pivots) {
    if (pivots) pivots->clear();
    if (a.empty()) return 0;
    std::size_t rows = a.size(), cols = a[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && a[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(a[piv], a[r]);
        Rat inv = 1 / a[r][c];
        for (std::size_t j = c; j < cols; ++j) a[r][j] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            Rat f = a[i][c];
            for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
        }
        if (pivots) pivots->push_back(static_cast<int>(c));
        ++r;
    }
    return r;
}

std::size_t mat_rank(Mat a) { return rref(a); }

Mat kernel_basis(const Mat& a, std::size_t cols) {
    Mat m = a;
    std::vector<int> piv;
    rref(m, &piv);
    std::vector<bool> is_piv(cols, false);
    for (int p : piv) is_piv[p] = true;
    Mat basis;
    for (std::size_t fc = 0; fc < cols; ++fc) {
        if (is_piv[fc]) continue;
        Vec v(cols, Rat(0));
        v[fc] = 1;
        for (std::size_t i = 0; i < piv.size(); ++i) {
            // row i: x[piv[i]] + sum_{j free} m[i][j] x[j] = 0
            v[piv[i]] = -m[i][fc];
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

std::size_t stacked_rank(const Mat& a, const Mat& b) {
    Mat m = a;
    m.insert(m.end(), b.begin(), b.end());
    return mat_rank(std::move(m));
}

Vec mat_apply(const Mat& a, const Vec& x) {
    Vec y(a.size(), Rat(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < x.size(); ++j)
            if (a[i][j] != 0 && x[j] != 0) y[i] += a[i][j] * x[j];
    }
    return y;
}

// --- SignedOrbitPresentation ---------------------------------------------------

void SignedOrbitPresentation::add_key(const std::string& k) {
    if (frozen_) throw std::logic_error("presentation is frozen");
    if (id_.count(k)) return;
    int idx = static_cast<int>(keys_.size());
    id_[k] = idx;
    keys_.push_back(k);
    nodes_.push_back({idx, 1});
}

int SignedOrbitPresentation::find(int i) const {
    // two-pass find with path compression; node.sign stores the sign of the
    // edge to node.parent, and after compression the sign to the root
    std::vector<int> path;
    int root = i;
    while (nodes_[root].parent != root) {
        path.push_back(root);
        root = nodes_[root].parent;
    }
    for (int k = static_cast<int>(path.size()) - 1; k >= 0; --k) {
        int node = path[k];
        int parent = nodes_[node].parent;
        int parent_sign = (parent == root) ? 1 : nodes_[parent].sign;
        nodes_[node].sign *= parent_sign;
        nodes_[node].parent = root;
    }
    sign_acc_ = (i == root) ? 1 : nodes_[i].sign;
    return root;
}

void SignedOrbitPresentation::relate(const std::string& k1, const std::string& k2, int rel_sign) {
    if (frozen_) throw std::logic_error("presentation is frozen");
    add_key(k1);
    add_key(k2);
    int i = id_[k1], j = id_[k2];
    int ri = find(i);
    int si = sign_acc_;
    int rj = find(j);
    int sj = sign_acc_;
    if (ri == rj) {
        // consistency: k1 = si * root, k2 = sj * root, want k1 = rel_sign * k2
        if (si != rel_sign * sj) nodes_[ri].zero = true;
        return;
    }
    bool z = nodes_[ri].zero || nodes_[rj].zero;
    // attach rj under ri: root_j = sign * root_i with sign chosen so that
    // k1 = rel_sign * k2 holds: si = rel_sign * sj * sign
    nodes_[rj].parent = ri;
    nodes_[rj].sign = si * rel_sign * sj; // si/(rel_sign*sj) with signs == product
    if (z) nodes_[ri].zero = true;
}

void SignedOrbitPresentation::freeze() {
    if (frozen_) return;
    frozen_ = true;
    for (std::size_t i = 0; i < keys_.size(); ++i) {
        int r = find(static_cast<int>(i));
        if (nodes_[r].zero) continue;
        if (!root_to_basis_.count(r)) {
            root_to_basis_[r] = static_cast<int>(basis_.size());
            basis_.push_back(keys_[r]);
        }
    }
}

std::pair<int, int> SignedOrbitPresentation::project(const std::string& k) const {
    auto it = id_.find(k);
    if (it == id_.end()) throw std::out_of_range("unknown generator key: " + k);
    int r = find(it->second);
    int s = sign_acc_;
    if (nodes_[r].zero) return {-1, 0};
    return {root_to_basis_.at(r), s};
}

Vec SignedOrbitPresentation::coords(const std::vector<std::pair<std::string, Rat>>& comb) const {
    Vec v(basis_.size(), Rat(0));
    for (const auto& [k, c] : comb) {
        auto [idx, s] = project(k);
        if (idx < 0) continue;
        v[idx] += Rat(s) * c;
    }
    return v;
}

// --- LinearQuotient --------------------------------------------------------------

LinearQuotient::LinearQuotient(std::size_t n, Mat relations) : n_(n), rel_(std::move(relations)) {
    rref(rel_, &pivots_);
    // drop zero rows
    while (!rel_.empty()) {
        bool zero = true;
        for (const Rat& x : rel_.back())
            if (x != 0) { zero = false; break; }
        if (zero) rel_.pop_back(); else break;
    }
}

std::size_t LinearQuotient::dim() const { return n_ - rel_.size(); }

Vec LinearQuotient::reduce(Vec v) const {
    for (std::size_t i = 0; i < rel_.size(); ++i) {
        int p = pivots_[i];
        if (v[p] == 0) continue;
        Rat f = v[p];
        for (std::size_t j = 0; j < n_; ++j) v[j] -= f * rel_[i][j];
    }
    return v;
}

bool LinearQuotient::is_zero(const Vec& v) const {
    Vec r = reduce(v);
    for (const Rat& x : r)
        if (x != 0) return false;
    return true;
}

} // namespace eulercx

namespace eulercx {

Mat mat_mul(const Mat& a, const Mat& b) {
    std::size_t n = a.size();
    std::size_t k = b.size();
    std::size_t m = b.empty() ? 0 : b[0].size();
    Mat r(n, Vec(m, Rat(0)));
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i].size() != k) throw std::invalid_argument("mat_mul: shape mismatch");
        for (std::size_t t = 0; t < k; ++t) {
            if (a[i][t] == 0) continue;
            for (std::size_t j = 0; j < m; ++j) r[i][j] += a[i][t] * b[t][j];
        }
    }
    return r;
}

} // namespace eulercx
