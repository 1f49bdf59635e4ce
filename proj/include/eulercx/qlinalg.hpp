#pragma once
// Exact linear algebra over Q plus the two presentation helpers used to build
// finitely presented chain groups: signed-orbit quotients (generators modulo a
// finite group of signed symmetries) and linear quotients (span modulo a
// relation subspace).

#include "eulercx/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace eulercx {

using Vec = std::vector<Rat>;
using Mat = std::vector<Vec>;

// In-place reduced row echelon form. Returns the rank; pivot columns go to `pivots`.
std::size_t rref(Mat& a, std::vector<int>* pivots = nullptr);

std::size_t mat_rank(Mat a);

// Basis of the right nullspace {x : a x = 0}; `cols` is the width of `a`
// (needed when `a` has no rows).
Mat kernel_basis(const Mat& a, std::size_t cols);

// Rank of the stacked matrix rows(a) ∪ rows(b).
std::size_t stacked_rank(const Mat& a, const Mat& b);

Vec mat_apply(const Mat& a, const Vec& x);

// plain matrix product (rows(a) x cols(b))
Mat mat_mul(const Mat& a, const Mat& b);

// dim of (row space of `space`) / (row space of `space` ∩ row space of `sub` ... )
// Convenience: dim ker(m) / im given as row spans is handled by callers via ranks.

// --- Signed orbit presentation ------------------------------------------------
//
// Generators are strings. Symmetry orbits are fed in as lists of (key, sign)
// pairs meaning: all keys in one call denote the same class up to the stated
// relative signs. If an orbit forces g = -g the class collapses to zero.
// After freezing, each key projects to (basis index, sign) or to zero.
class SignedOrbitPresentation {
public:
    void add_key(const std::string& k);
    // identify k1 = rel_sign * k2
    void relate(const std::string& k1, const std::string& k2, int rel_sign);
    void freeze();

    std::size_t dim() const { return basis_.size(); }
    const std::vector<std::string>& basis() const { return basis_; }
    // (index, sign); index == -1 means the class is zero
    std::pair<int, int> project(const std::string& k) const;
    bool has_key(const std::string& k) const { return id_.count(k) > 0; }

    // expand a formal combination into coordinates on the frozen basis
    Vec coords(const std::vector<std::pair<std::string, Rat>>& comb) const;

private:
    struct Node { int parent; int sign; bool zero = false; };
    int find(int i) const; // path-compressing find, returns root; sign_to_root_ set
    std::map<std::string, int> id_;
    std::vector<std::string> keys_;
    mutable std::vector<Node> nodes_;
    mutable int sign_acc_ = 1;
    bool frozen_ = false;
    std::vector<std::string> basis_;
    std::map<int, int> root_to_basis_;
};

// --- Linear quotient -----------------------------------------------------------
//
// V = Q^n / rowspan(relations). Vectors reduce to a canonical representative
// with pivot coordinates eliminated.
class LinearQuotient {
public:
    LinearQuotient(std::size_t n, Mat relations);
    std::size_t dim() const;
    Vec reduce(Vec v) const;
    bool is_zero(const Vec& v) const;

private:
    std::size_t n_;
    Mat rel_; // rref'd
    std::vector<int> pivots_;
};

} // namespace eulercx
