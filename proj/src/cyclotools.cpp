#include "eulercx/cyclotools.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace eulercx {

int unit_label(int a, int N) {
    int r = mod_pos(a, N);
    return r > N / 2 ? N - r : r;
}

void wedge_add(Wedge2& w, int a, int b, int N, const Rat& c) {
    int i = unit_label(a, N), j = unit_label(b, N);
    if (i == 0 || j == 0 || i == j) return; // zero symbol or repeated factor
    Rat coef = c;
    if (i > j) {
        std::swap(i, j);
        coef = -coef;
    }
    auto [it, inserted] = w.try_emplace({i, j}, coef);
    if (!inserted) {
        it->second += coef;
        if (it->second == 0) w.erase(it);
    }
}

bool wedge_is_zero(const Wedge2& w) {
    for (const auto& [k, c] : w)
        if (c != 0) return false;
    return true;
}

Wedge2 wedge_sub(const Wedge2& a, const Wedge2& b) {
    Wedge2 out = a;
    for (const auto& [k, c] : b) {
        auto [it, inserted] = out.try_emplace(k, -c);
        if (!inserted) {
            it->second -= c;
            if (it->second == 0) out.erase(it);
        }
    }
    return out;
}

Wedge2 coproduct_pair(int N, int a, int b) {
    // (u(a+b) - u(b)) ^ (u(a) - u(b)); expands to four elementary wedges
    Wedge2 w;
    wedge_add(w, a + b, a, N, Rat(1));
    wedge_add(w, a + b, b, N, Rat(-1));
    wedge_add(w, b, a, N, Rat(-1));
    return w;
}

Wedge2 coproduct_literal(int N, int a, int b) {
    // u(a)^u(b) + u(b)^u(g) + u(g)^u(a) with g = -a-b
    int g = -a - b;
    Wedge2 w;
    wedge_add(w, a, b, N, Rat(1));
    wedge_add(w, b, g, N, Rat(1));
    wedge_add(w, g, a, N, Rat(1));
    return w;
}

CycloUnitSpace::CycloUnitSpace(int prime) : p(prime), m((prime - 1) / 2) {
    if (prime < 5 || prime % 2 == 0) throw std::invalid_argument("need an odd prime >= 5");
}

Vec CycloUnitSpace::lambda2_coords(const Wedge2& w) const {
    auto pos = [this](int i, int j) {
        // index of (i,j), 1 <= i < j <= m, in lexicographic order
        int before = 0;
        for (int r = 1; r < i; ++r) before += m - r;
        return before + (j - i - 1);
    };
    Vec v(lambda2_dim(), Rat(0));
    for (const auto& [k, c] : w) {
        if (k.first < 1 || k.second > m) throw std::out_of_range("label outside C1 basis");
        v[pos(k.first, k.second)] += c;
    }
    return v;
}

Mat CycloUnitSpace::lambda2_unit_basis() const {
    // kernel of the valuation functional has basis e_a - e_m (a < m);
    // wedge pairs (e_a - e_m) ^ (e_b - e_m) = e_a^e_b - e_a^e_m - e_m^e_b...
    Mat rows;
    for (int a = 1; a < m; ++a) {
        for (int b = a + 1; b < m; ++b) {
            Wedge2 w;
            // labels are already canonical in 1..m here
            auto add = [&](int i, int j, Rat c) {
                if (i == j) return;
                if (i > j) { std::swap(i, j); c = -c; }
                auto [it, ins] = w.try_emplace({i, j}, c);
                if (!ins) { it->second += c; if (it->second == 0) w.erase(it); }
            };
            add(a, b, Rat(1));
            add(a, m, Rat(-1));
            add(m, b, Rat(-1));
            rows.push_back(lambda2_coords(w));
        }
    }
    return rows;
}

std::size_t unit_log_rank(int p) {
    // rows: archimedean log embeddings |1 - zeta^{ka}| over k = 1..(p-1)/2,
    // plus the common p-adic valuation; rank should be (p-1)/2
    int m = (p - 1) / 2;
    std::vector<std::vector<double>> rows;
    for (int k = 1; k <= m; ++k) {
        std::vector<double> r;
        for (int a = 1; a <= m; ++a) {
            double ang = 2.0 * M_PI * ((long)k * a % p) / p;
            r.push_back(std::log(std::abs(2.0 * std::sin(ang / 2.0))));
        }
        rows.push_back(r);
    }
    // numeric rank by Gram-Schmidt with a fixed threshold
    std::size_t rank = 0;
    std::vector<std::vector<double>> basis;
    for (auto v : rows) {
        for (const auto& b : basis) {
            double dot = 0, nn = 0;
            for (std::size_t i = 0; i < v.size(); ++i) { dot += v[i] * b[i]; nn += b[i] * b[i]; }
            for (std::size_t i = 0; i < v.size(); ++i) v[i] -= dot / nn * b[i];
        }
        double norm = 0;
        for (double x : v) norm += x * x;
        if (std::sqrt(norm) > 1e-8) {
            basis.push_back(v);
            ++rank;
        }
    }
    // the all-ones valuation row is independent of the archimedean rows
    // (units have log-norm zero, the prime element does not)
    std::vector<double> ones(m, 1.0);
    auto v = ones;
    for (const auto& b : basis) {
        double dot = 0, nn = 0;
        for (std::size_t i = 0; i < v.size(); ++i) { dot += v[i] * b[i]; nn += b[i] * b[i]; }
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= dot / nn * b[i];
    }
    double norm = 0;
    for (double x : v) norm += x * x;
    if (std::sqrt(norm) > 1e-8) ++rank;
    return rank;
}

namespace {

Mat triangle_image_rows(int p, const CycloUnitSpace& sp) {
    Mat rows;
    std::set<Vec> seen;
    for (int c = 0; c < p; ++c) {
        for (int d = 0; d < p; ++d) {
            int e = mod_pos(-c - d, p);
            if (c == 0 && d == 0) continue;
            Wedge2 w = coproduct_literal(p, c, d);
            (void)e;
            if (wedge_is_zero(w)) continue;
            Vec v = sp.lambda2_coords(w);
            if (seen.insert(v).second) rows.push_back(std::move(v));
        }
    }
    return rows;
}

} // namespace

std::size_t conclusion1_image_dim(int p) {
    CycloUnitSpace sp(p);
    return mat_rank(triangle_image_rows(p, sp));
}

std::size_t conclusion1_coker(int p) {
    CycloUnitSpace sp(p);
    Mat img = triangle_image_rows(p, sp);
    Mat unit = sp.lambda2_unit_basis();
    // image lies in the unit subspace (both wedge factors are differences of
    // unit classes); cokernel = dim Lambda^2(units) - rank(image)
    std::size_t unit_dim = mat_rank(unit);
    std::size_t img_rank = mat_rank(img);
    std::size_t joint = stacked_rank(unit, img);
    if (joint != unit_dim) throw std::logic_error("triangle image escapes the unit subspace");
    return unit_dim - img_rank;
}

} // namespace eulercx
