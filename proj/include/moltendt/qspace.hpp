#pragma once

// Truncated quantum affine space: series in x^d, d in N^n, |d| <= N, coefficients in Q(v),
// with x^d x^d' = v^<d,d'> x^{d+d'}.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "laurent.hpp"

namespace moltendt {

using DimVec = std::vector<int>;
using IntMatrix = std::vector<std::vector<int>>;

inline int total(const DimVec& d) { return std::accumulate(d.begin(), d.end(), 0); }

inline int pairing(const IntMatrix& B, const DimVec& a, const DimVec& b) {
    int s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) s += a[i] * B[i][j] * b[j];
    }
    return s;
}

// Monomial basis {d : |d| <= N} ordered by total degree, then lexicographically.
class Shape {
public:
    // euler (optional) only feeds the sign of the twisted Adams operations
    Shape(int nodes, int bound, IntMatrix twist, IntMatrix euler = {})
        : n_(nodes), N_(bound), twist_(std::move(twist)), euler_(std::move(euler)) {
        if (static_cast<int>(twist_.size()) != n_) throw validation_error("ShapeMismatch", "twist matrix size");
        if (!euler_.empty() && static_cast<int>(euler_.size()) != n_) throw validation_error("ShapeMismatch", "euler matrix size");
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                if (twist_[i][j] != -twist_[j][i]) throw validation_error("ShapeMismatch", "twist form not antisymmetric");
        DimVec d(n_, 0);
        for (int deg = 0; deg <= N_; ++deg) {
            std::vector<DimVec> layer;
            compositions(deg, 0, d, layer);
            std::sort(layer.begin(), layer.end());
            for (auto& x : layer) {
                index_.emplace(key(x), static_cast<int>(mons_.size()));
                mons_.push_back(x);
                deg_.push_back(deg);
                odd_.push_back(euler_.empty() ? 0 : (pairing(euler_, x, x) & 1));
            }
        }
        // product table: all (i, j) with deg_i + deg_j <= N
        for (int i = 0; i < size(); ++i) {
            for (int j = 0; j < size() && deg_[i] + deg_[j] <= N_; ++j) {
                DimVec s(n_);
                for (int k = 0; k < n_; ++k) s[k] = mons_[i][k] + mons_[j][k];
                prod_.push_back({i, j, find(s), pairing(twist_, mons_[i], mons_[j])});
            }
        }
    }

    int nodes() const { return n_; }
    int bound() const { return N_; }
    int size() const { return static_cast<int>(mons_.size()); }
    const IntMatrix& twist() const { return twist_; }
    const DimVec& mono(int k) const { return mons_[k]; }
    int degree(int k) const { return deg_[k]; }
    int twist(const DimVec& a, const DimVec& b) const { return pairing(twist_, a, b); }
    const IntMatrix& euler() const { return euler_; }
    // chi(d, d) mod 2
    bool odd(int k) const { return odd_[k]; }

    // -1 if out of range
    int find(const DimVec& d) const {
        if (static_cast<int>(d.size()) != n_) return -1;
        for (int x : d)
            if (x < 0) return -1;
        auto it = index_.find(key(d));
        return it == index_.end() ? -1 : it->second;
    }

    struct Term {
        int a, b, out, twist;
    };
    const std::vector<Term>& products() const { return prod_; }

    bool same(const Shape& o) const { return n_ == o.n_ && N_ == o.N_ && twist_ == o.twist_ && euler_ == o.euler_; }

private:
    static std::string key(const DimVec& d) {
        std::string s;
        s.reserve(d.size());
        for (int x : d) s.push_back(static_cast<char>(x));
        return s;
    }
    void compositions(int left, int pos, DimVec& d, std::vector<DimVec>& out) {
        if (pos == n_ - 1) {
            d[pos] = left;
            out.push_back(d);
            return;
        }
        for (int x = 0; x <= left; ++x) {
            d[pos] = x;
            compositions(left - x, pos + 1, d, out);
        }
        d[pos] = 0;
    }

    int n_, N_;
    IntMatrix twist_, euler_;
    std::vector<DimVec> mons_;
    std::vector<int> deg_;
    std::vector<char> odd_;
    std::unordered_map<std::string, int> index_;
    std::vector<Term> prod_;
};

using ShapePtr = std::shared_ptr<const Shape>;

inline ShapePtr make_shape(int nodes, int bound, IntMatrix twist, IntMatrix euler = {}) {
    return std::make_shared<const Shape>(nodes, bound, std::move(twist), std::move(euler));
}

// Adams operations psi_k on c(v) x^d:
//   euler_twisted (default): (-1)^{(k+1) chi(d,d)} c(v^k) x^{kd}; plain v_line when no Euler form is attached
//   v_line:                  c(v^k) x^{kd}
//   minus_v_line:            v^j -> (-1)^{j(k+1)} v^{jk}, i.e. -v is the line element
enum class AdamsRule { euler_twisted, v_line, minus_v_line };

inline VRational adams_coeff(const VRational& c, int k, AdamsRule rule, bool odd_chi = false) {
    if (k == 1) return c;
    if (rule == AdamsRule::euler_twisted) {
        VRational r = c.subs_power(k);
        return (odd_chi && k % 2 == 0) ? -r : r;
    }
    if (rule == AdamsRule::v_line) return c.subs_power(k);
    // v -> (-1)^{k+1} v^k
    auto sub = [&](const LPoly& p) {
        LPoly r;
        p.for_each([&](int e, const Q& q) {
            bool flip = (k % 2 == 0) && (e % 2 != 0);
            r += LPoly::monomial(e * k, flip ? Q(-q) : q);
        });
        return r;
    };
    return VRational(sub(c.num()), sub(c.den()));
}

class QSeries {
public:
    explicit QSeries(ShapePtr s) : shape_(std::move(s)), c_(shape_->size()) {}

    static QSeries one(ShapePtr s) {
        QSeries r(std::move(s));
        r.c_[0] = VRational(1);
        return r;
    }
    static QSeries monomial(ShapePtr s, const DimVec& d, const VRational& c = VRational(1)) {
        QSeries r(std::move(s));
        int k = r.shape_->find(d);
        if (k < 0) throw validation_error("ShapeMismatch", "monomial outside truncation");
        r.c_[k] = c;
        return r;
    }

    const ShapePtr& shape() const { return shape_; }
    int size() const { return shape_->size(); }
    const VRational& at(int k) const { return c_[k]; }
    VRational& at(int k) { return c_[k]; }
    VRational coeff(const DimVec& d) const {
        int k = shape_->find(d);
        return k < 0 ? VRational() : c_[k];
    }
    void set(const DimVec& d, const VRational& c) {
        int k = shape_->find(d);
        if (k < 0) throw validation_error("ShapeMismatch", "monomial outside truncation");
        c_[k] = c;
    }
    const VRational& constant() const { return c_[0]; }

    QSeries& operator+=(const QSeries& o) {
        check(o);
        for (int k = 0; k < size(); ++k)
            if (!o.c_[k].is_zero()) c_[k] += o.c_[k];
        return *this;
    }
    QSeries& operator-=(const QSeries& o) {
        check(o);
        for (int k = 0; k < size(); ++k)
            if (!o.c_[k].is_zero()) c_[k] -= o.c_[k];
        return *this;
    }
    friend QSeries operator+(QSeries a, const QSeries& b) { return a += b; }
    friend QSeries operator-(QSeries a, const QSeries& b) { return a -= b; }

    QSeries scaled(const VRational& s) const {
        QSeries r(shape_);
        for (int k = 0; k < size(); ++k)
            if (!c_[k].is_zero()) r.c_[k] = c_[k] * s;
        return r;
    }

    // (AB)_d = sum A_d' B_d'' v^<d',d''>
    friend QSeries operator*(const QSeries& a, const QSeries& b) {
        a.check(b);
        QSeries r(a.shape_);
        for (auto& t : a.shape_->products()) {
            const VRational& x = a.c_[t.a];
            if (x.is_zero()) continue;
            const VRational& y = b.c_[t.b];
            if (y.is_zero()) continue;
            VRational p = x * y;
            if (t.twist != 0) p = p.times_monomial(t.twist);
            r.c_[t.out] += p;
        }
        return r;
    }

    // keep only the homogeneous part of total degree deg
    QSeries degree_part(int deg) const {
        QSeries r(shape_);
        for (int k = 0; k < size(); ++k)
            if (shape_->degree(k) == deg) r.c_[k] = c_[k];
        return r;
    }

    std::vector<int> support() const {
        std::vector<int> s;
        for (int k = 0; k < size(); ++k)
            if (!c_[k].is_zero()) s.push_back(k);
        return s;
    }

    bool supported_centrally() const {
        auto s = support();
        for (int a : s)
            for (int b : s)
                if (shape_->twist(shape_->mono(a), shape_->mono(b)) != 0) return false;
        return true;
    }

    // S_{+i} (sign = +1) or S_{-i} (sign = -1): x^d -> v^{sign d_i} x^d
    QSeries S(int node, int sign) const {
        QSeries r(shape_);
        for (int k = 0; k < size(); ++k)
            if (!c_[k].is_zero()) r.c_[k] = c_[k].times_monomial(sign * shape_->mono(k)[node]);
        return r;
    }

    // coefficientwise bar; only meaningful on commuting support
    QSeries bar() const {
        if (!supported_centrally()) throw validation_error("NonCentralSigma", "bar-dual of a series with non-commuting support");
        return bar_coefficients();
    }
    QSeries bar_coefficients() const {
        QSeries r(shape_);
        for (int k = 0; k < size(); ++k)
            if (!c_[k].is_zero()) r.c_[k] = c_[k].bar();
        return r;
    }

    // psi_k: c(v) x^d -> c(v^k) x^{kd}, truncated
    QSeries adams(int k, AdamsRule rule = AdamsRule::euler_twisted) const {
        QSeries r(shape_);
        for (int j = 0; j < size(); ++j) {
            if (c_[j].is_zero()) continue;
            if (shape_->degree(j) * k > shape_->bound()) continue;
            DimVec d = shape_->mono(j);
            for (int& x : d) x *= k;
            r.c_[shape_->find(d)] = adams_coeff(c_[j], k, rule, shape_->odd(j));
        }
        return r;
    }

    friend bool operator==(const QSeries& a, const QSeries& b) { return a.shape_->same(*b.shape_) && a.c_ == b.c_; }
    friend bool operator!=(const QSeries& a, const QSeries& b) { return !(a == b); }

    void check(const QSeries& o) const {
        if (shape_ != o.shape_ && !shape_->same(*o.shape_)) throw validation_error("ShapeMismatch", "series of different shapes");
    }

private:
    ShapePtr shape_;
    std::vector<VRational> c_;
};

inline QSeries qinv(const QSeries& a) {
    const VRational& c0 = a.constant();
    if (c0.is_zero()) throw validation_error("NonUnitConstantTerm", "constant term is zero");
    VRational c0inv = VRational(1) / c0;
    // a = c0 (1 + b); a^{-1} = sum (-b)^k c0^{-1}
    QSeries b = a.scaled(c0inv);
    b.at(0) = VRational();
    QSeries mb = b.scaled(VRational(-1));
    QSeries r = QSeries::one(a.shape());
    QSeries p = QSeries::one(a.shape());
    for (int k = 1; k <= a.shape()->bound(); ++k) {
        p = p * mb;
        r += p;
    }
    return r.scaled(c0inv);
}

namespace detail {
inline void require_commuting(const QSeries& f, const char* what) {
    if (!f.supported_centrally()) throw validation_error("NonCommutingSupport", std::string(what) + " on non-commuting support");
}
inline int mobius(int n) {
    int m = 1;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            n /= p;
            if (n % p == 0) return 0;
            m = -m;
        }
    }
    if (n > 1) m = -m;
    return m;
}
} // namespace detail

// exp and log of series without constant term / with constant term 1 (commuting support)
inline QSeries series_exp(const QSeries& L) {
    QSeries r = QSeries::one(L.shape()), p = QSeries::one(L.shape());
    for (int k = 1; k <= L.shape()->bound(); ++k) {
        p = (p * L).scaled(VRational(LPoly(Q(1, k))));
        r += p;
    }
    return r;
}
inline QSeries series_log(const QSeries& F) {
    QSeries b = F;
    b.at(0) = VRational();
    QSeries r(F.shape()), p = QSeries::one(F.shape());
    for (int k = 1; k <= F.shape()->bound(); ++k) {
        p = p * b;
        r += p.scaled(VRational(LPoly(Q(k % 2 ? 1 : -1, k))));
    }
    return r;
}

inline QSeries exp_pleth(const QSeries& f, AdamsRule rule = AdamsRule::euler_twisted) {
    if (!f.constant().is_zero()) throw validation_error("NonzeroConstantTerm", "Exp argument has a constant term");
    detail::require_commuting(f, "Exp");
    QSeries L(f.shape());
    for (int k = 1; k <= f.shape()->bound(); ++k) L += f.adams(k, rule).scaled(VRational(LPoly(Q(1, k))));
    return series_exp(L);
}

inline QSeries log_pleth(const QSeries& F, AdamsRule rule = AdamsRule::euler_twisted) {
    if (F.constant() != VRational(1)) throw validation_error("NonUnitConstantTerm", "Log argument must have constant term 1");
    detail::require_commuting(F, "Log");
    QSeries L = series_log(F);
    // invert L = sum psi_k(f)/k by Moebius; psi_k psi_m = psi_{km} holds for every rule
    QSeries f(F.shape());
    for (int k = 1; k <= F.shape()->bound(); ++k) {
        int mu = detail::mobius(k);
        if (mu == 0) continue;
        f += L.adams(k, rule).scaled(VRational(LPoly(Q(mu, k))));
    }
    return f;
}

// ---- JSON ----

inline nlohmann::json poly_json(const LPoly& p) {
    nlohmann::json j = nlohmann::json::object();
    p.for_each([&](int e, const Q& q) {
        if (q.get_den() == 1 && q.get_num().fits_slong_p()) j[std::to_string(e)] = q.get_num().get_si();
        else j[std::to_string(e)] = q.get_str();
    });
    return j;
}

inline nlohmann::json coeff_json(const VRational& r) {
    if (r.is_laurent()) return poly_json(r.num());
    return nlohmann::json{{"num", poly_json(r.num())}, {"den", poly_json(r.den())}};
}

inline nlohmann::json series_json(const QSeries& s) {
    nlohmann::json terms = nlohmann::json::array();
    for (int k = 0; k < s.size(); ++k) {
        if (s.at(k).is_zero()) continue;
        terms.push_back({{"d", s.shape()->mono(k)}, {"poly", coeff_json(s.at(k))}});
    }
    return {{"bound", s.shape()->bound()}, {"terms", terms}};
}

} // namespace moltendt
