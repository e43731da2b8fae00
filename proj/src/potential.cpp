#include "toric/potential.hpp"

#include "toric/error.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <sstream>

namespace toric {

namespace {

constexpr const char* kModule = "potential";

double xlogx(double v) { return v > 0.0 ? v * std::log(v) : 0.0; }

double abs(double v) { return std::fabs(v); }
__float128 abs(__float128 v) { return v < 0 ? -v : v; }
using boost::multiprecision::abs;

}  // namespace

SymplecticPotential::SymplecticPotential(Polytope p, Polynomial w, PotentialOptions options)
    : polytope_(std::move(p)), w_(std::move(w)) {
    const int n = polytope_.dim();
    if (w_.dim() == 0) w_ = Polynomial::zero(n);
    if (w_.dim() != n) fail(ErrorKind::Precondition, kModule, "perturbation dimension differs from polytope");

    const auto& facets = polytope_.facets();
    normals_.resize(static_cast<Eigen::Index>(facets.size()), n);
    offsets_.resize(static_cast<Eigen::Index>(facets.size()));
    for (std::size_t a = 0; a < facets.size(); ++a) {
        auto prim = polytope_.inequalities()[facets[a].active_facets[0]].primitive();
        for (int j = 0; j < n; ++j) normals_(static_cast<Eigen::Index>(a), j) = to_double(prim.normal[j]);
        offsets_(static_cast<Eigen::Index>(a)) = to_double(prim.offset);
    }

    for (int i = 0; i < n; ++i) dw_.push_back(w_.derivative(i));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d2w_.push_back(dw_[i].derivative(j));
    for (int ij = 0; ij < n * n; ++ij)
        for (int k = 0; k < n; ++k) d3w_.push_back(d2w_[ij].derivative(k));
    for (int ijk = 0; ijk < n * n * n; ++ijk)
        for (int l = 0; l < n; ++l) d4w_.push_back(d3w_[ijk].derivative(l));

    // Strict convexity: H positive-definite on a grid of interior sample points.
    const int g = std::max(2, options.convexity_grid);
    std::vector<double> lo(n), hi(n);
    for (int j = 0; j < n; ++j) {
        lo[j] = hi[j] = to_double(polytope_.vertices()[0][j]);
        for (const auto& v : polytope_.vertices()) {
            lo[j] = std::min(lo[j], to_double(v[j]));
            hi[j] = std::max(hi[j], to_double(v[j]));
        }
    }
    std::vector<int> idx(n, 0);
    std::vector<double> x(n);
    while (true) {
        for (int j = 0; j < n; ++j) x[j] = lo[j] + (hi[j] - lo[j]) * (idx[j] + 0.5) / g;
        Vec l = facet_values(x);
        if (l.minCoeff() > 0.0) {
            Eigen::LLT<Mat> llt(hessian_from(x, l));
            if (llt.info() != Eigen::Success) {
                std::ostringstream os;
                os << "potential is not strictly convex: Hessian not positive-definite at (";
                for (int j = 0; j < n; ++j) os << (j ? "," : "") << x[j];
                os << ")";
                fail(ErrorKind::Precondition, kModule, os.str());
            }
        }
        int j = n - 1;
        while (j >= 0 && idx[j] == g - 1) idx[j--] = 0;
        if (j < 0) break;
        ++idx[j];
    }
}

Vec SymplecticPotential::facet_values(std::span<const double> x) const {
    Eigen::Map<const Vec> xv(x.data(), static_cast<Eigen::Index>(x.size()));
    return normals_ * xv - offsets_;
}

void SymplecticPotential::require_interior(std::span<const double> x) const {
    Vec l = facet_values(x);
    for (Eigen::Index a = 0; a < l.size(); ++a) {
        if (!(l(a) > 0.0)) {
            std::ostringstream os;
            os << "point is not interior: l_" << a << "(x) = " << l(a);
            fail(ErrorKind::Precondition, kModule, os.str());
        }
    }
}

double SymplecticPotential::value(std::span<const double> x) const {
    Vec l = facet_values(x);
    double u = 0.0;
    for (Eigen::Index a = 0; a < l.size(); ++a) {
        if (l(a) < -1e-14) fail(ErrorKind::Precondition, kModule, "u evaluated outside P");
        u += 0.5 * xlogx(std::max(l(a), 0.0));
    }
    return u + w_(x);
}

Vec SymplecticPotential::gradient(std::span<const double> x) const {
    require_interior(x);
    Vec l = facet_values(x);
    const int n = dim();
    Vec g = Vec::Zero(n);
    for (Eigen::Index a = 0; a < l.size(); ++a) g += 0.5 * (1.0 + std::log(l(a))) * normals_.row(a).transpose();
    for (int i = 0; i < n; ++i) g(i) += dw_[i](x);
    return g;
}

Mat SymplecticPotential::hessian_from(std::span<const double> x, const Vec& l) const {
    const int n = dim();
    Mat h = Mat::Zero(n, n);
    for (Eigen::Index a = 0; a < l.size(); ++a) {
        Vec nu = normals_.row(a).transpose();
        h += (0.5 / l(a)) * nu * nu.transpose();
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) h(i, j) += d2w_[i * n + j](x);
    return h;
}

Mat SymplecticPotential::hessian(std::span<const double> x) const {
    require_interior(x);
    return hessian_from(x, facet_values(x));
}

Mat SymplecticPotential::inverse_metric(std::span<const double> x) const {
    require_interior(x);
    if (facet_values(x).minCoeff() < 0.05) return metric(x).G;
    Mat h = hessian(x);
    Eigen::LLT<Mat> llt(h);
    if (llt.info() != Eigen::Success) fail(ErrorKind::Precondition, kModule, "Hessian is singular or indefinite");
    return llt.solve(Mat::Identity(h.rows(), h.cols()));
}

MetricAtPoint SymplecticPotential::metric(std::span<const double> x) const {
    require_interior(x);
    const Vec l = facet_values(x);
    // Abreu's formula cancels terms of size 1/ℓ³ near a facet, so precision is raised there.
    const double lmin = l.minCoeff();
    if (lmin >= 0.05) return metric_in<double>(x);
    if (lmin >= 1e-7) return metric_in<__float128>(x);
    return metric_in<boost::multiprecision::cpp_bin_float_50>(x);
}

template <class T>
MetricAtPoint SymplecticPotential::metric_in(std::span<const double> x) const {
    const int n = dim();
    const auto F = static_cast<int>(offsets_.size());
    auto at = [n](int i, int j) { return i * n + j; };
    auto to_d = [](const T& v) { return static_cast<double>(v); };

    std::vector<T> l(F);
    for (int a = 0; a < F; ++a) {
        T v = -T(offsets_(a));
        for (int j = 0; j < n; ++j) v += T(normals_(a, j)) * T(x[j]);
        l[a] = v;
    }

    std::vector<T> H(n * n, T(0));
    std::vector<std::vector<T>> dH(n, std::vector<T>(n * n, T(0)));
    std::vector<std::vector<T>> d2H(n * n, std::vector<T>(n * n, T(0)));
    for (int a = 0; a < F; ++a) {
        const T inv = T(1) / l[a];
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const T o = T(normals_(a, i) * normals_(a, j));
                H[at(i, j)] += T(0.5) * o * inv;
                for (int k = 0; k < n; ++k) {
                    dH[k][at(i, j)] += T(-0.5 * normals_(a, k)) * o * inv * inv;
                    for (int q = 0; q < n; ++q)
                        d2H[at(k, q)][at(i, j)] += T(normals_(a, k) * normals_(a, q)) * o * inv * inv * inv;
                }
            }
    }
    if (!w_.is_zero()) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                H[at(i, j)] += T(d2w_[at(i, j)](x));
                for (int k = 0; k < n; ++k) {
                    dH[k][at(i, j)] += T(d3w_[at(i, j) * n + k](x));
                    for (int q = 0; q < n; ++q) d2H[at(k, q)][at(i, j)] += T(d4w_[(at(i, j) * n + k) * n + q](x));
                }
            }
    }

    // G = H⁻¹ by Gauss-Jordan with partial pivoting.
    std::vector<T> A = H, G(n * n, T(0));
    for (int i = 0; i < n; ++i) G[at(i, i)] = T(1);
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (abs(A[at(r, c)]) > abs(A[at(piv, c)])) piv = r;
        if (!(abs(A[at(piv, c)]) > T(0))) fail(ErrorKind::Precondition, kModule, "Hessian is singular or indefinite");
        for (int j = 0; j < n; ++j) {
            std::swap(A[at(c, j)], A[at(piv, j)]);
            std::swap(G[at(c, j)], G[at(piv, j)]);
        }
        const T d = A[at(c, c)];
        for (int j = 0; j < n; ++j) {
            A[at(c, j)] /= d;
            G[at(c, j)] /= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == c) continue;
            const T f = A[at(r, c)];
            for (int j = 0; j < n; ++j) {
                A[at(r, j)] -= f * A[at(c, j)];
                G[at(r, j)] -= f * G[at(c, j)];
            }
        }
    }

    auto mul = [&](const std::vector<T>& X, const std::vector<T>& Y) {
        std::vector<T> Z(n * n, T(0));
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k)
                for (int j = 0; j < n; ++j) Z[at(i, j)] += X[at(i, k)] * Y[at(k, j)];
        return Z;
    };
    auto to_mat = [&](const std::vector<T>& X) {
        Mat M(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) M(i, j) = to_d(X[at(i, j)]);
        return M;
    };

    MetricAtPoint m;
    m.x = Eigen::Map<const Vec>(x.data(), n);
    m.H = to_mat(H);
    m.G = to_mat(G);

    std::vector<std::vector<T>> GdHG(n);
    m.dG.resize(n);
    for (int k = 0; k < n; ++k) {
        GdHG[k] = mul(mul(G, dH[k]), G);
        m.dG[k] = -to_mat(GdHG[k]);
    }
    m.d2G.assign(n, std::vector<Mat>(n));
    T s = T(0);
    for (int k = 0; k < n; ++k)
        for (int q = 0; q < n; ++q) {
            std::vector<T> a = mul(mul(G, d2H[at(k, q)]), G);
            std::vector<T> b = mul(mul(GdHG[k], dH[q]), G);
            std::vector<T> c = mul(mul(GdHG[q], dH[k]), G);
            std::vector<T> d(n * n);
            for (int ij = 0; ij < n * n; ++ij) d[ij] = -a[ij] + b[ij] + c[ij];
            m.d2G[k][q] = to_mat(d);
            s += d[at(k, q)];
        }
    m.s = to_d(T(-0.5) * s);
    return m;
}

double SymplecticPotential::scalar_curvature(std::span<const double> x) const { return metric(x).s; }

double SymplecticPotential::scalar_curvature_fd(std::span<const double> x, double h) const {
    const int n = dim();
    std::vector<double> p(x.begin(), x.end());
    auto G_at = [&](int i, double di, int j, double dj) {
        std::vector<double> q = p;
        q[i] += di;
        q[j] += dj;
        return inverse_metric(q);
    };
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double d2;
            if (i == j) {
                d2 = (G_at(i, h, i, 0)(i, i) - 2.0 * inverse_metric(p)(i, i) + G_at(i, -h, i, 0)(i, i)) / (h * h);
            } else {
                d2 = (G_at(i, h, j, h)(i, j) - G_at(i, h, j, -h)(i, j) - G_at(i, -h, j, h)(i, j) +
                      G_at(i, -h, j, -h)(i, j)) /
                     (4.0 * h * h);
            }
            s += d2;
        }
    }
    return -0.5 * s;
}

double SymplecticPotential::phi(std::span<const double> x, std::span<const double> y) const {
    require_interior(y);
    const Vec lx = facet_values(x);
    const Vec ly = facet_values(y);
    double total = 0.0;
    for (Eigen::Index a = 0; a < lx.size(); ++a) {
        if (lx(a) < -1e-14) fail(ErrorKind::Precondition, kModule, "phi: first argument lies outside P");
        const double u = std::max(lx(a), 0.0);
        // 2·(Bregman divergence of ½ ℓ log ℓ) = ℓx log(ℓx/ℓy) − ℓx + ℓy.
        total += (u > 0.0 ? u * std::log(u / ly(a)) : 0.0) - u + ly(a);
    }
    if (!w_.is_zero()) {
        double bregman = w_(x) - w_(y);
        for (int i = 0; i < dim(); ++i) bregman -= dw_[i](y) * (x[i] - y[i]);
        total += 2.0 * bregman;
    }
    return total;
}

double SymplecticPotential::conorm_sq(const Vec& covector, std::span<const double> x) const {
    return covector.dot(inverse_metric(x) * covector);
}

double SymplecticPotential::conorm_sq(const AffineFunctional& f, std::span<const double> x) const {
    auto g = f.gradient();
    return conorm_sq(Eigen::Map<const Vec>(g.data(), static_cast<Eigen::Index>(g.size())), x);
}

}  // namespace toric
