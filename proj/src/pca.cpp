#include "lyricsim/pca.hpp"

#include "lyricsim/error.hpp"
#include "lyricsim/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace lyricsim {

namespace {

// Column-major d x b block; column j is [j*d, (j+1)*d).
struct Block {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Block(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
    double* col(std::size_t j) { return data.data() + j * rows; }
    const double* col(std::size_t j) const { return data.data() + j * rows; }
};

double dot(const double* a, const double* b, std::size_t n)
{
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void fill_random(double* v, std::size_t n, Rng& rng)
{
    for (std::size_t i = 0; i < n; ++i) v[i] = rng.uniform(-1.0, 1.0);
}

// Modified Gram-Schmidt with one re-orthogonalization pass. Columns whose
// remaining norm falls below `floor` are replaced by fresh random directions.
void orthonormalize(Block& q, Rng& rng)
{
    double scale = 0.0;
    for (std::size_t j = 0; j < q.cols; ++j) {
        scale = std::max(scale, std::sqrt(dot(q.col(j), q.col(j), q.rows)));
    }
    const double floor = std::max(scale, 1.0) * 1e-12;

    for (std::size_t j = 0; j < q.cols; ++j) {
        double* v = q.col(j);
        for (int attempt = 0;; ++attempt) {
            const double before = std::sqrt(dot(v, v, q.rows));
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t i = 0; i < j; ++i) {
                    const double* u = q.col(i);
                    const double proj = dot(u, v, q.rows);
                    for (std::size_t r = 0; r < q.rows; ++r) v[r] -= proj * u[r];
                }
            }
            const double norm = std::sqrt(dot(v, v, q.rows));
            if (norm > floor && norm > 1e-10 * before) {
                for (std::size_t r = 0; r < q.rows; ++r) v[r] /= norm;
                break;
            }
            if (attempt > 32) {
                throw Error(ErrorCode::ConvergenceFailure, "cannot extend orthonormal basis");
            }
            fill_random(v, q.rows, rng);
        }
    }
}

// out = c * q where c is symmetric d x d row-major.
void multiply(const std::vector<double>& c, const Block& q, Block& out)
{
    const std::size_t d = q.rows;
    for (std::size_t j = 0; j < q.cols; ++j) {
        const double* v = q.col(j);
        double* o = out.col(j);
        for (std::size_t r = 0; r < d; ++r) {
            o[r] = dot(c.data() + r * d, v, d);
        }
    }
}

} // namespace

SymmetricEigen jacobi_eigen(std::vector<double> a, std::size_t n)
{
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += a[i * n + j] * a[i * n + j];
        return std::sqrt(s);
    };
    double total = 0.0;
    for (double x : a) total += x * x;
    total = std::sqrt(total);

    for (int sweep = 0; sweep < 100 && off_norm() > 1e-15 * std::max(total, 1e-300); ++sweep) {
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (std::abs(apq) < 1e-300) continue;
                const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double cs = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * cs;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k * n + p];
                    const double akq = a[k * n + q];
                    a[k * n + p] = cs * akp - sn * akq;
                    a[k * n + q] = sn * akp + cs * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p * n + k];
                    const double aqk = a[q * n + k];
                    a[p * n + k] = cs * apk - sn * aqk;
                    a[q * n + k] = sn * apk + cs * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v[k * n + p];
                    const double vkq = v[k * n + q];
                    v[k * n + p] = cs * vkp - sn * vkq;
                    v[k * n + q] = sn * vkp + cs * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a[i * n + i] > a[j * n + j]; });

    SymmetricEigen out;
    out.values.resize(n);
    out.vectors.assign(n * n, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
        out.values[c] = a[order[c] * n + order[c]];
        for (std::size_t r = 0; r < n; ++r) out.vectors[r * n + c] = v[r * n + order[c]];
    }
    return out;
}

PrincipalComponents fit_principal_components(const std::vector<std::vector<double>>& rows, const PcaOptions& options)
{
    const std::size_t n = rows.size();
    const std::size_t k = options.dims;
    if (k == 0) {
        throw Error(ErrorCode::InsufficientData, "dims must be positive");
    }
    if (n < k + 1) {
        throw Error(ErrorCode::InsufficientData,
                    "need at least " + std::to_string(k + 1) + " samples, got " + std::to_string(n));
    }
    const std::size_t d = rows.front().size();
    if (d < k) {
        throw Error(ErrorCode::InsufficientData,
                    "feature space has " + std::to_string(d) + " dimensions, fewer than " + std::to_string(k));
    }
    for (const auto& r : rows) {
        if (r.size() != d) throw Error(ErrorCode::DimensionMismatch, "ragged PCA input");
    }

    PrincipalComponents pc;
    pc.mean.assign(d, 0.0);
    for (const auto& r : rows)
        for (std::size_t j = 0; j < d; ++j) pc.mean[j] += r[j];
    for (auto& m : pc.mean) m /= static_cast<double>(n);

    // C q is applied either through the explicit d x d sample covariance or,
    // when there are fewer samples than dimensions, as Xc^T (Xc q) / (n - 1)
    const double denom = static_cast<double>(n - 1);
    const bool low_rank = n < d;
    std::vector<double> cov;
    std::vector<double> centered_rows;
    if (low_rank) {
        centered_rows.resize(n * d);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < d; ++j) centered_rows[i * d + j] = rows[i][j] - pc.mean[j];
    } else {
        cov.assign(d * d, 0.0);
        std::vector<double> centered(d);
        for (const auto& r : rows) {
            for (std::size_t j = 0; j < d; ++j) centered[j] = r[j] - pc.mean[j];
            for (std::size_t i = 0; i < d; ++i) {
                const double ci = centered[i];
                if (ci == 0.0) continue;
                double* row = cov.data() + i * d;
                for (std::size_t j = i; j < d; ++j) row[j] += ci * centered[j];
            }
        }
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = i; j < d; ++j) {
                cov[i * d + j] /= denom;
                cov[j * d + i] = cov[i * d + j];
            }
        }
    }
    std::vector<double> scratch(n);
    auto apply = [&](const Block& in, Block& out) {
        if (!low_rank) {
            multiply(cov, in, out);
            return;
        }
        for (std::size_t j = 0; j < in.cols; ++j) {
            const double* v = in.col(j);
            double* o = out.col(j);
            for (std::size_t i = 0; i < n; ++i) scratch[i] = dot(centered_rows.data() + i * d, v, d);
            std::fill(o, o + d, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                const double si = scratch[i] / denom;
                const double* xr = centered_rows.data() + i * d;
                for (std::size_t r = 0; r < d; ++r) o[r] += si * xr[r];
            }
        }
    };

    const std::size_t b = std::min(d, k + options.oversample);
    Rng rng(options.seed);
    Block q(d, b);
    fill_random(q.data.data(), q.data.size(), rng);
    orthonormalize(q, rng);

    Block z(d, b);
    Block ritz(d, b);
    Block cz(d, b);
    std::vector<double> t(b * b);

    for (std::size_t iter = 1; iter <= options.max_iterations; ++iter) {
        apply(q, z);
        for (std::size_t i = 0; i < b; ++i)
            for (std::size_t j = i; j < b; ++j) {
                const double v = 0.5 * (dot(q.col(i), z.col(j), d) + dot(q.col(j), z.col(i), d));
                t[i * b + j] = v;
                t[j * b + i] = v;
            }
        const auto eig = jacobi_eigen(t, b);

        // Ritz vectors V = Q W and their images C V = Z W
        for (std::size_t c = 0; c < b; ++c) {
            double* v = ritz.col(c);
            double* cv = cz.col(c);
            std::fill(v, v + d, 0.0);
            std::fill(cv, cv + d, 0.0);
            for (std::size_t s = 0; s < b; ++s) {
                const double w = eig.vectors[s * b + c];
                if (w == 0.0) continue;
                const double* qs = q.col(s);
                const double* zs = z.col(s);
                for (std::size_t r = 0; r < d; ++r) {
                    v[r] += w * qs[r];
                    cv[r] += w * zs[r];
                }
            }
        }

        const double lead = std::max(eig.values.front(), 0.0);
        const double bound = options.tolerance * std::max(lead, 1e-300);
        bool converged = true;
        for (std::size_t c = 0; c < k && converged; ++c) {
            const double theta = eig.values[c];
            const double* v = ritz.col(c);
            const double* cv = cz.col(c);
            double res = 0.0;
            for (std::size_t r = 0; r < d; ++r) {
                const double e = cv[r] - theta * v[r];
                res += e * e;
            }
            converged = std::sqrt(res) <= bound || lead == 0.0;
        }

        if (converged) {
            pc.iterations = iter;
            pc.components.resize(k);
            pc.explained_variance.resize(k);
            for (std::size_t c = 0; c < k; ++c) {
                std::vector<double> comp(ritz.col(c), ritz.col(c) + d);
                const double norm = std::sqrt(dot(comp.data(), comp.data(), d));
                std::size_t arg = 0;
                for (std::size_t r = 0; r < d; ++r) {
                    comp[r] /= norm;
                    if (std::abs(comp[r]) > std::abs(comp[arg])) arg = r;
                }
                if (comp[arg] < 0) {
                    for (auto& x : comp) x = -x;
                }
                pc.components[c] = std::move(comp);
                pc.explained_variance[c] = std::max(eig.values[c], 0.0);
            }
            return pc;
        }

        // next power step from the Ritz images
        q.data = cz.data;
        orthonormalize(q, rng);
    }

    throw Error(ErrorCode::ConvergenceFailure, "PCA subspace iteration did not reach tolerance " +
                                                   std::to_string(options.tolerance) + " within " +
                                                   std::to_string(options.max_iterations) + " iterations");
}

} // namespace lyricsim
