#include "onebit/robust_agg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

namespace onebit {

namespace {

constexpr std::array<std::pair<AggregatorId, std::string_view>, 4> kNames{{
    {AggregatorId::empirical_mean, "empirical-mean"},
    {AggregatorId::coordinatewise_trimmed, "coordinatewise-trimmed"},
    {AggregatorId::geometric_median, "geometric-median"},
    {AggregatorId::iterative_filter, "iterative-filter"},
}};

void check_rows(const Eigen::Ref<const Matrix>& rows, double eta_hint) {
    if (rows.rows() < 1 || rows.cols() < 1) throw std::invalid_argument("aggregate: rows must be nonempty");
    if (!(eta_hint >= 0.0 && eta_hint < 0.5)) throw std::invalid_argument("aggregate: eta_hint must lie in [0, 1/2)");
}

double median_in_place(std::vector<double>& v) {
    const auto mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1) return upper;
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

double objective(const Eigen::Ref<const Matrix>& rows, const Vector& y) {
    return (rows.rowwise() - y.transpose()).rowwise().norm().sum();
}

}  // namespace

AggregatorId parse_aggregator(std::string_view name) {
    for (const auto& [id, label] : kNames)
        if (label == name) return id;
    throw std::invalid_argument("unknown aggregator: " + std::string(name));
}

std::string_view aggregator_name(AggregatorId id) {
    for (const auto& [key, label] : kNames)
        if (key == id) return label;
    throw std::invalid_argument("unknown aggregator id");
}

const std::vector<AggregatorId>& all_aggregators() {
    static const std::vector<AggregatorId> ids{AggregatorId::empirical_mean, AggregatorId::coordinatewise_trimmed,
                                               AggregatorId::geometric_median, AggregatorId::iterative_filter};
    return ids;
}

Vector aggregate(AggregatorId id, const Eigen::Ref<const Matrix>& rows, double eta_hint) {
    check_rows(rows, eta_hint);
    switch (id) {
        case AggregatorId::empirical_mean:
            return column_mean(rows);
        case AggregatorId::coordinatewise_trimmed:
            return coordinatewise_trimmed_mean(rows, eta_hint);
        case AggregatorId::geometric_median:
            return geometric_median(rows).point;
        case AggregatorId::iterative_filter:
            return iterative_filter_mean(rows, eta_hint);
    }
    throw std::invalid_argument("unknown aggregator id");
}

Vector coordinatewise_trimmed_mean(const Eigen::Ref<const Matrix>& rows, double eta_hint) {
    check_rows(rows, eta_hint);
    const auto n = rows.rows();
    const double slack = 1.0 / std::sqrt(static_cast<double>(n));
    auto trim = static_cast<Eigen::Index>(std::ceil((eta_hint + slack) * static_cast<double>(n)));
    trim = std::min(trim, (n - 1) / 2);

    Vector out(rows.cols());
    std::vector<double> column(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < rows.cols(); ++j) {
        for (Eigen::Index i = 0; i < n; ++i) column[static_cast<std::size_t>(i)] = rows(i, j);
        std::sort(column.begin(), column.end());
        double sum = 0.0;
        for (Eigen::Index i = trim; i < n - trim; ++i) sum += column[static_cast<std::size_t>(i)];
        out(j) = sum / static_cast<double>(n - 2 * trim);
    }
    return out;
}

Vector coordinatewise_median(const Eigen::Ref<const Matrix>& rows) {
    check_rows(rows, 0.0);
    Vector out(rows.cols());
    std::vector<double> column(static_cast<std::size_t>(rows.rows()));
    for (Eigen::Index j = 0; j < rows.cols(); ++j) {
        for (Eigen::Index i = 0; i < rows.rows(); ++i) column[static_cast<std::size_t>(i)] = rows(i, j);
        out(j) = median_in_place(column);
    }
    return out;
}

GeometricMedianResult geometric_median(const Eigen::Ref<const Matrix>& rows, const GeometricMedianOptions& options) {
    check_rows(rows, 0.0);
    const auto n = rows.rows();
    GeometricMedianResult result;
    Vector y = column_mean(rows);
    result.objective.push_back(objective(rows, y));

    Vector distances(n);
    for (int it = 0; it < options.max_iterations; ++it) {
        const double scale = std::max(1.0, y.norm());
        const double collision = 1e-12 * scale;
        distances = (rows.rowwise() - y.transpose()).rowwise().norm();

        double coincident = 0.0;
        double inv_sum = 0.0;
        Vector weighted = Vector::Zero(rows.cols());
        for (Eigen::Index i = 0; i < n; ++i) {
            if (distances(i) <= collision) {
                coincident += 1.0;
                continue;
            }
            const double w = 1.0 / distances(i);
            inv_sum += w;
            weighted += w * rows.row(i).transpose();
        }
        if (inv_sum == 0.0) {  // every row sits on y
            result.converged = true;
            break;
        }

        const Vector t = weighted / inv_sum;
        Vector next = t;
        if (coincident > 0.0) {
            // Vardi-Zhang: y is optimal when the pull of the other rows is at most
            // the mass sitting on y; otherwise move partway toward t.
            const double pull = (inv_sum * (t - y)).norm();
            if (pull <= coincident) {
                result.converged = true;
                break;
            }
            const double ratio = coincident / pull;
            next = (1.0 - ratio) * t + ratio * y;
        }

        const double step = (next - y).norm();
        y = std::move(next);
        result.iterations = it + 1;
        result.objective.push_back(objective(rows, y));
        if (step <= options.tolerance * scale) {
            result.converged = true;
            break;
        }
    }
    result.point = std::move(y);
    return result;
}

Vector iterative_filter_mean(const Eigen::Ref<const Matrix>& rows, double eta_hint) {
    check_rows(rows, eta_hint);
    const auto n = rows.rows();
    auto removals = static_cast<Eigen::Index>(std::ceil(eta_hint * static_cast<double>(n)));
    removals = std::min(removals, n - 1);

    std::vector<Eigen::Index> kept(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) kept[static_cast<std::size_t>(i)] = i;

    std::vector<double> column;
    Vector center(rows.cols());
    for (Eigen::Index r = 0; r < removals; ++r) {
        for (Eigen::Index j = 0; j < rows.cols(); ++j) {
            column.clear();
            for (auto i : kept) column.push_back(rows(i, j));
            center(j) = median_in_place(column);
        }
        std::size_t worst = 0;
        double worst_dist = -1.0;
        for (std::size_t k = 0; k < kept.size(); ++k) {
            const double dist = (rows.row(kept[k]) - center.transpose()).squaredNorm();
            if (dist > worst_dist) {
                worst_dist = dist;
                worst = k;
            }
        }
        kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(worst));
    }
    Vector sum = Vector::Zero(rows.cols());
    for (auto i : kept) sum += rows.row(i).transpose();
    return sum / static_cast<double>(kept.size());
}

}  // namespace onebit
