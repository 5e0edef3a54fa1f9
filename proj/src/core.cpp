#include "onebit/core.hpp"

namespace onebit {

SampleMatrix::SampleMatrix(Matrix data) : data_(std::move(data)) {
    if (data_.rows() < 1 || data_.cols() < 1)
        throw std::invalid_argument("sample matrix needs n >= 1 and d >= 1");
    if (!data_.allFinite()) throw std::invalid_argument("sample matrix has non-finite entries");
}

SampleMatrix SampleMatrix::column(std::span<const double> values) {
    Matrix m(static_cast<Eigen::Index>(values.size()), 1);
    for (std::size_t i = 0; i < values.size(); ++i) m(static_cast<Eigen::Index>(i), 0) = values[i];
    return SampleMatrix(std::move(m));
}

SampleMatrix SampleMatrix::select_rows(std::span<const Eigen::Index> index) const {
    Matrix out(static_cast<Eigen::Index>(index.size()), d());
    for (std::size_t k = 0; k < index.size(); ++k) {
        if (index[k] < 0 || index[k] >= n()) throw std::out_of_range("row index out of range");
        out.row(static_cast<Eigen::Index>(k)) = data_.row(index[k]);
    }
    return SampleMatrix(std::move(out));
}

SampleMatrix SampleMatrix::middle_rows(Eigen::Index start, Eigen::Index count) const {
    if (start < 0 || count < 1 || start + count > n()) throw std::out_of_range("row range out of bounds");
    return SampleMatrix(data_.middleRows(start, count));
}

BitMatrix::BitMatrix(Bits bits) : bits_(std::move(bits)) {
    if ((bits_.array().abs() != std::int8_t{1}).any())
        throw std::invalid_argument("bit matrix entries must be -1 or +1");
}

void BitMatrix::set(Eigen::Index i, Eigen::Index j, std::int8_t value) {
    if (value != 1 && value != -1) throw std::invalid_argument("bit must be -1 or +1");
    bits_(i, j) = value;
}

}  // namespace onebit
