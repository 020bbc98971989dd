#include "tpgn/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "tpgn/errors.hpp"

namespace tpgn {

namespace {
std::size_t element_count(const Shape& shape) {
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}
}  // namespace

std::string shape_string(const Shape& shape) {
    std::string out = "(";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(shape[i]);
    }
    return out + ")";
}

Tensor::Tensor(Shape shape, double fill) : shape_(std::move(shape)) {
    TPGN_REQUIRE(shape_.size() <= 4, "tensor rank must be at most 4");
    for (auto d : shape_) TPGN_REQUIRE(d >= 1, "tensor dims must be positive: " + shape_string(shape_));
    data_.assign(element_count(shape_), fill);
}

Tensor::Tensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    TPGN_REQUIRE(shape_.size() <= 4, "tensor rank must be at most 4");
    for (auto d : shape_) TPGN_REQUIRE(d >= 1, "tensor dims must be positive: " + shape_string(shape_));
    TPGN_REQUIRE(data_.size() == element_count(shape_),
                 "data length does not match shape " + shape_string(shape_));
}

Tensor Tensor::scalar(double value) { return Tensor(Shape{}, std::vector<double>{value}); }

Tensor Tensor::vector(std::initializer_list<double> values) {
    return vector(std::vector<double>(values));
}

Tensor Tensor::vector(std::vector<double> values) {
    const auto n = values.size();
    return Tensor(Shape{n}, std::move(values));
}

Tensor Tensor::matrix(std::size_t rows, std::size_t cols, std::initializer_list<double> row_major) {
    return Tensor(Shape{rows, cols}, std::vector<double>(row_major));
}

Tensor Tensor::zeros_like(const Tensor& other) { return Tensor(other.shape()); }

std::size_t Tensor::dim(std::size_t axis) const {
    TPGN_REQUIRE(axis < shape_.size(), "axis out of range for shape " + shape_string(shape_));
    return shape_[axis];
}

double Tensor::item() const {
    TPGN_REQUIRE(data_.size() == 1, "item() needs a single-element tensor, got " + shape_string(shape_));
    return data_[0];
}

bool Tensor::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

void Tensor::fill(double value) noexcept { std::fill(data_.begin(), data_.end(), value); }

Tensor Tensor::reshaped(Shape shape) const {
    TPGN_REQUIRE(element_count(shape) == data_.size(),
                 "cannot reshape " + shape_string(shape_) + " to " + shape_string(shape));
    return Tensor(std::move(shape), data_);
}

double max_abs_diff(const Tensor& a, const Tensor& b) {
    TPGN_REQUIRE(a.shape() == b.shape(), "max_abs_diff shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double max_abs(const Tensor& a) {
    double m = 0.0;
    for (double x : a.data()) m = std::max(m, std::abs(x));
    return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
    TPGN_REQUIRE(a.size() == b.size(), "dot length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double l2_norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace tpgn
