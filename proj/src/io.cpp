#include "kerrpair/io.hpp"

#include <cmath>
#include <cstdio>

namespace kerrpair {

std::string format_sig(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

double round_sig(double value) {
    if (!std::isfinite(value))
        return value;
    return std::strtod(format_sig(value).c_str(), nullptr);
}

Json matrix_to_json(const Matrix& m) {
    Json re = Json::array(), im = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json rrow = Json::array(), irow = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            rrow.push_back(round_sig(m(i, j).real()));
            irow.push_back(round_sig(m(i, j).imag()));
        }
        re.push_back(std::move(rrow));
        im.push_back(std::move(irow));
    }
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"real", std::move(re)}, {"imag", std::move(im)}};
}

Matrix matrix_from_json(const Json& j) {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    Matrix m(rows, cols);
    const auto& re = j.at("real");
    const auto& im = j.at("imag");
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index c = 0; c < cols; ++c)
            m(i, c) = Complex(re.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(c)).get<double>(),
                              im.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(c)).get<double>());
    return m;
}

void round_json_numbers(Json& j) {
    if (j.is_number_float()) {
        j = round_sig(j.get<double>());
    } else if (j.is_object() || j.is_array()) {
        for (auto& el : j)
            round_json_numbers(el);
    }
}

} // namespace kerrpair
