#include "kgraph/functions.hpp"

#include "kgraph/common.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace kgraph {

ScalarFn::ScalarFn(Kind kind, std::vector<double> coeffs)
    : kind_(kind), coeffs_(std::move(coeffs)) {}

ScalarFn ScalarFn::constant(double c) { return ScalarFn(Kind::Constant, {c}); }
ScalarFn ScalarFn::identity() { return ScalarFn(Kind::Identity, {}); }
ScalarFn ScalarFn::sinh() { return ScalarFn(Kind::Sinh, {}); }
ScalarFn ScalarFn::cosh() { return ScalarFn(Kind::Cosh, {}); }

ScalarFn ScalarFn::polynomial(std::vector<double> coeffs) {
    if (coeffs.empty()) coeffs.push_back(0.0);
    return ScalarFn(Kind::Polynomial, std::move(coeffs));
}

namespace {

// Horner evaluation of the m-th derivative of sum c_k x^k.
double poly_deriv(const std::vector<double>& c, int m, double x) {
    double acc = 0.0;
    for (int k = static_cast<int>(c.size()) - 1; k >= m; --k) {
        double factor = 1.0;
        for (int j = 0; j < m; ++j) factor *= static_cast<double>(k - j);
        acc = acc * x + factor * c[static_cast<std::size_t>(k)];
    }
    return acc;
}

std::vector<double> parse_number_list(std::string_view text,
                                      std::string_view context) {
    std::vector<double> out;
    std::string buf(text);
    std::stringstream ss(buf);
    std::string item;
    while (std::getline(ss, item, ',')) {
        char* end = nullptr;
        const double v = std::strtod(item.c_str(), &end);
        if (end == item.c_str() || *end != '\0') {
            throw ConfigError("invalid number '" + item + "' in " +
                              std::string(context));
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw ConfigError("empty number list in " + std::string(context));
    }
    return out;
}

} // namespace

ScalarFn ScalarFn::parse(std::string_view text) {
    if (text == "identity") return identity();
    if (text == "sinh") return sinh();
    if (text == "cosh") return cosh();
    const auto colon = text.find(':');
    const std::string_view head = text.substr(0, colon);
    if (colon != std::string_view::npos) {
        const std::string_view args = text.substr(colon + 1);
        if (head == "const") {
            const auto v = parse_number_list(args, "const function");
            if (v.size() != 1) {
                throw ConfigError("const function takes one value");
            }
            return constant(v[0]);
        }
        if (head == "poly") {
            return polynomial(parse_number_list(args, "poly function"));
        }
    }
    throw ConfigError("unknown function '" + std::string(text) + "'");
}

std::string ScalarFn::spec() const {
    switch (kind_) {
    case Kind::Identity: return "identity";
    case Kind::Sinh: return "sinh";
    case Kind::Cosh: return "cosh";
    case Kind::Constant: return "const:" + fmt17(coeffs_[0]);
    case Kind::Polynomial: {
        std::string out = "poly:";
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            if (k > 0) out += ',';
            out += fmt17(coeffs_[k]);
        }
        return out;
    }
    }
    return "";
}

double ScalarFn::value(double x) const {
    switch (kind_) {
    case Kind::Constant: return coeffs_[0];
    case Kind::Identity: return x;
    case Kind::Sinh: return std::sinh(x);
    case Kind::Cosh: return std::cosh(x);
    case Kind::Polynomial: return poly_deriv(coeffs_, 0, x);
    }
    return 0.0;
}

double ScalarFn::d1(double x) const {
    switch (kind_) {
    case Kind::Constant: return 0.0;
    case Kind::Identity: return 1.0;
    case Kind::Sinh: return std::cosh(x);
    case Kind::Cosh: return std::sinh(x);
    case Kind::Polynomial: return poly_deriv(coeffs_, 1, x);
    }
    return 0.0;
}

double ScalarFn::d2(double x) const {
    switch (kind_) {
    case Kind::Constant:
    case Kind::Identity: return 0.0;
    case Kind::Sinh: return std::sinh(x);
    case Kind::Cosh: return std::cosh(x);
    case Kind::Polynomial: return poly_deriv(coeffs_, 2, x);
    }
    return 0.0;
}

double ScalarFn::d3(double x) const {
    switch (kind_) {
    case Kind::Constant:
    case Kind::Identity: return 0.0;
    case Kind::Sinh: return std::cosh(x);
    case Kind::Cosh: return std::sinh(x);
    case Kind::Polynomial: return poly_deriv(coeffs_, 3, x);
    }
    return 0.0;
}

} // namespace kgraph
