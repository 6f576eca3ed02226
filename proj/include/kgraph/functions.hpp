#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace kgraph {

// Smooth real function of one variable with analytic derivatives up to third
// order.  Only a fixed set of named shapes is supported; everything the
// solver needs (warping profiles, rotational symmetry profiles) is built from
// these, so no symbolic differentiation is involved and derivative values are
// exact up to rounding.
class ScalarFn {
public:
    enum class Kind { Constant, Identity, Sinh, Cosh, Polynomial };

    static ScalarFn constant(double c);
    static ScalarFn identity();
    static ScalarFn sinh();
    static ScalarFn cosh();
    // coeffs[k] multiplies x^k
    static ScalarFn polynomial(std::vector<double> coeffs);

    // Text form used in config files and reports:
    //   "identity" | "sinh" | "cosh" | "const:<v>" | "poly:<c0>,<c1>,..."
    static ScalarFn parse(std::string_view text);
    std::string spec() const;

    double value(double x) const;
    double d1(double x) const;
    double d2(double x) const;
    double d3(double x) const;

    Kind kind() const { return kind_; }

private:
    ScalarFn(Kind kind, std::vector<double> coeffs);

    Kind kind_;
    std::vector<double> coeffs_;
};

} // namespace kgraph
