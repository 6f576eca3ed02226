#include "kgraph/grid.hpp"

#include "kgraph/kernels.hpp"

#include <cmath>

namespace kgraph {

namespace {

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

void check_size(int m, const char* what) {
    if (m < 8) {
        throw ConfigError(std::string(what) + " must be at least 8, got " +
                          std::to_string(m));
    }
}

} // namespace

Grid Grid::radial(const Domain& domain, int m_r) {
    check_size(m_r, "radial grid size");
    Grid g;
    g.kind_ = GridKind::Radial;
    g.mr_ = m_r;
    g.mt_ = 1;
    g.cb_ = {0.0};
    g.dt_ = 0.0;
    switch (domain.kind()) {
    case DomainKind::Disc: {
        g.has_pole_ = true;
        g.dr_ = domain.r0() / (m_r - 0.5);
        g.ca_.resize(static_cast<std::size_t>(m_r));
        for (int i = 0; i < m_r; ++i) g.ca_[i] = (i + 0.5) * g.dr_;
        g.ca_.back() = domain.r0();
        break;
    }
    case DomainKind::Annulus: {
        g.annulus_ = true;
        g.dr_ = (domain.r_outer() - domain.r_inner()) / (m_r - 1);
        g.ca_.resize(static_cast<std::size_t>(m_r));
        for (int i = 0; i < m_r; ++i) {
            g.ca_[i] = domain.r_inner() + i * g.dr_;
        }
        g.ca_.back() = domain.r_outer();
        break;
    }
    case DomainKind::Rectangle:
        throw ConfigError("radial grids require a disc or annulus domain");
    }
    return g;
}

Grid Grid::polar(const Domain& domain, int m_r, int m_theta) {
    check_size(m_theta, "angular grid size");
    Grid g = radial(domain, m_r);
    g.kind_ = GridKind::Polar;
    g.mt_ = m_theta;
    g.dt_ = kTwoPi / m_theta;
    g.cb_.resize(static_cast<std::size_t>(m_theta));
    for (int j = 0; j < m_theta; ++j) g.cb_[j] = j * g.dt_;
    return g;
}

Grid Grid::cartesian(const Domain& domain, int m_x, int m_y) {
    if (domain.kind() != DomainKind::Rectangle) {
        throw ConfigError("cartesian grids require a rectangle domain");
    }
    check_size(m_x, "x grid size");
    check_size(m_y, "y grid size");
    Grid g;
    g.kind_ = GridKind::Cartesian;
    g.mr_ = m_x;
    g.mt_ = m_y;
    g.dr_ = (domain.x1() - domain.x0()) / (m_x - 1);
    g.dt_ = (domain.y1() - domain.y0()) / (m_y - 1);
    g.ca_.resize(static_cast<std::size_t>(m_x));
    g.cb_.resize(static_cast<std::size_t>(m_y));
    for (int i = 0; i < m_x; ++i) g.ca_[i] = domain.x0() + i * g.dr_;
    for (int j = 0; j < m_y; ++j) g.cb_[j] = domain.y0() + j * g.dt_;
    g.ca_.back() = domain.x1();
    g.cb_.back() = domain.y1();
    return g;
}

bool Grid::boundary_row(int i) const {
    if (i == mr_ - 1) return true;
    if (i == 0) return annulus_ || kind_ == GridKind::Cartesian;
    return false;
}

bool Grid::boundary_col(int j) const {
    if (kind_ != GridKind::Cartesian) return false;
    return j == 0 || j == mt_ - 1;
}

std::vector<int> Grid::boundary_nodes() const {
    std::vector<int> out;
    for (std::size_t idx = 0; idx < num_nodes(); ++idx) {
        if (is_boundary(static_cast<int>(idx))) {
            out.push_back(static_cast<int>(idx));
        }
    }
    return out;
}

std::vector<int> Grid::interior_nodes() const {
    std::vector<int> out;
    for (std::size_t idx = 0; idx < num_nodes(); ++idx) {
        if (!is_boundary(static_cast<int>(idx))) {
            out.push_back(static_cast<int>(idx));
        }
    }
    return out;
}

ScalarField::ScalarField(const Grid& grid, FieldTag tag, double fill)
    : grid_(&grid), tag_(tag), v_(grid.num_nodes(), fill) {}

double ScalarField::max_abs() const {
    return kernels::active_ops().max_abs(v_.data(), v_.size());
}

bool ScalarField::all_finite() const {
    for (double x : v_) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

} // namespace kgraph
