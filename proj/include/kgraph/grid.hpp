#pragma once

#include "kgraph/common.hpp"
#include "kgraph/geometry.hpp"

#include <vector>

namespace kgraph {

enum class GridKind { Radial, Polar, Cartesian };

// Structured grid over a leaf domain.  Nodes are stored row-major with the
// radial (or x) index outermost: idx = i * mt + j.
//
// Disc grids stagger the pole: ring i sits at r = (i + 1/2) dr with
// dr = r0 / (m - 1/2), so no node coincides with the coordinate pole, the
// spacing is uniform all the way to the last ring, and that ring lies
// exactly on the boundary circle.  Annulus grids are vertex-centered with
// both end rings on the boundary; Cartesian grids are vertex-centered with
// the four edges on the boundary.  Radial grids are the one-dimensional
// restriction (mt = 1) for rotationally symmetric problems.
class Grid {
public:
    static Grid radial(const Domain& domain, int m_r);
    static Grid polar(const Domain& domain, int m_r, int m_theta);
    static Grid cartesian(const Domain& domain, int m_x, int m_y);

    GridKind kind() const { return kind_; }
    int mr() const { return mr_; }
    int mt() const { return mt_; }
    double dr() const { return dr_; }
    double dt() const { return dt_; }
    bool has_pole() const { return has_pole_; }
    bool periodic() const { return kind_ == GridKind::Polar; }

    std::size_t num_nodes() const {
        return static_cast<std::size_t>(mr_) * static_cast<std::size_t>(mt_);
    }
    int index(int i, int j) const { return i * mt_ + j; }
    int wrap_j(int j) const {
        if (!periodic()) return j;
        const int m = mt_;
        return ((j % m) + m) % m;
    }

    // Radial/x coordinate of row i and angular/y coordinate of column j.
    double coord_a(int i) const { return ca_[static_cast<std::size_t>(i)]; }
    double coord_b(int j) const { return cb_[static_cast<std::size_t>(j)]; }
    LeafPoint point(int idx) const {
        return {ca_[static_cast<std::size_t>(idx / mt_)],
                cb_[static_cast<std::size_t>(idx % mt_)]};
    }

    bool boundary_row(int i) const;
    bool boundary_col(int j) const;
    bool is_boundary(int idx) const {
        return boundary_row(idx / mt_) || boundary_col(idx % mt_);
    }

    std::vector<int> boundary_nodes() const;
    std::vector<int> interior_nodes() const;

private:
    Grid() = default;

    GridKind kind_ = GridKind::Radial;
    int mr_ = 0, mt_ = 1;
    double dr_ = 0.0, dt_ = 0.0;
    bool has_pole_ = false;
    bool annulus_ = false;
    std::vector<double> ca_, cb_;
};

enum class FieldTag { Generic, Height, Curvature, Slope, Residual };

// Nodal scalar field bound to a grid.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const Grid& grid, FieldTag tag = FieldTag::Generic,
                         double fill = 0.0);

    const Grid& grid() const { return *grid_; }
    FieldTag tag() const { return tag_; }

    double& operator[](std::size_t i) { return v_[i]; }
    double operator[](std::size_t i) const { return v_[i]; }
    std::size_t size() const { return v_.size(); }
    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }
    const std::vector<double>& values() const { return v_; }

    double max_abs() const;
    bool all_finite() const;

private:
    const Grid* grid_ = nullptr;
    FieldTag tag_ = FieldTag::Generic;
    std::vector<double> v_;
};

} // namespace kgraph
