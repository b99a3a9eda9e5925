/*
   Copyright 2026 The phasecool Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>

#include <Eigen/Dense>

#include "phasecool/error.hpp"
#include "phasecool/lattice.hpp"

namespace phasecool {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

enum class Picture { interaction, schrodinger };

/// Internal level selector: ground, excited, or their sum.
enum class Level { g, e, total };

inline const char* to_string(Level level)
{
    switch (level) {
    case Level::g: return "g";
    case Level::e: return "e";
    case Level::total: return "total";
    }
    return "?";
}

/// Two-level x momentum density matrix. The full 2N x 2N matrix is stored
/// with the ground block first: [[rho_gg, rho_ge], [rho_eg, rho_ee]], each
/// block indexed (row p', column p) on the momentum grid.
class DensityMatrix {
public:
    DensityMatrix(MomentumGrid grid, ComplexMatrix full, Picture picture, double time)
        : grid_(grid), m_(std::move(full)), picture_(picture), time_(time)
    {
        const auto n = static_cast<Eigen::Index>(2 * grid_.size());
        if (m_.rows() != n || m_.cols() != n) {
            fail(ErrorKind::invalid_parameter, "density matrix shape does not match the grid");
        }
    }

    static DensityMatrix zero(const MomentumGrid& grid, Picture picture = Picture::interaction)
    {
        const auto n = static_cast<Eigen::Index>(2 * grid.size());
        return DensityMatrix(grid, ComplexMatrix::Zero(n, n), picture, 0.0);
    }

    const MomentumGrid& grid() const { return grid_; }
    Eigen::Index n() const { return static_cast<Eigen::Index>(grid_.size()); }

    const ComplexMatrix& matrix() const { return m_; }
    ComplexMatrix& matrix() { return m_; }

    /// Block rho_{ij} with i, j in {0 = g, 1 = e}.
    auto block(int i, int j) const { return m_.block(i * n(), j * n(), n(), n()); }
    auto block(int i, int j) { return m_.block(i * n(), j * n(), n(), n()); }

    Picture picture() const { return picture_; }
    double time() const { return time_; }
    void set_time(double t) { time_ = t; }
    void set_picture(Picture p) { picture_ = p; }

    double trace() const { return m_.trace().real(); }

    double hermiticity_residue() const
    {
        double worst = 0.0;
        const Eigen::Index d = m_.rows();
        for (Eigen::Index c = 0; c < d; ++c) {
            for (Eigen::Index r = c; r < d; ++r) {
                worst = std::max(worst, std::norm(m_(r, c) - std::conj(m_(c, r))));
            }
        }
        return std::sqrt(worst);
    }

    /// Largest population sitting on the first or last lattice point of
    /// either internal block.
    double edge_population() const
    {
        const Eigen::Index last = n() - 1;
        double worst = 0.0;
        for (int level = 0; level < 2; ++level) {
            const Eigen::Index o = level * n();
            worst = std::max({worst, std::abs(m_(o, o)), std::abs(m_(o + last, o + last))});
        }
        return worst;
    }

    bool operator==(const DensityMatrix& other) const
    {
        return grid_ == other.grid_ && picture_ == other.picture_ && time_ == other.time_ &&
               m_ == other.m_;
    }

private:
    MomentumGrid grid_;
    ComplexMatrix m_;
    Picture picture_;
    double time_;
};

}  // namespace phasecool
