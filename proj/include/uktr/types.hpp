#pragma once

#include <Eigen/Dense>
#include <vector>

namespace uktr {

using dvec = Eigen::VectorXd;
using dmat = Eigen::MatrixXd;
using PointList = std::vector<dvec>;

// Coordinate-major storage for a batch of points: row j holds coordinate j of
// all q points contiguously, which is the layout the kernels iterate over.
struct PointBlock {
    int n = 0;
    int q = 0;
    std::vector<double> data;

    static PointBlock from(const PointList& pts) {
        PointBlock b;
        b.q = static_cast<int>(pts.size());
        b.n = b.q > 0 ? static_cast<int>(pts.front().size()) : 0;
        b.data.resize(static_cast<size_t>(b.n) * b.q);
        for (int j = 0; j < b.n; ++j)
            for (int k = 0; k < b.q; ++k)
                b.data[static_cast<size_t>(j) * b.q + k] = pts[k][j];
        return b;
    }

    const double* row(int j) const { return data.data() + static_cast<size_t>(j) * q; }
};

} // namespace uktr
