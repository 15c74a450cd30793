#pragma once

#include "phasesep/energy.hpp"

#include <Eigen/SparseCore>

namespace phasesep::detail {

// Discrete Modica-Mortola value in matrix form, eps u^T K u + sum_v m_v W(u_v) / eps.
// Used inside the solver where the public per-triangle assembly is too slow
// and its resolution warning would repeat every iteration.
class MmFunctional {
public:
    MmFunctional(const TriMesh& mesh, const SurfaceMeasure& measure, double eps, const DoubleWell& w);

    double value(const Eigen::VectorXd& u) const;
    Eigen::VectorXd gradient(const Eigen::VectorXd& u) const;

private:
    Eigen::SparseMatrix<double> stiffness_;
    const SurfaceMeasure& measure_;
    double eps_;
    const DoubleWell& w_;
};

EnergyBreakdown modica_mortola_quiet(const TriMesh& mesh, const SurfaceMeasure& measure, const VertexField& field,
                                     double eps, const DoubleWell& w);

} // namespace phasesep::detail
