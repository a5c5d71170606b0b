#ifndef CVEPR_TYPES_HPP
#define CVEPR_TYPES_HPP

#include <Eigen/Dense>

#include <complex>
#include <initializer_list>

namespace cvepr {

using Real = double;
using Complex = std::complex<Real>;

using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;
using CVecX = Eigen::VectorXcd;
using CMatX = Eigen::MatrixXcd;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<Real, 6, 1>;
using Mat6 = Eigen::Matrix<Real, 6, 6>;

/// Normalizability classification of a regularised ket.
enum class Regime { formal, singular, normalizable };

const char* to_string(Regime regime);

/// Regulator parameter s of the EPR-type states. Valid for s > 1.
///
/// Bipartite states are normalizable for every s > 1.  Tripartite states are
/// normalizable for s > sqrt(2), singular at s = sqrt(2) (the coupling
/// spectral norm 2/s^2 reaches 1) and formal below it.
struct Regulator {
    Real s;

    explicit Regulator(Real value);

    Regime regime(int modes) const;
};

/// Squeezing parameter r >= 0 of NOPA-type states.
struct SqueezingParam {
    Real r;

    explicit SqueezingParam(Real value);
};

/// Phase-space point: one complex displacement amplitude per mode, with the
/// quadrature convention alpha_j = (x_j + i p_j) / sqrt(2).
using PhasePoint = CVecX;

PhasePoint phase_point(std::initializer_list<Complex> amps);

/// Phase point from interleaved quadratures (x1, p1, x2, p2, ...).
PhasePoint phase_point_from_quadratures(const VecX& xp);

/// Interleaved quadratures (x1, p1, ...) of a phase point.
VecX quadratures(const PhasePoint& pt);

}  // namespace cvepr

#endif  // CVEPR_TYPES_HPP
