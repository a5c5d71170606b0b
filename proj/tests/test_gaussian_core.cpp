#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cvepr/gaussian_core.hpp"

#include <cmath>
#include <random>

using namespace cvepr;

namespace {

// Bipartite normalization by the number-basis series: exp(f adag bdag)|00>
// has coefficients f^n on |n,n>, so 1/norm^2 = sum_n f^(2n).
double norm_from_fock_series(double s, int terms = 400) {
    const double q = std::pow(s, -4.0);
    double series = 0, term = 1;
    for (int n = 0; n < terms; ++n) {
        series += term;
        term *= q;
    }
    return 1.0 / std::sqrt(series);
}

}  // namespace

TEST_CASE("regulator validation and regimes") {
    CHECK_THROWS_AS(Regulator(1.0), std::invalid_argument);
    CHECK_THROWS_AS(Regulator(0.5), std::invalid_argument);

    CHECK(Regulator(1.2).regime(2) == Regime::normalizable);
    CHECK(Regulator(5.0).regime(2) == Regime::normalizable);
    CHECK(Regulator(1.2).regime(3) == Regime::formal);
    CHECK(Regulator(std::sqrt(2.0)).regime(3) == Regime::singular);
    CHECK(Regulator(1.5).regime(3) == Regime::normalizable);

    CHECK_THROWS_AS(SqueezingParam(-0.1), std::invalid_argument);
}

TEST_CASE("bipartite EPR-type ket") {
    const GaussianKetSpec spec = epr_ket(2, Regulator(2.0), CVecX::Zero(2));
    CHECK(spec.coupling(0, 1).real() == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(spec.coupling(0, 0) == Complex(0, 0));
    CHECK(spec.drive.cwiseAbs().maxCoeff() == 0.0);
    CHECK(spec.scalar_prefactor == 1.0);
    CHECK(spec.regime == Regime::normalizable);

    CHECK(spec.norm == doctest::Approx(std::sqrt(15.0 / 16.0)).epsilon(1e-14));
    CHECK(spec.norm == doctest::Approx(norm_from_fock_series(2.0)).epsilon(1e-13));
}

TEST_CASE("bipartite normalization matches the Fock series for several s") {
    for (double s : {1.3, 1.7, 2.5}) {
        const GaussianKetSpec spec = epr_ket(2, Regulator(s), CVecX::Zero(2));
        CHECK(spec.norm == doctest::Approx(norm_from_fock_series(s)).epsilon(1e-12));
    }
}

TEST_CASE("tripartite EPR-type ket") {
    SUBCASE("singular regulator") {
        const GaussianKetSpec spec = epr_ket(3, Regulator(std::sqrt(2.0)), CVecX::Zero(3));
        CHECK(spec.regime == Regime::singular);
        CHECK(spec.norm == 0.0);
    }
    SUBCASE("normalizable, s = 2") {
        const GaussianKetSpec spec = epr_ket(3, Regulator(2.0), CVecX::Zero(3));
        CHECK(spec.norm * spec.norm ==
              doctest::Approx(15.0 * std::sqrt(12.0) / 64.0).epsilon(1e-13));
        CHECK(spec.coupling_spectral_norm() == doctest::Approx(0.5).epsilon(1e-13));
    }
    SUBCASE("formal regime norm is NaN behind the regime flag") {
        const GaussianKetSpec spec = epr_ket(3, Regulator(1.2), CVecX::Zero(3));
        CHECK(spec.regime == Regime::formal);
        CHECK(!spec.has_finite_norm());
        CHECK(std::isnan(spec.norm));
    }
    SUBCASE("eta enters the drive and the scalar prefactor") {
        CVecX eta(3);
        eta << Complex(0.4, 0), Complex(0, -0.6), Complex(0.1, 0.2);
        const GaussianKetSpec spec = epr_ket(3, Regulator(2.0), eta);
        CHECK(spec.drive[1] == eta[1] / 2.0);
        CHECK(spec.scalar_prefactor ==
              doctest::Approx(std::exp(-eta.squaredNorm() / 16.0)).epsilon(1e-14));
    }
    SUBCASE("rejects bad arguments") {
        CHECK_THROWS_AS(epr_ket(4, Regulator(2.0), CVecX::Zero(4)), std::invalid_argument);
        CHECK_THROWS_AS(epr_ket(3, Regulator(2.0), CVecX::Zero(2)), std::invalid_argument);
    }
}

TEST_CASE("coupling eigenvalues locate the normalizability boundary") {
    for (double s : {1.1, 1.3, 1.7, 2.0, 3.0}) {
        const GaussianKetSpec spec = epr_ket(3, Regulator(s), CVecX::Zero(3));
        Eigen::SelfAdjointEigenSolver<Mat3> es(spec.coupling.real());
        const double inv = 1.0 / (s * s);
        CHECK(es.eigenvalues()[0] == doctest::Approx(-inv).epsilon(1e-13));
        CHECK(es.eigenvalues()[1] == doctest::Approx(-inv).epsilon(1e-13));
        CHECK(es.eigenvalues()[2] == doctest::Approx(2.0 * inv).epsilon(1e-13));
    }
}

TEST_CASE("two-mode squeezed vacuum") {
    SUBCASE("vacuum at r = 0") {
        const GaussianKetSpec spec = nopa2_ket(SqueezingParam(0.0));
        CHECK(spec.coupling.cwiseAbs().maxCoeff() == 0.0);
        CHECK(spec.norm == 1.0);
    }
    SUBCASE("strong squeezing approaches the singular limit") {
        const GaussianKetSpec spec = nopa2_ket(SqueezingParam(12.0));
        CHECK(spec.coupling(0, 1).real() > 1.0 - 1e-9);
        CHECK(spec.norm < 1e-4);
    }
    SUBCASE("correspondence with the bipartite regulator") {
        const GaussianKetSpec nopa = nopa2_ket(SqueezingParam(std::atanh(0.25)));
        const GaussianKetSpec epr = epr_ket(2, Regulator(2.0), CVecX::Zero(2));
        CHECK(nopa.coupling(0, 1).real() == epr.coupling(0, 1).real());
        CHECK(nopa.norm == doctest::Approx(epr.norm).epsilon(1e-14));
    }
}

TEST_CASE("tripartite NOPA-like state") {
    const double t = std::tanh(0.6);
    const GaussianKetSpec spec = nopa3_ket(SqueezingParam(0.6));
    CHECK(spec.coupling(0, 0).real() == doctest::Approx(-t / 3.0).epsilon(1e-15));
    CHECK(spec.coupling(0, 1).real() == doctest::Approx(2.0 * t / 3.0).epsilon(1e-15));
    CHECK(spec.norm == doctest::Approx(std::pow(1.0 - t * t, 0.75)).epsilon(1e-14));

    const GaussianKetSpec vac = nopa3_ket(SqueezingParam(0.0));
    CHECK(vac.coupling.cwiseAbs().maxCoeff() == 0.0);
    CHECK(vac.norm == 1.0);
}

TEST_CASE("unit-norm convention: norm^4 det(I - F'F)^-1 = 1") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> rs(1.5, 4.0), rr(0.0, 2.0);
    for (int k = 0; k < 20; ++k) {
        GaussianKetSpec spec;
        switch (k % 3) {
            case 0: spec = epr_ket(2, Regulator(rs(rng)), CVecX::Zero(2)); break;
            case 1: spec = epr_ket(3, Regulator(rs(rng)), CVecX::Zero(3)); break;
            default: spec = nopa3_ket(SqueezingParam(rr(rng))); break;
        }
        const CMatX f = spec.coupling;
        const double det =
            (CMatX::Identity(spec.modes, spec.modes) - f.adjoint() * f).determinant().real();
        CHECK(std::pow(spec.norm, 4.0) / det == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("beamsplitter construction reproduces the NOPA-like coupling") {
    SUBCASE("vacuum") {
        const GaussianKetSpec spec = nopa3_from_beamsplitters(SqueezingParam(0.0));
        CHECK(spec.coupling.cwiseAbs().maxCoeff() == 0.0);
        CHECK(spec.norm == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("entrywise agreement across squeezings") {
        for (double r : {0.1, 0.3, 0.6, 0.9, 1.2, 1.5, 2.0}) {
            const GaussianKetSpec bs = nopa3_from_beamsplitters(SqueezingParam(r));
            const GaussianKetSpec direct = nopa3_ket(SqueezingParam(r));
            CHECK((bs.coupling - direct.coupling).cwiseAbs().maxCoeff() < 1e-12);
            CHECK(bs.norm == doctest::Approx(direct.norm).epsilon(1e-12));
        }
    }
}

TEST_CASE("squeezing correspondence r = artanh(1/s^2)") {
    CHECK(squeezing_correspondence(Regulator(std::sqrt(2.0))).r ==
          doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-15));
    CHECK(squeezing_correspondence(Regulator(100.0)).r == doctest::Approx(1e-4).epsilon(1e-7));
    CHECK(squeezing_correspondence(Regulator(1.0001)).r > 4.0);
}

TEST_CASE("jacobi mode map") {
    const Mat3 m = jacobi_mode_map();
    CHECK((m * m.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(m.row(2).dot(Vec3(1, 1, 1)) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));

    // Congruence by the map diagonalizes the all-off-diagonal coupling.
    const double s = 1.8;
    const Mat3 f = epr_ket(3, Regulator(s), CVecX::Zero(3)).coupling.real();
    const Mat3 d = m * f * m.transpose();
    const double inv = 1.0 / (s * s);
    CHECK(d(0, 0) == doctest::Approx(-inv).epsilon(1e-13));
    CHECK(d(1, 1) == doctest::Approx(-inv).epsilon(1e-13));
    CHECK(d(2, 2) == doctest::Approx(2.0 * inv).epsilon(1e-13));
    CHECK((d - d.diagonal().asDiagonal().toDenseMatrix()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("eigen relations") {
    CVecX eta(3);
    eta << Complex(1.0, 0), Complex(0, 2.0), Complex(-0.5, 0.25);

    SUBCASE("annihilation family matches the coupling structure") {
        const double s = 2.0;
        const auto rels = eigen_relations(Regulator(s), eta);
        REQUIRE(rels.size() == 9);
        const EigenRelation& r0 = rels[0];
        CHECK(r0.family == EigenFamily::annihilation);
        CHECK(r0.mode_coeffs[0].annihilation == Complex(1, 0));
        CHECK(r0.mode_coeffs[0].creation == Complex(0, 0));
        CHECK(r0.mode_coeffs[1].creation.real() == doctest::Approx(-0.25).epsilon(1e-15));
        CHECK(r0.mode_coeffs[2].creation.real() == doctest::Approx(-0.25).epsilon(1e-15));
        CHECK(r0.eigenvalue == eta[0] / s);
    }

    SUBCASE("quadrature family degenerates to X1 - X2 as s -> 1") {
        const auto rels = eigen_relations(Regulator(1.0 + 1e-12), eta);
        const EigenRelation& rel = rels[3];
        // X and P coefficients of u a + v adag are (u+v)/sqrt2 and i(u-v)/sqrt2.
        const Complex x0 = (rel.mode_coeffs[0].annihilation + rel.mode_coeffs[0].creation) /
                           std::sqrt(2.0);
        const Complex p0 = (rel.mode_coeffs[0].annihilation - rel.mode_coeffs[0].creation) /
                           std::sqrt(2.0);
        CHECK(x0.real() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
        CHECK(std::abs(p0) < 1e-10);
        CHECK(rel.eigenvalue == eta[0] - eta[1]);
    }

    SUBCASE("total-sum relation becomes pure momentum at s = sqrt(2)") {
        const auto rels = eigen_relations(Regulator(std::sqrt(2.0)), eta);
        const EigenRelation& rel = rels[5];
        for (int j = 0; j < 3; ++j) {
            const Complex xj = rel.mode_coeffs[j].annihilation + rel.mode_coeffs[j].creation;
            CHECK(std::abs(xj) < 1e-15);
        }
        CHECK(rel.eigenvalue == eta[0] + eta[1] + eta[2]);
    }

    SUBCASE("relative Jacobi relation at s = sqrt(2) is the (2,1)/sqrt(3) pair") {
        const auto rels = eigen_relations(Regulator(std::sqrt(2.0)), CVecX::Zero(3));
        const EigenRelation& rel = rels[6];
        double u2 = 0, v2 = 0;
        for (const ModeCoeff& mc : rel.mode_coeffs) {
            u2 += std::norm(mc.annihilation);
            v2 += std::norm(mc.creation);
        }
        const double scale = std::sqrt(u2 - v2);
        CHECK(std::sqrt(u2) / scale == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-14));
        CHECK(std::sqrt(v2) / scale == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
        CHECK(bogoliubov_squeezing(rel) == doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-13));
    }

    SUBCASE("jacobi eigenvalues") {
        const auto rels = eigen_relations(Regulator(1.7), eta);
        CHECK(rels[6].eigenvalue == (eta[0] - eta[2]) / std::sqrt(2.0));
        CHECK(rels[7].eigenvalue == (eta[0] - 2.0 * eta[1] + eta[2]) / std::sqrt(6.0));
        CHECK(rels[8].eigenvalue == (eta[0] + eta[1] + eta[2]) / std::sqrt(3.0));
    }

    SUBCASE("non-squeezed combinations are rejected by the squeezing reader") {
        const auto rels = eigen_relations(Regulator(1.2), eta);
        CHECK_THROWS_AS(bogoliubov_squeezing(rels[8]), std::domain_error);  // 2/s^2 > 1
    }
}
