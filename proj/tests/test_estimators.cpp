#include "pnsim/covariance.hpp"
#include "pnsim/estimators.hpp"
#include "pnsim/ptrs.hpp"
#include "pnsim/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <numbers>

using namespace pnsim;

namespace {

PilotObservation obs_from(const std::vector<Eigen::Index>& chi, const CVec& a) {
    PilotObservation obs;
    obs.chi_p = chi;
    obs.a = a;
    obs.s_p = CVec::Ones(a.size());
    return obs;
}

CVec phases_to_complex(std::initializer_list<double> phases) {
    CVec out(static_cast<Eigen::Index>(phases.size()));
    Eigen::Index i = 0;
    for (double p : phases)
        out[i++] = std::polar(1.0, p);
    return out;
}

} // namespace

TEST_CASE("observe_pilots implements the de-rotation formula") {
    const PtrsPattern pattern = distributed_pattern(12, 4);
    const CVec pilots = pilot_sequence(3, 5);

    CVec r = CVec::Zero(12);
    for (Eigen::Index i = 0; i < 3; ++i)
        r[pattern.chi_p[static_cast<std::size_t>(i)]] = pilots[i] * std::polar(1.0, 0.4);
    const PilotObservation obs = observe_pilots(r, pattern, pilots);
    for (Eigen::Index i = 0; i < 3; ++i)
        REQUIRE(std::abs(obs.a[i] - std::polar(1.0, 0.4)) < 1e-14);

    // unit pilots: a_i = r_i conj(s_i)
    auto rng = make_engine(3);
    std::normal_distribution<double> g(0.0, 1.0);
    CVec r2(12);
    for (Eigen::Index i = 0; i < 12; ++i)
        r2[i] = cd(g(rng), g(rng));
    const PilotObservation obs2 = observe_pilots(r2, pattern, pilots);
    for (Eigen::Index i = 0; i < 3; ++i) {
        const cd expect = r2[pattern.chi_p[static_cast<std::size_t>(i)]] * std::conj(pilots[i]);
        REQUIRE(std::abs(obs2.a[i] - expect) < 1e-15);
    }

    // non-unit pilot magnitudes still follow r s* / |s|^2
    CVec scaled_pilots = 2.5 * pilots;
    const PilotObservation obs3 = observe_pilots(r2, pattern, scaled_pilots);
    for (Eigen::Index i = 0; i < 3; ++i) {
        const cd s = scaled_pilots[i];
        const cd expect = r2[pattern.chi_p[static_cast<std::size_t>(i)]] * std::conj(s) / std::norm(s);
        REQUIRE(std::abs(obs3.a[i] - expect) < 1e-15);
    }
}

TEST_CASE("cpee estimate") {
    CHECK(cpee_estimate(obs_from({0, 4, 8}, phases_to_complex({0.3, 0.3, 0.3}))) ==
          Catch::Approx(0.3).margin(1e-14));
    CHECK(cpee_estimate(obs_from({0, 4}, phases_to_complex({0.1, -0.1}))) ==
          Catch::Approx(0.0).margin(1e-14));

    auto rng = make_engine(8);
    std::normal_distribution<double> g(0.0, 1.0);
    CVec noisy(5);
    for (Eigen::Index i = 0; i < 5; ++i)
        noisy[i] = cd(g(rng), g(rng));
    CHECK(cpee_estimate(obs_from({0, 1, 2, 3, 4}, noisy)) ==
          Catch::Approx(std::arg(noisy.sum())).margin(1e-15));

    CVec cancel(2);
    cancel << cd(1.0, 0.0), cd(-1.0, 0.0);
    CHECK_THROWS_AS(cpee_estimate(obs_from({0, 1}, cancel)), DegenerateInputError);
}

TEST_CASE("ci estimate piecewise structure") {
    const RVec est = ci_estimate(obs_from({0, 4, 8}, phases_to_complex({0.1, 0.2, 0.3})), 12);
    for (Eigen::Index n = 0; n < 12; ++n) {
        const double expect = (n < 4) ? 0.1 : (n < 8) ? 0.2 : 0.3;
        REQUIRE(est[n] == Catch::Approx(expect).margin(1e-14));
    }

    const RVec single = ci_estimate(obs_from({0}, phases_to_complex({0.5})), 6);
    CHECK((single - RVec::Constant(6, 0.5)).cwiseAbs().maxCoeff() < 1e-14);

    // group-averaged contiguous observations start past zero: the first
    // value extends left to index 0
    const RVec grouped = ci_estimate(obs_from({1, 9}, phases_to_complex({0.2, 0.4})), 12);
    CHECK(grouped[0] == Catch::Approx(0.2).margin(1e-14));
    CHECK(grouped[8] == Catch::Approx(0.2).margin(1e-14));
    CHECK(grouped[9] == Catch::Approx(0.4).margin(1e-14));

    // random case against a direct piecewise oracle
    auto rng = make_engine(12);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    CVec vals(4);
    for (Eigen::Index i = 0; i < 4; ++i)
        vals[i] = std::polar(1.0, u(rng));
    const std::vector<Eigen::Index> chi{0, 3, 7, 10};
    const RVec got = ci_estimate(obs_from(chi, vals), 14);
    for (Eigen::Index n = 0; n < 14; ++n) {
        Eigen::Index seg = 0;
        for (std::size_t j = 0; j < chi.size(); ++j)
            if (chi[j] <= n)
                seg = static_cast<Eigen::Index>(j);
        REQUIRE(got[n] == Catch::Approx(std::arg(vals[seg])).margin(1e-14));
    }

    CHECK_THROWS_AS(ci_estimate(obs_from({3, 1}, phases_to_complex({0.0, 0.0})), 8), ShapeError);
}

TEST_CASE("li estimate interpolates and extrapolates") {
    const RVec est = li_estimate(obs_from({0, 4, 8}, phases_to_complex({0.0, 0.4, 0.8})), 12);
    for (Eigen::Index n = 0; n < 12; ++n)
        REQUIRE(est[n] == Catch::Approx(0.1 * static_cast<double>(n)).margin(1e-12));

    const RVec flat = li_estimate(obs_from({0, 5}, phases_to_complex({0.2, 0.2})), 10);
    CHECK((flat - RVec::Constant(10, 0.2)).cwiseAbs().maxCoeff() < 1e-13);

    const RVec one = li_estimate(obs_from({0}, phases_to_complex({-0.7})), 5);
    CHECK((one - RVec::Constant(5, -0.7)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("li unwraps pilot phases across the +-pi seam") {
    // phases 3.1 and -3.1 are 0.083 rad apart through pi, not 6.2 rad apart
    const RVec est = li_estimate(obs_from({0, 8}, phases_to_complex({3.1, -3.1})), 9);
    const double pi = std::numbers::pi;
    for (Eigen::Index n = 0; n <= 8; ++n) {
        const double expect = 3.1 + (2.0 * (pi - 3.1)) * static_cast<double>(n) / 8.0;
        REQUIRE(est[n] == Catch::Approx(expect).margin(1e-12));
    }
}

TEST_CASE("dct basis orthonormality and sampling") {
    const std::vector<Eigen::Index> chi{0, 4, 8};
    const DctBasis basis = build_dct_basis(12, chi, 3);
    const RMat gram = basis.psi_na.transpose() * basis.psi_na;
    CHECK((gram - RMat::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);

    // first basis function is constant
    for (Eigen::Index i = 1; i < 12; ++i)
        REQUIRE(basis.psi_na(i, 0) == Catch::Approx(basis.psi_na(0, 0)).margin(1e-14));

    for (Eigen::Index i = 0; i < 3; ++i)
        REQUIRE((basis.psi_k.row(i) - basis.psi_na.row(chi[static_cast<std::size_t>(i)])).cwiseAbs().maxCoeff() ==
                0.0);

    // n_d = K keeps the normal matrix invertible for this pattern
    const DctBasis full = build_dct_basis(12, chi, 3);
    Eigen::SelfAdjointEigenSolver<RMat> eig(full.psi_k.transpose() * full.psi_k);
    CHECK(eig.eigenvalues().minCoeff() > 1e-6);

    CHECK_THROWS_AS(build_dct_basis(12, chi, 4), ConfigError);
    CHECK_THROWS_AS(build_dct_basis(12, chi, 0), ConfigError);
}

TEST_CASE("dct estimate exactness") {
    const PtrsPattern pattern = distributed_pattern(12, 4);
    const CVec pilots = pilot_sequence(3, 2);
    const DctBasis basis = build_dct_basis(12, pattern.chi_p, 2);

    auto run_case = [&](const RVec& phi_true) {
        CVec r = CVec::Zero(12);
        for (Eigen::Index i = 0; i < 3; ++i) {
            const Eigen::Index pos = pattern.chi_p[static_cast<std::size_t>(i)];
            r[pos] = pilots[i] * std::polar(1.0, phi_true[pos]);
        }
        CVec raw(3);
        for (Eigen::Index i = 0; i < 3; ++i)
            raw[i] = r[pattern.chi_p[static_cast<std::size_t>(i)]];
        const PilotObservation obs = observe_pilots(r, pattern, pilots);
        return dct_estimate(obs, basis, raw);
    };

    CHECK(run_case(RVec::Zero(12)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((run_case(RVec::Constant(12, 0.37)) - RVec::Constant(12, 0.37)).cwiseAbs().maxCoeff() <
          1e-12);

    // profile inside the basis span reconstructs everywhere, not just at pilots
    const RVec profile = 0.15 * build_dct_basis(12, pattern.chi_p, 2).psi_na.col(1) +
                         RVec::Constant(12, 0.05);
    const RVec est = run_case(profile);
    CHECK((est - profile).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("dct raw reference mode matches when pilots are identical") {
    const PtrsPattern pattern = distributed_pattern(12, 4);
    CVec pilots = CVec::Constant(3, std::polar(1.0, 0.6));
    const DctBasis basis = build_dct_basis(12, pattern.chi_p, 2);
    auto rng = make_engine(5);
    std::normal_distribution<double> g(0.0, 0.05);
    CVec r = CVec::Zero(12);
    for (Eigen::Index i = 0; i < 3; ++i) {
        const Eigen::Index pos = pattern.chi_p[static_cast<std::size_t>(i)];
        r[pos] = pilots[i] * std::polar(1.0, 0.2 + g(rng));
    }
    CVec raw(3);
    for (Eigen::Index i = 0; i < 3; ++i)
        raw[i] = r[pattern.chi_p[static_cast<std::size_t>(i)]];
    const PilotObservation obs = observe_pilots(r, pattern, pilots);
    const RVec derotated = dct_estimate(obs, basis, raw, DctReference::derotated);
    const RVec raw_mode = dct_estimate(obs, basis, raw, DctReference::raw_pilot_sum);
    // identical pilots: the two reference conventions differ by the common
    // pilot phase inside phi_av but produce the same final estimate
    CHECK((derotated - raw_mode).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("dct singular normal matrix reports a condition diagnostic") {
    // duplicated sample positions make the fit rank deficient
    const std::vector<Eigen::Index> degenerate{0, 0, 4};
    const DctBasis basis = build_dct_basis(12, degenerate, 3);
    PilotObservation obs;
    obs.a = CVec::Ones(3);
    obs.chi_p = degenerate;
    obs.s_p = CVec::Ones(3);
    try {
        dct_estimate(obs, basis, CVec::Ones(3));
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        CHECK(std::string(e.what()).find("condition") != std::string::npos);
    }
}

TEST_CASE("if filter: identity when sampling is complete and clean") {
    // K = N_a, M_p = I, R_beta = R_w = 0, invertible R_phi -> Z = I
    const Eigen::Index n = 6;
    auto rng = make_engine(21);
    std::normal_distribution<double> g(0.0, 1.0);
    CMat m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            m(i, j) = cd(g(rng), g(rng));
    const CMat r_phi = m * m.adjoint() + CMat::Identity(n, n); // well conditioned PSD
    SamplingMatrix full;
    full.n_active = n;
    for (Eigen::Index i = 0; i < n; ++i)
        full.chi_p.push_back(i);
    const IfFilter f = build_if_filter(r_phi, CMat::Zero(n, n), CMat::Zero(n, n), full, CVec::Ones(n));
    CHECK((f.z - CMat::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("if filter: unit pilots collapse the pilot weighting") {
    const Eigen::Index n = 8;
    const PtrsPattern pattern = distributed_pattern(n, 4);
    const SamplingMatrix m_p = sampling_matrix(pattern);
    auto rng = make_engine(22);
    std::normal_distribution<double> g(0.0, 1.0);
    auto random_psd = [&](double ridge) {
        CMat m(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                m(i, j) = cd(g(rng), g(rng));
        return CMat((m * m.adjoint() + ridge * CMat::Identity(n, n)));
    };
    const CMat r_phi = random_psd(1.0);
    const CMat r_beta = random_psd(0.5);
    const double sigma2 = 0.2;
    const CMat r_w = rw_model(sigma2, n);

    // with |s_i| = 1 the filter must equal the plain unweighted assembly
    CVec s_p(2);
    s_p << std::polar(1.0, 1.1), std::polar(1.0, -2.3);
    const IfFilter f = build_if_filter(r_phi, r_beta, r_w, m_p, s_p);

    CMat a = m_p.select(r_phi.adjoint());
    const CMat qb = m_p.select(r_beta.adjoint());
    for (Eigen::Index i = 0; i < 2; ++i)
        for (Eigen::Index j = 0; j < 2; ++j)
            a(i, j) += qb(i, j) * s_p[i] * std::conj(s_p[j]);
    a += sigma2 * CMat::Identity(2, 2); // V = sigma^2 I exactly for unit pilots
    CMat rphi_cols(n, 2);
    for (Eigen::Index i = 0; i < 2; ++i)
        rphi_cols.col(i) = r_phi.adjoint().col(m_p.chi_p[static_cast<std::size_t>(i)]);
    const CMat z_expect = rphi_cols * a.inverse();
    CHECK((f.z - z_expect).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("if filter solves the normal equations") {
    // small instance: E[a a^H] Z^H = E[a Phi'^H] solved directly
    const Eigen::Index n = 8;
    const PtrsPattern pattern = distributed_pattern(n, 4);
    const SamplingMatrix m_p = sampling_matrix(pattern);
    auto rng = make_engine(33);
    std::normal_distribution<double> g(0.0, 1.0);
    auto random_psd = [&](double ridge) {
        CMat m(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                m(i, j) = cd(g(rng), g(rng));
        return CMat((m * m.adjoint() + ridge * CMat::Identity(n, n)));
    };
    const CMat r_phi = random_psd(1.0);
    const CMat r_beta = random_psd(0.3);
    const CMat r_w = rw_model(0.05, n);
    const CVec pilots = pilot_sequence(2, 4);
    CVec s_p(2);
    for (Eigen::Index i = 0; i < 2; ++i)
        s_p[i] = std::conj(pilots[i]) / std::norm(pilots[i]);

    const IfFilter f = build_if_filter(r_phi, r_beta, r_w, m_p, s_p);

    // E[a a^H] and E[a Phi'^H] assembled from the same statistics
    CMat e_aa = m_p.select(r_phi);
    const CMat qb = m_p.select(r_beta);
    const CMat vb = m_p.select(r_w);
    for (Eigen::Index i = 0; i < 2; ++i)
        for (Eigen::Index j = 0; j < 2; ++j)
            e_aa(i, j) += (qb(i, j) + vb(i, j)) * s_p[i] * std::conj(s_p[j]);
    const CMat e_aphi = m_p.select_rows(r_phi); // M_p E[Phi' Phi'^H]
    const CMat z_direct = (e_aa.inverse() * e_aphi).adjoint();
    CHECK((f.z - z_direct).cwiseAbs().maxCoeff() / z_direct.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("if filter validates Hermitian input") {
    const Eigen::Index n = 4;
    CMat bad = CMat::Identity(n, n);
    bad(0, 1) = cd(0.5, 0.0); // asymmetric
    SamplingMatrix full;
    full.n_active = n;
    for (Eigen::Index i = 0; i < n; ++i)
        full.chi_p.push_back(i);
    CHECK_THROWS_AS(build_if_filter(bad, CMat::Zero(n, n), CMat::Zero(n, n), full, CVec::Ones(n)),
                    ValidationError);
}

TEST_CASE("if estimate applies arg(Z a)") {
    const Eigen::Index n = 5;
    IfFilter ident;
    ident.z = CMat::Identity(n, n);
    PilotObservation obs;
    obs.a.resize(n);
    for (Eigen::Index i = 0; i < n; ++i)
        obs.a[i] = std::polar(1.0, 0.1 * static_cast<double>(i) - 0.2);
    obs.chi_p = {0, 1, 2, 3, 4};
    obs.s_p = CVec::Ones(n);
    const RVec est = if_estimate(ident, obs);
    for (Eigen::Index i = 0; i < n; ++i)
        REQUIRE(est[i] == Catch::Approx(0.1 * static_cast<double>(i) - 0.2).margin(1e-14));

    IfFilter rnd;
    auto rng = make_engine(77);
    std::normal_distribution<double> g(0.0, 1.0);
    rnd.z.resize(3, n);
    for (Eigen::Index i = 0; i < 3; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            rnd.z(i, j) = cd(g(rng), g(rng));
    const RVec got = if_estimate(rnd, obs);
    const CVec direct = rnd.z * obs.a;
    for (Eigen::Index i = 0; i < 3; ++i)
        REQUIRE(got[i] == std::arg(direct[i]));

    IfFilter zero;
    zero.z = CMat::Zero(2, n);
    CHECK_THROWS_AS(if_estimate(zero, obs), DegenerateInputError);
}

TEST_CASE("correction step") {
    auto rng = make_engine(55);
    std::normal_distribution<double> g(0.0, 1.0);
    CVec r(6);
    RVec phi(6);
    for (Eigen::Index i = 0; i < 6; ++i) {
        r[i] = cd(g(rng), g(rng));
        phi[i] = g(rng);
    }
    CHECK((correct(r, RVec::Zero(6)) - r).cwiseAbs().maxCoeff() == 0.0);

    CVec rotated(6);
    for (Eigen::Index i = 0; i < 6; ++i)
        rotated[i] = r[i] * std::polar(1.0, phi[i]);
    CHECK((correct(rotated, phi) - r).cwiseAbs().maxCoeff() < 1e-14);

    const CVec scalar = correct(r, 0.3);
    for (Eigen::Index i = 0; i < 6; ++i)
        REQUIRE(std::abs(scalar[i] - r[i] * std::polar(1.0, -0.3)) < 1e-15);

    CHECK_THROWS_AS(correct(r, RVec::Zero(5)), ShapeError);
}

TEST_CASE("constant offset exactness across all estimators") {
    // r = s e^{j theta}, no noise or ICI: every estimator recovers theta
    const double theta = 0.3;
    const PtrsPattern pattern = distributed_pattern(16, 4);
    const CVec pilots = pilot_sequence(4, 6);
    CVec r = CVec::Zero(16);
    for (Eigen::Index i = 0; i < 4; ++i)
        r[pattern.chi_p[static_cast<std::size_t>(i)]] = pilots[i] * std::polar(1.0, theta);
    const PilotObservation obs = observe_pilots(r, pattern, pilots);

    CHECK(cpee_estimate(obs) == Catch::Approx(theta).margin(1e-10));
    CHECK((ci_estimate(obs, 16) - RVec::Constant(16, theta)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((li_estimate(obs, 16) - RVec::Constant(16, theta)).cwiseAbs().maxCoeff() < 1e-10);

    const DctBasis basis = build_dct_basis(16, pattern.chi_p, 3);
    CVec raw(4);
    for (Eigen::Index i = 0; i < 4; ++i)
        raw[i] = r[pattern.chi_p[static_cast<std::size_t>(i)]];
    CHECK((dct_estimate(obs, basis, raw) - RVec::Constant(16, theta)).cwiseAbs().maxCoeff() < 1e-10);

    // IF with the all-ones rotation correlation (fully coherent phase)
    const CMat ones = CMat::Ones(16, 16);
    CVec s_p(4);
    for (Eigen::Index i = 0; i < 4; ++i)
        s_p[i] = std::conj(pilots[i]) / std::norm(pilots[i]);
    const IfFilter f = build_if_filter(ones, CMat::Zero(16, 16), CMat::Zero(16, 16),
                                       sampling_matrix(pattern), s_p);
    CHECK((if_estimate(f, obs) - RVec::Constant(16, theta)).cwiseAbs().maxCoeff() < 1e-10);
}
