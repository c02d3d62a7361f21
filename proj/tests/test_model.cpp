#include "helpers.hpp"
#include "qbench/benchmark.hpp"
#include "qbench/errors.hpp"
#include "qbench/groups.hpp"
#include "qbench/random.hpp"
#include "qbench/scenarios.hpp"
#include "qbench/test_model.hpp"

using namespace qb;
using qbt::diag;
using qbt::fro;

namespace {

Channel depolarizing(int d) {
  std::vector<Mat> ks;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) ks.push_back(basis_ket(d, i) * basis_ket(d, j).adjoint() / std::sqrt(double(d)));
  return Channel::from_kraus(ks);
}

Operator proj(const Vec& v) {
  return Operator({static_cast<int>(v.size())}, v * v.adjoint());
}

}  // namespace

TEST_CASE("performance operator of a rank-one product test") {
  const Mat p0 = diag({1, 0});
  const DetTest t(Operator({2, 2}, kron(p0, p0)), Operator({2, 2}, kron(p0, p0)));
  CHECK(fro(performance_operator(t).mat(), kron(p0, p0)) < 1e-15);
}

TEST_CASE("fidelity test is the average target-input state") {
  Rng rng(11);
  Ensemble e;
  for (int i = 0; i < 3; ++i) {
    const Vec v = random_unit_vector(2, rng);
    e.states.push_back(proj(v));
    e.targets.push_back(PureState({2}, random_unit_vector(2, rng)));
    e.probs.push_back(i == 2 ? 0.5 : 0.25);
  }
  const ProbTest t = fidelity_test(e);
  Mat want = Mat::Zero(4, 4), sa = Mat::Zero(2, 2);
  for (int i = 0; i < 3; ++i) {
    want += e.probs[i] * kron(e.targets[i].projector().mat(), e.states[i].mat());
    sa += e.probs[i] * e.states[i].mat();
  }
  CHECK(fro(t.omega().mat(), want) < 1e-14);
  CHECK(fro(t.sigma_A().mat(), sa) < 1e-14);

  e.probs[0] = 0.3;
  CHECK_THROWS_AS(fidelity_test(e), ArgumentError);
}

TEST_CASE("single-state fidelity test") {
  Rng rng(12);
  const PureState psi({2}, random_unit_vector(2, rng));
  const ProbTest t = fidelity_test(Ensemble{{psi.projector()}, {psi}, {1.0}});
  CHECK(fro(t.omega().mat(), kron(psi.projector().mat(), psi.projector().mat())) < 1e-14);
  CHECK(fro(t.sigma_A().mat(), psi.projector().mat()) < 1e-14);
}

TEST_CASE("equator ensemble has the closed-form omega") {
  const ProbTest t = fidelity_test(equator_ensemble(3));
  Mat want = Mat::Zero(4, 4);
  want(0, 0) = want(3, 3) = 0.25;
  Vec psi_plus = Vec::Zero(4);
  psi_plus(1) = psi_plus(2) = std::sqrt(0.5);
  want += 0.5 * psi_plus * psi_plus.adjoint();
  CHECK(fro(t.omega().mat(), want) < 1e-14);
  CHECK(fro(t.omega().mat(), equator_omega().mat()) < 1e-14);
  CHECK(fro(t.sigma_A().mat(), Mat::Identity(2, 2) / 2.0) < 1e-14);
}

TEST_CASE("qubit design ensemble reproduces the symmetric projector") {
  const ProbTest t = fidelity_test(qubit_design_ensemble());
  CHECK(fro(t.omega().mat(), teleport_omega(2).mat()) < 1e-12);
  CHECK(fro(teleport_omega(2).mat(), (Mat::Identity(4, 4) + qbt::swap_op(2)) / 6.0) < 1e-14);
}

TEST_CASE("jamiolkowski operators") {
  CHECK(fro(jamiolkowski(Channel::identity(2)).mat(), qbt::swap_op(2)) < 1e-15);
  CHECK(fro(jamiolkowski(depolarizing(2)).mat(), Mat::Identity(4, 4) / 2.0) < 1e-15);
}

TEST_CASE("apply_channel") {
  Rng rng(13);
  const Operator rho = random_density({3}, rng);
  CHECK(fro(apply_channel(Channel::identity(3), rho).mat(), rho.mat()) == 0.0);
  CHECK_THROWS_AS(apply_channel(Channel::identity(2), rho), ArgumentError);

  const Operator p0({2}, diag({1, 0})), p1({2}, diag({0, 1}));
  const Vec plus = (basis_ket(2, 0) + basis_ket(2, 1)) / std::sqrt(2.0);
  const Channel mp = mp_channel({p0, p1}, {proj(plus), p0});
  CHECK(fro(apply_channel(mp, p0).mat(), proj(plus).mat()) < 1e-14);
  CHECK(fro(apply_channel(mp, p1).mat(), p0.mat()) < 1e-14);
  // incomplete POVM: a measure-and-prepare quantum operation; an overcomplete one is rejected
  CHECK_FALSE(mp_channel({p0}, {p0}).trace_preserving());
  CHECK_THROWS_AS(mp_channel({p0, p0 + p1}, {p0, p1}), ArgumentError);
}

TEST_CASE("deterministic scores on the teleport test") {
  const DetTest t = teleport_det_test(2);
  CHECK(score_det_direct(t, Channel::identity(2)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(score_det_direct(t, depolarizing(2)) == doctest::Approx(0.5).epsilon(1e-12));
  const GroupRep rep = diagonal_rep(clifford_group(2));
  const Channel mp = optimal_mp_channel(teleport_omega(2), rep);
  CHECK(score_det_direct(t, mp) == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  CHECK_THROWS_AS(score_det_direct(t, Channel::scaled_identity(2, 0.5)), ContractViolation);
}

TEST_CASE("jamiolkowski pairing") {
  CHECK(score_det_jam(teleport_omega(2), Operator({2, 2}, qbt::swap_op(2))) == doctest::Approx(1.0));
  Rng rng(14);
  const Operator om({2, 2}, random_hermitian(4, rng));
  CHECK(score_det_jam(om, Operator::zero({2, 2})) == 0.0);
  Mat bad = Mat::Identity(4, 4);
  bad(0, 1) = cplx(0, 1);  // non-Hermitian, trace pairing picks up an imaginary part
  CHECK_THROWS_AS(score_det_jam(Operator({2, 2}, Mat(Mat::Identity(4, 4) * cplx(0, 1))), Operator({2, 2}, bad)),
                  NumericalInconsistency);
}

TEST_CASE("score identity on random tests and channels") {
  Rng rng(15);
  for (int trial = 0; trial < 12; ++trial) {
    const int dA = 2 + trial % 2, dAp = 2 + (trial / 2) % 2, dR = 2 + (trial / 4) % 2;
    const DetTest t(random_density({dA, dR}, rng), Operator({dAp, dR}, random_hermitian(dAp * dR, rng)));
    const Channel c = random_channel(dA, dAp, 2 + trial % 2, rng);
    const double direct = score_det_direct(t, c);
    const double jam = score_det_jam(performance_operator(t), jamiolkowski(c));
    CHECK(std::abs(direct - jam) < 1e-10);
  }
}

TEST_CASE("probabilistic scores") {
  Rng rng(16);
  const ProbTest t(Operator({2, 2}, random_density({2, 2}, rng).mat()), random_density({2}, rng));
  const Channel c = random_channel(2, 2, 2, rng);
  const ProbScore s = score_prob(t, c);
  CHECK(s.p_succ == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.score == doctest::Approx(score_det_jam(t.omega(), jamiolkowski(c)) / 1.0).epsilon(1e-12));

  const ProbScore id = score_prob(t, Channel::identity(2));
  const ProbScore half = score_prob(t, Channel::scaled_identity(2, 0.3));
  CHECK(half.score == doctest::Approx(id.score).epsilon(1e-12));
  CHECK(half.p_succ == doctest::Approx(0.3).epsilon(1e-12));

  // rescaling K -> sqrt(q) K on a random trace-nonincreasing operation
  const Channel f = random_channel(2, 2, 3, rng, false);
  std::vector<Mat> scaled;
  for (const auto& k : f.kraus()) scaled.push_back(k * std::sqrt(0.4));
  const ProbScore a = score_prob(t, f), b = score_prob(t, Channel::from_kraus(scaled));
  CHECK(std::abs(a.score - b.score) < 1e-12);
  CHECK(b.p_succ == doctest::Approx(0.4 * a.p_succ).epsilon(1e-12));

  CHECK_THROWS_AS(score_prob(t, Channel::scaled_identity(2, 0.0)), VanishingSuccess);
}

TEST_CASE("classical bit pipeline scores 1 on basis states") {
  const Operator p0({2}, diag({1, 0})), p1({2}, diag({0, 1}));
  const Ensemble e{{p0, p1}, {PureState({2}, basis_ket(2, 0)), PureState({2}, basis_ket(2, 1))}, {0.5, 0.5}};
  const ProbScore s = score_prob(fidelity_test(e), mp_channel({p0, p1}, {p0, p1}));
  CHECK(s.score == doctest::Approx(1.0));
}

TEST_CASE("measure-and-prepare Jamiolkowski operators are PPT") {
  Rng rng(17);
  for (int i = 0; i < 5; ++i) {
    const Vec v = random_unit_vector(2, rng);
    const Vec w = Mat(random_unitary(2, rng)).col(0);
    Vec v_perp(2);
    v_perp << -std::conj(v(1)), std::conj(v(0));
    const Channel mp = mp_channel({proj(v), proj(v_perp)}, {proj(w), random_density({2}, rng)});
    const Operator c = jamiolkowski(mp);
    CHECK(c.is_psd());  // measure-and-prepare: C is separable, so both C and C^T_A are PSD
    CHECK(partial_transpose(c, 1).is_psd());
  }
}

TEST_CASE("performance operator of a fidelity test is PSD with trace at most 1") {
  Rng rng(18);
  Ensemble e;
  for (int i = 0; i < 4; ++i) {
    e.states.push_back(random_density({3}, rng));
    e.targets.push_back(PureState({2}, random_unit_vector(2, rng)));
    e.probs.push_back(0.25);
  }
  const Operator om = fidelity_test(e).omega();
  CHECK(om.is_psd());
  CHECK(om.trace().real() <= 1.0 + 1e-12);
}

TEST_CASE("channel and test json round trip") {
  Rng rng(19);
  const Channel c = random_channel(2, 3, 2, rng, false);
  const Channel c2 = channel_from_json(to_json(c));
  REQUIRE(c2.kraus().size() == c.kraus().size());
  CHECK(fro(c2.kraus()[1], c.kraus()[1]) == 0.0);
  CHECK(c2.trace_preserving() == c.trace_preserving());
  const DetTest t = teleport_det_test(2);
  const DetTest t2 = det_test_from_json(to_json(t));
  CHECK(fro(t2.observable().mat(), t.observable().mat()) == 0.0);
  const ProbTest p = fidelity_test(equator_ensemble(4));
  CHECK(fro(prob_test_from_json(to_json(p)).omega().mat(), p.omega().mat()) == 0.0);
}

TEST_CASE("twirling a channel keeps it covariant") {
  Rng rng(20);
  const GroupRep rep = diagonal_rep(clifford_group(2));
  const Channel tw = twirl_channel(random_channel(2, 2, 2, rng), rep.elements, rep.weights);
  const Operator j = jamiolkowski(tw);
  for (const auto& [u, up] : rep.elements) {
    const Mat g = kron(up, u);
    CHECK(fro(g * j.mat() * g.adjoint(), j.mat()) < 1e-12);
  }
}
